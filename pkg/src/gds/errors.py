"""Exception hierarchy shared across the package.

Two families matter to callers.  ``InputError`` covers everything a user can
trigger with bad input (malformed tree files, labels that clash, parameters
outside their domain); the command line maps these to exit code 2.
``CheckError`` covers violations of identities the library promises to verify
mechanically; hitting one means a certified computation failed, which the
command line maps to exit code 1.
"""

from __future__ import annotations


class GdsError(Exception):
    """Base class for all package errors."""


class InputError(GdsError):
    """Invalid user input: files, trees, labels, or parameters."""


class CheckError(GdsError):
    """A mechanically verified identity or invariant failed."""


# --- input-side errors -----------------------------------------------------

class ParseError(InputError):
    """Malformed tree text.  Carries 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(InputError):
    """Structurally well-formed input that violates a tree invariant."""


class UnknownNode(InputError):
    """A node id that does not occur in the tree."""


class NotAnAncestor(InputError):
    """A query that requires a strict ancestor relationship."""


class NotAParent(InputError):
    """An operation restricted to internal nodes was given a leaf."""


class NotALeaf(InputError):
    """An operation restricted to leaves was given an internal node."""


class NotFine(InputError):
    """A labelling with two equal labels among siblings."""


class Comparable(InputError):
    """Two nodes were required to be incomparable but one descends from the other."""


class NotAComb(InputError):
    """The tree's internal nodes do not form a single chain."""


class MTooSmall(InputError):
    """The requested h-exponent is too small to make every image divisible."""


class HDividesG(InputError):
    """The derivation multiplier must not be divisible by h."""


class DivisibilityViolation(InputError):
    """Quotient data with n not dividing m."""


class GcdViolation(InputError):
    """Quotient data with gcd(q, m/n) != 1."""


class UsageError(InputError):
    """Bad command-line invocation; mapped to exit code 3."""


# --- verification-side errors ------------------------------------------------

class NotDivisible(CheckError):
    """An exact division was required but left a remainder."""


class NonConstantOnComponent(CheckError):
    """A chart value that should be a shared constant varies with the fiber parameter or the leaf."""


class LeadingCoefficientZero(CheckError):
    """A coordinate function whose linear coefficient vanished."""


class NonlinearInW(CheckError):
    """A weight-recovery step whose Taylor coefficient is not affine in the unknown weight."""


class BoundExceeded(CheckError):
    """An iteration that should terminate ran past its certified bound."""
