"""Exact sparse polynomials over the rationals.

A polynomial is a mapping from exponent vectors to nonzero ``Fraction``
coefficients.  Exponent vectors are tuples of non-negative ints aligned with
the variable tuple of a ``Ring``, so every polynomial knows exactly which
variables exist and in which order.  All arithmetic is exact; nothing in this
module ever rounds.

Variables carry a global ordering used everywhere (printing, division,
leading terms): the deformation parameter ``h`` comes first, then the base
coordinate ``X_0``, then one coordinate per internal tree node ordered by
(level, id), then the fiber parameter ``T``, then the weight unknown ``W``,
then any free variables ordered by their position index.

Printing lists terms in descending lexicographic order of exponent vectors
with respect to that variable order, e.g. ``h*X_e0 - X_0^3 + X_0``.
``parse_poly`` reads the same syntax back.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import NotDivisible, ParseError

Rat = Fraction

Scalar = Union[int, Fraction]

_G_H = 0
_G_X0 = 1
_G_NODE = 2
_G_T = 3
_G_W = 4
_G_FREE = 5


@dataclass(frozen=True, order=True)
class VarId:
    """A variable identity; field order doubles as the global sort key."""

    group: int
    level: int
    name: str


H = VarId(_G_H, 0, "h")
X0 = VarId(_G_X0, 0, "X_0")
T = VarId(_G_T, 0, "T")
W = VarId(_G_W, 0, "W")


def node_var(node_id: str, level: int) -> VarId:
    """Coordinate attached to an internal tree node."""
    return VarId(_G_NODE, level, f"X_{node_id}")


def free_var(position: int, name: str) -> VarId:
    """Stand-alone variable ranked by ``position`` (used for comb and quotient rings)."""
    return VarId(_G_FREE, position, name)


class Ring:
    """An ordered tuple of variables plus lookup tables."""

    __slots__ = ("vars", "_index", "_by_name", "_one_terms")

    def __init__(self, variables: Iterable[VarId]):
        vs = tuple(sorted(set(variables)))
        names = [v.name for v in vs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable display names in ring: {names}")
        self.vars = vs
        self._index = {v: i for i, v in enumerate(vs)}
        self._by_name = {v.name: v for v in vs}
        self._one_terms = (0,) * len(vs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and self.vars == other.vars

    def __hash__(self) -> int:
        return hash(self.vars)

    def __repr__(self) -> str:
        return f"Ring({', '.join(v.name for v in self.vars)})"

    def __contains__(self, v: VarId) -> bool:
        return v in self._index

    def index(self, v: VarId) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise ValueError(f"variable {v.name} is not in {self!r}") from None

    def var_by_name(self, name: str) -> VarId:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValueError(f"no variable named {name} in {self!r}") from None

    def var(self, v: VarId) -> Poly:
        exp = [0] * len(self.vars)
        exp[self.index(v)] = 1
        return Poly(self, {tuple(exp): 1})

    def const(self, c: Scalar) -> Poly:
        c = _norm_scalar(c)
        if not c:
            return Poly(self, {})
        return Poly(self, {self._one_terms: c})

    @property
    def zero(self) -> Poly:
        return Poly(self, {})

    @property
    def one(self) -> Poly:
        return self.const(1)


def _norm_scalar(c: Scalar) -> int | Fraction:
    """Keep whole numbers as ``int``; plain integer arithmetic is much
    faster than ``Fraction`` and the two mix exactly."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    return _norm_scalar(Fraction(c))


def _div_scalar(a, b):
    """Exact scalar quotient, never a float."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if not r:
            return q
        return Fraction(a, b)
    return _norm_scalar(Fraction(a) / Fraction(b))


def _merge_term(out: dict, exp: tuple, coef: Fraction) -> None:
    cur = out.get(exp)
    if cur is None:
        out[exp] = coef
    else:
        cur += coef
        if cur:
            out[exp] = cur
        else:
            del out[exp]


def _mul_terms(a: Mapping[tuple, Fraction], b: Mapping[tuple, Fraction]) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = tuple(map(operator.add, ea, eb))
            cur = get(exp)
            if cur is None:
                out[exp] = ca * cb
            else:
                cur += ca * cb
                if cur:
                    out[exp] = cur
                else:
                    del out[exp]
    return out


class Poly:
    """Immutable sparse polynomial attached to a ``Ring``."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Scalar]):
        width = len(ring.vars)
        clean: dict = {}
        for exp, coef in terms.items():
            if not isinstance(coef, int):
                coef = _norm_scalar(coef)
            if not coef:
                continue
            if len(exp) != width:
                raise ValueError(f"exponent vector {exp} does not fit {ring!r}")
            clean[exp] = coef
        self.ring = ring
        self.terms = clean

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def degree_in(self, v: VarId) -> int:
        """Largest exponent of ``v``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        i = self.ring.index(v)
        return max(exp[i] for exp in self.terms)

    def coefficient(self, v: VarId, k: int) -> Poly:
        """Coefficient of ``v**k``, as a polynomial in the same ring with ``v`` absent."""
        i = self.ring.index(v)
        out = {}
        for exp, coef in self.terms.items():
            if exp[i] == k:
                e = list(exp)
                e[i] = 0
                out[tuple(e)] = coef
        return Poly(self.ring, out)

    def order_in(self, variables: Iterable[VarId]) -> Union[int, float]:
        """Smallest total exponent over ``variables`` in any term; ``inf`` for zero."""
        idx = [self.ring.index(v) for v in variables]
        if not self.terms:
            return math.inf
        return min(sum(exp[i] for i in idx) for exp in self.terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: object) -> Poly | None:
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __add__(self, other: object) -> Poly:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        out = dict(self.terms)
        for exp, coef in q.terms.items():
            _merge_term(out, exp, coef)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.ring, {exp: -coef for exp, coef in self.terms.items()})

    def __sub__(self, other: object) -> Poly:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        out = dict(self.terms)
        for exp, coef in q.terms.items():
            _merge_term(out, exp, -coef)
        return Poly(self.ring, out)

    def __rsub__(self, other: object) -> Poly:
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return q - self

    def __mul__(self, other: object) -> Poly:
        if isinstance(other, (int, Fraction)):
            c = _norm_scalar(other)
            if not c:
                return self.ring.zero
            return Poly(self.ring, {exp: coef * c for exp, coef in self.terms.items()})
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return Poly(self.ring, _mul_terms(self.terms, q.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative ints")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    __hash__ = None  # type: ignore[assignment]

    # -- calculus and division -------------------------------------------

    def partial(self, v: VarId) -> Poly:
        """Formal partial derivative with respect to ``v``."""
        i = self.ring.index(v)
        out = {}
        for exp, coef in self.terms.items():
            e = exp[i]
            if e:
                ne = list(exp)
                ne[i] = e - 1
                _merge_term(out, tuple(ne), coef * e)
        return Poly(self.ring, out)

    def divide_exact(self, divisor: Poly | Scalar) -> Poly:
        """Quotient ``self / divisor`` when the division is exact.

        Raises ``NotDivisible`` when a remainder is left.  Division runs
        against the divisor's lexicographic leading term; for an exact
        division the result is order-independent.
        """
        d = self._coerce(divisor)
        if d is None or d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return self.ring.zero
        if len(d.terms) == 1:
            (dexp, dcoef), = d.terms.items()
            out = {}
            for exp, coef in self.terms.items():
                ne = tuple(a - b for a, b in zip(exp, dexp))
                if any(x < 0 for x in ne):
                    raise NotDivisible(f"({self}) is not divisible by ({d})")
                out[ne] = _div_scalar(coef, dcoef)
            return Poly(self.ring, out)
        dlead = max(d.terms)
        dcoef = d.terms[dlead]
        rem = dict(self.terms)
        quo: dict = {}
        while rem:
            lead = max(rem)
            qexp = tuple(a - b for a, b in zip(lead, dlead))
            if any(x < 0 for x in qexp):
                raise NotDivisible(f"({self}) is not divisible by ({d})")
            qcoef = _div_scalar(rem[lead], dcoef)
            quo[qexp] = qcoef
            for exp, coef in d.terms.items():
                shifted = tuple(a + b for a, b in zip(exp, qexp))
                _merge_term(rem, shifted, -coef * qcoef)
        return Poly(self.ring, quo)

    # -- substitution -----------------------------------------------------

    def substitute(
        self,
        mapping: Mapping[VarId, Poly | Scalar],
        ring: Ring | None = None,
    ) -> Poly:
        """Evaluate with each mapped variable replaced by its image.

        Unmapped variables pass through unchanged and must exist in the
        target ring.  Images may live in the target ring directly or be
        scalars.  The result lives in ``ring`` (default: the source ring).
        """
        target = ring if ring is not None else self.ring
        if not mapping:
            if target == self.ring:
                return self
            # plain embedding: remap exponent positions; a source variable
            # missing from the target is fine as long as it never occurs
            pos: list[int | None] = [
                target.index(v) if v in target else None for v in self.ring.vars
            ]
            width = len(target.vars)
            out = {}
            for exp, coef in self.terms.items():
                ne = [0] * width
                for i, (p, e) in enumerate(zip(pos, exp)):
                    if not e:
                        continue
                    if p is None:
                        raise ValueError(
                            f"variable {self.ring.vars[i].name} occurs but is "
                            "absent from the target ring"
                        )
                    ne[p] = e
                out[tuple(ne)] = coef
            return Poly(target, out)
        powers: dict[int, list[Poly]] = {}

        def image_powers(i: int) -> list[Poly]:
            cache = powers.get(i)
            if cache is None:
                v = self.ring.vars[i]
                img = mapping.get(v)
                if img is None:
                    img = target.var(v)
                elif isinstance(img, Poly):
                    if img.ring != target:
                        raise ValueError(f"image of {v.name} lives in the wrong ring")
                else:
                    img = target.const(img)
                cache = powers[i] = [target.one, img]
            return cache

        out: dict = {}
        for exp, coef in self.terms.items():
            acc = {target._one_terms: coef}
            for i, e in enumerate(exp):
                if not e:
                    continue
                cache = image_powers(i)
                while len(cache) <= e:
                    cache.append(cache[-1] * cache[1])
                acc = _mul_terms(acc, cache[e].terms)
                if not acc:
                    break
            for t, c in acc.items():
                _merge_term(out, t, c)
        return Poly(target, out)

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        return poly_str(self)

    def __repr__(self) -> str:
        return f"Poly({poly_str(self)})"


def poly_str(p: Poly) -> str:
    """Canonical text form: terms in descending lexicographic exponent order."""
    if not p.terms:
        return "0"
    chunks = []
    for i, (exp, coef) in enumerate(sorted(p.terms.items(), reverse=True)):
        neg = coef < 0
        mag = -coef if neg else coef
        factors = []
        if mag != 1 or not any(exp):
            factors.append(str(mag))
        for v, e in zip(p.ring.vars, exp):
            if e == 0:
                continue
            factors.append(v.name if e == 1 else f"{v.name}^{e}")
        body = "*".join(factors)
        if i == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f" - {body}" if neg else f" + {body}")
    return "".join(chunks)


_POLY_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()])"
)


def _poly_tokens(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


class _PolyParser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _poly_tokens(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of polynomial", 1, len(self.text) + 1)
        self.pos += 1
        return tok

    def fail(self, message: str, offset: int) -> ParseError:
        return ParseError(message, 1, offset + 1)

    def parse(self) -> Poly:
        p = self.expr()
        tok = self.peek()
        if tok is not None:
            raise self.fail(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Poly:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = -self.term() if tok[1] == "-" else self.term()
        else:
            p = self.term()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                return p
            self.take()
            q = self.term()
            p = p + q if tok[1] == "+" else p - q

    def term(self) -> Poly:
        p = self.factor()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] != "*":
                return p
            self.take()
            p = p * self.factor()

    def factor(self) -> Poly:
        p = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.take()
            etok = self.take()
            if etok[0] != "num" or "/" in etok[1]:
                raise self.fail("exponent must be a non-negative integer", etok[2])
            p = p ** int(etok[1])
        return p

    def atom(self) -> Poly:
        tok = self.take()
        kind, text, offset = tok
        if kind == "num":
            return self.ring.const(Fraction(text))
        if kind == "name":
            try:
                return self.ring.var(self.ring.var_by_name(text))
            except ValueError:
                raise self.fail(f"unknown variable {text!r}", offset) from None
        if kind == "op" and text == "(":
            p = self.expr()
            close = self.take()
            if close[0] != "op" or close[1] != ")":
                raise self.fail("expected ')'", close[2])
            return p
        if kind == "op" and text == "-":
            return -self.atom()
        raise self.fail(f"unexpected token {text!r}", offset)


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse the canonical polynomial syntax back into a ``Poly``."""
    return _PolyParser(text, ring).parse()
