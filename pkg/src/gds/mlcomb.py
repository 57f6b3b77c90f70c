"""Comb criterion, comb normal forms, and cyclic quotient data.

A tree is a comb when its internal nodes form a single chain.  For the
surfaces built here that shape is exactly the Makar-Limanov trivial case
(every coordinate is destabilized by some locally nilpotent derivation), so
``ml_trivial`` only inspects the tree.

A comb of height n is captured by n univariate polynomials: level i
contributes the monic polynomial P_i whose roots are the labels under the
i-th chain node, together with a distinguished root (the label of the next
chain node; at the bottom, the smallest label).  ``comb_equations`` expands
that data into the standard generator family in variables x, y_1 ... y_{n+1};
renaming (x, y_1, y_{k+1}) to (h, X_0, X at chain node k) recovers the tree
presentation generator for generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisibilityViolation, GcdViolation, NotAComb, ValidationError
from .poly import Poly, Ring, T, free_var
from .trees import LabelledTree

T_RING = Ring([T])


def ml_trivial(lt: LabelledTree) -> bool:
    """True when every coordinate can be destabilized: the comb criterion."""
    lt.require_fine()
    return lt.tree.is_comb()


@dataclass
class CombLevel:
    """One chain level: full root polynomial, distinguished root, cofactor."""

    full: Poly
    root: Fraction
    cofactor: Poly


@dataclass
class CombNormalForm:
    n: int
    levels: list[CombLevel]


def comb_normal_form(lt: LabelledTree) -> CombNormalForm:
    """Univariate data determining a comb surface up to isomorphism."""
    lt.require_fine()
    tree = lt.tree
    if not tree.is_comb() or tree.height == 0:
        raise NotAComb("the internal nodes do not form a chain of positive height")
    chain = tree.internal_nodes()
    n = tree.height
    t = T_RING.var(T)
    levels = []
    for i in range(1, n + 1):
        node = chain[i - 1]
        full = T_RING.one
        for c in tree.children(node):
            full = full * (t - lt.labels[c])
        if i < n:
            root = lt.labels[chain[i]]
        else:
            root = min(lt.labels[c] for c in tree.children(node))
        cofactor = full.divide_exact(t - root)
        levels.append(CombLevel(full, root, cofactor))
    return CombNormalForm(n, levels)


def comb_ring(n: int) -> Ring:
    return Ring([free_var(0, "x")] + [free_var(i, f"y{i}") for i in range(1, n + 2)])


def comb_equations(nf: CombNormalForm) -> list[tuple[str, Poly]]:
    """Generator family in x, y_1 ... y_{n+1}: n + n(n-1)/2 equations.

    Equation g0_<i> relates x * y_{i+1} to the level polynomials evaluated at
    shallower y's; g_<j>_<i> pins y_{i+1} against the level j - 1 root.
    """
    n = nf.n
    ring = comb_ring(n)
    x = ring.var(free_var(0, "x"))
    y = {i: ring.var(free_var(i, f"y{i}")) for i in range(1, n + 2)}

    def at(p: Poly, i: int) -> Poly:
        return p.substitute({T: y[i]}, ring=ring)

    gens: list[tuple[str, Poly]] = []
    for i in range(1, n + 1):
        rhs = ring.one
        for k in range(1, i):
            rhs = rhs * at(nf.levels[k - 1].cofactor, k)
        rhs = rhs * at(nf.levels[i - 1].full, i)
        gens.append((f"g0_{i}", x * y[i + 1] - rhs))
    for i in range(2, n + 1):
        for j in range(2, i + 1):
            rhs = y[j]
            for k in range(j, i):
                rhs = rhs * at(nf.levels[k - 1].cofactor, k)
            rhs = rhs * at(nf.levels[i - 1].full, i)
            pin = y[j - 1] - nf.levels[j - 2].root
            gens.append((f"g_{j}_{i}", pin * y[i + 1] - rhs))
    return gens


def ordinary_danielewski_form(lt: LabelledTree) -> tuple[int, Poly] | None:
    """(n, P) with the surface given by x^n * z = P(y), when the shape allows.

    Applicable exactly for combs whose leaves all sit at the bottom level
    (then every middle chain node has a single child and the presentation
    collapses to one equation).  Returns None otherwise, and also for the
    single-node tree, where the surface degenerates to an affine line.
    """
    lt.require_fine()
    tree = lt.tree
    if not tree.is_comb() or not tree.leaves_same_level() or tree.height == 0:
        return None
    chain = tree.internal_nodes()
    t = T_RING.var(T)
    p = T_RING.one
    for c in tree.children(chain[-1]):
        p = p * (t - lt.labels[c])
    return tree.height, p


@dataclass
class MlReport:
    """Everything the comb criterion yields for one labelled tree."""

    comb: bool
    trivial: bool
    normal_form: CombNormalForm | None
    equations: list[tuple[str, Poly]] | None
    ordinary: tuple[int, Poly] | None


def ml_report(lt: LabelledTree) -> MlReport:
    trivial = ml_trivial(lt)
    comb = lt.tree.is_comb()
    if comb and lt.tree.height >= 1:
        nf = comb_normal_form(lt)
        equations = comb_equations(nf)
    else:
        nf = None
        equations = None
    return MlReport(comb, trivial, nf, equations, ordinary_danielewski_form(lt))


@dataclass
class QHPData:
    """Cyclic quotient data for the surface x*z = t^n - 1.

    ``action_exponents`` lists the residues acting on (x, t, z).  The
    divisibility and coprimality conditions are enforced; the invariance
    congruence q*n = 0 (mod m) is recorded but deliberately not enforced, so
    callers can see when stated conditions leave the surface non-invariant.
    """

    m: int
    n: int
    q: int
    surface: Poly
    action_exponents: tuple[int, int, int]
    invariance_ok: bool


def qhp_quotient_data(m: int, n: int, q: int) -> QHPData:
    if m < 1 or n < 1:
        raise ValidationError("quotient data needs m >= 1 and n >= 1")
    if m % n != 0:
        raise DivisibilityViolation(f"n = {n} does not divide m = {m}")
    if math.gcd(q, m // n) != 1:
        raise GcdViolation(f"gcd(q, m/n) = gcd({q}, {m // n}) != 1")
    ring = Ring([free_var(0, "x"), free_var(1, "t"), free_var(2, "z")])
    x = ring.var(free_var(0, "x"))
    t = ring.var(free_var(1, "t"))
    z = ring.var(free_var(2, "z"))
    surface = x * z - (t**n - 1)
    return QHPData(
        m,
        n,
        q,
        surface,
        (1 % m, q % m, (-1) % m),
        (q * n) % m == 0,
    )
