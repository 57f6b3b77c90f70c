"""Charts, the generic trivialization, and the fiber over h = 0.

Away from h = 0 every coordinate is determined by X_0: inverting h once per
level gives each internal coordinate as a Laurent expression num / h^k with
h not dividing the numerator.  Over h = 0 the surface breaks into one affine
line per leaf; restricting the leaf's chart expansion to h = 0 parameterizes
that line, with the parent coordinate of the leaf as the affine parameter.
All of this is mechanically checkable and the checkers below return lists of
failure strings (empty means verified).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import CheckError
from .poly import H, Poly, Ring, T, VarId, X0
from .presentation import (
    Presentation,
    expand_factors,
    generator_values_at,
    parent_var,
    q_factors,
    root_path_factors,
    syzygy_check,
    var_of,
)
from .transform import (
    ChartExpansion,
    labelled_to_weighted,
    weighted_to_labelled,
)
from .trees import WeightedTree

BASE_RING = Ring([H, X0])
FIBER_RING = Ring([T])


@dataclass(frozen=True)
class HLaurent:
    """A fraction num / h^hpow, normalized so h does not divide num."""

    num: Poly
    hpow: int

    @staticmethod
    def of(num: Poly, hpow: int = 0) -> HLaurent:
        if num.is_zero():
            return HLaurent(num, 0)
        drop = min(hpow, num.order_in([H]))
        if drop:
            num = num.divide_exact(num.ring.var(H) ** drop)
            hpow -= drop
        return HLaurent(num, hpow)

    def _h(self) -> Poly:
        return self.num.ring.var(H)

    def _lift(self, other: object) -> HLaurent | None:
        if isinstance(other, HLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return HLaurent.of(self.num.ring.const(other))
        if isinstance(other, Poly):
            return HLaurent.of(other)
        return None

    def __add__(self, other: object) -> HLaurent:
        q = self._lift(other)
        if q is None:
            return NotImplemented
        k = max(self.hpow, q.hpow)
        h = self._h()
        return HLaurent.of(
            self.num * h ** (k - self.hpow) + q.num * h ** (k - q.hpow), k
        )

    __radd__ = __add__

    def __neg__(self) -> HLaurent:
        return HLaurent(-self.num, self.hpow)

    def __sub__(self, other: object) -> HLaurent:
        q = self._lift(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other: object) -> HLaurent:
        q = self._lift(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __mul__(self, other: object) -> HLaurent:
        q = self._lift(other)
        if q is None:
            return NotImplemented
        return HLaurent.of(self.num * q.num, self.hpow + q.hpow)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def at_h_one(self) -> Poly:
        return self.num.substitute({H: 1})

    def __str__(self) -> str:
        if self.hpow == 0:
            return str(self.num)
        return f"({self.num}) / h^{self.hpow}"


def hlaurent_eval(p: Poly, images: Mapping[VarId, HLaurent]) -> HLaurent:
    """Evaluate an ambient polynomial at Laurent images (h maps to itself)."""
    base_h = HLaurent.of(BASE_RING.var(H))
    acc = HLaurent.of(BASE_RING.zero)
    for exp, coef in sorted(p.terms.items()):
        term = HLaurent.of(BASE_RING.const(coef))
        for v, e in zip(p.ring.vars, exp):
            if not e:
                continue
            img = images.get(v)
            if img is None:
                if v != H:
                    raise ValueError(f"no Laurent image for {v.name}")
                img = base_h
            for _ in range(e):
                term = term * img
        acc = acc + term
    return acc


def generic_trivialization(pres: Presentation) -> dict[VarId, HLaurent]:
    """Express every coordinate as num / h^k in X_0 alone.

    The returned map sends X_0 to itself and each internal coordinate to the
    Laurent expression obtained by evaluating its numerator at the previous
    images and dividing by h once.
    """
    tree = pres.tree
    labels = pres.labelled.labels
    images: dict[VarId, HLaurent] = {X0: HLaurent.of(BASE_RING.var(X0))}
    for e in tree.internal_nodes():
        prod = HLaurent.of(BASE_RING.one)
        for pv, root in q_factors(tree, labels, e):
            prod = prod * (images[pv] - root)
        images[var_of(tree, e)] = HLaurent.of(prod.num, prod.hpow + 1)
    return images


def trivialization_failures(
    pres: Presentation, triv: Mapping[VarId, HLaurent] | None = None
) -> list[str]:
    """Check that every generator vanishes under the trivialization.

    Also checks the h = 1 slice: substituting the numerators at h = 1 into
    each generator at h = 1 gives 0 identically in X_0.
    """
    if triv is None:
        triv = generic_trivialization(pres)
    failures = []
    slice_ring = Ring([X0])
    h1_images: dict[VarId, Poly] = {X0: slice_ring.var(X0)}
    for v, img in triv.items():
        h1_images[v] = img.at_h_one().substitute({}, ring=slice_ring)
    base_h = HLaurent.of(BASE_RING.var(H))
    laurent = generator_values_at(pres, triv, base_h)
    sliced = generator_values_at(pres, h1_images, slice_ring.const(1))
    for (name, value), (_, value1) in zip(laurent, sliced):
        if not value.is_zero():
            failures.append(f"{name} does not vanish under the generic trivialization")
        if not value1.is_zero():
            failures.append(f"{name} does not vanish on the h = 1 slice")
    return failures


def charts_for(wt: WeightedTree) -> list[ChartExpansion]:
    """Per-leaf expansions of every coordinate (delegates to the conversion)."""
    return weighted_to_labelled(wt)[1]


def verify_embedding(pres: Presentation, charts: list[ChartExpansion]) -> list[str]:
    """Every generator must vanish under every chart and the trivialization.

    The h-leading generators are evaluated directly on each chart.  The
    ancestor generators follow from those via the syzygies (checked here as
    well): h times an ancestor generator is a combination of h-leading ones,
    and the chart ring is an integral domain in which h is not zero.
    """
    failures = list(syzygy_check(pres))
    for chart in charts:
        ring = chart.images[X0].ring
        h = ring.var(H)
        for name, value in generator_values_at(pres, chart.images, h, top_only=True):
            if not value.is_zero():
                failures.append(f"{name} does not vanish on the chart over {chart.leaf!r}")
    failures.extend(trivialization_failures(pres))
    return failures


@dataclass
class FiberComponent:
    """One affine-line component of the fiber over h = 0.

    ``point_map`` restricts every coordinate to the component as a univariate
    polynomial in the parameter T; the entry at ``coordinate`` is affine of
    degree exactly 1 and every other entry has degree != 1.
    ``ideal_relations`` lists h and the pinned on-path coordinates.
    """

    leaf: str
    coordinate: VarId
    point_map: dict[VarId, Poly]
    ideal_relations: list[Poly]


def fiber_components(
    pres: Presentation, charts: list[ChartExpansion] | None = None
) -> list[FiberComponent]:
    """Decompose the fiber over h = 0, one component per leaf.

    ``charts`` may hand in already-computed per-leaf expansions of this very
    tree to save the conversion; omitted, they are derived here.
    """
    tree = pres.tree
    labels = pres.labelled.labels
    ring = pres.ring
    if charts is None:
        wt, _ = labelled_to_weighted(pres.labelled)
        _, charts, _ = weighted_to_labelled(wt)
    components = []
    for chart in charts:
        leaf = chart.leaf
        point_map = {
            v: img.substitute({H: 0}, ring=FIBER_RING) for v, img in chart.images.items()
        }
        coordinate = parent_var(tree, leaf)
        if point_map[coordinate].degree_in(T) != 1:
            raise CheckError(f"component over {leaf!r}: parameter entry is not affine")
        for v, img in point_map.items():
            if v != coordinate and img.degree_in(T) == 1:
                raise CheckError(
                    f"component over {leaf!r}: {v.name} is affine but is not the parameter"
                )
        path = tree.path_from_root(leaf)
        relations = [ring.var(H)]
        for i in range(len(path) - 1):
            pv = parent_var(tree, path[i])
            pin = ring.var(pv) - labels[path[i + 1]]
            relations.append(pin)
            if point_map[pv] != labels[path[i + 1]]:
                raise CheckError(
                    f"component over {leaf!r}: {pv.name} is not pinned to its label"
                )
        for name, val in generator_values_at(pres, point_map, FIBER_RING.zero):
            if not val.is_zero():
                raise CheckError(f"{name} does not vanish on the component over {leaf!r}")
        components.append(FiberComponent(leaf, coordinate, point_map, relations))
    return components


def separation_failures(pres: Presentation, components: list[FiberComponent]) -> list[str]:
    """Distinct components must disagree at the parent coordinate of their meet."""
    tree = pres.tree
    by_leaf = {c.leaf: c for c in components}
    failures = []
    leaves = tree.leaves()
    for i, f in enumerate(leaves):
        for g in leaves[i + 1 :]:
            meet = tree.first_common_ancestor(f, g)
            pv = parent_var(tree, meet)
            a = by_leaf[f].point_map[pv]
            b = by_leaf[g].point_map[pv]
            if not (a.is_constant() and b.is_constant() and a != b):
                failures.append(
                    f"components over {f!r} and {g!r} are not separated at {pv.name}"
                )
    return failures


def leaf_cover_failures(pres: Presentation, components: list[FiberComponent]) -> list[str]:
    """R_leaf must be a nonzero constant on its own component and 0 on the others."""
    tree = pres.tree
    labels = pres.labelled.labels
    ring = pres.ring
    failures = []
    for f in tree.leaves():
        r = expand_factors(ring, root_path_factors(tree, labels, f))
        for comp in components:
            val = r.substitute({**comp.point_map, H: 0}, ring=FIBER_RING)
            if comp.leaf == f:
                ok = val.is_constant() and not val.is_zero()
            else:
                ok = val.is_zero()
            if not ok:
                failures.append(
                    f"R_{f} takes the wrong value on the component over {comp.leaf!r}"
                )
    return failures
