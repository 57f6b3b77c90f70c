"""The canonical locally nilpotent derivation attached to a presentation.

The derivation sends h to 0 and X_0 to g * h^m for a chosen exponent m and a
multiplier g in Q[h] not divisible by h.  Each deeper coordinate image is
forced by requiring the first generator family to stay in the kernel:
differentiate Q_e by the chain rule, then divide by h exactly.  The division
succeeds whenever m is at least the tree height; a failed division means the
chosen m is too small.

Everything the construction promises is checkable and checked here:

* the D0 generators are killed (``kernel_failures``);
* each ancestor generator is stable via an explicit cofactor pair
  (``stability_certificate``);
* images are triangular, each depending only on h, X_0 and strictly
  shallower coordinates (``triangularity_failures``);
* the image of a level-k coordinate is divisible by h^(m-k-1)
  (``h_order_failures``);
* iterating the derivation reaches 0 within a bound computed from the
  images themselves (``nilpotency_trace``), so nilpotency is witnessed, not
  assumed;
* along each fiber component the derivation vanishes to order at least
  m - depth(leaf) (``fixed_point_order`` returns the certified order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .charts import FiberComponent
from .errors import BoundExceeded, CheckError, HDividesG, MTooSmall, NotDivisible
from .poly import H, Poly, VarId, X0
from .presentation import (
    Presentation,
    expand_factors,
    gen_name,
    parent_var,
    q_factors,
    q_rel_factors,
    var_of,
)


@dataclass
class Derivation:
    """Images of every ambient variable; h maps to 0."""

    presentation: Presentation
    m: int
    multiplier: Poly
    images: dict[VarId, Poly]


def build_derivation(
    pres: Presentation,
    m: int | None = None,
    multiplier: Poly | Fraction | int | None = None,
) -> Derivation:
    """Construct the derivation with X_0 image multiplier * h^m.

    ``m`` defaults to the tree height (the least exponent that always
    works).  ``multiplier`` defaults to 1; it must be a nonzero polynomial
    in h alone with nonzero constant term.
    """
    tree = pres.tree
    ring = pres.ring
    if m is None:
        m = tree.height
    if m < 0:
        raise MTooSmall("the h-exponent m must be non-negative")
    if multiplier is None:
        g = ring.one
    elif isinstance(multiplier, Poly):
        g = multiplier.substitute({}, ring=ring) if multiplier.ring != ring else multiplier
    else:
        g = ring.const(multiplier)
    if g.is_zero():
        raise HDividesG("the multiplier must be nonzero")
    if any(v != H and g.degree_in(v) > 0 for v in ring.vars):
        raise HDividesG("the multiplier must be a polynomial in h alone")
    if g.order_in([H]) != 0:
        raise HDividesG("the multiplier must not be divisible by h")
    h = ring.var(H)
    images: dict[VarId, Poly] = {H: ring.zero, X0: g * h**m}
    for e in tree.internal_nodes():
        q = expand_factors(ring, q_factors(tree, pres.labelled.labels, e))
        acc = ring.zero
        for v in _support(q):
            if v == H:
                continue
            acc = acc + q.partial(v) * images[v]
        try:
            images[var_of(tree, e)] = acc.divide_exact(h)
        except NotDivisible:
            raise MTooSmall(
                f"m = {m} is too small: the image of X_{e} is not divisible by h"
            ) from None
    return Derivation(pres, m, g, images)


def _support(p: Poly) -> list[VarId]:
    out = []
    for i, v in enumerate(p.ring.vars):
        if any(exp[i] for exp in p.terms):
            out.append(v)
    return out


def apply(d: Derivation, p: Poly) -> Poly:
    """Apply the derivation to an ambient polynomial by the chain rule."""
    acc = d.presentation.ring.zero
    for v in _support(p):
        img = d.images.get(v)
        if img is None or img.is_zero():
            continue
        acc = acc + p.partial(v) * img
    return acc


def kernel_failures(d: Derivation) -> list[str]:
    """The D0 generator family must be killed exactly."""
    failures = []
    for e in d.presentation.tree.internal_nodes():
        if not apply(d, d.presentation.gens0[e]).is_zero():
            failures.append(f"{gen_name(None, e)} is not in the kernel")
    return failures


def verify_kernel(d: Derivation) -> bool:
    return not kernel_failures(d)


def stability_certificate(
    d: Derivation, upper: str, node: str
) -> tuple[Poly, Poly]:
    """Cofactors (c1, c2) with apply(D_upper_node) == c1 * D0_node + c2 * D0_upper.

    c1 is the image of the parent coordinate of ``upper`` divided by h; c2 is
    minus the derivative of Q_{upper,node} divided by h.  Both divisions are
    exact for any m at least the tree height.  The identity itself is checked
    before returning; failure raises ``CheckError``.
    """
    pres = d.presentation
    tree = pres.tree
    ring = pres.ring
    h = ring.var(H)
    qrel = expand_factors(
        ring, q_rel_factors(tree, pres.labelled.labels, upper, node)
    )
    c1 = d.images[parent_var(tree, upper)].divide_exact(h)
    c2 = -apply(d, qrel).divide_exact(h)
    lhs = apply(d, pres.gens_anc[(upper, node)])
    rhs = c1 * pres.gens0[node] + c2 * pres.gens0[upper]
    if lhs != rhs:
        raise CheckError(
            f"stability certificate failed for {gen_name(upper, node)}"
        )
    return c1, c2


def stability_failures(d: Derivation) -> list[str]:
    failures = []
    for upper, node in sorted(d.presentation.gens_anc):
        try:
            stability_certificate(d, upper, node)
        except (CheckError, NotDivisible):
            failures.append(f"stability fails for {gen_name(upper, node)}")
    return failures


def triangularity_failures(d: Derivation) -> list[str]:
    """Each image may involve only h, X_0, and strictly shallower coordinates."""
    pres = d.presentation
    tree = pres.tree
    failures = []
    for e in tree.internal_nodes():
        allowed = {H, X0} | {var_of(tree, a) for a in tree.ancestors(e)}
        extra = [v.name for v in _support(d.images[var_of(tree, e)]) if v not in allowed]
        if extra:
            failures.append(f"image of X_{e} involves {', '.join(extra)}")
    return failures


def h_order_failures(d: Derivation) -> list[str]:
    """The image of a level-k coordinate must vanish to h-order >= m - k - 1."""
    pres = d.presentation
    tree = pres.tree
    failures = []
    if d.images[X0].order_in([H]) < d.m:
        failures.append("image of X_0 has h-order below m")
    for e in tree.internal_nodes():
        need = d.m - tree.level(e) - 1
        if d.images[var_of(tree, e)].order_in([H]) < need:
            failures.append(f"image of X_{e} has h-order below m - {tree.level(e)} - 1")
    return failures


def weight_bound(d: Derivation) -> dict[VarId, int]:
    """Additive weights certifying nilpotency.

    h has weight 0 and X_0 weight 1; each coordinate gets one more than the
    heaviest term of its own image.  Applying the derivation then strictly
    decreases the maximal term weight, so any p reaches 0 after at most
    (weight of p) + 1 applications.
    """
    pres = d.presentation
    tree = pres.tree
    ring = pres.ring
    weights: dict[VarId, int] = {H: 0, X0: 1}
    for e in tree.internal_nodes():
        img = d.images[var_of(tree, e)]
        heaviest = _max_term_weight(img, weights, ring)
        weights[var_of(tree, e)] = 1 + max(heaviest, 0)
    return weights


def _max_term_weight(p: Poly, weights: dict[VarId, int], ring) -> int:
    if p.is_zero():
        return 0
    best = 0
    for exp in p.terms:
        w = sum(e * weights[v] for v, e in zip(ring.vars, exp) if e)
        best = max(best, w)
    return best


def nilpotency_trace(d: Derivation, p: Poly, bound: int | None = None) -> int:
    """Least k with the k-th application of the derivation killing p.

    ``bound`` defaults to the certified weight bound for p; exceeding it
    raises ``BoundExceeded``.
    """
    if bound is None:
        bound = _max_term_weight(p, weight_bound(d), d.presentation.ring) + 1
    k = 0
    cur = p
    while not cur.is_zero():
        if k >= bound:
            raise BoundExceeded(
                f"derivation failed to kill the polynomial within {bound} applications"
            )
        cur = apply(d, cur)
        k += 1
    return k


def fixed_point_order(d: Derivation, component: FiberComponent) -> int:
    """Certified vanishing order of the derivation along a fiber component.

    Shifts the pinned on-path coordinates so the component sits at their
    origin, then takes the minimal combined vanishing order of any image in
    h and the shifted coordinates.  A lower bound for the true order; on the
    canonical construction it equals m - depth(leaf).
    """
    pres = d.presentation
    tree = pres.tree
    ring = pres.ring
    labels = pres.labelled.labels
    path = tree.path_from_root(component.leaf)
    shift = {}
    pinned = [H]
    for i in range(len(path) - 1):
        pv = parent_var(tree, path[i])
        shift[pv] = ring.var(pv) + labels[path[i + 1]]
        pinned.append(pv)
    best: int | float = math.inf
    for v in ring.vars:
        if v == H:
            continue
        img = d.images[v]
        if shift:
            img = img.substitute(shift)
        best = min(best, img.order_in(pinned))
    if best is math.inf:
        raise CheckError("the derivation vanishes identically")
    return int(best)
