"""Conversions between the weighted and labelled encodings of a tree.

Both directions run the same chart recursion.  For a weighted tree, each
leaf f at depth n gets a formal one-parameter expansion

    X_0 = h^n * T + sum_k w_k h^k

(the h-truncation built from the edge weights along the path to f), and
every internal coordinate is obtained by evaluating its numerator Q_e at the
expansion and dividing by h exactly.  Labels two levels below e are then read
off as the h^0 coefficient of the expansion of X_e, which must be the same
constant on every leaf of the corresponding branch.

The inverse direction recovers one weight at a time.  For a node at depth at
least 2, the recursion is rerun with the unknown weight kept as an
indeterminate W (edge weights strictly below it do not influence the h^0
coefficient, so they are temporarily set to 0); the resulting coefficient is
exactly affine in W, and solving slope * W + offset = label yields the
weight.  Every recovered (slope, offset) pair, together with the leaf used,
is recorded in a ``ConversionTrace``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    CheckError,
    LeadingCoefficientZero,
    NonConstantOnComponent,
    NonlinearInW,
    NotALeaf,
    NotDivisible,
)
from .poly import H, Poly, Ring, T, VarId, W, X0, _div_scalar
from .presentation import evaluate_factors, q_factors, var_of
from .trees import LabelledTree, RootedTree, WeightedTree

CHART_RING = Ring([H, T])
_TAYLOR_RING = Ring([H, T, W])


@dataclass
class ChartExpansion:
    """One-parameter expansion of all coordinates over a single leaf.

    ``images`` maps X_0 and every internal coordinate to a polynomial in
    (h, T); h itself is left untouched by the expansion.
    """

    leaf: str
    images: dict[VarId, Poly]


@dataclass
class ConversionStep:
    node: str
    leaf: str
    slope: Fraction
    offset: Fraction
    value: Fraction


@dataclass
class ConversionTrace:
    direction: str
    steps: list[ConversionStep]


def sigma(wt: WeightedTree, leaf: str, ring: Ring = CHART_RING) -> Poly:
    """h-truncation of a leaf: sum of (path edge weight at depth k+1) * h^k."""
    tree = wt.tree
    if not tree.is_leaf(leaf):
        raise NotALeaf(f"{leaf!r} is not a leaf")
    h = ring.var(H)
    acc = ring.zero
    for k, node in enumerate(tree.path_from_root(leaf)[1:]):
        acc = acc + wt.weights[node] * h**k
    return acc


def _divide_by_h(num: Poly, h: Poly, node: str, leaf: str) -> Poly:
    try:
        return num.divide_exact(h)
    except NotDivisible:
        raise NotDivisible(
            f"numerator of X_{node} over leaf {leaf!r} is not divisible by h"
        ) from None


def weighted_to_labelled(
    wt: WeightedTree,
) -> tuple[LabelledTree, list[ChartExpansion], ConversionTrace]:
    """Recover labels from weights; also returns all per-leaf chart expansions."""
    wt.require_valid()
    tree = wt.tree
    ring = CHART_RING
    h = ring.var(H)
    t = ring.var(T)
    leaves = tree.leaves()
    charts: dict[str, dict[VarId, Poly]] = {}
    for f in leaves:
        charts[f] = {H: h, X0: h ** tree.level(f) * t + sigma(wt, f, ring)}
    labels: dict[str, Fraction] = {g: wt.weights[g] for g in tree.children(tree.root)}
    for lvl in range(tree.height):
        for e in tree.nodes_at_level(lvl):
            if tree.is_leaf(e):
                continue
            facs = q_factors(tree, labels, e)
            xe = var_of(tree, e)
            for f in leaves:
                charts[f][xe] = _divide_by_h(
                    evaluate_factors(charts[f], facs), h, e, f
                )
            for g in tree.children(e):
                if tree.is_leaf(g):
                    continue
                for gp in tree.children(g):
                    vals = []
                    for f in tree.leaves_below(gp):
                        c = charts[f][xe].substitute({H: 0})
                        if not c.is_constant():
                            raise NonConstantOnComponent(
                                f"expansion of X_{e} over leaf {f!r} has a "
                                f"non-constant h^0 coefficient"
                            )
                        vals.append(c.constant_value())
                    if any(v != vals[0] for v in vals[1:]):
                        raise NonConstantOnComponent(
                            f"leaves below {gp!r} disagree on the label read from X_{e}"
                        )
                    labels[gp] = vals[0]
    for f in leaves:
        if f == tree.root:
            continue
        p0 = charts[f][var_of(tree, tree.parent(f))].substitute({H: 0})
        if p0.degree_in(T) != 1 or not p0.coefficient(T, 1).is_constant():
            raise LeadingCoefficientZero(
                f"expansion over leaf {f!r} does not give an affine coordinate"
            )
    lt = LabelledTree(tree, labels)
    lt.require_fine()
    expansions = [
        ChartExpansion(f, {v: p for v, p in charts[f].items() if v != H}) for f in leaves
    ]
    trace = _build_trace(tree, labels, wt.weights, "weights-to-labels")
    return lt, expansions, trace


def labelled_to_weighted(lt: LabelledTree) -> tuple[WeightedTree, ConversionTrace]:
    """Recover edge weights from labels, one node at a time, top-down."""
    lt.require_fine()
    tree = lt.tree
    weights: dict[str, Fraction] = {g: lt.labels[g] for g in tree.children(tree.root)}
    steps = [
        ConversionStep(g, min(tree.leaves_below(g)), Fraction(1), Fraction(0), weights[g])
        for g in sorted(tree.children(tree.root))
    ]
    for lvl in range(2, tree.height + 1):
        for gp in tree.nodes_at_level(lvl):
            lam, mu, leaf = _taylor_pair(tree, lt.labels, weights, gp)
            weights[gp] = _div_scalar(lt.labels[gp] - mu, lam)
            steps.append(ConversionStep(gp, leaf, lam, mu, weights[gp]))
    wt = WeightedTree(tree, weights)
    wt.require_valid()
    return wt, ConversionTrace("labels-to-weights", steps)


def _taylor_pair(
    tree: RootedTree,
    labels: Mapping[str, Fraction],
    weights: Mapping[str, Fraction],
    node: str,
) -> tuple[Fraction, Fraction, str]:
    """Slope and offset tying the weight of the edge into ``node`` to its label.

    Reruns the chart recursion over the lexicographically smallest leaf below
    ``node`` with that one weight replaced by the indeterminate W and all
    deeper weights on the path set to 0, then reads the h^0 coefficient of
    the grandparent coordinate.  Requires level(node) >= 2; weights need only
    be known strictly above ``node``.
    """
    depth = tree.level(node)
    grand = tree.parent(tree.parent(node))
    leaf = min(tree.leaves_below(node))
    ring = _TAYLOR_RING
    h = ring.var(H)
    path = tree.path_from_root(leaf)
    x0 = h ** tree.level(leaf) * ring.var(T)
    for k, step in enumerate(path[1:]):
        if step == node:
            x0 = x0 + ring.var(W) * h**k
        elif k + 1 < depth:
            x0 = x0 + weights[step] * h**k
    images: dict[VarId, Poly] = {H: h, X0: x0}
    for anc in path[:-1]:
        if tree.level(anc) > tree.level(grand):
            break
        images[var_of(tree, anc)] = _divide_by_h(
            evaluate_factors(images, q_factors(tree, labels, anc)), h, anc, leaf
        )
    const = images[var_of(tree, grand)].substitute({H: 0})
    if const.degree_in(T) > 0 or const.degree_in(W) > 1:
        raise NonlinearInW(
            f"h^0 coefficient over leaf {leaf!r} is not affine in the weight "
            f"of the edge into {node!r}: {const}"
        )
    lam = const.coefficient(W, 1).constant_value()
    mu = const.coefficient(W, 0).constant_value()
    if lam == 0:
        raise LeadingCoefficientZero(
            f"weight of the edge into {node!r} does not influence the label"
        )
    return lam, mu, leaf


def _build_trace(
    tree: RootedTree,
    labels: Mapping[str, Fraction],
    weights: Mapping[str, Fraction],
    direction: str,
) -> ConversionTrace:
    """Per-node (slope, offset) records; also re-checks label == slope*weight + offset."""
    steps = []
    for node in tree.nodes:
        if node == tree.root:
            continue
        if tree.level(node) == 1:
            lam, mu, leaf = Fraction(1), Fraction(0), min(tree.leaves_below(node))
        else:
            lam, mu, leaf = _taylor_pair(tree, labels, weights, node)
        if labels[node] != lam * weights[node] + mu:
            raise CheckError(
                f"conversion trace inconsistent at {node!r}: "
                f"label {labels[node]} != {lam} * {weights[node]} + {mu}"
            )
        value = labels[node] if direction == "weights-to-labels" else weights[node]
        steps.append(ConversionStep(node, leaf, lam, mu, value))
    return ConversionTrace(direction, steps)
