"""Explicit polynomial presentation of the surface attached to a labelled tree.

The ambient ring is Q[h][X_0, X_e ...] with one coordinate per internal node
e (root included).  For an internal node e with parent coordinate X_par, the
sibling polynomial S_e is the monic univariate polynomial in X_par whose
roots are the labels of e's children, possibly with some children excluded.
Multiplying the excluded-sibling polynomials along the root path gives the
propagation factor R_e, and Q_e = S_e * R_e is the numerator of the next
coordinate in the generic chart.

Generators come in two families, both 2x2 determinants of a matrix whose
columns are (h, 1) and (Q_e, X_e):

* ``D0_<e>``:   h*X_e - Q_e
* ``D_<f>_<e>``: (X_par(f) - label(c))*X_e - X_f * Q_{f,e} for each strict
  ancestor f of e, where c is the child of f on the path to e and Q_{f,e} is
  the part of Q_e supported between f and e.

Every D_<f>_<e> satisfies h * D_<f>_<e> = (X_par(f) - label(c)) * D0_<e>
- Q_{f,e} * D0_<f>, which is what ``syzygy_check`` verifies.  Minors taken at
two incomparable columns are not generators; ``incomparable_minor`` shows
they already lie in the ideal by an exact two-cofactor certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import CheckError, Comparable, NotAnAncestor, NotAParent
from .poly import H, Poly, Ring, VarId, X0, node_var
from .trees import LabelledTree, RootedTree

Labels = Mapping[str, Fraction]


def var_of(tree: RootedTree, node: str) -> VarId:
    """Coordinate of an internal node."""
    if tree.is_leaf(node):
        raise NotAParent(f"leaf {node!r} carries no coordinate")
    return node_var(node, tree.level(node))


def parent_var(tree: RootedTree, node: str) -> VarId:
    """Coordinate of the parent; the root's virtual parent is X_0."""
    parent = tree.parent(tree._check(node))
    if parent is None:
        return X0
    return var_of(tree, parent)


def ambient_ring(tree: RootedTree) -> Ring:
    return Ring([H, X0] + [var_of(tree, e) for e in tree.internal_nodes()])


# -- factor lists -----------------------------------------------------------
#
# Each product of linear factors is kept as a list of (variable, root) pairs
# so it can be expanded in the ambient ring or evaluated directly against
# chart images without building the ambient polynomial first.

Factor = tuple[VarId, Fraction]


def sibling_factors(
    tree: RootedTree, labels: Labels, node: str, exclude: tuple[str, ...] = ()
) -> list[Factor]:
    if tree.is_leaf(node):
        raise NotAParent(f"leaf {node!r} has no sibling polynomial")
    pv = parent_var(tree, node)
    return [(pv, labels[c]) for c in tree.children(node) if c not in exclude]


def root_path_factors(tree: RootedTree, labels: Labels, node: str) -> list[Factor]:
    """Factors of R_node: excluded-sibling polynomials along the root path."""
    path = tree.path_from_root(node)
    out: list[Factor] = []
    for anc, nxt in zip(path, path[1:]):
        out.extend(sibling_factors(tree, labels, anc, exclude=(nxt,)))
    return out


def q_factors(tree: RootedTree, labels: Labels, node: str) -> list[Factor]:
    """Factors of Q_node = S_node * R_node."""
    return sibling_factors(tree, labels, node) + root_path_factors(tree, labels, node)


def q_rel_factors(
    tree: RootedTree, labels: Labels, upper: str | None, node: str
) -> list[Factor]:
    """Factors of Q_{upper,node}: the part of Q_node supported below ``upper``.

    ``upper`` is a strict ancestor of ``node`` or None for the virtual parent
    of the root, in which case the full Q_node is returned.
    """
    out = sibling_factors(tree, labels, node)
    path = tree.path_from_root(node)
    if upper is None:
        start = 0
    else:
        try:
            start = path.index(tree._check(upper)) + 1
        except ValueError:
            raise NotAnAncestor(f"{upper!r} is not an ancestor of {node!r}") from None
        if upper == node:
            raise NotAnAncestor(f"{node!r} is not a strict ancestor of itself")
    for anc, nxt in zip(path[start:], path[start + 1 :]):
        out.extend(sibling_factors(tree, labels, anc, exclude=(nxt,)))
    return out


def expand_factors(ring: Ring, factors: list[Factor]) -> Poly:
    p = ring.one
    for pv, root in factors:
        p = p * (ring.var(pv) - root)
    return p


def evaluate_factors(images: Mapping[VarId, Poly], factors: list[Factor]) -> Poly:
    """Product of (image(variable) - root) over the factor list.

    Multiplies in a balanced order, which keeps the intermediate results
    small when the images are large.
    """
    if not factors:
        # empty product; infer the ring from any image (X_0 is always present)
        return next(iter(images.values())).ring.one
    layer = [images[pv] - root for pv, root in factors]
    while len(layer) > 1:
        nxt = [layer[i] * layer[i + 1] for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


# -- public wrappers over a labelled tree --------------------------------------


def sibling_poly(lt: LabelledTree, node: str, exclude: tuple[str, ...] = ()) -> Poly:
    ring = ambient_ring(lt.tree)
    return expand_factors(ring, sibling_factors(lt.tree, lt.labels, node, exclude))


def root_poly(lt: LabelledTree, node: str) -> Poly:
    ring = ambient_ring(lt.tree)
    return expand_factors(ring, root_path_factors(lt.tree, lt.labels, node))


def q_poly(lt: LabelledTree, node: str) -> Poly:
    ring = ambient_ring(lt.tree)
    return expand_factors(ring, q_factors(lt.tree, lt.labels, node))


def q_rel(lt: LabelledTree, upper: str | None, node: str) -> Poly:
    ring = ambient_ring(lt.tree)
    return expand_factors(ring, q_rel_factors(lt.tree, lt.labels, upper, node))


# -- the presentation ----------------------------------------------------------


def gen_name(upper: str | None, node: str) -> str:
    return f"D0_{node}" if upper is None else f"D_{upper}_{node}"


@dataclass
class Presentation:
    """All generators of the defining ideal, keyed two ways.

    ``gens0`` maps each internal node e to D0_e; ``gens_anc`` maps each pair
    (strict ancestor f, internal node e) to D_f_e.
    """

    labelled: LabelledTree
    ring: Ring
    gens0: dict[str, Poly]
    gens_anc: dict[tuple[str, str], Poly]

    @property
    def tree(self) -> RootedTree:
        return self.labelled.tree

    def generators(self) -> list[tuple[str, Poly]]:
        """(name, polynomial) pairs in deterministic order."""
        tree = self.tree
        key = lambda e: (tree.level(e), e)
        out = [(gen_name(None, e), self.gens0[e]) for e in sorted(self.gens0, key=key)]
        for upper, node in sorted(
            self.gens_anc, key=lambda p: (tree.level(p[1]), p[1], tree.level(p[0]), p[0])
        ):
            out.append((gen_name(upper, node), self.gens_anc[(upper, node)]))
        return out

    def variables(self) -> list[VarId]:
        return list(self.ring.vars)


def build_presentation(lt: LabelledTree) -> Presentation:
    """Expand the full generator family.  Requires a fine labelling."""
    lt.require_fine()
    tree = lt.tree
    ring = ambient_ring(tree)
    labels = lt.labels
    gens0: dict[str, Poly] = {}
    gens_anc: dict[tuple[str, str], Poly] = {}
    for node in tree.internal_nodes():
        xe = ring.var(var_of(tree, node))
        q = expand_factors(ring, q_factors(tree, labels, node))
        gens0[node] = ring.var(H) * xe - q
        for upper in tree.ancestors(node):
            c = tree.child_on_path(upper, node)
            pin = ring.var(parent_var(tree, upper)) - labels[c]
            qrel = expand_factors(ring, q_rel_factors(tree, labels, upper, node))
            gens_anc[(upper, node)] = pin * xe - ring.var(var_of(tree, upper)) * qrel
    return Presentation(lt, ring, gens0, gens_anc)


def generator_values_at(
    pres: Presentation,
    images: Mapping[VarId, object],
    h_value,
    top_only: bool = False,
):
    """Value of every generator at a variable assignment, in generator order.

    Evaluates the factored shape of each numerator instead of substituting
    into the expanded polynomial, which gives the same value at a fraction
    of the cost; sibling blocks shared between generators are computed only
    once.  ``images`` must cover X_0 and every internal coordinate;
    ``h_value`` is the value taken by h.  Any coefficient algebra with
    ``+``, ``-`` and ``*`` (chart polynomials, fiber restrictions, Laurent
    pairs) works.  Returns (name, value) pairs matching ``generators()``.

    With ``top_only`` the ancestor family is skipped.  Once the syzygies
    hold, each ancestor generator times h is a combination of the h-leading
    family, so over any integral domain in which h is not zero the
    h-leading values vanishing forces the rest to vanish as well; callers
    that have checked the syzygies may use this to avoid the largest
    products.
    """
    tree = pres.tree
    labels = pres.labelled.labels

    # None stands for the empty product throughout, so a scalar 1 never has
    # to live in the value algebra
    blocks: dict[tuple[str, str | None], object] = {}

    def sibling_value(node: str, exclude: str | None = None):
        key = (node, exclude)
        if key not in blocks:
            fs = sibling_factors(
                tree, labels, node, () if exclude is None else (exclude,)
            )
            blocks[key] = evaluate_factors(images, fs) if fs else None
        return blocks[key]

    def times(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return a * b

    # root-path products R_node, built one edge at a time
    rvals: dict[str, object | None] = {tree.root: None}
    for node in tree.nodes:
        if node == tree.root:
            continue
        parent = tree.parent(node)
        rvals[node] = times(rvals[parent], sibling_value(parent, exclude=node))

    key = lambda e: (tree.level(e), e)
    out = []
    for node in sorted(pres.gens0, key=key):
        q = times(sibling_value(node), rvals[node])
        out.append((gen_name(None, node), h_value * images[var_of(tree, node)] - q))
    if top_only:
        return out

    # suffix products of the path blocks below each ancestor, per node
    middles: dict[str, list] = {}

    def middle_value(upper: str, node: str):
        suffix = middles.get(node)
        if suffix is None:
            path = tree.path_from_root(node)
            suffix = [None] * len(path)
            for j in range(len(path) - 2, -1, -1):
                blk = sibling_value(path[j], exclude=path[j + 1])
                suffix[j] = times(blk, suffix[j + 1])
            middles[node] = suffix
        return suffix[tree.path_from_root(node).index(upper) + 1]

    for upper, node in sorted(
        pres.gens_anc, key=lambda p: (tree.level(p[1]), p[1], tree.level(p[0]), p[0])
    ):
        c = tree.child_on_path(upper, node)
        pin = images[parent_var(tree, upper)] - labels[c]
        qrel = times(sibling_value(node), middle_value(upper, node))
        value = pin * images[var_of(tree, node)] - images[var_of(tree, upper)] * qrel
        out.append((gen_name(upper, node), value))
    return out


@dataclass
class MatrixColumns:
    """Columns of the 2 x (d+1) matrix whose 2x2 minors cut out the surface.

    Column None is (h, 1); column e is (Q_e, X_e).
    """

    presentation: Presentation
    columns: dict[str | None, tuple[Poly, Poly]]

    def minor(self, a: str | None, b: str | None) -> Poly:
        ta, ba = self.columns[a]
        tb, bb = self.columns[b]
        return ta * bb - tb * ba


def matrix_columns(pres: Presentation) -> MatrixColumns:
    tree = pres.tree
    ring = pres.ring
    cols: dict[str | None, tuple[Poly, Poly]] = {None: (ring.var(H), ring.one)}
    for node in tree.internal_nodes():
        q = expand_factors(ring, q_factors(tree, pres.labelled.labels, node))
        cols[node] = (q, ring.var(var_of(tree, node)))
    return MatrixColumns(pres, cols)


def syzygy_check(pres: Presentation) -> list[str]:
    """Verify h*D_f_e == (X_par(f) - label(c))*D0_e - Q_{f,e}*D0_f for every pair.

    Returns a list of human-readable failures; empty means every identity
    holds exactly.
    """
    tree = pres.tree
    ring = pres.ring
    labels = pres.labelled.labels
    h = ring.var(H)
    failures = []
    for (upper, node), gen in sorted(
        pres.gens_anc.items(), key=lambda kv: (tree.level(kv[0][1]), kv[0][1], kv[0][0])
    ):
        c = tree.child_on_path(upper, node)
        pin = ring.var(parent_var(tree, upper)) - labels[c]
        qrel = expand_factors(ring, q_rel_factors(tree, labels, upper, node))
        lhs = h * gen
        rhs = pin * pres.gens0[node] - qrel * pres.gens0[upper]
        if lhs != rhs:
            failures.append(f"syzygy fails for {gen_name(upper, node)}")
    return failures


@dataclass
class MinorCertificate:
    """Witness that an incomparable 2x2 minor lies in the generator ideal."""

    meet: str
    branches: tuple[str, str]
    cofactors: tuple[Poly, Poly]


def incomparable_minor(
    pres: Presentation, g1: str, g2: str
) -> tuple[Poly, MinorCertificate]:
    """Reduced minor det(M_g1, M_g2) / (R_e * S_e^{branches}) at incomparable columns.

    e is the first common ancestor.  Both the exact division and the
    membership identity

        minor == Q_{e,g1} * D_e_g2 - Q_{e,g2} * D_e_g1

    are checked; a failure raises ``CheckError``.
    """
    tree = pres.tree
    labels = pres.labelled.labels
    ring = pres.ring
    for g in (g1, g2):
        if tree.is_leaf(g):
            raise NotAParent(f"{g!r} is a leaf and indexes no column")
    if g1 == g2 or tree.is_ancestor(g1, g2) or tree.is_ancestor(g2, g1):
        raise Comparable(f"{g1!r} and {g2!r} are comparable; the reduced minor needs incomparable nodes")
    meet = tree.first_common_ancestor(g1, g2)
    b1 = tree.child_on_path(meet, g1)
    b2 = tree.child_on_path(meet, g2)
    q1 = expand_factors(ring, q_factors(tree, labels, g1))
    q2 = expand_factors(ring, q_factors(tree, labels, g2))
    det = q1 * ring.var(var_of(tree, g2)) - q2 * ring.var(var_of(tree, g1))
    divisor = expand_factors(
        ring,
        root_path_factors(tree, labels, meet)
        + sibling_factors(tree, labels, meet, exclude=(b1, b2)),
    )
    minor = det.divide_exact(divisor)
    qr1 = expand_factors(ring, q_rel_factors(tree, labels, meet, g1))
    qr2 = expand_factors(ring, q_rel_factors(tree, labels, meet, g2))
    expected = qr1 * pres.gens_anc[(meet, g2)] - qr2 * pres.gens_anc[(meet, g1)]
    if minor != expected:
        raise CheckError(
            f"minor certificate failed at ({g1!r}, {g2!r}): cofactor identity does not hold"
        )
    return minor, MinorCertificate(meet, (b1, b2), (qr1, qr2))


def incomparable_pairs(tree: RootedTree) -> list[tuple[str, str]]:
    """All incomparable pairs of internal nodes, deterministically ordered."""
    internal = tree.internal_nodes()
    out = []
    for i, a in enumerate(internal):
        for b in internal[i + 1 :]:
            if not (tree.is_ancestor(a, b) or tree.is_ancestor(b, a)):
                out.append((a, b))
    return out
