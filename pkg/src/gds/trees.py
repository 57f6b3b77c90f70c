"""Rooted trees with ordered children, plus labelled and weighted variants.

Node ids are strings.  Children keep their input order (documents round-trip
verbatim), while every derived listing (leaves, internal nodes, level slices)
is sorted by (level, id) so that downstream output is deterministic.

A labelled tree attaches a rational to every non-root node; the labelling is
"fine" when siblings always carry distinct labels.  A weighted tree attaches
a rational to every edge, stored on the child node; it is a valid weighting
when edges leaving a common node always carry distinct weights.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NotAnAncestor, NotFine, UnknownNode, ValidationError


class RootedTree:
    """Finite rooted tree.  Structure only; no labels."""

    __slots__ = ("root", "_children", "_parent", "_level", "nodes", "height")

    def __init__(self, root: str, children: Mapping[str, Sequence[str]] | None = None):
        children = dict(children or {})
        child_map: dict[str, tuple[str, ...]] = {}
        parent: dict[str, str] = {}
        for node, kids in children.items():
            kids = tuple(kids)
            if len(set(kids)) != len(kids):
                raise ValidationError(f"node {node!r} lists a child twice: {kids}")
            child_map[node] = kids
            for kid in kids:
                if kid == root:
                    raise ValidationError(f"root {root!r} cannot be a child of {node!r}")
                if kid in parent:
                    raise ValidationError(
                        f"node {kid!r} has two parents: {parent[kid]!r} and {node!r}"
                    )
                parent[kid] = node
        level = {root: 0}
        order = [root]
        frontier = [root]
        while frontier:
            nxt: list[str] = []
            for node in frontier:
                for kid in child_map.get(node, ()):
                    level[kid] = level[node] + 1
                    order.append(kid)
                    nxt.append(kid)
            frontier = nxt
        mentioned = set(children) | set(parent) | {root}
        unreachable = mentioned - set(level)
        if unreachable:
            raise ValidationError(f"nodes not reachable from the root: {sorted(unreachable)}")
        for node in level:
            child_map.setdefault(node, ())
        self.root = root
        self._children = child_map
        self._parent = parent
        self._level = level
        self.nodes = tuple(sorted(level, key=lambda n: (level[n], n)))
        self.height = max(level.values())

    # -- queries -----------------------------------------------------------

    def _check(self, node: str) -> str:
        if node not in self._level:
            raise UnknownNode(f"no node {node!r} in this tree")
        return node

    def __contains__(self, node: str) -> bool:
        return node in self._level

    def children(self, node: str) -> tuple[str, ...]:
        return self._children[self._check(node)]

    def parent(self, node: str) -> str | None:
        """Parent id, or None for the root."""
        self._check(node)
        return self._parent.get(node)

    def level(self, node: str) -> int:
        return self._level[self._check(node)]

    def is_leaf(self, node: str) -> bool:
        return not self._children[self._check(node)]

    def leaves(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if not self._children[n])

    def internal_nodes(self) -> tuple[str, ...]:
        """Nodes with at least one child, root included, sorted by (level, id)."""
        return tuple(n for n in self.nodes if self._children[n])

    def nodes_at_level(self, k: int) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if self._level[n] == k)

    def ancestors(self, node: str) -> tuple[str, ...]:
        """Strict ancestors, root first."""
        self._check(node)
        chain = []
        cur = self._parent.get(node)
        while cur is not None:
            chain.append(cur)
            cur = self._parent.get(cur)
        return tuple(reversed(chain))

    def path_from_root(self, node: str) -> tuple[str, ...]:
        return self.ancestors(node) + (self._check(node),)

    def first_common_ancestor(self, a: str, b: str) -> str:
        """Deepest node lying on both root paths (may be ``a`` or ``b`` itself)."""
        pa = self.path_from_root(a)
        pb = self.path_from_root(b)
        fca = pa[0]
        for x, y in zip(pa, pb):
            if x != y:
                break
            fca = x
        return fca

    def is_ancestor(self, anc: str, node: str) -> bool:
        """True when ``anc`` is a strict ancestor of ``node``."""
        return anc in self.ancestors(node)

    def child_on_path(self, anc: str, node: str) -> str:
        """The child of ``anc`` lying on the path down to ``node``."""
        path = self.path_from_root(node)
        self._check(anc)
        try:
            i = path.index(anc)
        except ValueError:
            raise NotAnAncestor(f"{anc!r} is not an ancestor of {node!r}") from None
        if i + 1 >= len(path):
            raise NotAnAncestor(f"{anc!r} is not a strict ancestor of {node!r}")
        return path[i + 1]

    def leaves_below(self, node: str) -> tuple[str, ...]:
        """Leaves of the subtree rooted at ``node`` (``node`` itself if a leaf)."""
        self._check(node)
        out = []
        stack = [node]
        while stack:
            cur = stack.pop()
            kids = self._children[cur]
            if kids:
                stack.extend(reversed(kids))
            else:
                out.append(cur)
        return tuple(sorted(out, key=lambda n: (self._level[n], n)))

    def ambient_dimension(self) -> int:
        """Number of coordinates beyond X_0, one per internal node."""
        return len(self.internal_nodes())

    def is_comb(self) -> bool:
        """True when the internal nodes form a single chain from the root down."""
        internal = set(self.internal_nodes())
        if not internal:
            return True
        for node in internal:
            if sum(1 for kid in self._children[node] if kid in internal) > 1:
                return False
        # exactly one internal node per level 0..height-1
        return len(internal) == self.height

    def leaves_same_level(self) -> bool:
        return all(self._level[f] == self.height for f in self.leaves())

    # -- equality and printing ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RootedTree)
            and self.root == other.root
            and self._children == other._children
        )

    def __hash__(self) -> int:
        return hash((self.root, tuple(sorted(self._children.items()))))

    def __repr__(self) -> str:
        return f"RootedTree(root={self.root!r}, nodes={len(self.nodes)}, height={self.height})"


def _check_marks(
    tree: RootedTree, marks: Mapping[str, Fraction | int], what: str
) -> dict[str, Fraction]:
    out = {}
    for node, value in marks.items():
        if node not in tree:
            raise ValidationError(f"{what} attached to unknown node {node!r}")
        out[node] = Fraction(value)
    missing = [n for n in tree.nodes if n != tree.root and n not in out]
    if missing:
        raise ValidationError(f"missing {what} for nodes: {missing}")
    if tree.root in out:
        raise ValidationError(f"the root carries no {what}")
    return out


def _sibling_clashes(tree: RootedTree, marks: Mapping[str, Fraction]) -> list[tuple[str, str]]:
    clashes = []
    for node in tree.internal_nodes():
        kids = tree.children(node)
        for i, a in enumerate(kids):
            for b in kids[i + 1 :]:
                if marks[a] == marks[b]:
                    clashes.append((a, b))
    return clashes


class LabelledTree:
    """Rooted tree with a rational label on every non-root node."""

    __slots__ = ("tree", "labels")

    def __init__(self, tree: RootedTree, labels: Mapping[str, Fraction | int]):
        self.tree = tree
        self.labels = _check_marks(tree, labels, "label")

    def label(self, node: str) -> Fraction:
        tree = self.tree
        tree._check(node)
        if node == tree.root:
            raise ValidationError("the root carries no label")
        return self.labels[node]

    def is_fine(self) -> bool:
        """True when siblings never share a label."""
        return not _sibling_clashes(self.tree, self.labels)

    def require_fine(self) -> None:
        clashes = _sibling_clashes(self.tree, self.labels)
        if clashes:
            a, b = clashes[0]
            raise NotFine(
                f"siblings {a!r} and {b!r} share label {self.labels[a]}"
            )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LabelledTree)
            and self.tree == other.tree
            and self.labels == other.labels
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LabelledTree({self.tree!r})"


class WeightedTree:
    """Rooted tree with a rational weight on every edge, stored on the child."""

    __slots__ = ("tree", "weights")

    def __init__(self, tree: RootedTree, weights: Mapping[str, Fraction | int]):
        self.tree = tree
        self.weights = _check_marks(tree, weights, "weight")

    def weight(self, node: str) -> Fraction:
        """Weight of the edge from the parent of ``node`` down to ``node``."""
        tree = self.tree
        tree._check(node)
        if node == tree.root:
            raise ValidationError("the root has no incoming edge")
        return self.weights[node]

    def is_valid_weighting(self) -> bool:
        """True when edges leaving a common node carry distinct weights."""
        return not _sibling_clashes(self.tree, self.weights)

    def require_valid(self) -> None:
        clashes = _sibling_clashes(self.tree, self.weights)
        if clashes:
            a, b = clashes[0]
            raise ValidationError(
                f"edges to siblings {a!r} and {b!r} share weight {self.weights[a]}"
            )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeightedTree)
            and self.tree == other.tree
            and self.weights == other.weights
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"WeightedTree({self.tree!r})"


def tree_from_paths(root: str, paths: Iterable[Sequence[str]]) -> RootedTree:
    """Convenience builder from root-to-node id paths (tests and scripts)."""
    children: dict[str, list[str]] = {}
    for path in paths:
        cur = root
        for node in path:
            kids = children.setdefault(cur, [])
            if node not in kids:
                kids.append(node)
            cur = node
    return RootedTree(root, {k: tuple(v) for k, v in children.items()})
