"""Built-in tree corpus and seeded random tree generators.

The embedded documents are the worked examples the test suite pins down:
the three-generator surface over a height-2 tree (``bml``), the height-2
surface whose two encodings look nothing alike (``strange`` in both
encodings), a small weighted comb (``intro_comb``), and one deliberately
broken labelled document (``intro_figure``) kept to exercise the parser's
sibling-clash diagnostics.

Random trees are grown from a ``random.Random`` instance only, so a fixed
seed reproduces the same corpus byte for byte on every run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .trees import LabelledTree, RootedTree, WeightedTree
from .treedsl import TreeDocument, parse_tree

BML_TEXT = """\
labelled bml
(e0 (e11:-1) (e12:1) (e1:0 (e21:-1) (e22:1)))
"""

STRANGE_LABELLED_TEXT = """\
labelled strange
(e0 (e1:1 (f1:2)) (e2:-1 (f2:-2)))
"""

STRANGE_WEIGHTED_TEXT = """\
weighted strange
(e0 (e1@1 (f1@1)) (e2@-1 (f2@1)))
"""

INTRO_COMB_TEXT = """\
weighted intro_comb
(e0 (a@0 (b@1) (c@-1 (d@0))))
"""

INTRO_FIGURE_TEXT = """\
labelled intro_figure
(e0 (a:0 (d:3 (l1:0) (l2:0))) (b:1) (c:2))
"""


@dataclass
class CorpusEntry:
    name: str
    filename: str
    text: str
    expect_valid: bool
    note: str


CORPUS: list[CorpusEntry] = [
    CorpusEntry(
        "bml",
        "bml.tree",
        BML_TEXT,
        True,
        "height-2 labelled tree with three generators",
    ),
    CorpusEntry(
        "strange_labelled",
        "strange_labelled.tree",
        STRANGE_LABELLED_TEXT,
        True,
        "labelled encoding of the mismatched-encodings example",
    ),
    CorpusEntry(
        "strange_weighted",
        "strange_weighted.tree",
        STRANGE_WEIGHTED_TEXT,
        True,
        "weighted encoding of the mismatched-encodings example",
    ),
    CorpusEntry(
        "intro_comb",
        "intro_comb.tree",
        INTRO_COMB_TEXT,
        True,
        "small weighted comb",
    ),
    CorpusEntry(
        "intro_figure",
        "intro_figure.tree",
        INTRO_FIGURE_TEXT,
        False,
        "rejected on purpose: two siblings share label 0",
    ),
]


def corpus_entry(name: str) -> CorpusEntry:
    for entry in CORPUS:
        if entry.name == name:
            return entry
    raise KeyError(f"no corpus entry named {name!r}")


def corpus_document(name: str) -> TreeDocument:
    return parse_tree(corpus_entry(name).text)


def valid_documents() -> list[TreeDocument]:
    return [parse_tree(e.text) for e in CORPUS if e.expect_valid]


# -- random trees ------------------------------------------------------------


def _random_shape(rng: random.Random, max_height: int, max_nodes: int) -> RootedTree:
    """Random tree of height between 1 and max_height with at most max_nodes nodes."""
    height = rng.randint(1, max_height)
    children: dict[str, list[str]] = {"e0": []}
    level = {"e0": 0}
    count = 1

    def add(parent: str) -> str:
        nonlocal count
        node = f"n{count}"
        count += 1
        children[parent].append(node)
        children[node] = []
        level[node] = level[parent] + 1
        return node

    spine = "e0"
    for _ in range(height):
        spine = add(spine)
    extras = rng.randint(0, max(0, max_nodes - count))
    for _ in range(extras):
        candidates = sorted(n for n in children if level[n] < height)
        add(rng.choice(candidates))
    return RootedTree("e0", {k: tuple(v) for k, v in children.items()})


def _random_marks(rng: random.Random, tree: RootedTree) -> dict[str, Fraction]:
    marks: dict[str, Fraction] = {}
    for node in tree.internal_nodes():
        kids = tree.children(node)
        pool: list[Fraction] = []
        while len(pool) < len(kids):
            value = Fraction(rng.randint(-6, 6), rng.choice([1, 1, 1, 2, 3]))
            if value not in pool:
                pool.append(value)
        for kid, value in zip(kids, pool):
            marks[kid] = value
    return marks


def random_labelled_tree(
    rng: random.Random, max_height: int = 4, max_nodes: int = 15
) -> LabelledTree:
    """Random fine labelled tree; all randomness comes from ``rng``."""
    tree = _random_shape(rng, max_height, max_nodes)
    return LabelledTree(tree, _random_marks(rng, tree))


def random_weighted_tree(
    rng: random.Random, max_height: int = 4, max_nodes: int = 15
) -> WeightedTree:
    """Random validly weighted tree; all randomness comes from ``rng``."""
    tree = _random_shape(rng, max_height, max_nodes)
    return WeightedTree(tree, _random_marks(rng, tree))


def random_corpus(count: int, seed: int) -> list[LabelledTree]:
    rng = random.Random(seed)
    return [random_labelled_tree(rng) for _ in range(count)]
