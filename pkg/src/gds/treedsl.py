"""Plain-text format for labelled and weighted trees.

A document is a header line followed by one parenthesized expression:

    labelled bml
    (e0 (e11:-1) (e12:1) (e1:0 (e21:-1) (e22:1)))

The header keyword is ``labelled`` or ``weighted`` and the second word names
the tree.  Every node is ``(id ...children)``; non-root nodes attach their
rational value to the id with ``:`` (labels) or ``@`` (edge weights).  Values
are integers or fractions like ``-3/2``; decimal notation is rejected.
Whitespace is free-form.  Parsing is strict: unknown characters, duplicate
ids, a value on the root, a missing value elsewhere, or two siblings with
the same value are all errors that point at a line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ParseError, ValidationError
from .trees import LabelledTree, RootedTree, WeightedTree

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_VALUE_RE = re.compile(r"[+-]?\d+(/\d+)?\Z")

_MARK = {"labelled": ":", "weighted": "@"}


@dataclass
class TreeDocument:
    """A named tree together with its encoding kind."""

    kind: str
    name: str
    data: Union[LabelledTree, WeightedTree]

    @property
    def tree(self) -> RootedTree:
        return self.data.tree


@dataclass
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, column = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
        elif ch.isspace():
            column += 1
            i += 1
        elif ch in "()":
            tokens.append(_Token(ch, line, column))
            column += 1
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append(_Token(text[i:j], line, column))
            column += j - i
            i = j
    return tokens


class _Node:
    __slots__ = ("name", "value", "children", "token")

    def __init__(self, name: str, value: Fraction | None, token: _Token):
        self.name = name
        self.value = value
        self.children: list[_Node] = []
        self.token = token


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def _fail(self, message: str, token: _Token | None = None) -> ParseError:
        if token is None:
            return ParseError(message, 1, 1)
        return ParseError(message, token.line, token.column)

    def _take(self, context: str) -> _Token:
        if self.pos >= len(self.tokens):
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            column = last.column + len(last.text) if last else 1
            raise ParseError(f"unexpected end of input while reading {context}", line, column)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> TreeDocument:
        kind_tok = self._take("the header keyword")
        if kind_tok.text not in _MARK:
            raise self._fail(
                f"expected 'labelled' or 'weighted', found {kind_tok.text!r}", kind_tok
            )
        kind = kind_tok.text
        name_tok = self._take("the tree name")
        if name_tok.text in "()" or not _ID_RE.match(name_tok.text):
            raise self._fail(f"invalid tree name {name_tok.text!r}", name_tok)
        root = self._node(kind, is_root=True)
        if self.pos < len(self.tokens):
            raise self._fail("trailing input after the tree", self.tokens[self.pos])
        return _build_document(kind, name_tok.text, root)

    def _node(self, kind: str, is_root: bool) -> _Node:
        open_tok = self._take("a node")
        if open_tok.text != "(":
            raise self._fail(f"expected '(', found {open_tok.text!r}", open_tok)
        head = self._take("a node id")
        if head.text in "()":
            raise self._fail("expected a node id", head)
        node = self._head_node(kind, head, is_root)
        while True:
            if self.pos >= len(self.tokens):
                self._take("')'")
            if self.tokens[self.pos].text == ")":
                self.pos += 1
                return node
            node.children.append(self._node(kind, is_root=False))

    def _head_node(self, kind: str, head: _Token, is_root: bool) -> _Node:
        mark = _MARK[kind]
        other = "@" if mark == ":" else ":"
        text = head.text
        if other in text:
            raise self._fail(
                f"{'label' if other == ':' else 'weight'} separator {other!r} "
                f"is not allowed in a {kind} tree",
                head,
            )
        if mark in text:
            if is_root:
                raise self._fail("the root takes no value", head)
            name, _, value = text.partition(mark)
            return _Node(self._id(name, head), self._value(value, head), head)
        if not is_root:
            raise self._fail(f"node {text!r} is missing its {mark!r} value", head)
        return _Node(self._id(text, head), None, head)

    def _id(self, name: str, token: _Token) -> str:
        if not _ID_RE.match(name):
            raise self._fail(f"invalid node id {name!r}", token)
        return name

    def _value(self, text: str, token: _Token) -> Fraction:
        if "." in text:
            raise self._fail(
                f"decimal notation {text!r} is not supported; use p/q", token
            )
        if not _VALUE_RE.match(text):
            raise self._fail(f"invalid rational {text!r}", token)
        return Fraction(text)


def _build_document(kind: str, name: str, root: _Node) -> TreeDocument:
    seen: dict[str, _Token] = {}
    children: dict[str, tuple[str, ...]] = {}
    values: dict[str, Fraction] = {}

    def walk(node: _Node) -> None:
        if node.name in seen:
            first = seen[node.name]
            raise ValidationError(
                f"duplicate node id {node.name!r} at line {node.token.line}, "
                f"column {node.token.column} (first seen at line {first.line}, "
                f"column {first.column})"
            )
        seen[node.name] = node.token
        if node.value is not None:
            values[node.name] = node.value
        by_value: dict[Fraction, _Node] = {}
        for child in node.children:
            clash = by_value.get(child.value)
            if clash is not None:
                what = "label" if kind == "labelled" else "weight"
                raise ValidationError(
                    f"siblings {clash.name!r} and {child.name!r} share {what} "
                    f"{child.value} (line {child.token.line}, column {child.token.column})"
                )
            by_value[child.value] = child
        children[node.name] = tuple(child.name for child in node.children)
        for child in node.children:
            walk(child)

    walk(root)
    tree = RootedTree(root.name, children)
    if kind == "labelled":
        return TreeDocument(kind, name, LabelledTree(tree, values))
    return TreeDocument(kind, name, WeightedTree(tree, values))


def parse_tree(text: str) -> TreeDocument:
    """Parse a tree document; raises ParseError or ValidationError."""
    return _Parser(text).parse()


def print_tree(doc: TreeDocument) -> str:
    """Canonical text form; parsing it back reproduces the document."""
    mark = _MARK[doc.kind]
    tree = doc.tree
    values = doc.data.labels if doc.kind == "labelled" else doc.data.weights

    def node_text(node: str) -> str:
        head = node if node == tree.root else f"{node}{mark}{values[node]}"
        kids = "".join(f" {node_text(c)}" for c in tree.children(node))
        return f"({head}{kids})"

    return f"{doc.kind} {doc.name}\n{node_text(tree.root)}\n"
