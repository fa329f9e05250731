"""Newick tree parsing and the tree/ultranetwork conversions.

One tree per line, ';'-terminated.  Unquoted names stop at structural
characters; quoted names use single quotes with '' as the escape.
Branch lengths default to 1.0 when absent.

Height convention: with H the maximal root-to-leaf distance, a node at
depth d sits at height H - d.  Coalescence times are heights of lowest
common ancestors, and a leaf's own entry is its height, so leaves above
the deepest level read as late observations; ``ultrametrize`` zeroes the
diagonal instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .networks import Ultranetwork, as_ultranetwork, PhyloNetwork
from .taxa import TaxaSet

_STRUCTURE = set("():,;'")


class NewickError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class NewickNode:
    name: str | None
    length: float  # branch to the parent; 1.0 when the text had none
    children: tuple["NewickNode", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class NewickTree:
    root: NewickNode
    leaf_names: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        names: list[str] = []

        def walk(node: NewickNode) -> None:
            if node.is_leaf:
                names.append(node.name)
            for ch in node.children:
                walk(ch)

        walk(self.root)
        object.__setattr__(self, "leaf_names", tuple(names))


class _Cursor:
    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.i = 0
        self.seen_leaves: dict[str, int] = {}

    def fail(self, message: str, col: int | None = None) -> NewickError:
        return NewickError(message, self.line, self.i + 1 if col is None else col)

    def skip_ws(self) -> None:
        while self.i < len(self.text) and self.text[self.i] in " \t":
            self.i += 1

    def peek(self) -> str | None:
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else None

    def take(self) -> str:
        ch = self.text[self.i]
        self.i += 1
        return ch


def _read_name(c: _Cursor) -> str | None:
    ch = c.peek()
    if ch == "'":
        start = c.i + 1
        c.take()
        parts: list[str] = []
        while True:
            if c.i >= len(c.text):
                raise c.fail("unterminated quoted name", start)
            ch = c.take()
            if ch == "'":
                if c.i < len(c.text) and c.text[c.i] == "'":
                    c.take()
                    parts.append("'")
                else:
                    break
            else:
                parts.append(ch)
        name = "".join(parts)
        if not name:
            raise c.fail("empty quoted name", start)
        return name
    if ch is None or ch in _STRUCTURE:
        return None
    start = c.i
    while (
        c.i < len(c.text)
        and c.text[c.i] not in _STRUCTURE
        and c.text[c.i] not in " \t"
    ):
        c.i += 1
    return c.text[start:c.i]


def _read_length(c: _Cursor) -> float | None:
    if c.peek() != ":":
        return None
    c.take()
    c.skip_ws()
    start = c.i
    while c.i < len(c.text) and c.text[c.i] not in _STRUCTURE and c.text[c.i] not in " \t":
        c.i += 1
    token = c.text[start:c.i]
    try:
        value = float(token)
    except ValueError:
        raise c.fail(f"malformed branch length {token!r}", start + 1) from None
    if not np.isfinite(value) or value < 0:
        raise c.fail(f"branch length must be finite and nonnegative, got {token}", start + 1)
    return value


def _subtree(c: _Cursor) -> NewickNode:
    if c.peek() == "(":
        open_col = c.i + 1
        c.take()
        children = [_subtree(c)]
        while c.peek() == ",":
            c.take()
            children.append(_subtree(c))
        if c.peek() != ")":
            raise c.fail(
                "unbalanced parentheses: '(' never closed"
                + (" (end of input)" if c.peek() is None else ""),
                open_col if c.peek() is None else None,
            )
        c.take()
        name = _read_name(c)
        length = _read_length(c)
        return NewickNode(name, 1.0 if length is None else length, tuple(children))
    name_col = c.i + 1
    name = _read_name(c)
    length = _read_length(c)
    if name is None:
        raise c.fail("leaf without a name", name_col)
    if name in c.seen_leaves:
        raise c.fail(f"duplicate leaf name {name!r}", name_col)
    c.seen_leaves[name] = name_col
    return NewickNode(name, 1.0 if length is None else length)


def _parse_line(text: str, line: int) -> NewickTree:
    c = _Cursor(text, line)
    root = _subtree(c)
    if c.peek() != ";":
        raise c.fail("expected ';'" + (" (end of input)" if c.peek() is None else ""))
    c.take()
    if c.peek() is not None:
        raise c.fail("trailing characters after ';'")
    return NewickTree(root)


def parse_newick(text: str) -> list[NewickTree]:
    """Parse a document of one ';'-terminated tree per non-blank line."""
    trees = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            trees.append(_parse_line(line, lineno))
    return trees


def ultranetwork_from_newick(tree: NewickTree, ultrametrize: bool = False) -> Ultranetwork:
    """Coalescence-time matrix of a tree under the height convention above."""
    universe = TaxaSet(sorted(tree.leaf_names))
    n = len(universe)
    m = np.zeros((n, n))

    depth_of: dict[int, float] = {}

    def walk(node: NewickNode, depth: float) -> list[int]:
        if node.is_leaf:
            i = universe.position(node.name)
            depth_of[i] = depth
            return [i]
        groups = [walk(ch, depth + ch.length) for ch in node.children]
        flat = [i for g in groups for i in g]
        # U at the LCA is filled later once H is known; remember the depth
        for gi in range(len(groups)):
            for gj in range(gi + 1, len(groups)):
                for a in groups[gi]:
                    for b in groups[gj]:
                        m[a, b] = m[b, a] = depth
        return flat

    walk(tree.root, 0.0)
    height = max(depth_of.values())
    off = ~np.eye(n, dtype=bool)
    m[off] = height - m[off]
    if not ultrametrize:
        for i, d in depth_of.items():
            m[i, i] = height - d
    return Ultranetwork(universe, m)


def _quote_name(name: str) -> str:
    if name and not any(ch in _STRUCTURE or ch in " \t" for ch in name):
        return name
    return "'" + name.replace("'", "''") + "'"


def _fmt(x: float) -> str:
    return repr(float(x))


def newick_from_ultranetwork(u: PhyloNetwork) -> str:
    """Dendrogram text of an ultranetwork.

    Branch lengths only encode height differences, and the reader anchors
    the deepest leaf at height zero, so the smallest observation time on
    the diagonal is lost: reading the text back recovers the matrix minus
    that minimum.  Networks with at least one on-time taxon (a zero on
    the diagonal) round-trip exactly.
    """
    u = as_ultranetwork(u)
    m = u.matrix
    labels = u.universe.labels

    def emit(idx: list[int]) -> tuple[str, float]:
        if len(idx) == 1:
            i = idx[0]
            return _quote_name(labels[i]), float(m[i, i])
        top = float(m[np.ix_(idx, idx)].max())
        blocks: list[list[int]] = []
        where: dict[int, int] = {}
        for i in idx:
            for b, block in enumerate(blocks):
                if m[i, block[0]] < top:
                    block.append(i)
                    where[i] = b
                    break
            else:
                where[i] = len(blocks)
                blocks.append([i])
        parts = [emit(block) for block in blocks]
        inner = ",".join(f"{txt}:{_fmt(top - h)}" for txt, h in parts)
        return f"({inner})", top

    text, _ = emit(list(range(len(labels))))
    return text + ";"


__all__ = [
    "NewickError",
    "NewickNode",
    "NewickTree",
    "parse_newick",
    "ultranetwork_from_newick",
    "newick_from_ultranetwork",
]
