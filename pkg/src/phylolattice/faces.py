"""Antichain face families, clique-sets, graphs, and their lattice operations.

A face-set is an inclusion-antichain of faces over one universe.  A
clique-set is a face-set that additionally covers every subset whose pairs
it covers; clique-sets are exactly the families of maximal cliques of
graphs, and that bijection drives the validation and join code below.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .taxa import TaxaSet, bits


def canonical_faces(masks: Iterable[int]) -> tuple[int, ...]:
    """Sort face masks canonically: decreasing cardinality, then mask value."""
    return tuple(sorted(masks, key=lambda m: (-m.bit_count(), m)))


def maximal_masks(masks: Iterable[int]) -> tuple[int, ...]:
    """Reduce a mask family to its inclusion-maximal members, canonically ordered.

    Duplicates collapse.  A mask can only be absorbed by one of strictly
    larger cardinality, so a single sweep over the sorted family suffices.
    """
    kept: list[int] = []
    for m in canonical_faces(set(masks)):
        if not any(m | k == k for k in kept):
            kept.append(m)
    return tuple(kept)


class FaceSet:
    """Inclusion-antichain of non-empty faces over a fixed universe.

    The empty family is a legal value (a diagram level before anything is
    observed); the empty face is not.
    """

    __slots__ = ("universe", "faces")

    def __init__(self, universe: TaxaSet, faces: Iterable[int] = ()):
        ordered = canonical_faces(faces)
        for m in ordered:
            universe.check_face(m)
        for i, m in enumerate(ordered):
            for k in ordered[:i]:
                if m | k == k:
                    if m == k:
                        raise ValueError(f"duplicate face {bin(m)}")
                    raise ValueError(
                        f"not an antichain: {bin(m)} is contained in {bin(k)}"
                    )
        self.universe = universe
        self.faces = ordered

    @classmethod
    def from_names(cls, universe: TaxaSet, groups: Iterable[Iterable[str]]) -> "FaceSet":
        return cls(universe, (universe.mask_of(g) for g in groups))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FaceSet)
            and self.universe == other.universe
            and self.faces == other.faces
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.faces))

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def __repr__(self) -> str:
        groups = [list(self.universe.names_of(m)) for m in self.faces]
        return f"{type(self).__name__}({groups!r})"

    @property
    def is_empty(self) -> bool:
        return not self.faces

    def covers(self, mask: int) -> bool:
        """True when some face contains ``mask``."""
        return any(mask | f == f for f in self.faces)

    def support(self) -> int:
        """Union of all faces as a mask."""
        out = 0
        for f in self.faces:
            out |= f
        return out

    def names(self) -> tuple[tuple[str, ...], ...]:
        return tuple(self.universe.names_of(m) for m in self.faces)


class CliqueSet(FaceSet):
    """Face-set closed under pairwise cover: the maximal cliques of a graph."""

    __slots__ = ()

    def __init__(self, universe: TaxaSet, faces: Iterable[int] = ()):
        super().__init__(universe, faces)
        if not is_pair_cover_closed(self):
            raise ValueError("face family is not the maximal-clique family of a graph")


class Graph:
    """Undirected graph on a subset of the universe, adjacency as bitmasks."""

    __slots__ = ("universe", "vertices", "adj")

    def __init__(self, universe: TaxaSet, vertices: int, adj: Sequence[int]):
        n = len(universe)
        adj = tuple(adj)
        if len(adj) != n:
            raise ValueError(f"adjacency table must have {n} rows")
        if vertices & ~universe.full_mask:
            raise ValueError("vertex mask has bits outside the universe")
        for i in range(n):
            row = adj[i]
            if row and not (vertices >> i) & 1:
                raise ValueError(f"non-vertex {i} has neighbors")
            if row & ~vertices:
                raise ValueError(f"vertex {i} has a neighbor outside the vertex set")
            if (row >> i) & 1:
                raise ValueError(f"self-loop at vertex {i}")
            for j in bits(row):
                if not (adj[j] >> i) & 1:
                    raise ValueError(f"edge ({i},{j}) is not symmetric")
        self.universe = universe
        self.vertices = vertices
        self.adj = adj

    @classmethod
    def from_edges(
        cls, universe: TaxaSet, vertices: int, edges: Iterable[tuple[int, int]]
    ) -> "Graph":
        adj = [0] * len(universe)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(universe, vertices, adj)

    def edges(self) -> tuple[tuple[int, int], ...]:
        out = []
        for i in bits(self.vertices):
            for j in bits(self.adj[i]):
                if j > i:
                    out.append((i, j))
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.universe == other.universe
            and self.vertices == other.vertices
            and self.adj == other.adj
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.vertices, self.adj))

    def __repr__(self) -> str:
        return f"Graph(vertices={bin(self.vertices)}, edges={self.edges()!r})"


def maximal_cliques(graph: Graph) -> tuple[int, ...]:
    """All maximal cliques of ``graph`` as masks, canonically ordered.

    Pivoted recursive expansion; isolated vertices come out as singleton
    cliques.  Deterministic: the pivot is the first candidate maximizing
    coverage, and candidates are scanned in increasing bit order.
    """
    adj = graph.adj
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = max(bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in bits(p & ~adj[pivot]):
            mv = 1 << v
            expand(r | mv, p & adj[v], x & adj[v])
            p &= ~mv
            x |= mv

    if graph.vertices:
        expand(0, graph.vertices, 0)
    return canonical_faces(out)


def _require_common_universe(parts: Sequence[FaceSet]) -> TaxaSet:
    if not parts:
        raise ValueError("need at least one face-set")
    universe = parts[0].universe
    for p in parts[1:]:
        if p.universe != universe:
            raise ValueError("face-sets live over different universes")
    return universe


def faceset_leq(a: FaceSet, b: FaceSet) -> bool:
    """Refinement order: every face of ``a`` is contained in some face of ``b``."""
    _require_common_universe((a, b))
    return all(b.covers(f) for f in a.faces)


def faceset_join(parts: Sequence[FaceSet]) -> FaceSet:
    """Least upper bound of face-sets: maximal elements of the face union."""
    universe = _require_common_universe(parts)
    masks: set[int] = set()
    for p in parts:
        masks.update(p.faces)
    return FaceSet(universe, maximal_masks(masks))


def faceset_meet(a: FaceSet, b: FaceSet) -> FaceSet:
    """Greatest lower bound: maximal non-empty pairwise intersections."""
    _require_common_universe((a, b))
    masks = {f & g for f in a.faces for g in b.faces}
    masks.discard(0)
    return FaceSet(a.universe, maximal_masks(masks))


def graph_from_cliqueset(c: FaceSet) -> Graph:
    """Pairwise-cover graph: vertices in some face, edges jointly in some face."""
    adj = [0] * len(c.universe)
    vertices = 0
    for f in c.faces:
        vertices |= f
        for i in bits(f):
            adj[i] |= f & ~(1 << i)
    return Graph(c.universe, vertices, adj)


def cliqueset_from_graph(g: Graph) -> CliqueSet:
    return CliqueSet(g.universe, maximal_cliques(g))


def is_pair_cover_closed(f: FaceSet) -> bool:
    """True when ``f`` is exactly the maximal-clique family of its cover graph."""
    return maximal_cliques(graph_from_cliqueset(f)) == f.faces


def validate_cliqueset(f: FaceSet) -> bool:
    """Check the clique-set condition on an antichain of faces.

    A family fails when some subset has all its pairs (and singletons)
    covered without being covered itself, e.g. three pairwise-overlapping
    pairs whose union triple is missing.
    """
    return is_pair_cover_closed(f)


def cliqueset_join(parts: Sequence[FaceSet]) -> CliqueSet:
    """Least upper bound inside the clique-set lattice.

    Computed as the maximal cliques of the union of the pairwise-cover
    graphs; this can strictly exceed the face-set join of the same parts.
    """
    universe = _require_common_universe(parts)
    adj = [0] * len(universe)
    vertices = 0
    for p in parts:
        for f in p.faces:
            vertices |= f
            for i in bits(f):
                adj[i] |= f & ~(1 << i)
    return CliqueSet(universe, maximal_cliques(Graph(universe, vertices, adj)))


def is_subpartition(f: FaceSet) -> bool:
    """True when the faces are pairwise disjoint."""
    seen = 0
    for m in f.faces:
        if m & seen:
            return False
        seen |= m
    return True


def faceset_to_complex(f: FaceSet) -> frozenset[int]:
    """Downward closure: every non-empty subset of every face.

    Exponential in the largest face; intended for small universes and tests.
    """
    out: set[int] = set()
    for m in f.faces:
        s = m
        while s:
            out.add(s)
            s = (s - 1) & m
    return frozenset(out)


def complex_to_faceset(universe: TaxaSet, masks: Iterable[int]) -> FaceSet:
    """Maximal faces of a downward-closed family."""
    return FaceSet(universe, maximal_masks(masks))
