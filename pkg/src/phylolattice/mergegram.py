"""Mergegrams, labeled mergegrams, and zero-dimensional persistence.

The labeled mergegram records, for each face that is ever maximal in a
gram, the half-open window during which it is maximal; forgetting labels
gives the mergegram multiset.  Tree joins admit two direct computations
that never materialize the joined gram.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .filtrations import Filtration, all_faces
from .grams import Gram, treegram_from_ultranetwork
from .networks import PhyloNetwork, as_ultranetwork
from .taxa import TaxaSet, bits


class Interval(NamedTuple):
    """Half-open lifespan [birth, death); death may be infinite."""

    birth: float
    death: float


def _canonical_points(
    points: Iterable[tuple], strict: bool
) -> tuple[tuple[float, float, int], ...]:
    counts: dict[tuple[float, float], int] = {}
    for p in points:
        if len(p) == 3:
            b, d, mult = p
        else:
            b, d = p
            mult = 1
        b, d = float(b), float(d)
        if mult <= 0:
            raise ValueError("multiplicities must be positive")
        if strict and not b < d:
            raise ValueError(f"degenerate interval [{b!r}, {d!r})")
        if not strict and not b <= d:
            raise ValueError(f"inverted point ({b!r}, {d!r})")
        key = (b, d)
        counts[key] = counts.get(key, 0) + int(mult)
    return tuple((b, d, m) for (b, d), m in sorted(counts.items()))


class _IntervalMultiset:
    __slots__ = ("points",)
    _strict = True

    def __init__(self, points: Iterable[tuple] = ()):
        self.points = _canonical_points(points, self._strict)

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and self.points == other.points

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.points))

    def __len__(self) -> int:
        return sum(m for _, _, m in self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.points)!r})"

    @property
    def is_empty(self) -> bool:
        return not self.points


class Mergegram(_IntervalMultiset):
    """Multiset of non-degenerate half-open intervals with multiplicities."""

    _strict = True


class PersistenceDiagram(_IntervalMultiset):
    """Multiset of birth/death points; degenerate points are allowed."""

    _strict = False


class LabeledMergegram:
    """Face-to-lifespan map of a gram; at most one interval per face."""

    __slots__ = ("universe", "entries")

    def __init__(self, universe: TaxaSet, entries: dict[int, Interval]):
        for mask, iv in entries.items():
            universe.check_face(mask)
            if not iv.birth < iv.death:
                raise ValueError(
                    f"degenerate lifespan {iv!r} for face {universe.names_of(mask)!r}"
                )
        self.universe = universe
        self.entries = dict(entries)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LabeledMergegram)
            and self.universe == other.universe
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.universe, tuple(sorted(self.entries.items()))))

    def __len__(self) -> int:
        return len(self.entries)

    def __repr__(self) -> str:
        items = ", ".join(
            f"{self.universe.names_of(m)!r}: [{iv.birth!r},{iv.death!r})"
            for m, iv in self.sorted_entries()
        )
        return f"LabeledMergegram({items})"

    def sorted_entries(self) -> list[tuple[int, Interval]]:
        return sorted(self.entries.items(), key=lambda kv: (kv[1], kv[0]))

    def unlabeled(self) -> Mergegram:
        return Mergegram((iv.birth, iv.death) for iv in self.entries.values())

    def alive_at(self, t: float) -> tuple[int, ...]:
        return tuple(
            sorted(m for m, iv in self.entries.items() if iv.birth <= t < iv.death)
        )


def labeled_mergegram(g: Gram) -> LabeledMergegram:
    """Sweep the levels: birth on first appearance, death on disappearance."""
    births: dict[int, float] = {}
    entries: dict[int, Interval] = {}
    prev: tuple[int, ...] = ()
    for t, fs in g.levels:
        cur = fs.faces
        cur_set = set(cur)
        for m in prev:
            if m not in cur_set:
                entries[m] = Interval(births.pop(m), t)
        for m in cur:
            if m not in births:
                # a face may never be maximal again once absorbed
                assert m not in entries, "face reappeared in the gram"
                births[m] = t
        prev = cur
    for m, b in births.items():
        entries[m] = Interval(b, math.inf)
    return LabeledMergegram(g.universe, entries)


def mergegram(g: Gram) -> Mergegram:
    return labeled_mergegram(g).unlabeled()


def labeled_mergegram_of_filtration(
    f: Filtration, support: Sequence[int] | None = None
) -> LabeledMergegram:
    """Lifespans straight from filtration values on a covering face family.

    For each candidate face the window is [value, min value of a strict
    superset candidate); empty windows drop out.  ``support`` must contain
    every face that is ever maximal; when omitted it is taken from the
    filtration itself (or full enumeration on small universes).
    """
    universe = f.universe
    full = universe.full_mask
    if support is None:
        support = f.support_faces()
    if support is None:
        if len(universe) > 16:
            raise ValueError("no compact support known; universe too large")
        support = tuple(all_faces(universe))
    cands = sorted(set(support) | {full}, key=lambda m: m.bit_count())
    values = {m: f.value(m) for m in cands}
    entries: dict[int, Interval] = {}
    for m in cands:
        birth = values[m]
        if m == full:
            death = math.inf
        else:
            death = min(
                (values[s] for s in cands if s != m and s | m == s),
                default=math.inf,
            )
        if birth < death:
            entries[m] = Interval(birth, death)
    return LabeledMergegram(universe, entries)


def mergegram_of_filtration(
    f: Filtration, support: Sequence[int] | None = None
) -> Mergegram:
    return labeled_mergegram_of_filtration(f, support).unlabeled()


def _tree_candidates(ultras: Sequence[PhyloNetwork]) -> list[int]:
    faces: set[int] = set()
    for u in ultras:
        faces.update(treegram_from_ultranetwork(u).all_faces())
    return sorted(faces, key=lambda m: (m.bit_count(), m))


def join_mergegram_of_treegrams(
    ultras: Sequence[PhyloNetwork], method: str = "matrix"
) -> LabeledMergegram:
    """Labeled mergegram of the facegram join of treegrams, without the join.

    Candidate faces are those of the individual treegrams; the join adds
    no others.  ``method="matrix"`` reads each face's window straight off
    the stacked matrices: the birth is the smallest diameter over the
    trees, and the death is the smallest over trees and outside taxa of
    the worst coalescence time into the face (the strong triangle
    inequality makes that the exact covering time of every one-element
    extension).  ``method="scan"`` evaluates the join filtration on the
    candidate family and reads deaths from strict supersets; both are
    exact and agree with the materialized join.
    """
    if method not in ("matrix", "scan"):
        raise ValueError(f"unknown method {method!r}")
    if not ultras:
        raise ValueError("need at least one ultranetwork")
    ultras = [as_ultranetwork(u) for u in ultras]
    universe = ultras[0].universe
    for u in ultras[1:]:
        if u.universe != universe:
            raise ValueError("ultranetworks live over different universes")
    n = len(universe)
    full = universe.full_mask
    stack = np.stack([u.matrix for u in ultras])  # (trees, n, n)
    cands = _tree_candidates(ultras)

    entries: dict[int, Interval] = {}
    if method == "matrix":
        for m in cands:
            idx = list(bits(m))
            colmax = stack[:, idx, :].max(axis=1)  # worst time into m, per taxon
            birth = float(colmax[:, idx].max(axis=1).min())
            if m == full:
                death = math.inf
            else:
                outside = [i for i in range(n) if not (m >> i) & 1]
                death = float(colmax[:, outside].min())
            if birth < death:
                entries[m] = Interval(birth, death)
    else:
        values: dict[int, float] = {}
        for m in cands:
            idx = list(bits(m))
            values[m] = float(stack[:, idx, :][:, :, idx].max(axis=(1, 2)).min())
        for m in cands:
            birth = values[m]
            if m == full:
                death = math.inf
            else:
                death = min(
                    (values[s] for s in cands if s != m and s | m == s),
                    default=math.inf,
                )
            if birth < death:
                entries[m] = Interval(birth, death)
    return LabeledMergegram(universe, entries)


def gram_from_labeled_mergegram(lm: LabeledMergegram, kind: str = "facegram") -> Gram:
    """Rebuild the gram whose levels are the faces alive at each time.

    The labeled mergegram is a complete invariant: the level at t is the
    set of faces whose window contains t.
    """
    criticals = sorted(
        {iv.birth for iv in lm.entries.values()}
        | {iv.death for iv in lm.entries.values() if math.isfinite(iv.death)}
    )
    from .faces import FaceSet

    levels: list[tuple[float, FaceSet]] = []
    for t in criticals:
        fs = FaceSet(lm.universe, lm.alive_at(t))
        if fs.is_empty:
            continue
        if levels and levels[-1][1] == fs:
            continue
        levels.append((t, fs))
    return Gram(lm.universe, levels, kind)


def ph0_elder(u: PhyloNetwork) -> PersistenceDiagram:
    """Zero-dimensional persistence of an ultrametric's sub-level components.

    Every taxon is born at 0; each distinct merge kills one component at
    the merge value, and the surviving component never dies.  At equal
    ages the component containing the lexicographically smallest taxon
    name survives (pure bookkeeping: the multiset does not depend on it).
    """
    u = as_ultranetwork(u)
    m = u.matrix
    if np.diag(m).any():
        raise ValueError("zero-dimensional persistence expects a zero diagonal")
    n = len(u.universe)
    parent = list(range(n))
    best = list(u.universe.labels)  # smallest member name per root

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    points: list[tuple[float, float]] = []
    order = sorted(
        ((m[i, j], i, j) for i in range(n) for j in range(i + 1, n)),
        key=lambda t: t[0],
    )
    for value, i, j in order:
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        # survivor: component holding the lexicographically smallest name
        if best[rj] < best[ri]:
            ri, rj = rj, ri
        parent[rj] = ri
        best[ri] = min(best[ri], best[rj])
        points.append((0.0, float(value)))
    points.append((0.0, math.inf))
    return PersistenceDiagram(points)
