"""Phylogenetic networks as symmetric matrices of first coalescence times.

The diagonal entry is the observation time of a taxon; an off-diagonal
entry is the first time two taxa belong to a common entity.  Entries are
kept exactly as parsed: comparisons throughout the package are exact
float comparisons.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .taxa import TaxaSet, bits


class NetworkValidationError(ValueError):
    """Raised with the full list of violated matrix conditions."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid network:\n  " + "\n  ".join(violations))


class PhyloNetwork:
    """Symmetric coalescence-time matrix over a taxa universe."""

    __slots__ = ("universe", "matrix")

    def __init__(self, universe: TaxaSet, matrix):
        m = np.array(matrix, dtype=float)
        n = len(universe)
        violations: list[str] = []
        if m.shape != (n, n):
            raise NetworkValidationError(
                [f"matrix shape {m.shape} does not match {n} taxa"]
            )
        if not np.isfinite(m).all():
            for i, j in zip(*np.nonzero(~np.isfinite(m))):
                violations.append(f"non-finite entry at ({universe.labels[i]},{universe.labels[j]})")
        else:
            for i, j in zip(*np.nonzero(m != m.T)):
                if i < j:
                    violations.append(
                        f"asymmetric pair ({universe.labels[i]},{universe.labels[j]}): "
                        f"{m[i, j]!r} vs {m[j, i]!r}"
                    )
            d = np.diag(m)
            bad = np.maximum.outer(d, d) > m
            np.fill_diagonal(bad, False)
            for i, j in zip(*np.nonzero(bad)):
                if i < j:
                    violations.append(
                        f"diagonal exceeds entry at ({universe.labels[i]},{universe.labels[j]}): "
                        f"max({d[i]!r},{d[j]!r}) > {m[i, j]!r}"
                    )
        if violations:
            raise NetworkValidationError(violations)
        m.setflags(write=False)
        self.universe = universe
        self.matrix = m

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PhyloNetwork)
            and self.universe == other.universe
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.universe.labels)!r}, {self.matrix.tolist()!r})"

    def diameter(self, mask: int) -> float:
        """Largest entry over all (not necessarily distinct) pairs in a face."""
        self.universe.check_face(mask)
        idx = list(bits(mask))
        return float(self.matrix[np.ix_(idx, idx)].max())


class Ultranetwork(PhyloNetwork):
    """Network whose entries satisfy the strong triangle inequality."""

    __slots__ = ()

    def __init__(self, universe: TaxaSet, matrix):
        super().__init__(universe, matrix)
        bad = _strong_triangle_violations(self.matrix)
        if bad:
            labels = universe.labels
            violations = [
                f"strong triangle fails at ({labels[x]},{labels[y]},{labels[z]})"
                for x, y, z in bad[:10]
            ]
            raise NetworkValidationError(violations)


def _strong_triangle_violations(m: np.ndarray) -> list[tuple[int, int, int]]:
    # N(x,z) <= max(N(x,y), N(y,z)) for every ordered triple
    thr = np.maximum(m[:, :, None], m[None, :, :])  # (x, y, z)
    bad = m[:, None, :] > thr
    return [tuple(ijk) for ijk in np.argwhere(bad)]


def validate_network(labels: Iterable[str], rows) -> PhyloNetwork:
    """Build a network from labels and a square matrix, or raise with diagnostics."""
    return PhyloNetwork(TaxaSet(labels), rows)


def is_ultranetwork(net: PhyloNetwork) -> bool:
    return not _strong_triangle_violations(net.matrix)


def as_ultranetwork(net: PhyloNetwork) -> Ultranetwork:
    """Re-wrap a network after checking the strong triangle inequality."""
    if isinstance(net, Ultranetwork):
        return net
    return Ultranetwork(net.universe, net.matrix)


def vr_value(net: PhyloNetwork, mask: int) -> float:
    """Diameter of a face, the Vietoris-Rips filtration value."""
    return net.diameter(mask)


def network_join(nets: Sequence[PhyloNetwork]) -> PhyloNetwork:
    """Entrywise minimum of networks over one universe (their lattice join)."""
    if not nets:
        raise ValueError("need at least one network")
    universe = nets[0].universe
    for n in nets[1:]:
        if n.universe != universe:
            raise ValueError("networks live over different universes")
    return PhyloNetwork(universe, np.minimum.reduce([n.matrix for n in nets]))
