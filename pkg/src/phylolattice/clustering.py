"""Agglomerative clustering to cophenetic ultrametrics.

Single linkage and UPGMA (average linkage) only; both are reducible, so
merge heights never decrease and the cophenetic matrix is ultrametric.
"""

from __future__ import annotations

import numpy as np

from .networks import PhyloNetwork, Ultranetwork

METHODS = ("single", "upgma")


def agglomerative_ultrametric(net: PhyloNetwork, method: str = "single") -> Ultranetwork:
    """Cophenetic ultrametric of iterative pair merging.

    Ties break toward the lexicographically smallest active index pair,
    so the result is deterministic.  The input must have a zero diagonal
    (a plain dissimilarity, not a late-observation network).
    """
    if method not in METHODS:
        raise ValueError(f"unknown linkage {method!r}; expected one of {METHODS}")
    if np.diag(net.matrix).any():
        raise ValueError("clustering expects a zero diagonal")
    universe = net.universe
    n = len(universe)
    out = np.zeros((n, n))
    if n == 1:
        return Ultranetwork(universe, out)

    d = net.matrix.astype(float).copy()
    np.fill_diagonal(d, np.inf)
    active = list(range(n))
    size = [1] * n
    members: list[list[int]] = [[i] for i in range(n)]
    height = 0.0
    for _ in range(n - 1):
        sub = d[np.ix_(active, active)]
        flat = int(np.argmin(sub))
        ai, aj = divmod(flat, len(active))
        if ai > aj:
            ai, aj = aj, ai
        i, j = active[ai], active[aj]
        # reducible linkages keep heights monotone; the max guards float drift
        height = max(height, float(d[i, j]))
        for x in members[i]:
            for y in members[j]:
                out[x, y] = out[y, x] = height
        rest = [k for k in active if k != i and k != j]
        if rest:
            if method == "single":
                merged = np.minimum(d[i, rest], d[j, rest])
            else:
                merged = (size[i] * d[i, rest] + size[j] * d[j, rest]) / (
                    size[i] + size[j]
                )
            d[i, rest] = merged
            d[rest, i] = merged
        members[i].extend(members[j])
        size[i] += size[j]
        active.remove(j)
    return Ultranetwork(universe, out)
