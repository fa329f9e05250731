"""Shared builders for the test suite."""

import random

import numpy as np

from phylolattice import (
    FaceSet,
    Gram,
    PhyloNetwork,
    TaxaSet,
    Ultranetwork,
    agglomerative_ultrametric,
)

ABC = "abcdefghijklmnop"


def taxa(n: int) -> TaxaSet:
    return TaxaSet(ABC[:n])


def random_dissimilarity(universe: TaxaSet, rng: random.Random, lo=0.0, hi=1.0) -> PhyloNetwork:
    n = len(universe)
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = rng.uniform(lo, hi)
    return PhyloNetwork(universe, m)


def random_network(universe: TaxaSet, rng: random.Random, late=False) -> PhyloNetwork:
    """General network: optional positive diagonal under every row bound."""
    n = len(universe)
    diag = [rng.uniform(0.0, 0.3) if late else 0.0 for _ in range(n)]
    m = np.zeros((n, n))
    for i in range(n):
        m[i, i] = diag[i]
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = max(diag[i], diag[j]) + rng.uniform(0.0, 1.0)
    return PhyloNetwork(universe, m)


def random_ultrametric(universe: TaxaSet, rng: random.Random, late=False) -> Ultranetwork:
    u = agglomerative_ultrametric(random_dissimilarity(universe, rng), "single")
    if not late:
        return u
    m = u.matrix.copy()
    n = len(universe)
    for i in range(n):
        row_min = min(m[i, j] for j in range(n) if j != i) if n > 1 else 1.0
        m[i, i] = rng.uniform(0.0, row_min)
    return Ultranetwork(universe, m)


def gram_of(ts: TaxaSet, levels, kind="facegram") -> Gram:
    return Gram(ts, [(t, FaceSet.from_names(ts, fs)) for t, fs in levels], kind)
