"""Density, degree distribution and local clustering coefficients."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .network import Exposome


@dataclass(frozen=True)
class DegreeProfile:
    per_node: dict  # node id -> k
    histogram: dict  # k -> number of nodes

    def ranked(self) -> list[tuple[int, int]]:
        """(node id, k) by decreasing degree, ties by id."""
        return sorted(self.per_node.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass(frozen=True)
class ClusteringProfile:
    per_node: dict  # node id -> c

    def mean(self) -> float:
        return float(np.mean(list(self.per_node.values()))) if self.per_node else 0.0


def density_from_counts(V: int, L: int) -> float:
    if V <= 1:
        return 0.0
    return 2.0 * L / (V * (V - 1))


def density(g: Exposome) -> float:
    """2L / (V(V-1)); zero for graphs with fewer than two nodes."""
    return density_from_counts(g.V, g.L)


# dense bit rows are used for triangle counting while they fit in this budget
BITSET_BUDGET = 256 * 2**20


def _degree_array(g: Exposome) -> np.ndarray:
    u, v = g.edge_positions()
    return np.bincount(u, minlength=g.V) + np.bincount(v, minlength=g.V)


def degrees(g: Exposome) -> DegreeProfile:
    k = _degree_array(g).tolist()
    per_node = {n.id: k[i] for i, n in enumerate(g.nodes)}
    histogram = dict(sorted(Counter(per_node.values()).items()))
    return DegreeProfile(per_node, histogram)


def clustering(g: Exposome) -> ClusteringProfile:
    """Watts-Strogatz local coefficient, 0 for nodes with fewer than two neighbours."""
    if g.V == 0:
        return ClusteringProfile({})
    k = _degree_array(g)
    tri = _triangles(g)
    c = np.zeros(g.V)
    ok = k >= 2
    c[ok] = 2.0 * tri[ok] / (k[ok] * (k[ok] - 1))
    return ClusteringProfile({n.id: float(c[i]) for i, n in enumerate(g.nodes)})


def _triangles(g: Exposome) -> np.ndarray:
    """Triangles through each node, by position."""
    u, v = g.edge_positions()
    words = (g.V + 63) // 64
    if g.V * words * 8 > BITSET_BUDGET:
        a = g.sparse_adjacency()
        return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2
    # one bit row per node; common neighbours of an edge = popcount(row_u & row_v)
    rows = np.zeros(g.V * words, dtype=np.uint64)
    one = np.uint64(1)
    for a, b in ((u, v), (v, u)):
        np.bitwise_or.at(rows, a * words + (b >> 6), one << (b & 63).astype(np.uint64))
    rows = rows.reshape(g.V, words)
    tri = np.zeros(g.V, dtype=np.int64)
    step = max(1, (32 * 2**20) // (words * 8))
    for lo in range(0, len(u), step):
        cu, cv = u[lo : lo + step], v[lo : lo + step]
        common = np.bitwise_count(rows[cu] & rows[cv]).sum(axis=1, dtype=np.int64)
        tri += np.bincount(cu, weights=common, minlength=g.V).astype(np.int64)
        tri += np.bincount(cv, weights=common, minlength=g.V).astype(np.int64)
    # each triangle at a node is seen from both of its edges there
    return tri // 2


def k_c_table(deg: DegreeProfile, clu: ClusteringProfile, min_degree: int = 2) -> list[tuple[int, int, float]]:
    """(node id, k, c) for nodes with k >= min_degree, by decreasing k."""
    return [(i, k, clu.per_node[i]) for i, k in deg.ranked() if k >= min_degree]
