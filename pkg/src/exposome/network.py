"""The D/eta exposome: nodes linked when their corteges share exposures.

Edges are found through an inverted index (exposure -> nodes carrying it), so
the work is proportional to the sum of squared bucket sizes rather than to
all node pairs. Edge data is kept in flat numpy arrays; ``Edge`` objects are
materialised on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParamLoosened
from .ingest import MAX_EXPOSURES, Node


@dataclass(frozen=True)
class ExposomeParams:
    D: int = 1
    eta: int = 1

    def __post_init__(self):
        if not 1 <= self.D <= MAX_EXPOSURES:
            raise ValueError(f"D must be in 1..{MAX_EXPOSURES}, got {self.D}")
        if self.eta < 1:
            raise ValueError(f"eta must be >= 1, got {self.eta}")

    def tightens(self, other: "ExposomeParams") -> bool:
        """True if these params are at least as strict as ``other`` on both knobs."""
        return self.D >= other.D and self.eta >= other.eta


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    shared: tuple  # sorted exposure Codes

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)

    @property
    def strength(self) -> int:
        return len(self.shared)


def connection_strength(n_i, n_j, w_i: int, w_j: int, eta: int) -> int:
    """Number of exposures shared by two corteges, zeroed if either weight is below eta."""
    if w_i < eta or w_j < eta:
        return 0
    return len(set(n_i) & set(n_j))


@lru_cache(maxsize=256)
def _triu(b: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(b, 1)


_EMPTY_I = np.zeros(0, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Exposome:
    """Graph G = {W, V, L, D, eta}.

    ``src``/``dst`` hold node ids with ``src < dst``, sorted lexicographically.
    The exposures witnessing edge ``e`` are
    ``codes[shared_idx[shared_ptr[e]:shared_ptr[e + 1]]]``.
    """

    params: ExposomeParams
    nodes: tuple
    codes: tuple
    src: np.ndarray
    dst: np.ndarray
    shared_ptr: np.ndarray
    shared_idx: np.ndarray

    @property
    def W(self) -> int:
        return sum(n.weight for n in self.nodes)

    @property
    def V(self) -> int:
        return len(self.nodes)

    @property
    def L(self) -> int:
        return len(self.src)

    @property
    def D(self) -> int:
        return self.params.D

    @property
    def eta(self) -> int:
        return self.params.eta

    @cached_property
    def strength(self) -> np.ndarray:
        return np.diff(self.shared_ptr)

    @cached_property
    def node_by_id(self) -> dict:
        return {n.id: n for n in self.nodes}

    @cached_property
    def positions(self) -> dict:
        """Node id -> row index in ``nodes``."""
        return {n.id: i for i, n in enumerate(self.nodes)}

    def node(self, node_id: int) -> Node:
        return self.node_by_id[node_id]

    def shared(self, e: int) -> tuple:
        lo, hi = self.shared_ptr[e], self.shared_ptr[e + 1]
        return tuple(self.codes[k] for k in self.shared_idx[lo:hi])

    def iter_edges(self) -> Iterator[Edge]:
        for e in range(self.L):
            yield Edge(int(self.src[e]), int(self.dst[e]), self.shared(e))

    @cached_property
    def edges(self) -> tuple:
        return tuple(self.iter_edges())

    def edge_pairs(self) -> set:
        return set(zip(self.src.tolist(), self.dst.tolist()))

    def edge_map(self) -> dict:
        """(u, v) -> shared exposure tuple; convenient for comparisons."""
        return {(e.u, e.v): e.shared for e in self.iter_edges()}

    @cached_property
    def adjacency(self) -> dict:
        adj = {n.id: set() for n in self.nodes}
        for u, v in zip(self.src.tolist(), self.dst.tolist()):
            adj[u].add(v)
            adj[v].add(u)
        return {k: frozenset(s) for k, s in adj.items()}

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 matrix indexed by node position (small graphs only)."""
        a = np.zeros((self.V, self.V), dtype=np.int8)
        pos = self.positions
        for u, v in zip(self.src.tolist(), self.dst.tolist()):
            a[pos[u], pos[v]] = a[pos[v], pos[u]] = 1
        return a

    def edge_positions(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as row indices into ``nodes`` rather than node ids."""
        if self.V == 0:
            return _EMPTY_I, _EMPTY_I
        ids = np.fromiter((n.id for n in self.nodes), dtype=np.int64, count=self.V)
        lut = np.full(int(ids.max()) + 1, -1, dtype=np.int64)
        lut[ids] = np.arange(self.V)
        return lut[self.src], lut[self.dst]

    def sparse_adjacency(self):
        from scipy import sparse

        pos, pos2 = self.edge_positions()
        rows = np.concatenate([pos, pos2])
        cols = np.concatenate([pos2, pos])
        data = np.ones(len(rows), dtype=np.int64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.V, self.V))


def _empty(params: ExposomeParams, nodes: tuple, codes: tuple) -> Exposome:
    return Exposome(params, nodes, codes, _EMPTY_I, _EMPTY_I, np.zeros(1, dtype=np.int64), _EMPTY_I)


def build(nodes: Iterable[Node], params: ExposomeParams = ExposomeParams()) -> Exposome:
    """Keep nodes with weight >= eta and link pairs sharing >= D exposures."""
    kept = tuple(sorted((n for n in nodes if n.weight >= params.eta), key=lambda n: n.id))
    codes = tuple(sorted({c for n in kept for c in n.cortege}))
    if len(kept) < 2:
        return _empty(params, kept, codes)
    code_index = {c: k for k, c in enumerate(codes)}
    n = len(kept)

    # inverted index as (code, position) incidence sorted by code then position
    inc_pos, inc_code = [], []
    for p, node in enumerate(kept):
        for c in node.cortege:
            inc_pos.append(p)
            inc_code.append(code_index[c])
    inc_pos = np.asarray(inc_pos, dtype=np.int64)
    inc_code = np.asarray(inc_code, dtype=np.int64)
    order = np.lexsort((inc_pos, inc_code))
    inc_pos, inc_code = inc_pos[order], inc_code[order]
    bounds = np.flatnonzero(np.diff(inc_code)) + 1
    starts = np.concatenate([[0], bounds])
    stops = np.concatenate([bounds, [len(inc_code)]])

    pair_keys, pair_codes = [], []
    for lo, hi in zip(starts.tolist(), stops.tolist()):
        b = hi - lo
        if b < 2:
            continue
        members = inc_pos[lo:hi]
        iu, ju = _triu(b)
        pair_keys.append(members[iu] * n + members[ju])
        pair_codes.append(np.full(len(iu), inc_code[lo], dtype=np.int64))
    if not pair_keys:
        return _empty(params, kept, codes)
    keys = np.concatenate(pair_keys)
    witness = np.concatenate(pair_codes)
    del pair_keys, pair_codes

    # stable sort keeps witnesses in code order within each pair
    order = np.argsort(keys, kind="stable")
    keys, witness = keys[order], witness[order]
    del order
    first = np.concatenate([[True], keys[1:] != keys[:-1]])
    heads = np.flatnonzero(first)
    counts = np.diff(np.concatenate([heads, [len(keys)]]))
    keep = counts >= params.D
    edge_keys = keys[heads[keep]]
    shared_idx = witness[np.repeat(keep, counts)]
    shared_ptr = np.concatenate([[0], np.cumsum(counts[keep])])

    ids = np.array([node.id for node in kept], dtype=np.int64)
    src = ids[edge_keys // n]
    dst = ids[edge_keys % n]
    return Exposome(params, kept, codes, src, dst, shared_ptr.astype(np.int64), shared_idx)


def rebuild(g: Exposome, params: ExposomeParams) -> Exposome:
    """Tighten an already built exposome without recomputing intersections."""
    if not params.tightens(g.params):
        raise ParamLoosened(
            f"cannot loosen (D={g.params.D}, eta={g.params.eta}) to "
            f"(D={params.D}, eta={params.eta}); build from nodes instead"
        )
    kept = tuple(n for n in g.nodes if n.weight >= params.eta)
    strength = g.strength
    mask = strength >= params.D
    if len(kept) < len(g.nodes):
        alive = np.array([n.id for n in kept], dtype=np.int64)
        mask &= np.isin(g.src, alive) & np.isin(g.dst, alive)
    codes = tuple(sorted({c for n in kept for c in n.cortege}))
    if not mask.any():
        return _empty(params, kept, codes)
    remap = np.full(len(g.codes), -1, dtype=np.int64)
    new_index = {c: k for k, c in enumerate(codes)}
    for k, c in enumerate(g.codes):
        if c in new_index:
            remap[k] = new_index[c]
    shared_idx = remap[g.shared_idx[np.repeat(mask, strength)]]
    shared_ptr = np.concatenate([[0], np.cumsum(strength[mask])]).astype(np.int64)
    return Exposome(params, kept, codes, g.src[mask], g.dst[mask], shared_ptr, shared_idx)


def from_edges(params: ExposomeParams, nodes: Sequence[Node], edges: Iterable[Edge]) -> Exposome:
    """Assemble an Exposome from explicit edges (used when reading GraphML back)."""
    nodes = tuple(sorted(nodes, key=lambda n: n.id))
    edges = sorted(edges, key=lambda e: (e.u, e.v))
    codes = tuple(sorted({c for n in nodes for c in n.cortege} | {c for e in edges for c in e.shared}))
    code_index = {c: k for k, c in enumerate(codes)}
    src = np.array([e.u for e in edges], dtype=np.int64)
    dst = np.array([e.v for e in edges], dtype=np.int64)
    ptr = np.concatenate([[0], np.cumsum([e.strength for e in edges])]).astype(np.int64)
    idx = np.array([code_index[c] for e in edges for c in sorted(e.shared)], dtype=np.int64)
    return Exposome(params, nodes, codes, src, dst, ptr, idx)
