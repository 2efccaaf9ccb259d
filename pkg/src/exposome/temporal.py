"""Snapshot differences between cumulative exposomes, and attribute projection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .codes import Axis, Code, aggregate
from .errors import BadCutoffs, UnknownAxis
from .ingest import KeyMode, NodeKey, OhpRecord, dedupe
from .network import Exposome, ExposomeParams, build


def _key_order(key: NodeKey):
    extra = () if key.strict_extra is None else tuple(c.sort_key() for c in key.strict_extra)
    return (key.disease.sort_key(), tuple(c.sort_key() for c in key.exposures), extra)


@dataclass(frozen=True)
class DiffReport:
    t1: int
    t2: int
    new_nodes: tuple  # NodeKeys in the t2 exposome but not the t1 one
    incremented: tuple  # NodeKeys in both, with more weight at t2
    weight_delta: dict  # NodeKey -> t2 weight minus raw t1 weight
    new_edges: tuple  # (NodeKey, NodeKey, shared exposures)
    added_records: int

    @property
    def is_empty(self) -> bool:
        return not (self.new_nodes or self.incremented or self.new_edges)


def cumulative_exposome(
    records: Iterable[OhpRecord],
    cutoff: int,
    key_mode: KeyMode = KeyMode.CORTEGE,
    params: ExposomeParams = ExposomeParams(),
) -> Exposome:
    return build(dedupe([r for r in records if r.year <= cutoff], key_mode), params)


def _keyed_edges(g: Exposome) -> dict:
    out = {}
    for e in g.iter_edges():
        a, b = g.node(e.u).key, g.node(e.v).key
        if _key_order(b) < _key_order(a):
            a, b = b, a
        out[(a, b)] = e.shared
    return out


def snapshot_diff(
    records: Sequence[OhpRecord],
    cutoff_t1: int,
    cutoff_t2: int,
    key_mode: KeyMode = KeyMode.CORTEGE,
    params: ExposomeParams = ExposomeParams(),
) -> DiffReport:
    """Compare the cumulative exposomes at ``cutoff_t1`` and ``cutoff_t2``.

    A key that gained weight is *new* if the t1 exposome lacks it and
    *incremented* otherwise. Deltas are taken against the raw t1 count, so a
    node that only crossed eta between the cutoffs reports its true gain.
    """
    if cutoff_t1 >= cutoff_t2:
        raise BadCutoffs(f"t1 ({cutoff_t1}) must be earlier than t2 ({cutoff_t2})")
    records = list(records)
    nodes1 = dedupe([r for r in records if r.year <= cutoff_t1], key_mode)
    g1 = build(nodes1, params)
    g2 = cumulative_exposome(records, cutoff_t2, key_mode, params)
    raw1 = {n.key: n.weight for n in nodes1}
    w1 = {n.key: n.weight for n in g1.nodes}
    new_nodes, incremented, delta = [], [], {}
    for node in g2.nodes:
        gain = node.weight - raw1.get(node.key, 0)
        if gain <= 0:
            continue
        delta[node.key] = gain
        (incremented if node.key in w1 else new_nodes).append(node.key)
    e1 = _keyed_edges(g1)
    new_edges = [(a, b, shared) for (a, b), shared in _keyed_edges(g2).items() if (a, b) not in e1]
    new_edges.sort(key=lambda t: (_key_order(t[0]), _key_order(t[1])))
    return DiffReport(
        t1=cutoff_t1,
        t2=cutoff_t2,
        new_nodes=tuple(sorted(new_nodes, key=_key_order)),
        incremented=tuple(sorted(incremented, key=_key_order)),
        weight_delta=dict(sorted(delta.items(), key=lambda kv: _key_order(kv[0]))),
        new_edges=tuple(new_edges),
        added_records=sum(1 for r in records if cutoff_t1 < r.year <= cutoff_t2),
    )


@dataclass(frozen=True)
class ProjectionOverlay:
    axis: Axis
    codes: tuple  # selected Codes
    counts: dict  # node id -> {Code: count}

    def nodes_for(self, code: Code) -> dict:
        return {i: c[code] for i, c in self.counts.items() if code in c}


def _matches(attr: Code, selected: Code) -> bool:
    return aggregate(attr, selected.depth) == selected if attr.depth >= selected.depth else False


def project(g: Exposome, axis: Axis, codes: Sequence[Code]) -> ProjectionOverlay:
    """Count, per node, the OHP whose occupation (or sector) falls under each code.

    A selected code also matches its descendants, so ``31`` picks up ``31.4``.
    """
    if axis is Axis.OCCUPATION:
        attr = "occupations"
    elif axis is Axis.SECTOR:
        attr = "sectors"
    else:
        raise UnknownAxis(f"projection is defined for occupation or sector, not {axis.value}")
    codes = tuple(dict.fromkeys(codes))
    counts = {}
    for node in g.nodes:
        multiset = getattr(node, attr)
        hits = {}
        for code in codes:
            n = sum(k for value, k in multiset.items() if _matches(value, code))
            if n:
                hits[code] = n
        if hits:
            counts[node.id] = hits
    return ProjectionOverlay(axis, codes, counts)
