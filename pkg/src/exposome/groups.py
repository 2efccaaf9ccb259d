"""Exposure groups, maximal cliques (single vs hybrid), bridging nodes."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .codes import Code
from .errors import OutputCapExceeded
from .metrics import ClusteringProfile, DegreeProfile
from .network import Exposome


@dataclass(frozen=True)
class ExposureGroup:
    exposure: Code
    members: frozenset
    ohp_count: int

    @property
    def label(self) -> str:
        return self.exposure.raw

    @property
    def size(self) -> int:
        return len(self.members)


class CliqueKind(enum.Enum):
    SINGLE = "single"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class CliqueFinding:
    members: tuple  # sorted node ids
    kind: CliqueKind
    common: tuple = ()  # exposures shared by every member (Single)
    edge_witnesses: dict = field(default_factory=dict, compare=False)  # (u, v) -> shared

    @property
    def witnesses(self):
        return self.common if self.kind is CliqueKind.SINGLE else self.edge_witnesses


@dataclass(frozen=True)
class BridgeReport:
    node: int
    group_memberships: tuple  # exposure Codes
    k: int
    c: float


@dataclass(frozen=True)
class GroupOverlap:
    """Exposome of exposure groups: groups linked when they share nodes."""

    vertices: tuple  # exposure Codes, in group order
    edges: tuple  # (code_a, code_b, shared node count)

    def components(self) -> list[frozenset]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b, _ in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        comps = defaultdict(set)
        for v in self.vertices:
            comps[find(v)].add(v)
        return sorted((frozenset(s) for s in comps.values()), key=lambda s: min(s))


def exposure_groups(g: Exposome) -> tuple[list[ExposureGroup], list[Code]]:
    """Groups for exposures carried by >= 2 nodes, plus the exposures carried by one."""
    carriers = defaultdict(list)
    for node in g.nodes:
        for code in node.cortege:
            carriers[code].append(node)
    groups, unshared = [], []
    for code in sorted(carriers):
        nodes = carriers[code]
        if len(nodes) >= 2:
            groups.append(
                ExposureGroup(code, frozenset(n.id for n in nodes), sum(n.weight for n in nodes))
            )
        else:
            unshared.append(code)
    groups.sort(key=lambda grp: (-grp.size, grp.exposure.sort_key()))
    return groups, unshared


def _bron_kerbosch(adj: dict, cap: int | None) -> tuple[list[frozenset], bool]:
    """Maximal cliques with Tomita pivoting, explicit stack, sorted iteration."""
    found = []
    stack = [(frozenset(), frozenset(adj), frozenset())]
    while stack:
        r, p, x = stack.pop()
        if not p:
            if not x:
                found.append(r)
                if cap is not None and len(found) > cap:
                    return found[:cap], True
            continue
        pivot = max(sorted(p | x), key=lambda u: len(p & adj[u]))
        branches = []
        for v in sorted(p - adj[pivot]):
            branches.append((r | {v}, p & adj[v], x & adj[v]))
            p = p - {v}
            x = x | {v}
        stack.extend(reversed(branches))
    return found, False


def classify_clique(g: Exposome, members: Sequence[int]) -> CliqueFinding:
    members = tuple(sorted(members))
    corteges = [set(g.node(i).cortege) for i in members]
    common = set.intersection(*corteges)
    if common:
        return CliqueFinding(members, CliqueKind.SINGLE, tuple(sorted(common)))
    witnesses = {}
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            witnesses[(members[a], members[b])] = tuple(sorted(corteges[a] & corteges[b]))
    return CliqueFinding(members, CliqueKind.HYBRID, (), witnesses)


def maximal_cliques(g: Exposome, max_output: int | None = None) -> list[CliqueFinding]:
    """All maximal cliques with at least two nodes, largest first.

    Raises ``OutputCapExceeded`` (carrying the sorted partial list) when more
    than ``max_output`` cliques exist.
    """
    adj = {i: s for i, s in g.adjacency.items() if s}
    raw, truncated = _bron_kerbosch(adj, max_output)
    findings = sorted(
        (classify_clique(g, c) for c in raw if len(c) >= 2),
        key=lambda f: (-len(f.members), f.members),
    )
    if truncated:
        raise OutputCapExceeded(f"more than {max_output} maximal cliques", findings)
    return findings


def memberships(groups: Sequence[ExposureGroup]) -> dict:
    """node id -> exposures of the groups it belongs to (in code order)."""
    out = defaultdict(list)
    for grp in groups:
        for i in grp.members:
            out[i].append(grp.exposure)
    return {i: tuple(sorted(codes)) for i, codes in out.items()}


def bridging_nodes(
    g: Exposome,
    groups: Sequence[ExposureGroup],
    degree: DegreeProfile,
    clust: ClusteringProfile,
) -> list[BridgeReport]:
    """Nodes sitting in two or more exposure groups, most memberships first."""
    reports = [
        BridgeReport(i, codes, degree.per_node[i], clust.per_node[i])
        for i, codes in memberships(groups).items()
        if len(codes) >= 2
    ]
    reports.sort(key=lambda r: (-len(r.group_memberships), r.node))
    return reports


def group_overlap(g: Exposome, groups: Sequence[ExposureGroup]) -> GroupOverlap:
    edges = []
    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            shared = len(groups[a].members & groups[b].members)
            if shared:
                edges.append((groups[a].exposure, groups[b].exposure, shared))
    return GroupOverlap(tuple(grp.exposure for grp in groups), tuple(edges))
