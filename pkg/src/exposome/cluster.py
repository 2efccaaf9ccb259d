"""Average-linkage (UPGMA) dendrogram over exposure groups.

Distances are kept as exact fractions while clustering so that ties are
real ties and the tie-break rule, not rounding noise, decides merge order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .groups import ExposureGroup


def group_distance(a: ExposureGroup, b: ExposureGroup) -> Fraction:
    """Jaccard distance between the member node sets of two groups."""
    union = len(a.members | b.members)
    if union == 0:
        return Fraction(0)
    return 1 - Fraction(len(a.members & b.members), union)


@dataclass(frozen=True)
class Leaf:
    label: str
    ohp_count: int


@dataclass(frozen=True)
class Merge:
    """Cluster ``n_leaves + index`` formed from clusters ``left`` and ``right``."""

    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    leaves: tuple  # Leaf, sorted by label
    merges: tuple  # Merge, in agglomeration order

    @property
    def root(self) -> int:
        return len(self.leaves) + len(self.merges) - 1

    def heights(self) -> list[float]:
        return [m.height for m in self.merges]

    def members(self, cluster: int) -> tuple:
        """Leaf labels under ``cluster``."""
        n = len(self.leaves)
        if cluster < n:
            return (self.leaves[cluster].label,)
        m = self.merges[cluster - n]
        return tuple(sorted(self.members(m.left) + self.members(m.right)))

    def cut(self, height: float) -> list[frozenset]:
        """Flat clusters from applying every merge at or below ``height``."""
        n = len(self.leaves)
        clusters = {i: frozenset([self.leaves[i].label]) for i in range(n)}
        for k, m in enumerate(self.merges):
            if m.height <= height:
                clusters[n + k] = clusters.pop(m.left) | clusters.pop(m.right)
        return sorted(clusters.values(), key=lambda s: min(s))

    def to_newick(self) -> str:
        n = len(self.leaves)
        if n == 0:
            return ";"

        def height(c):
            return 0.0 if c < n else self.merges[c - n].height

        def render(c, parent_height):
            if c < n:
                leaf = self.leaves[c]
                text = _quote(f"{leaf.label} [{leaf.ohp_count}]")
            else:
                m = self.merges[c - n]
                text = f"({render(m.left, m.height)},{render(m.right, m.height)})"
            if parent_height is None:
                return text
            return f"{text}:{_num(parent_height - height(c))}"

        return render(self.root, None) + ";"

    def to_dict(self) -> dict:
        n = len(self.leaves)
        return {
            "leaves": [{"id": i, "label": lf.label, "ohp_count": lf.ohp_count} for i, lf in enumerate(self.leaves)],
            "merges": [
                {
                    "id": n + k,
                    "left": m.left,
                    "right": m.right,
                    "height": m.height,
                    "size": m.size,
                    "members": list(self.members(n + k)),
                }
                for k, m in enumerate(self.merges)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _num(x: float) -> str:
    return format(x, ".12g")


def _quote(label: str) -> str:
    return "'" + label.replace("'", "''") + "'"


def dendrogram(
    groups: Sequence[ExposureGroup],
    linkage: str = "average",
    distance: Callable[[ExposureGroup, ExposureGroup], float] = group_distance,
) -> Dendrogram:
    """UPGMA over ``groups``; ties go to the pair with the smallest labels."""
    if linkage != "average":
        raise ValueError(f"unsupported linkage {linkage!r}")
    groups = sorted(groups, key=lambda grp: grp.label)
    n = len(groups)
    leaves = tuple(Leaf(grp.label, grp.ohp_count) for grp in groups)
    base = [[Fraction(distance(a, b)) for b in groups] for a in groups]

    # cluster id -> (leaf indices, smallest label)
    active = {i: ([i], groups[i].label) for i in range(n)}
    # pairwise sum of leaf distances between active clusters
    sums = {(i, j): base[i][j] for i in range(n) for j in range(i + 1, n)}
    merges = []
    next_id = n
    while len(active) > 1:
        best = None
        for (i, j), s in sums.items():
            d = s / (len(active[i][0]) * len(active[j][0]))
            la, lb = sorted((active[i][1], active[j][1]))
            key = (d, la, lb)
            if best is None or key < best[0]:
                best = (key, i, j)
        (d, _, _), i, j = best
        if active[i][1] > active[j][1]:
            i, j = j, i
        leaves_i, label_i = active.pop(i)
        leaves_j, label_j = active.pop(j)
        merged = leaves_i + leaves_j
        new_sums = {}
        for (a, b), s in sums.items():
            if a in (i, j) or b in (i, j):
                continue
            new_sums[(a, b)] = s
        for other, (other_leaves, _) in active.items():
            s = sums[_pair(i, other)] + sums[_pair(j, other)]
            new_sums[(other, next_id)] = s
        sums = new_sums
        active[next_id] = (merged, min(label_i, label_j))
        merges.append(Merge(i, j, float(d), len(merged)))
        next_id += 1
    return Dendrogram(leaves, tuple(merges))


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)
