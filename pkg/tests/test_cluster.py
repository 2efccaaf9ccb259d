from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import squareform

from exposome.cluster import dendrogram, group_distance
from exposome.codes import Axis, Code
from exposome.groups import ExposureGroup, GroupOverlap

from oracles import jaccard_exact, naive_upgma


def grp(label, members, ohp=None):
    return ExposureGroup(Code(Axis.EXPOSURE, (label,)), frozenset(members), ohp if ohp is not None else len(members))


FIVE = [
    grp("A", {1, 2, 3}),
    grp("B", {2, 3, 4}),
    grp("C", {4, 5}),
    grp("D", {6, 7}),
    grp("E", {7, 8, 9}),
]


def test_distance_examples():
    assert group_distance(grp("a", {1, 2}), grp("b", {1, 2})) == 0
    assert group_distance(grp("a", {1, 2}), grp("b", {3})) == 1
    assert group_distance(grp("a", {1, 2, 3}), grp("b", {2, 3, 4})) == Fraction(1, 2)


def test_single_group_is_a_leaf():
    tree = dendrogram([grp("A", {1, 2})])
    assert tree.merges == ()
    assert tree.to_newick() == "'A [2]';"


def test_closest_pair_merges_first():
    groups = [grp("A", {1, 2, 3}), grp("B", {2, 3, 4}), grp("C", {9, 10})]
    tree = dendrogram(groups)
    first = tree.merges[0]
    assert (first.left, first.right, first.height) == (0, 1, 0.5)


def test_five_group_hand_trace():
    # Jaccard distances: AB 1/2, BC 3/4, DE 3/4, every other pair 1.
    # 1) A+B at 1/2            -> AB-C = (1 + 3/4)/2 = 7/8
    # 2) D+E at 3/4 (ties BC=3/4 gone, C-DE = 1)
    # 3) AB+C at 7/8
    # 4) ABC+DE at 1
    tree = dendrogram(FIVE)
    assert [(m.left, m.right) for m in tree.merges] == [(0, 1), (3, 4), (5, 2), (7, 6)]
    assert tree.heights() == pytest.approx([0.5, 0.75, 0.875, 1.0], abs=1e-12)
    assert [tree.members(5 + k) for k in range(4)] == [
        ("A", "B"),
        ("D", "E"),
        ("A", "B", "C"),
        ("A", "B", "C", "D", "E"),
    ]


def test_newick_branch_lengths():
    tree = dendrogram(FIVE)
    assert tree.to_newick() == (
        "((('A [3]':0.5,'B [3]':0.5):0.375,'C [2]':0.875):0.125,"
        "('D [2]':0.75,'E [3]':0.75):0.25);"
    )


def test_tie_break_by_label():
    # three mutually equidistant groups: the alphabetically first pair merges first
    groups = [grp("Z", {1, 2}), grp("M", {2, 3}), grp("A", {3, 1})]
    tree = dendrogram(groups)
    assert tree.members(3) == ("A", "M")


def test_cut_and_components():
    tree = dendrogram(FIVE)
    assert tree.cut(0.8) == [frozenset("AB"), frozenset("C"), frozenset("DE")]
    assert tree.cut(1.0) == [frozenset("ABCDE")]


def random_groups(seed, n_groups=None):
    rng = np.random.default_rng(seed)
    n_groups = n_groups or int(rng.integers(2, 9))
    groups = []
    for i in range(n_groups):
        size = int(rng.integers(2, 6))
        groups.append(grp(f"G{i:02d}", set(rng.choice(14, size=size, replace=False).tolist())))
    return groups


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_heights_monotone(seed):
    heights = dendrogram(random_groups(seed)).heights()
    assert all(a <= b for a, b in zip(heights, heights[1:]))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.randoms(use_true_random=False))
def test_permutation_invariant(seed, rnd):
    groups = random_groups(seed)
    shuffled = list(groups)
    rnd.shuffle(shuffled)
    a, b = dendrogram(groups), dendrogram(shuffled)
    assert a == b
    assert a.to_newick() == b.to_newick()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_naive_upgma(seed):
    groups = random_groups(seed)
    tree = dendrogram(groups)
    dist = {(a.label, b.label): jaccard_exact(a, b) for a in groups for b in groups}
    expected = naive_upgma([g.label for g in groups], dist)
    got = [(tree.members(len(tree.leaves) + k), m.height) for k, m in enumerate(tree.merges)]
    assert got == [(tuple(sorted(s)), float(h)) for s, h in expected]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_heights_match_scipy_on_generic_distances(seed):
    # random real distances have no ties, so merge heights are unique
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    dist = rng.random((n, n))
    dist = (dist + dist.T) / 2
    np.fill_diagonal(dist, 0.0)
    groups = [grp(f"G{i}", {i}) for i in range(n)]
    index = {g.label: i for i, g in enumerate(groups)}
    tree = dendrogram(groups, distance=lambda a, b: dist[index[a.label], index[b.label]])
    reference = linkage(squareform(dist, checks=False), method="average")[:, 2]
    assert tree.heights() == pytest.approx(list(reference), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cut_below_one_gives_overlap_components(seed):
    groups = random_groups(seed)
    edges = []
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            shared = len(groups[i].members & groups[j].members)
            if shared:
                edges.append((groups[i].exposure, groups[j].exposure, shared))
    overlap = GroupOverlap(tuple(g.exposure for g in groups), tuple(edges))
    comps = sorted(sorted(c.raw for c in comp) for comp in overlap.components())
    cut = sorted(sorted(c) for c in dendrogram(groups).cut(1 - 1e-9))
    assert cut == comps


def test_tree_dump_is_stable():
    dump = dendrogram(FIVE).dumps()
    assert dump == dendrogram(list(reversed(FIVE))).dumps()
    assert '"height": 0.875' in dump
