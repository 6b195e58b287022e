from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from wiener_lab.errors import OrderTooLarge
from wiener_lab.tree_core import build_tree, canonical_code
from wiener_lab.tree_enum import (
    MAX_ORDER,
    TreeStream,
    count_trees,
    enumerate_trees,
    level_sequences,
    levels_to_tree,
    random_tree,
)

# free trees by order (OEIS A000055)
KNOWN = [1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320]


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (5, 3), (7, 11), (9, 47), (10, 106)])
def test_counts(n, count):
    assert count_trees(n) == count
    assert sum(1 for _ in enumerate_trees(n)) == count


def test_known_sequence():
    for n in range(1, 16):
        assert count_trees(n) == KNOWN[n]


def test_matches_prufer_oracle(oracle_classes):
    for n, classes in oracle_classes.items():
        codes = Counter(canonical_code(t) for t in enumerate_trees(n))
        assert codes == classes


@pytest.mark.parametrize("n", [9, 10])
def test_matches_networkx_generator(n):
    ours = Counter(canonical_code(t) for t in enumerate_trees(n))
    theirs = Counter()
    for g in nx.nonisomorphic_trees(n):
        theirs[canonical_code(build_tree(list(g.edges()), n))] += 1
    assert ours == theirs
    assert max(ours.values()) == 1


def test_every_tree_valid():
    for n in range(1, 12):
        for t in enumerate_trees(n):
            assert t.n == n and len(t.edges) == n - 1
            build_tree(t.edges, n)


def test_order_cap():
    with pytest.raises(OrderTooLarge):
        enumerate_trees(MAX_ORDER + 1)
    with pytest.raises(OrderTooLarge):
        list(level_sequences(MAX_ORDER + 1))


def test_deterministic_order():
    a = [lv for lv in level_sequences(11)]
    b = [lv for lv in level_sequences(11)]
    assert a == b


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 12), st.data())
def test_split_ranges_reassemble(n, data):
    total = count_trees(n)
    cuts = sorted(data.draw(st.lists(st.integers(0, total), max_size=4)))
    bounds = [0] + cuts + [total]
    pieces = []
    for a, b in zip(bounds, bounds[1:]):
        pieces.extend(canonical_code(t) for t in TreeStream(n, a, b))
    assert pieces == [canonical_code(t) for t in enumerate_trees(n)]


def test_indexed_stream():
    s = TreeStream(8, 5, 9)
    idx = [i for i, _ in s.indexed()]
    assert idx == [5, 6, 7, 8] and s.index == 9


def test_levels_to_tree_star():
    t = levels_to_tree([0, 1, 1, 1])
    assert sorted(t.degree(v) for v in range(4)) == [1, 1, 1, 3]


def test_random_tree_valid():
    import numpy as np

    rng = np.random.default_rng(0)
    for n in [1, 2, 3, 10, 40]:
        t = random_tree(n, rng)
        assert t.n == n and len(t.edges) == max(0, n - 1)
