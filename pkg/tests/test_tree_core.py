import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import nx_distance_counts
from wiener_lab.errors import BadLabel, InvalidCaterpillar, NotATree, OrderTooLarge
from wiener_lab.families import make_Tn, make_Tn_dprime, make_Tn_prime
from wiener_lab.tree_core import (
    MAX_EXPLICIT_ORDER,
    WeightedCaterpillar,
    build_tree,
    canonical_code,
    caterpillar_distribution,
    centers,
    diameter,
    distance_distribution,
    expand_caterpillar,
    pair_distance_sum,
    relabel,
    tree_from_parents,
)
from wiener_lab.tree_enum import level_sequences, levels_to_tree, prufer_to_tree

P4 = [(0, 1), (1, 2), (2, 3)]
STAR4 = [(0, 1), (0, 2), (0, 3)]

prufer = st.integers(3, 40).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))


def test_build_small_trees():
    assert build_tree([(0, 1)], 2).edges == [(0, 1)]
    t = build_tree(P4, 4)
    assert t.n == 4 and t.degree(1) == 2


@pytest.mark.parametrize(
    "edges,n,err",
    [
        ([(0, 1), (1, 2), (2, 0)], 4, NotATree),
        ([(0, 1), (1, 2), (2, 0)], 3, NotATree),
        ([(0, 1), (2, 3)], 4, NotATree),
        ([(0, 1), (0, 1)], 3, NotATree),
        ([(0, 0), (0, 1)], 3, NotATree),
        ([(0, 4)], 2, BadLabel),
        ([(0, -1)], 2, BadLabel),
    ],
)
def test_build_rejects(edges, n, err):
    with pytest.raises(err):
        build_tree(edges, n)


def test_distribution_examples():
    assert distance_distribution(build_tree(P4, 4)).counts == (3, 2, 1)
    assert distance_distribution(build_tree(STAR4, 4)).counts == (3, 3)
    assert distance_distribution(make_Tn(10)).counts == (9, 10, 10, 9, 6, 1)


def test_single_vertex():
    dd = distance_distribution(build_tree([], 1))
    assert dd.counts == () and dd.diameter == 0 and dd.total() == 0


def test_diameter_examples():
    assert diameter(build_tree(P4, 4)) == 3
    for n in range(6, 30):
        assert diameter(make_Tn_dprime(n)) == 4
    for n in range(10, 30):
        assert diameter(make_Tn_prime(n)) == 6


def test_distribution_indexing():
    dd = distance_distribution(build_tree(P4, 4))
    assert dd[1] == 3 and dd[3] == 1 and dd[4] == 0 and dd.diameter == 3


def test_canonical_code_examples():
    a = build_tree(P4, 4)
    b = build_tree([(2, 0), (0, 3), (3, 1)], 4)
    assert canonical_code(a) == canonical_code(b)
    assert canonical_code(a) != canonical_code(build_tree(STAR4, 4))
    codes = {canonical_code(prufer_to_tree(list(s))) for s in itertools.product(range(5), repeat=3)}
    assert len(codes) == 3


def test_exhaustive_distribution_invariants():
    for n in range(2, 11):
        for lv in level_sequences(n):
            t = levels_to_tree(lv)
            dd = distance_distribution(t)
            assert sum(dd.counts) == n * (n - 1) // 2
            assert dd.counts[0] == n - 1
            assert dd.counts[-1] >= 1
            assert dd.diameter == diameter(t)


@settings(max_examples=150, deadline=None)
@given(prufer)
def test_random_distribution_matches_networkx(seq):
    t = prufer_to_tree(seq)
    dd = distance_distribution(t)
    assert dd.counts == nx_distance_counts(t)
    assert sum(i * c for i, c in enumerate(dd.counts, 1)) == pair_distance_sum(t)


def test_thousand_random_trees():
    rng = random.Random(5)
    for _ in range(1000):
        n = rng.randint(2, 50)
        t = prufer_to_tree([rng.randrange(n) for _ in range(n - 2)]) if n > 2 else build_tree([(0, 1)], 2)
        dd = distance_distribution(t)
        assert sum(dd.counts) == n * (n - 1) // 2 and dd.counts[0] == n - 1


@settings(max_examples=40, deadline=None)
@given(prufer, st.randoms(use_true_random=False))
def test_canonical_code_relabel_invariant(seq, rnd):
    t = prufer_to_tree(seq)
    code = canonical_code(t)
    for _ in range(100 if len(seq) < 10 else 10):
        perm = list(range(t.n))
        rnd.shuffle(perm)
        assert canonical_code(relabel(t, perm)) == code


def test_centers_of_paths():
    assert centers(build_tree(P4, 4)) == [1, 2]
    assert centers(build_tree([(0, 1), (1, 2)], 3)) == [1]


def test_tree_from_parents():
    t = tree_from_parents([-1, 0, 1, 1])
    assert distance_distribution(t).counts == (3, 3)


def test_caterpillar_examples():
    c = WeightedCaterpillar((2, 1, 2))
    assert c.order == 8
    assert caterpillar_distribution(c).counts == distance_distribution(expand_caterpillar(c)).counts
    assert caterpillar_distribution(WeightedCaterpillar((4,))).counts == (4, 6)
    assert caterpillar_distribution(WeightedCaterpillar((1, 1))).counts == (3, 2, 1)


def test_caterpillar_grid():
    for s in range(1, 7):
        for m in itertools.product(range(5), repeat=s):
            if s >= 2 and (m[0] < 1 or m[-1] < 1):
                continue
            if s == 1 and m[0] < 1:
                continue
            c = WeightedCaterpillar(m)
            t = expand_caterpillar(c)
            dd = distance_distribution(t)
            assert caterpillar_distribution(c).counts == dd.counts
            assert c.order == s + sum(m) == t.n
            assert c.diameter == dd.diameter


@pytest.mark.parametrize("m", [(0, 1), (1, 0), (1, 2, 0), (-1,), ()])
def test_invalid_caterpillar(m):
    with pytest.raises(InvalidCaterpillar):
        WeightedCaterpillar(m)


def test_huge_caterpillar_is_exact():
    c = WeightedCaterpillar((10**12, 5, 10**12))
    dd = caterpillar_distribution(c)
    n = c.order
    assert dd.total() == n * (n - 1) // 2
    assert dd.counts[-1] == 10**24


def test_order_threshold():
    with pytest.raises(OrderTooLarge):
        expand_caterpillar(WeightedCaterpillar((MAX_EXPLICIT_ORDER,)))
