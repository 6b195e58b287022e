from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wiener_lab.errors import NotDivisible, ProbOutOfRange
from wiener_lab.families import make_Tn, make_Tn_dprime
from wiener_lab.tree_core import build_tree, distance_distribution, pair_distance_sum
from wiener_lab.tree_enum import level_sequences, levels_to_tree, prufer_to_tree, random_tree
from wiener_lab.wiener_poly import (
    WienerPoly,
    evaluate,
    reduce,
    resilience,
    resilience_mc,
    tree_polynomial,
    wiener_index,
    wiener_polynomial,
)

P3 = build_tree([(0, 1), (1, 2)], 3)
P4 = build_tree([(0, 1), (1, 2), (2, 3)], 4)
STAR5 = build_tree([(0, i) for i in range(1, 5)], 5)


def test_polynomial_examples():
    assert wiener_polynomial(distance_distribution(P4)).coeffs == (0, 3, 2, 1)
    assert tree_polynomial(make_Tn(10)).coeffs == (0, 9, 10, 10, 9, 6, 1)
    assert tree_polynomial(STAR5).coeffs == (0, 4, 6)


def test_reduce_examples():
    assert reduce(WienerPoly((0, 3, 2, 1))).coeffs == (3, 2, 1)
    assert reduce(tree_polynomial(make_Tn(10))).coeffs == (9, 10, 10, 9, 6, 1)
    with pytest.raises(NotDivisible):
        reduce(reduce(WienerPoly((0, 3, 2, 1))))
    with pytest.raises(NotDivisible):
        reduce(WienerPoly((1, 2)))


def test_reduce_inverts_times_x():
    for lv in level_sequences(8):
        p = tree_polynomial(levels_to_tree(lv), reduced=True)
        assert reduce(p.times_x()) == p


def test_wiener_index_examples():
    assert wiener_index(tree_polynomial(P4)) == 10
    assert wiener_index(tree_polynomial(STAR5)) == 16
    assert wiener_index(tree_polynomial(make_Tn(10))) == 131
    assert wiener_index(tree_polynomial(make_Tn(10), reduced=True)) == 131


def test_wiener_index_exhaustive():
    for n in range(2, 10):
        for lv in level_sequences(n):
            t = levels_to_tree(lv)
            assert wiener_index(tree_polynomial(t)) == pair_distance_sum(t)


def test_evaluate_exact():
    w = tree_polynomial(make_Tn(10), reduced=True)
    assert evaluate(w, -4) == 65
    assert evaluate(w, -5) == -291
    assert evaluate(w, 0) == 9
    assert evaluate(w, "-0.5") == Fraction(9) - 5 + Fraction(10, 4) - Fraction(9, 8) + Fraction(6, 16) - Fraction(1, 32)
    assert isinstance(evaluate(w, Fraction(1, 3)), Fraction)
    z = evaluate(w, 1j)
    assert isinstance(z, complex)
    assert abs(z - np.polyval(w.coeffs[::-1], 1j)) < 1e-12


def test_resilience_examples():
    assert resilience(tree_polynomial(P3), "0.5") == Fraction(5, 4)
    for t in (P4, STAR5, make_Tn(12)):
        p = tree_polynomial(t)
        assert resilience(p, 1) == t.n * (t.n - 1) // 2
        assert resilience(p, 0) == 0
        assert resilience(reduce(p), "1") == t.n * (t.n - 1) // 2
    with pytest.raises(ProbOutOfRange):
        resilience(tree_polynomial(P3), 1.5)
    with pytest.raises(ProbOutOfRange):
        resilience(tree_polynomial(P3), "-0.1")


def test_mc_examples():
    m, se = resilience_mc(P3, 0.5, 100_000, seed=1)
    assert abs(m - 1.25) <= 4 * se
    m, se = resilience_mc(make_Tn(10), 1.0, 500, seed=3)
    assert m == 45 and se == 0
    t = make_Tn_dprime(10)
    m, se = resilience_mc(t, 0.7, 100_000, seed=7)
    assert abs(m - float(resilience(tree_polynomial(t), "0.7"))) <= 4 * se
    with pytest.raises(ProbOutOfRange):
        resilience_mc(P3, 2, 10, seed=0)


def test_mc_deterministic_across_partitions():
    t = make_Tn(14)
    base = resilience_mc(t, 0.4, 12_345, seed=99)
    assert resilience_mc(t, 0.4, 12_345, seed=99, chunk=1000) == base
    assert resilience_mc(t, 0.4, 12_345, seed=99, chunk=777, jobs=2) == base
    assert resilience_mc(t, 0.4, 12_345, seed=100) != base


def test_mc_agreement_rate():
    """200 random trees up to order 30, five probabilities each."""
    rng = np.random.default_rng(11)
    inside = total = 0
    for i in range(200):
        t = random_tree(int(rng.integers(2, 31)), rng)
        p = tree_polynomial(t)
        for j, q in enumerate((0.1, 0.3, 0.5, 0.7, 0.9)):
            m, se = resilience_mc(t, q, 4000, seed=1000 * i + j)
            exact = float(resilience(p, q))
            inside += abs(m - exact) <= 4 * se + 1e-12
            total += 1
    assert inside / total >= 0.95


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 25).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2)))
def test_full_form_invariants(seq):
    t = prufer_to_tree(seq)
    p = tree_polynomial(t)
    assert p.coeffs[0] == 0 and p.coeffs[1] == t.n - 1 and p.coeffs[-1] >= 1
    r = reduce(p)
    assert r.coeffs[0] == t.n - 1 and all(c > 0 for c in r.coeffs)
    assert r.degree == distance_distribution(t).diameter - 1
    assert evaluate(p, 1) == t.n * (t.n - 1) // 2
