import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wiener_lab.density import (
    HIT_RESIDUAL,
    coefficient_distance,
    coefficient_distance_exact,
    find_complex_root_tree,
    find_real_root_tree,
    n_of_x_k,
)
from wiener_lab.errors import BadParam, BudgetExhausted, DomainError, TargetZero
from wiener_lab.families import (
    broom_poly_in_n,
    broom_reduced_poly,
    make_broom,
    make_spider_star,
    normalized_M,
    scaled,
    spider_ratio,
)
from wiener_lab.root_engine import find_roots
from wiener_lab.wiener_poly import tree_polynomial


def hit_is_genuine(hit, eps):
    """Rebuild the tree from the reported family and confirm a root near the target."""
    fam = hit.family
    if fam["kind"] == "broom":
        t = make_broom(fam["k"], fam["n"])
    else:
        t = make_spider_star(scaled(fam["a"], fam["c"]), fam["k"])
    roots = find_roots(tree_polynomial(t, reduced=True).coeffs).roots
    return min(abs(z - hit.target) for z in roots) < eps


def test_n_of_x_k_is_a_root_of_the_quadratic():
    for k in (1, 2, 5):
        for x in (-0.9, -0.5, -0.1):
            parts = n_of_x_k(x, k)
            assert broom_poly_in_n(k, x, parts.n_value) == pytest.approx(0, abs=1e-9)
            assert parts.n_value > 0


def test_n_of_x_k_domain():
    for x in (0.0, -1.0, 0.5):
        with pytest.raises(DomainError):
            n_of_x_k(x, 2)
    with pytest.raises(DomainError):
        n_of_x_k(-0.5, 0)


@pytest.mark.parametrize("target,k,n", [(-0.5, 1, 4), (-1.0, 1, 2)])
def test_real_targets_with_exact_broom_roots(target, k, n):
    hit = find_real_root_tree(target, 0.01)
    assert hit.family == {"kind": "broom", "k": k, "n": n}
    p = broom_reduced_poly(k, n).coeffs
    assert sum(c * Fraction(target) ** i for i, c in enumerate(p)) == 0


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.98, -0.02), st.sampled_from([0.05, 0.01, 0.002]))
def test_real_targets_in_unit_interval(target, eps):
    hit = find_real_root_tree(target, eps)
    assert hit.error < eps
    assert hit.achieved_root.imag == 0
    assert hit.residual <= HIT_RESIDUAL
    assert hit_is_genuine(hit, eps)


def test_real_origin_uses_a_star():
    hit = find_real_root_tree(0.0, 0.1)
    assert hit.family["k"] == 1
    assert abs(hit.achieved_root) < 0.1


def test_real_target_errors():
    with pytest.raises(DomainError):
        find_real_root_tree(0.5, 0.1)
    with pytest.raises(BadParam):
        find_real_root_tree(-0.5, 0)
    with pytest.raises(BudgetExhausted):
        find_real_root_tree(-0.3, 1e-9, budget=4)


def test_real_target_below_minus_one():
    hit = find_real_root_tree(-3.0, 0.25)
    assert hit.error < 0.25
    assert hit_is_genuine(hit, 0.25)


@pytest.mark.parametrize("target,eps", [(1 + 1j, 0.05), (0.3 - 0.8j, 0.05), (0.7071j, 0.01), (-2 + 0.5j, 0.1)])
def test_complex_targets(target, eps):
    hit = find_complex_root_tree(target, eps)
    assert hit.family["kind"] == "spider"
    assert hit.error < eps
    assert hit.residual <= HIT_RESIDUAL
    assert abs(hit.achieved_root - target) == pytest.approx(hit.error)
    if hit.family["c"] * max(hit.family["a"]) < 500:
        assert hit_is_genuine(hit, eps)


def test_complex_target_conjugate_symmetry():
    up = find_complex_root_tree(0.5 + 0.9j, 0.05)
    down = find_complex_root_tree(0.5 - 0.9j, 0.05)
    assert up.family == down.family
    assert up.achieved_root == pytest.approx(down.achieved_root.conjugate())


def test_complex_target_errors():
    with pytest.raises(TargetZero):
        find_complex_root_tree(0j, 0.1)
    with pytest.raises(BadParam):
        find_complex_root_tree(1j, -1)
    with pytest.raises(BudgetExhausted):
        find_complex_root_tree(1 + 1j, 1e-6, budget=3)


def test_negative_real_complex_target_delegates():
    hit = find_complex_root_tree(-0.5 + 0j, 0.01)
    assert hit.family["kind"] == "broom"


def test_hit_serializes():
    d = find_complex_root_tree(1 + 1j, 0.05).to_json()
    assert set(d) >= {"family", "target", "achieved_root", "error", "residual"}
    assert float(d["error"]) < 0.05


def test_coefficient_distance_shrinks_with_scale():
    a, k = (1, 1, 25), 2
    dists = [coefficient_distance(a, k, c) for c in (1, 2, 4, 8, 16)]
    assert all(x > y for x, y in zip(dists, dists[1:]))
    assert coefficient_distance_exact(a, k, 4) == pytest.approx(dists[2])
    with pytest.raises(BadParam):
        coefficient_distance(a, k, 0)


def test_limit_roots_lie_on_predicted_rays():
    a, k = (1, 1, 1, 25), 2
    c = 1 << 14
    # for large scale the leading roots approach R^(1/2k) e^{i(2j+1)pi/2k}
    m = normalized_M(scaled(a, c), k)
    rep = find_roots([float(x) for x in m])
    rad = float(spider_ratio(a)) ** (1 / (2 * k))
    target = cmath.rect(rad, math.pi / (2 * k))
    assert min(abs(z - target) for z in rep.roots) < 0.02
