"""Reproduction suite shared by ``wiener-lab verify`` and the test-suite.

Every check returns a :class:`CriterionResult` carrying the measured values,
so the CLI and pytest print the same pass/fail lines.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import census, density, families, root_engine
from .families import FAMILY_MAKERS, FAMILY_MIN_ORDER, closed_form_reduced
from .tree_core import distance_distribution
from .tree_enum import level_sequences, levels_to_tree, random_tree
from .wiener_poly import horner, resilience, resilience_mc, tree_polynomial

# pinned tolerances
REL_TOL = 1e-6
EK_SLACK = 1e-9
HIT_RESIDUAL = 1e-8
MC_SIGMAS = 4.0
MC_PASS_RATE = 0.95


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.title}: {self.measured} ({self.seconds:.1f}s)"


def _caps(level: str) -> dict:
    full = level == "full"
    return {
        "family_hi": 200 if full else 60,
        "census_hi": 16 if full else 12,
        "im_hi": 14 if full else 12,
        "double_big": full,
        "double_other_hi": 16 if full else 12,
        "ratio_hi": 14 if full else 12,
        "ek_hi": 14 if full else 12,
        "mc_cases": 200 if full else 40,
        "mc_trials": 100_000 if full else 20_000,
        "real_targets": 20 if full else 8,
    }


# ---------------------------------------------------------------- 1

def closed_forms(c: dict) -> tuple[bool, str]:
    hi = c["family_hi"]
    bad = []
    checked = 0
    for kind, make in FAMILY_MAKERS.items():
        if kind == "TildeTn":
            continue
        for n in range(FAMILY_MIN_ORDER[kind], hi + 1):
            checked += 1
            if distance_distribution(make(n)).counts != closed_form_reduced(kind, n).coeffs:
                bad.append((kind, n))
    for n in range(7, hi + 1):
        for t, p in zip(families.pendant_extension_trees(n), families.pendant_extension_polys(n)):
            checked += 1
            if (0,) + distance_distribution(t).counts != p.coeffs:
                bad.append(("pendant", n))
    for k in range(1, 9):
        for n in range(1, 31):
            checked += 1
            if distance_distribution(families.make_broom(k, n)).counts != families.broom_reduced_poly(k, n).coeffs:
                bad.append(("broom", k, n))
    return not bad, f"{checked} trees compared, mismatches {bad[:5]}"


# ---------------------------------------------------------------- 2-5

def _quartic(n):
    return 16 * n**4 - 545 * n**3 + 6959 * n**2 - 39485 * n + 84015


def _cubic(n):
    return Fraction(-25 * n**3) + Fraction(1165 * n**2, 2) - Fraction(9063 * n, 2) + 11774


def tn_brackets(c: dict) -> tuple[bool, str]:
    fails = []
    for n in range(10, c["family_hi"] + 1):
        p = closed_form_reduced("Tn", n).coeffs
        a, b = horner(p, -(2 * n - 16)), horner(p, -(2 * n - 15))
        if not (a > 0 > b):
            fails.append(n)
    p10 = closed_form_reduced("Tn", 10).coeffs
    v_a, v_b = horner(p10, -4), horner(p10, -5)
    ok10 = v_a == 65 == _quartic(10) and v_b == -291 == _cubic(10)
    return not fails and ok10, f"W_10(-4)={v_a}, W_10(-5)={v_b}, quartic(10)={_quartic(10)}, cubic(10)={_cubic(10)}, sign failures {fails}"


def tnp_brackets(c: dict) -> tuple[bool, str]:
    fails = []
    for n in range(13, c["family_hi"] + 1):
        p = closed_form_reduced("TnPrime", n).coeffs
        if not (horner(p, -(2 * n - 17)) > 0 > horner(p, -(2 * n - 16))):
            fails.append(n)
    return not fails, f"n in [13, {c['family_hi']}], sign failures {fails}"


def tnpp_roots(c: dict) -> tuple[bool, str]:
    fails = []
    worst = -math.inf
    for n in range(10, c["family_hi"] + 1):
        p = closed_form_reduced("TnDoublePrime", n).coeffs
        cert = root_engine.sturm_real_root_count(p, hi=0)
        ok_real, _ = root_engine.all_roots_real(p)
        mod = abs(root_engine.find_roots(p).max_modulus)
        bound = (1 + 1 / math.sqrt(2)) * n - 7
        worst = max(worst, mod - bound)
        if cert.real_root_count != 3 or not ok_real or not mod < bound + REL_TOL:
            fails.append(n)
    return not fails, f"max(modulus - bound) = {worst:.4g}, failures {fails}"


def large_n_moduli(c: dict) -> tuple[bool, str]:
    fails = []
    for n in range(31, 101):
        lim = 2 * n - 16
        p = closed_form_reduced("Tn", n).coeffs
        lo, hi = root_engine.bracket_real_root(p, -(2 * n - 15), -(2 * n - 16))
        r = abs(float((lo + hi) / 2))
        m1 = abs(root_engine.find_roots(closed_form_reduced("TnPrime", n)).max_modulus)
        m2 = abs(root_engine.find_roots(closed_form_reduced("TnDoublePrime", n)).max_modulus)
        if not (r > lim and m1 <= lim * (1 + REL_TOL) and m2 <= lim * (1 + REL_TOL)):
            fails.append(n)
    return not fails, f"n in [31, 100], failures {fails}"


# ---------------------------------------------------------------- 6-9

def max_mod_census(c: dict) -> tuple[bool, str]:
    got = {}
    for n in range(10, c["census_hi"] + 1):
        rec = census.max_modulus_census(n)
        got[n] = rec.matches(families.make_Tn_dprime(n))
    return all(got.values()), f"extremal is T_n'' for {[n for n, v in got.items() if v]}, not for {[n for n, v in got.items() if not v]}"


def max_im_census(c: dict) -> tuple[bool, str]:
    got = {}
    reals = {}
    for n in range(9, c["im_hi"] + 1):
        rec = census.max_imaginary_census(n)
        got[n] = rec.matches(families.make_tilde_Tn(n))
        reals[n] = round(rec.extremal_root.real, 4)
    return all(got.values()), f"extremal is tilde T_n for {[n for n, v in got.items() if v]}, misses {[n for n, v in got.items() if not v]}; real parts {reals}"


def double_roots(c: dict) -> tuple[bool, str]:
    counts = {9: census.double_root_census(9).count}
    if c["double_big"]:
        counts[16] = census.double_root_census(16).count
    others = {}
    for n in range(3, c["double_other_hi"] + 1):
        others[n] = len(census.double_root_census(n).repeated_other_than_minus1)
    ok = counts[9] == 2 and counts.get(16, 54) == 54 and not any(others.values())
    return ok, f"(x+1)^2 counts {counts}; orders with another repeated root {[n for n, v in others.items() if v]}"


ALL_REAL_EXPECTED = {2: 3, 3: 7, 4: 10, 5: 15}


def all_real_minima(c: dict) -> tuple[bool, str]:
    got = {D: census.all_real_census(D).n for D in ALL_REAL_EXPECTED}
    return got == ALL_REAL_EXPECTED, f"measured {got}, expected {ALL_REAL_EXPECTED}"


# ---------------------------------------------------------------- 10

def kurtz_construction(c: dict) -> tuple[bool, str]:
    parts = []
    ok = True
    for D, t in ((3, 37), (4, 65)):
        t_used = t
        while True:
            spec = families.RealRootCaterpillarSpec(D, t_used)
            poly = families.real_root_caterpillar_poly(spec)
            good, _ = root_engine.kurtz_condition(poly)
            if good or t_used > 2**12 * t:
                break
            t_used *= 2
        cat = families.make_real_root_caterpillar(spec)
        real_ok, cert = root_engine.all_roots_real(poly)
        order_ok = cat.order == (D - 1) + sum(spec.multiplicities())
        pairs_ok = sum(poly.coeffs) == cat.order * (cat.order - 1) // 2
        ok &= good and real_ok and order_ok and pairs_ok
        parts.append(f"D={D} t={t_used} order={cat.order} kurtz={good} sturm_real={cert.real_root_count}/{cert.degree}")
    return ok, "; ".join(parts)


# ---------------------------------------------------------------- 11

def ratio_bounds(c: dict) -> tuple[bool, str]:
    gv = bv = 0
    strict = 0
    for n in range(3, c["ratio_hi"] + 1):
        r = census.ratio_bound_check(n)
        gv += len(r.good_violations)
        bv += len(r.bad_violations)
        strict += len(r.bad_violations_strict)
    spot_fail = [n for n in range(10, 101) if not all(v for k, v in census.penultimate_spot(n).items() if k.endswith("_ok"))]
    ok = gv == 0 and bv == 0 and strict == 0 and not spot_fail
    return ok, f"good-tree violations {gv}, bad-tree violations {bv} (against 2n-14 alone: {strict}), spot failures {spot_fail}"


# ---------------------------------------------------------------- 12-13

def density_hits(c: dict) -> tuple[bool, str]:
    rng = np.random.default_rng(12)
    targets = rng.uniform(-0.9, -0.1, size=c["real_targets"])
    misses = []
    worst_res = 0.0
    for x in targets:
        try:
            h = density.find_real_root_tree(float(x), 0.01, budget=100_000)
            worst_res = max(worst_res, h.residual)
            if not (h.error < 0.01 and h.residual <= HIT_RESIDUAL):
                misses.append(float(x))
        except Exception:
            misses.append(float(x))
    cmiss = []
    for z in (1 + 1j, -2 + 0.5j, 0.3 - 0.8j):
        try:
            h = density.find_complex_root_tree(z, 0.05)
            worst_res = max(worst_res, h.residual)
            if not (h.error < 0.05 and h.residual <= HIT_RESIDUAL):
                cmiss.append(z)
        except Exception:
            cmiss.append(z)
    return not misses and not cmiss, f"{len(targets)} real targets, misses {misses}; complex misses {cmiss}; worst residual {worst_res:.2e}"


def spider_convergence(c: dict) -> tuple[bool, str]:
    cs = [1, 2, 4, 8, 16, 32]
    d = [density.coefficient_distance_exact((1, 2, 3), 2, s) for s in cs]
    dec = all(d[i + 1] < d[i] for i in range(len(d) - 1))
    scaled_d = [float(x * s) for x, s in zip(d, cs)]
    bounded = max(scaled_d) <= 2 * min(scaled_d)
    return dec and bounded, f"distances {[round(float(x), 5) for x in d]}, c*distance {[round(x, 4) for x in scaled_d]}"


# ---------------------------------------------------------------- 14-15

def ek_containment(c: dict) -> tuple[bool, str]:
    worst = 0.0
    total = 0
    for n in range(3, c["ek_hi"] + 1):
        seen = set()
        for lv in level_sequences(n):
            coeffs = distance_distribution(levels_to_tree(lv)).counts
            if coeffs in seen:
                continue
            seen.add(coeffs)
            ann = root_engine.enestrom_kakeya(coeffs)
            lo, hi = float(ann.r), float(ann.R)
            for z in root_engine.find_roots(coeffs).roots:
                total += 1
                m = abs(z)
                worst = max(worst, lo - m, m - hi)
    return worst <= EK_SLACK, f"{total} roots, worst excursion outside annulus {worst:.3g}"


def resilience_agreement(c: dict) -> tuple[bool, str]:
    rng = np.random.default_rng(2024)
    inside = 0
    cases = c["mc_cases"]
    for i in range(cases):
        n = int(rng.integers(3, 21))
        t = random_tree(n, rng)
        p = float(rng.uniform(0.05, 0.95))
        exact = float(resilience(tree_polynomial(t), p))
        mean, se = resilience_mc(t, p, c["mc_trials"], seed=1000 + i)
        if abs(mean - exact) <= MC_SIGMAS * se:
            inside += 1
    rate = inside / cases
    return rate >= MC_PASS_RATE, f"{inside}/{cases} within {MC_SIGMAS:g} standard errors ({c['mc_trials']} trials each)"


CRITERIA: list[tuple[int, str, Callable[[dict], tuple[bool, str]]]] = [
    (1, "closed forms match generated trees", closed_forms),
    (2, "T_n sign bracket", tn_brackets),
    (3, "T_n' sign bracket", tnp_brackets),
    (4, "T_n'' real roots and modulus bound", tnpp_roots),
    (5, "large-n modulus ordering", large_n_moduli),
    (6, "max-modulus census", max_mod_census),
    (7, "max-imaginary census", max_im_census),
    (8, "double-root census", double_roots),
    (9, "all-real minimal orders", all_real_minima),
    (10, "all-real caterpillar construction", kurtz_construction),
    (11, "coefficient ratio bounds", ratio_bounds),
    (12, "density searches", density_hits),
    (13, "spider coefficient convergence", spider_convergence),
    (14, "Enestrom-Kakeya containment", ek_containment),
    (15, "Monte Carlo resilience agreement", resilience_agreement),
]


def run_criterion(number: int, level: str = "full") -> CriterionResult:
    for num, title, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                ok, msg = fn(_caps(level))
            except Exception as exc:  # report, do not crash the runner
                ok, msg = False, f"raised {type(exc).__name__}: {exc}"
            return CriterionResult(num, title, ok, msg, time.perf_counter() - t0)
    raise KeyError(number)


def run_all(level: str = "fast", echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    out = []
    for num, _, _ in CRITERIA:
        res = run_criterion(num, level)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
