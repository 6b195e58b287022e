"""Constructive searches for trees with a Wiener root near a prescribed point."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BadParam, BudgetExhausted, DomainError, TargetZero
from .families import (
    broom_parts,
    broom_reduced_poly,
    limit_polynomial,
    normalized_M,
    scaled,
    spider_distribution,
    spider_ratio,
)
from .root_engine import (
    RootReport,
    bracket_real_root,
    enestrom_kakeya,
    find_roots,
    relative_residual,
    sign_at,
)
from .wiener_poly import WienerPoly

HIT_RESIDUAL = 1e-8


@dataclass(frozen=True)
class BroomRootParts:
    R: float
    S: float
    n_value: float


@dataclass
class DensityHit:
    family: dict
    achieved_root: complex
    target: complex
    error: float
    residual: float
    certificate: RootReport | None = None
    evaluations: int = 0
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "target": [repr(self.target.real), repr(self.target.imag)],
            "achieved_root": [repr(self.achieved_root.real), repr(self.achieved_root.imag)],
            "error": repr(self.error),
            "residual": repr(self.residual),
            "evaluations": self.evaluations,
            "notes": list(self.notes),
        }


def n_of_x_k(x: float, k: int) -> BroomRootParts:
    """Real leaf count at which the broom with a k-edge handle has ``x`` as a root."""
    if not -1 < x < 0:
        raise DomainError("n(x, k) is defined for x in (-1, 0)")
    if k < 1:
        raise DomainError("k must be >= 1")
    R, S = broom_parts(x, k)
    n = (-R - math.sqrt(R * R - 2 * x * S)) / x
    return BroomRootParts(R, S, n)


def _hit_from_bracket(poly: WienerPoly, lo: Fraction, hi: Fraction, target: float, family: dict, evals: int) -> DensityHit:
    a, b = bracket_real_root(poly, lo, hi)
    root = float((a + b) / 2)
    rep = find_roots(poly)
    return DensityHit(
        family=family,
        achieved_root=complex(root, 0.0),
        target=complex(target),
        error=abs(root - target),
        residual=relative_residual(poly, complex(root)),
        certificate=rep,
        evaluations=evals,
        notes=[f"sign change certified on [{float(a)!r}, {float(b)!r}]"],
    )


def _star_hit(eps: float) -> DensityHit:
    # star with m leaves has the single root -2/(m-1)
    m = max(3, math.floor(2 / eps) + 2)
    poly = broom_reduced_poly(1, m - 1)
    root = -2 / (m - 1)
    return DensityHit(
        family={"kind": "broom", "k": 1, "n": m - 1},
        achieved_root=complex(root, 0.0),
        target=0j,
        error=abs(root),
        residual=relative_residual(poly, complex(root)),
        certificate=find_roots(poly),
        evaluations=1,
        notes=[f"star with {m} leaves"],
    )


def find_real_root_tree(target: float, eps: float, budget: int = 100_000) -> DensityHit:
    """Broom with a real Wiener root within ``eps`` of ``target``.

    In (-1, 0) handles k = 1, 2, ... are scanned and, for each, the integer
    leaf counts near ``n(x, k)`` over the window are tested for an exact
    sign change. For targets <= -1 the (k, n) grid is scanned in order with
    Enestrom-Kakeya pruning; that branch is best effort only.
    ``budget`` counts exact polynomial evaluations.
    """
    target = float(target)
    if eps <= 0:
        raise BadParam("eps must be positive")
    if target > 0:
        raise DomainError("real Wiener roots of trees are never positive")
    if target == 0:
        return _star_hit(eps)
    w = 0.999 * eps
    lo = Fraction(target - w)
    hi = Fraction(min(target + w, target / 2 if target > -2 * w else target + w))
    evals = 0
    best: DensityHit | None = None
    if -1 < target < 0:
        k = 0
        while evals < budget:
            k += 1
            samples = []
            for i in range(9):
                x = float(lo + (hi - lo) * Fraction(i, 8))
                if -1 < x < 0:
                    samples.append(n_of_x_k(x, k).n_value)
            if not samples:
                break
            for N in range(max(1, math.floor(min(samples)) - 1), math.ceil(max(samples)) + 2):
                poly = broom_reduced_poly(k, N)
                s_lo, s_hi = sign_at(poly.coeffs, lo), sign_at(poly.coeffs, hi)
                evals += 2
                if s_lo * s_hi <= 0:
                    return _hit_from_bracket(poly, lo, hi, target, {"kind": "broom", "k": k, "n": N}, evals)
                if evals >= budget:
                    break
        raise BudgetExhausted(f"no broom root within {eps} of {target} after {evals} evaluations", best)
    # target <= -1: plain grid, pruned by the coefficient-ratio annulus
    k = 0
    while evals < budget:
        k += 1
        for N in range(1, 4 * k + 64):
            poly = broom_reduced_poly(k, N)
            ann = enestrom_kakeya(poly)
            if not (float(ann.r) - eps <= -target <= float(ann.R) + eps):
                continue
            s_lo, s_hi = sign_at(poly.coeffs, lo), sign_at(poly.coeffs, hi)
            evals += 2
            if s_lo * s_hi <= 0:
                return _hit_from_bracket(poly, lo, hi, target, {"kind": "broom", "k": k, "n": N}, evals)
            rep = find_roots(poly)
            evals += 1
            near = min(rep.roots, key=lambda z: abs(z - target))
            cand = DensityHit({"kind": "broom", "k": k, "n": N}, near, complex(target), abs(near - target),
                              relative_residual(poly, near), rep, evals)
            if best is None or cand.error < best.error:
                best = cand
            if evals >= budget:
                break
    raise BudgetExhausted(f"no broom root within {eps} of {target} after {evals} evaluations", best)


def _two_value_sequences(r_star: float, max_len: int = 400):
    """Integer sequences (1,...,1,M) whose ratio R(a) is closest to ``r_star``, best first."""
    out = []
    for L in range(1, max_len + 1):
        # R(a) = (L + M^2) / (L(L-1) + 2LM); solve for real M
        disc = (L * r_star) ** 2 - L + r_star * L * (L - 1)
        if disc < 0:
            continue
        m_real = L * r_star + math.sqrt(disc)
        for M in {max(1, math.floor(m_real)), max(1, math.ceil(m_real))}:
            a = (1,) * L + (M,)
            if len(a) < 2:
                continue
            rel = abs(float(spider_ratio(a)) / r_star - 1)
            out.append((rel, len(a), M, a))
        if L * r_star > 4 and L > 2:
            break
    out.sort()
    return [item[3] for item in out[:3]]


def find_complex_root_tree(target: complex, eps: float, budget: int = 2_000, max_k: int = 64, max_doublings: int = 40) -> DensityHit:
    """Spider star with a Wiener root within ``eps`` of a complex ``target``.

    For each arm length k whose limit-root angles (2j+1)pi/(2k) come within
    ``eps / (2|target|)`` of the target's argument, a two-value leaf sequence
    with R(a) close to ``|target|^(2k)`` is chosen and scaled by 1, 2, 4, ...
    until a computed root lands within ``eps``. ``budget`` counts root solves.
    """
    target = complex(target)
    if target == 0:
        raise TargetZero("use find_real_root_tree(0, eps) for the origin")
    if eps <= 0:
        raise BadParam("eps must be positive")
    if target.imag == 0 and target.real < 0:
        return find_real_root_tree(target.real, eps)
    flip = target.imag < 0
    goal = target.conjugate() if flip else target
    mod, arg = abs(goal), cmath.phase(goal)
    solves = 0
    best: DensityHit | None = None
    notes = []
    for k in range(1, max_k + 1):
        angles = [(2 * j + 1) * math.pi / (2 * k) for j in range(k)]
        theta = min(angles, key=lambda a: abs(a - arg))
        if abs(theta - arg) > eps / (2 * mod):
            continue
        log10_r = 2 * k * math.log10(mod)
        if abs(log10_r) > 300:
            notes.append(f"k={k}: |target|^(2k) = 1e{log10_r:.0f} is outside double range")
            raise BudgetExhausted(f"required ratio 1e{log10_r:.0f} at k={k} is not representable", best)
        r_star = 10**log10_r
        for a in _two_value_sequences(r_star):
            limit_root = cmath.rect(float(spider_ratio(a)) ** (1 / (2 * k)), theta)
            if abs(limit_root - goal) > 0.9 * eps:
                continue
            c = 1
            for _ in range(max_doublings):
                if solves >= budget:
                    raise BudgetExhausted(f"no spider root within {eps} of {target} after {solves} solves", best)
                ca = scaled(a, c)
                poly = WienerPoly(spider_distribution(ca, k), reduced=True)
                rep = find_roots(poly)
                solves += 1
                near = min(rep.roots, key=lambda z: abs(z - goal))
                cand = DensityHit(
                    family={"kind": "spider", "k": k, "a": list(a), "c": c},
                    achieved_root=near.conjugate() if flip else near,
                    target=target,
                    error=abs(near - goal),
                    residual=relative_residual(poly, near),
                    certificate=rep,
                    evaluations=solves,
                    notes=notes + [f"limit root {limit_root:.6g}, R(a) = {spider_ratio(a)}"],
                )
                if best is None or cand.error < best.error:
                    best = cand
                if cand.error < eps and cand.residual <= HIT_RESIDUAL:
                    return cand
                c *= 2
    raise BudgetExhausted(f"no spider root within {eps} of {target} for k <= {max_k}", best)


def coefficient_distance(a: Sequence[int], k: int, c: int) -> float:
    """Max-norm distance between the normalized spider polynomial for ``c*a`` and its limit."""
    if c < 1:
        raise BadParam("scale must be >= 1")
    m = normalized_M(scaled(a, c), k)
    lim = limit_polynomial(a, k)
    return float(max(abs(x - y) for x, y in zip(m, lim)))


def coefficient_distance_exact(a: Sequence[int], k: int, c: int) -> Fraction:
    m = normalized_M(scaled(a, c), k)
    lim = limit_polynomial(a, k)
    return max(abs(x - y) for x, y in zip(m, lim))
