"""Exact Wiener polynomials, evaluation, Wiener index and resilience."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import NotDivisible, ProbOutOfRange
from .tree_core import DistanceDistribution, Tree, distance_distribution


@dataclass(frozen=True)
class WienerPoly:
    """Integer coefficient vector, lowest degree first.

    In full form ``coeffs[i]`` is the number of pairs at distance ``i``; the
    reduced form is the full polynomial divided by ``x``.
    """

    coeffs: tuple[int, ...]
    reduced: bool = False

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return evaluate(self, x)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def times_x(self) -> "WienerPoly":
        return WienerPoly((0,) + self.coeffs, reduced=False)

    def as_reduced(self) -> "WienerPoly":
        return self if self.reduced else reduce(self)


def wiener_polynomial(dd: DistanceDistribution) -> WienerPoly:
    return WienerPoly((0,) + tuple(dd.counts), reduced=False)


def tree_polynomial(t: Tree, reduced: bool = False) -> WienerPoly:
    p = wiener_polynomial(distance_distribution(t))
    return reduce(p) if reduced else p


def reduce(p: WienerPoly) -> WienerPoly:
    """Divide by ``x``."""
    if p.reduced or p.coeffs[0] != 0:
        raise NotDivisible("polynomial has a nonzero constant term (already reduced?)")
    return WienerPoly(p.coeffs[1:] or (0,), reduced=True)


def wiener_index(p: WienerPoly) -> int:
    """Sum of all pairwise distances, i.e. the derivative of the full polynomial at 1."""
    shift = 1 if p.reduced else 0
    return sum((i + shift) * c for i, c in enumerate(p.coeffs))


def to_exact(x):
    """Decimal strings and rationals become Fractions; floats and complexes pass through."""
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x)
    return x


def horner(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def evaluate(p: WienerPoly, x):
    """Horner evaluation; exact for rational ``x`` (including decimal strings)."""
    x = to_exact(x)
    if isinstance(x, Fraction):
        # integer arithmetic on the numerator, single division at the end
        num, den = x.numerator, x.denominator
        acc = 0
        scale = 1
        deg = len(p.coeffs) - 1
        for c in reversed(p.coeffs):
            acc = acc * num + c * scale
            scale *= den
        return Fraction(acc, den**deg)
    if isinstance(x, complex):
        return complex(horner(p.coeffs, x))
    return horner([float(c) for c in p.coeffs], x)


def _check_prob(prob):
    q = to_exact(prob)
    if not (0 <= q <= 1):
        raise ProbOutOfRange(f"probability {prob} is outside [0, 1]")
    return q


def resilience(p: WienerPoly, prob) -> Fraction | float:
    """Expected number of communicating pairs when every edge survives with probability ``prob``."""
    q = _check_prob(prob)
    full = p.times_x() if p.reduced else p
    return evaluate(full, q)


def _bfs_parents(t: Tree) -> tuple[np.ndarray, np.ndarray]:
    order = [0]
    parent = [-1] * t.n
    parent[0] = 0
    for u in order:
        for w in t.adjacency[u]:
            if parent[w] < 0:
                parent[w] = u
                order.append(w)
    return np.asarray(order, dtype=np.int64), np.asarray(parent, dtype=np.int64)


def _mc_chunk(args) -> tuple[int, int]:
    n, order, parent, prob, seed, t0, t1 = args
    m = n - 1
    if t1 <= t0:
        return 0, 0
    stride = 4 * math.ceil(max(m, 1) / 4)
    bitgen = np.random.Philox(key=seed)
    # trial j always consumes the uniforms [j*stride, (j+1)*stride)
    bitgen.advance(t0 * stride // 4)
    rng = np.random.Generator(bitgen)
    total = 0
    total_sq = 0
    step = 4096
    for a in range(t0, t1, step):
        b = min(t1, a + step)
        u = rng.random((b - a, stride))[:, :m]
        alive = u < prob
        top = np.empty((b - a, n), dtype=np.int64)
        top[:, 0] = 0
        # edge k joins order[k+1] to its parent
        for k in range(m):
            v = order[k + 1]
            top[:, v] = np.where(alive[:, k], top[:, parent[v]], v)
        offs = (np.arange(b - a, dtype=np.int64) * n)[:, None]
        sizes = np.bincount((top + offs).ravel(), minlength=(b - a) * n).reshape(b - a, n)
        pairs = (sizes * (sizes - 1) // 2).sum(axis=1)
        total += int(pairs.sum())
        total_sq += int((pairs * pairs).sum())
    return total, total_sq


def resilience_mc(t: Tree, prob, trials: int, seed: int, jobs: int = 1, chunk: int = 25_000):
    """Monte Carlo estimate of the resilience; returns ``(mean, standard error)``.

    Outcomes depend only on ``(seed, trial index)``, so the estimate is the
    same for any ``jobs``/``chunk`` split.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    q = float(_check_prob(prob))
    order, parent = _bfs_parents(t)
    bounds = list(range(0, trials, chunk)) + [trials]
    tasks = [(t.n, order, parent, q, int(seed), bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_mc_chunk, tasks))
    else:
        parts = [_mc_chunk(task) for task in tasks]
    s = sum(p[0] for p in parts)
    ss = sum(p[1] for p in parts)
    mean = s / trials
    if trials == 1:
        return mean, 0.0
    var = Fraction(trials * ss - s * s, trials * (trials - 1))
    return mean, math.sqrt(var / trials)
