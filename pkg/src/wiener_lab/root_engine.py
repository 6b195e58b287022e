"""Numeric and exact root analysis of polynomials with real coefficients.

Coefficient vectors are always lowest degree first. Anything exact works on
Python ints/Fractions; the numeric solver is an Aberth-Ehrlich iteration in
double precision (compiled with numba) with an mpmath fallback for
coefficients that do not fit in a double.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _fold
from typing import Sequence

import numpy as np
from numba import njit

from .errors import DegreeTooSmall, NoConvergence, NonPositiveCoefficient, NoSignChange
from .wiener_poly import WienerPoly, to_exact

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 500
PAIRING_TOL = 1e-8

INF = float("inf")


def _coeff_list(p) -> list:
    if isinstance(p, WienerPoly):
        c = list(p.coeffs)
    else:
        c = [x if isinstance(x, (int, float, complex, Fraction)) else to_exact(x) for x in p]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def as_int_poly(p) -> list[int]:
    """Clear denominators of a rational coefficient vector (positive scale factor)."""
    c = [Fraction(x) for x in _coeff_list(p)]
    den = _fold(math.lcm, (x.denominator for x in c), 1)
    return [int(x * den) for x in c]


# ---------------------------------------------------------------- exact helpers

def _strip(a: list) -> list:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def derivative(a: Sequence[int]) -> list[int]:
    if len(a) <= 1:
        return [0]
    return [i * a[i] for i in range(1, len(a))]


def content(a: Sequence[int]) -> int:
    return _fold(math.gcd, (abs(x) for x in a), 0)


def primitive(a: Sequence[int]) -> list[int]:
    """Divide by the positive content; sign is preserved."""
    g = content(a)
    if g == 0:
        return [0]
    return _strip([x // g for x in a])


def prem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b``."""
    db = len(b) - 1
    r = list(a)
    if len(r) - 1 < db:
        return _strip(r)
    lc = b[-1]
    for k in range(len(r) - 1, db - 1, -1):
        coef = r[k]
        r = [lc * x for x in r]
        base = k - db
        for j in range(db + 1):
            r[base + j] -= coef * b[j]
    return _strip(r[:db] if db > 0 else [0])


def poly_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Primitive gcd over the rationals with positive leading coefficient."""
    a = primitive(a)
    b = primitive(b)
    if _is_zero(b):
        g = a
    elif _is_zero(a):
        g = b
    else:
        if len(a) < len(b):
            a, b = b, a
        while not _is_zero(b):
            r = prem(a, b)
            a, b = b, (primitive(r) if not _is_zero(r) else [0])
        g = a
    if g[-1] < 0:
        g = [-x for x in g]
    return primitive(g) if len(g) > 1 else [1]


def exact_quotient(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """``a / b`` over the rationals, rescaled to a primitive integer vector.

    ``b`` must divide ``a`` exactly.
    """
    a = [Fraction(x) for x in a]
    db = len(b) - 1
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] / b[-1]
        q[k - db] = c
        for j in range(db + 1):
            a[k - db + j] -= c * b[j]
    if any(x != 0 for x in a):
        raise ArithmeticError("divisor does not divide the polynomial")
    den = _fold(math.lcm, (x.denominator for x in q), 1)
    return primitive([int(x * den) for x in q])


def synthetic_divide(a: Sequence[int], root: int) -> tuple[list[int], int]:
    """Divide by ``(x - root)``; returns (quotient, remainder) with integer arithmetic."""
    n = len(a) - 1
    q = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = acc * root + a[i]
        q[i - 1] = acc
    rem = acc * root + a[0]
    return q, rem


def sign_at(a: Sequence[int], x) -> int:
    if x == INF:
        return (a[-1] > 0) - (a[-1] < 0)
    if x == -INF:
        s = (a[-1] > 0) - (a[-1] < 0)
        return s if (len(a) - 1) % 2 == 0 else -s
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    acc = 0
    scale = 1
    for c in reversed(a):
        acc = acc * num + c * scale
        scale *= den
    return (acc > 0) - (acc < 0)


def _as_bound(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return x
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "-inf", "infinity", "-infinity"):
        return -INF if x.strip().startswith("-") else INF
    return to_exact(x) if not isinstance(x, float) else Fraction(x)


# ---------------------------------------------------------------- report types

@dataclass(frozen=True)
class RootReport:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    max_modulus: complex
    iterations: int
    converged: bool
    conjugate_paired: bool = True

    @property
    def degree(self) -> int:
        return len(self.roots)

    def real_roots(self, tol: float = 1e-7) -> list[float]:
        return sorted(r.real for r in self.roots if abs(r.imag) < tol)

    def max_imag(self) -> complex:
        return max(self.roots, key=lambda r: (r.imag, -r.real)) if self.roots else 0j


@dataclass(frozen=True)
class Annulus:
    r: Fraction
    R: Fraction

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        m = abs(z)
        return float(self.r) - slack <= m <= float(self.R) + slack


@dataclass(frozen=True)
class SturmCertificate:
    lo: object
    hi: object
    real_root_count: int
    squarefree_part_degree: int
    degree: int = 0


# ---------------------------------------------------------------- numeric solver

@njit(cache=True)
def _initial_guesses(absc):
    """Starting points on circles read off the Newton polygon of ``log|a_i|``."""
    d = absc.shape[0] - 1
    logs = np.full(d + 1, -np.inf)
    hull = np.empty(d + 1, dtype=np.int64)
    h = 0
    for i in range(d + 1):
        if absc[i] <= 0:
            continue
        logs[i] = np.log(absc[i])
        while h >= 2:
            i1 = hull[h - 2]
            i2 = hull[h - 1]
            # keep the upper hull
            if (logs[i2] - logs[i1]) * (i - i1) <= (logs[i] - logs[i1]) * (i2 - i1):
                h -= 1
            else:
                break
        hull[h] = i
        h += 1
    z = np.empty(d, dtype=np.complex128)
    pos = 0
    for k in range(h - 1):
        a = hull[k]
        b = hull[k + 1]
        m = b - a
        u = np.exp((logs[a] - logs[b]) / m)
        for j in range(m):
            ang = 2 * np.pi * j / m + 2 * np.pi * pos / d + 0.7
            z[pos + j] = u * (np.cos(ang) + 1j * np.sin(ang))
        pos += m
    return z


@njit(cache=True)
def _eval_one(c, z):
    """Newton correction p/p' and backward-error residual at ``z``.

    Outside the unit disk the reversed polynomial is used to avoid overflow.
    """
    d = c.shape[0] - 1
    if abs(z) <= 1:
        p = 0j
        dp = 0j
        s = 0.0
        az = abs(z)
        for i in range(d, -1, -1):
            dp = dp * z + p
            p = p * z + c[i]
            s = s * az + abs(c[i])
        ratio = p / dp if dp != 0 else 0j
        return ratio, (abs(p) / s if s > 0 else 0.0)
    y = 1 / z
    ay = abs(y)
    q = 0j
    dq = 0j
    s = 0.0
    for i in range(d + 1):
        dq = dq * y + q
        q = q * y + c[i]
        s = s * ay + abs(c[i])
    den = d * q - y * dq
    ratio = z * q / den if den != 0 else 0j
    return ratio, (abs(q) / s if s > 0 else 0.0)


@njit(cache=True)
def _aberth_one(c, max_iter):
    d = c.shape[0] - 1
    absc = np.abs(c)
    z = _initial_guesses(absc)
    eps = 2.220446049250313e-16
    stop = 4 * d * eps
    active = np.ones(d, dtype=np.bool_)
    resid = np.zeros(d)
    it = 0
    for it in range(1, max_iter + 1):
        any_active = False
        for i in range(d):
            if not active[i]:
                continue
            ratio, r = _eval_one(c, z[i])
            resid[i] = r
            if r <= stop:
                active[i] = False
                continue
            S = 0j
            for j in range(d):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        # coincident iterates (double roots); nudge apart
                        diff = eps * (1 + abs(z[i])) * (1 + 1j)
                    S += 1 / diff
            den = 1 - ratio * S
            w = ratio / den if den != 0 else ratio
            if not (np.isfinite(w.real) and np.isfinite(w.imag)):
                w = 0j
            z[i] -= w
            if abs(w) <= eps * abs(z[i]):
                active[i] = False
            else:
                any_active = True
        if not any_active:
            break
    # Newton polish, kept only where it lowers the residual
    for i in range(d):
        for _ in range(2):
            ratio, r = _eval_one(c, z[i])
            cand = z[i] - ratio
            _, r2 = _eval_one(c, cand)
            if r2 < r:
                z[i] = cand
        _, resid[i] = _eval_one(c, z[i])
    return z, resid, it


def _float_coeffs(c: list) -> np.ndarray | None:
    """Scaled float coefficients, or None if the dynamic range exceeds a double."""
    if all(type(x) is int for x in c):
        if max(abs(x) for x in c).bit_length() <= 1000:
            arr = np.array([float(x) for x in c])
            return arr / np.abs(arr).max()
    if any(isinstance(x, complex) for x in c):
        arr = np.array(c, dtype=complex)
        return arr / np.abs(arr).max()
    fr = [Fraction(x) if not isinstance(x, float) else x for x in c]
    big = max(abs(x) for x in fr)
    out = []
    for x in fr:
        v = float(x / big) if not isinstance(x, float) else x / float(big)
        if x != 0 and v == 0.0:
            return None
        out.append(v)
    return np.array(out, dtype=float)


def _pairing_ok(roots: np.ndarray) -> bool:
    if len(roots) == 0:
        return True
    if not np.all(np.isfinite(roots)):
        return False
    z = roots / max(1.0, float(np.abs(roots).max()))
    upper = z[z.imag > PAIRING_TOL]
    lower = z[z.imag < -PAIRING_TOL].conjugate()
    if len(upper) != len(lower):
        return False
    upper = upper[np.lexsort((upper.imag, upper.real))]
    lower = lower[np.lexsort((lower.imag, lower.real))]
    return bool(np.all(np.abs(upper - lower) <= PAIRING_TOL))


def _make_report(zero_roots: int, z: np.ndarray, resid: np.ndarray, iters: int, tol: float, real_coeffs: bool):
    roots = [0j] * zero_roots + [complex(r) for r in z]
    res = [0.0] * zero_roots + [float(r) for r in resid]
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    roots = [roots[i] for i in order]
    res = [res[i] for i in order]
    mm = max(roots, key=abs) if roots else 0j
    arr = np.array(roots, dtype=complex)
    return RootReport(
        roots=tuple(roots),
        residuals=tuple(res),
        max_modulus=mm,
        iterations=iters,
        converged=all(r <= tol for r in res),
        conjugate_paired=_pairing_ok(arr) if real_coeffs else True,
    )


def _split_zero_roots(c: list) -> tuple[int, list]:
    k = 0
    while k < len(c) - 1 and c[k] == 0:
        k += 1
    return k, c[k:]


def extended_roots(p, dps: int = 60):
    """Roots at ``dps`` decimal digits through mpmath (used to settle near-ties)."""
    import mpmath

    c = _coeff_list(p)
    zeros, c = _split_zero_roots(c)
    with mpmath.workdps(dps):
        if len(c) == 1:
            found = []
        else:
            mp_c = [mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpmathify(x) for x in c]
            try:
                found = mpmath.polyroots(mp_c[::-1], maxsteps=400, extraprec=4 * dps)
            except mpmath.libmp.NoConvergence:
                found = mpmath.polyroots(mp_c[::-1], maxsteps=4000, extraprec=16 * dps)
        return [mpmath.mpc(0)] * zeros + list(found)


def _solve(zeros: int, rest: list, tol: float, max_iter: int) -> RootReport:
    if len(rest) == 1:
        return _make_report(zeros, np.zeros(0, complex), np.zeros(0), 0, tol, True)
    fc = _float_coeffs(rest)
    if fc is None:
        return _mp_report((zeros, rest), tol)
    z, resid, iters = _aberth_one((fc / fc[-1]).astype(np.complex128), max_iter)
    realc = not any(isinstance(x, complex) for x in rest)
    return _make_report(zeros, z, resid, iters, tol, realc)


def find_roots(p, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, strict: bool = False) -> RootReport:
    """All complex roots with per-root relative residuals ``|p(z)| / sum |a_i||z|^i``.

    ``converged`` is False when some residual is above ``tol`` after
    ``max_iter`` sweeps; with ``strict=True`` that raises NoConvergence
    carrying the partial report instead.
    """
    c = _coeff_list(p)
    if len(c) < 2:
        raise DegreeTooSmall("root finding needs degree >= 1")
    zeros, rest = _split_zero_roots(c)
    rep = _solve(zeros, rest, tol, max_iter)
    if strict and not rep.converged:
        raise NoConvergence("root iteration did not reach the residual tolerance", rep)
    return rep


def find_roots_batch(polys, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, strict: bool = False) -> list[RootReport]:
    return [find_roots(p, tol=tol, max_iter=max_iter, strict=strict) for p in polys]


def _mp_report(prep, tol: float) -> RootReport:
    import mpmath

    zeros, rest = prep
    found = extended_roots(rest, dps=max(60, 2 * max(len(str(abs(int(x)))) for x in as_int_poly(rest))))
    ints = as_int_poly(rest)
    resid = []
    with mpmath.workdps(60):
        for r in found:
            num = abs(mpmath.polyval([mpmath.mpf(x) for x in ints[::-1]], r))
            den = mpmath.polyval([abs(mpmath.mpf(x)) for x in ints[::-1]], abs(r))
            resid.append(float(num / den) if den else 0.0)
    z = np.array([complex(r) for r in found], dtype=complex)
    return _make_report(zeros, z, np.array(resid), 0, tol, True)


def relative_residual(p, z: complex) -> float:
    """``|p(z)| / sum |a_i| |z|^i``, evaluated without overflow."""
    c = _coeff_list(p)
    fc = _float_coeffs(c)
    if fc is None:
        import mpmath

        ints = as_int_poly(c)
        with mpmath.workdps(60):
            z = mpmath.mpc(z)
            num = abs(mpmath.polyval([mpmath.mpf(x) for x in ints[::-1]], z))
            den = mpmath.polyval([abs(mpmath.mpf(x)) for x in ints[::-1]], abs(z))
            return float(num / den)
    _, r = _eval_one(fc.astype(np.complex128), complex(z))
    return float(r)


# ---------------------------------------------------------------- exact analyses

def enestrom_kakeya(p) -> Annulus:
    """Annulus ``min a_i/a_{i+1} <= |z| <= max a_i/a_{i+1}`` for positive coefficients."""
    c = [Fraction(x) for x in _coeff_list(p)]
    if len(c) < 2:
        raise DegreeTooSmall("need degree >= 1")
    if any(x <= 0 for x in c):
        raise NonPositiveCoefficient("Enestrom-Kakeya needs strictly positive coefficients")
    ratios = [c[i] / c[i + 1] for i in range(len(c) - 1)]
    return Annulus(min(ratios), max(ratios))


def sturm_chain(a: Sequence[int]) -> list[list[int]]:
    chain = [primitive(a), primitive(derivative(a))]
    while len(chain[-1]) > 1:
        r = prem(chain[-2], chain[-1])
        if _is_zero(r):
            break
        lc = chain[-1][-1]
        e = len(chain[-2]) - len(chain[-1]) + 1
        # prem = lc^e * rem; the next member must be a positive multiple of -rem
        s = -1 if (lc > 0 or e % 2 == 0) else 1
        chain.append(primitive([s * x for x in r]))
    return chain


def _variations(chain, x) -> int:
    signs = [sign_at(f, x) for f in chain]
    signs = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def squarefree_part(a: Sequence[int]) -> list[int]:
    a = primitive(a)
    if len(a) <= 2:
        return a
    g = poly_gcd(a, derivative(a))
    if len(g) == 1:
        return a
    return exact_quotient(a, g)


def sturm_real_root_count(p, lo=-INF, hi=INF) -> SturmCertificate:
    """Number of distinct real roots in ``(lo, hi]``."""
    a = as_int_poly(p)
    lo_b = -INF if lo is None else _as_bound(lo)
    hi_b = INF if hi is None else _as_bound(hi)
    if not lo_b < hi_b:
        raise ValueError("need lo < hi")
    sq = squarefree_part(a)
    if len(sq) == 1:
        return SturmCertificate(lo_b, hi_b, 0, 0, len(a) - 1)
    chain = sturm_chain(sq)
    count = _variations(chain, lo_b) - _variations(chain, hi_b)
    return SturmCertificate(lo_b, hi_b, count, len(sq) - 1, len(a) - 1)


def all_roots_real(p, allow_repeated: bool = False) -> tuple[bool, SturmCertificate]:
    """True iff every root is real (and, unless ``allow_repeated``, simple)."""
    cert = sturm_real_root_count(p)
    if len(_coeff_list(p)) < 2:
        raise DegreeTooSmall("need degree >= 1")
    if allow_repeated:
        ok = cert.real_root_count == cert.squarefree_part_degree
    else:
        ok = cert.real_root_count == cert.squarefree_part_degree == cert.degree
    return ok, cert


def kurtz_condition(p) -> tuple[bool, int | None]:
    """``a_i^2 - 4 a_{i-1} a_{i+1} > 0`` for every interior index; returns (ok, first failing i)."""
    a = as_int_poly(p)
    if len(a) < 3:
        raise DegreeTooSmall("Kurtz criterion needs degree >= 2")
    if any(x <= 0 for x in a):
        raise NonPositiveCoefficient("Kurtz criterion needs positive coefficients")
    for i in range(1, len(a) - 1):
        if a[i] * a[i] - 4 * a[i - 1] * a[i + 1] <= 0:
            return False, i
    return True, None


def kurtz_gaps(p) -> list[int]:
    a = as_int_poly(p)
    return [a[i] * a[i] - 4 * a[i - 1] * a[i + 1] for i in range(1, len(a) - 1)]


def repeated_root_factor(p) -> tuple[int, ...]:
    """``gcd(p, p')`` as a primitive integer vector; degree 0 means square-free."""
    a = as_int_poly(p)
    if len(a) < 2:
        raise DegreeTooSmall("need degree >= 1")
    return tuple(poly_gcd(a, derivative(a)))


def bracket_real_root(p, lo, hi, shrink: Fraction = Fraction(1, 2**50)) -> tuple[Fraction, Fraction]:
    """Bisect a sign change with exact rational evaluation.

    Returns ``(a, b)`` with ``p(a)`` and ``p(b)`` of opposite sign (or equal
    endpoints at an exact root) and ``|b - a| <= shrink * |hi - lo|``.
    """
    a = as_int_poly(p)
    lo, hi = Fraction(to_exact(lo)), Fraction(to_exact(hi))
    if lo > hi:
        lo, hi = hi, lo
    s_lo, s_hi = sign_at(a, lo), sign_at(a, hi)
    if s_lo == 0:
        return lo, lo
    if s_hi == 0:
        return hi, hi
    if s_lo * s_hi > 0:
        raise NoSignChange(f"no sign change on [{lo}, {hi}]")
    target = (hi - lo) * shrink
    while hi - lo > target:
        mid = (lo + hi) / 2
        s = sign_at(a, mid)
        if s == 0:
            return mid, mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi
