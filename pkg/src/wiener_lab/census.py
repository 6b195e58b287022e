"""Exhaustive experiments over every free tree of a given order.

Work is split into chunks of consecutive stream indices. Each finished chunk
is appended to an optional JSON-lines checkpoint (atomic rename), so a run
can be interrupted and resumed, and chunk results are merged in index order
so the final record does not depend on the worker count.
"""
from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, NamedTuple

from .errors import BadRange, CensusInterrupted, NotFoundWithinCap, OrderTooLarge
from .families import FAMILY_MAKERS, closed_form_reduced
from .root_engine import (
    all_roots_real,
    bracket_real_root,
    derivative,
    extended_roots,
    find_roots,
    repeated_root_factor,
    sturm_real_root_count,
    synthetic_divide,
)
from .tree_core import Tree, canonical_code, distance_distribution
from .tree_enum import level_sequences, levels_to_tree
from .wiener_poly import horner

DEFAULT_CHUNK = 1000
TIE_REL = 1e-6
MAX_CENSUS_ORDER = 18
MAX_DOUBLE_ROOT_ORDER = 16
ALL_REAL_CAP = 20


# ---------------------------------------------------------------- records

@dataclass
class CensusRecord:
    n: int
    kind: str
    extremal_code: str
    extremal_value: float
    extremal_root: complex
    extremal_index: int
    extremal_coeffs: tuple[int, ...]
    runner_up_code: str | None
    runner_up_value: float | None
    runner_up_index: int | None
    tie: bool
    certificate: dict | None
    index_range: tuple[int, int]
    wall_time: float = 0.0

    @property
    def gap(self) -> float | None:
        return None if self.runner_up_value is None else self.extremal_value - self.runner_up_value

    def matches(self, t: Tree) -> bool:
        return canonical_code(t).hex() == self.extremal_code

    def to_json(self, include_time: bool = True) -> dict:
        d = asdict(self)
        d["extremal_root"] = [repr(self.extremal_root.real), repr(self.extremal_root.imag)]
        d["extremal_value"] = repr(self.extremal_value)
        d["runner_up_value"] = None if self.runner_up_value is None else repr(self.runner_up_value)
        d["extremal_coeffs"] = [str(c) for c in self.extremal_coeffs]
        d["index_range"] = list(self.index_range)
        if not include_time:
            d.pop("wall_time")
        return d


class DoubleRootResult(NamedTuple):
    count: int
    trees: list
    repeated_other_than_minus1: list


class AllRealResult(NamedTuple):
    D: int
    n: int
    code: str
    coeffs: tuple
    real_root_count: int


@dataclass
class RatioBoundReport:
    n: int
    trees: int
    good_violations: list = field(default_factory=list)
    bad_violations: list = field(default_factory=list)
    bad_violations_strict: list = field(default_factory=list)
    bad_found: list = field(default_factory=list)
    spot: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.good_violations and not self.bad_violations and all(self.spot.values())


# ---------------------------------------------------------------- checkpoints

def _read_lines(path: Path) -> list[dict]:
    if not path.exists():
        return []
    out = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if line:
            out.append(json.loads(line))
    return out


def _write_lines(path: Path, rows: list[dict]) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        for r in rows:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _same_run(row: dict, kind: str, n: int, chunk: int) -> bool:
    return row.get("kind") == kind and row.get("n") == n and row.get("chunk") == chunk


class _Checkpoint:
    def __init__(self, path, kind: str, n: int, chunk: int, resume: bool):
        self.path = Path(path) if path is not None else None
        self.kind, self.n, self.chunk = kind, n, chunk
        self.rows: list[dict] = []
        self.done: dict[int, dict] = {}
        if self.path is None:
            return
        rows = _read_lines(self.path)
        if resume:
            for r in rows:
                if r.get("type") == "chunk" and _same_run(r, kind, n, chunk):
                    self.done[r["start"]] = r["data"]
            self.rows = [r for r in rows if not (r.get("type") == "record" and _same_run(r, kind, n, chunk))]
        else:
            self.rows = [r for r in rows if not _same_run(r, kind, n, chunk)]
            _write_lines(self.path, self.rows)

    def add_chunk(self, start: int, end: int, data: dict) -> None:
        self.done[start] = data
        if self.path is None:
            return
        row = {"type": "chunk", "kind": self.kind, "n": self.n, "chunk": self.chunk, "start": start, "end": end, "data": data}
        self.rows.append(row)
        _write_lines(self.path, self.rows)

    def add_record(self, record: dict) -> None:
        if self.path is None:
            return
        row = {"type": "record", "kind": self.kind, "n": self.n, "chunk": self.chunk, "record": record}
        self.rows.append(row)
        _write_lines(self.path, self.rows)


def _chunks(n: int, chunk: int):
    buf: list[list[int]] = []
    start = 0
    for lv in level_sequences(n):
        buf.append(lv)
        if len(buf) == chunk:
            yield start, buf
            start += len(buf)
            buf = []
    if buf:
        yield start, buf


def _run(kind: str, n: int, worker: Callable, chunk: int, jobs: int, checkpoint, resume: bool, stop_after: int | None):
    """Apply ``worker(start, levels)`` to every chunk; returns ``(results by start, total trees)``."""
    ck = _Checkpoint(checkpoint, kind, n, chunk, resume)
    todo = []
    total = 0
    for start, seqs in _chunks(n, chunk):
        total = start + len(seqs)
        if start not in ck.done:
            todo.append((start, seqs))
    finished = 0

    def stop_check():
        if stop_after is not None and finished >= stop_after:
            raise CensusInterrupted(f"stopped after {finished} new chunks")

    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = {ex.submit(worker, s, q): (s, len(q)) for s, q in todo}
            try:
                for f in as_completed(futs):
                    s, m = futs[f]
                    ck.add_chunk(s, s + m, f.result())
                    finished += 1
                    stop_check()
            except CensusInterrupted:
                for f in futs:
                    f.cancel()
                raise
    else:
        for s, q in todo:
            stop_check()
            ck.add_chunk(s, s + len(q), worker(s, q))
            finished += 1
    return ck, total


# ---------------------------------------------------------------- extremal censuses

def _max_modulus(rep) -> tuple[float, complex]:
    z = rep.max_modulus
    return abs(z), z


def _max_imag(rep) -> tuple[float, complex]:
    z = rep.max_imag()
    return z.imag, z


_METRICS = {"max-mod": _max_modulus, "max-im": _max_imag}
_KEEP = 3


def _extremal_chunk(kind: str, start: int, seqs: list[list[int]]) -> dict:
    metric = _METRICS[kind]
    cache: dict[tuple, tuple[float, complex]] = {}
    top: list[tuple] = []
    for off, lv in enumerate(seqs):
        t = levels_to_tree(lv)
        coeffs = distance_distribution(t).counts
        hit = cache.get(coeffs)
        if hit is None:
            hit = metric(find_roots(coeffs))
            cache[coeffs] = hit
        value, root = hit
        top.append((-value, start + off, coeffs, root, off))
        if len(top) > 4 * _KEEP:
            top.sort(key=lambda e: (e[0], e[1]))
            del top[_KEEP:]
    top.sort(key=lambda e: (e[0], e[1]))
    return {
        "trees": len(seqs),
        "top": [
            {
                "value": repr(-v),
                "index": i,
                "code": canonical_code(levels_to_tree(seqs[off])).hex(),
                "coeffs": list(c),
                "root": [repr(r.real), repr(r.imag)],
            }
            for v, i, c, r, off in top[:_KEEP]
        ],
    }


def _max_mod_chunk(start, seqs):
    return _extremal_chunk("max-mod", start, seqs)


def _max_im_chunk(start, seqs):
    return _extremal_chunk("max-im", start, seqs)


def _precise_value(kind: str, coeffs, dps: int = 50):
    import mpmath

    with mpmath.workdps(dps):
        roots = extended_roots(list(coeffs), dps=dps)
        if kind == "max-mod":
            return max(abs(r) for r in roots)
        return max(mpmath.im(r) for r in roots)


def _certify(kind: str, a: dict, b: dict) -> tuple[dict, dict, dict]:
    """Settle a near-tie between the two best entries; returns (best, second, certificate)."""
    if a["coeffs"] == b["coeffs"]:
        return a, b, {"method": "identical polynomial", "equal": True}
    import mpmath

    va, vb = _precise_value(kind, a["coeffs"]), _precise_value(kind, b["coeffs"])
    with mpmath.workdps(50):
        equal = abs(va - vb) < mpmath.mpf(10) ** -40 * max(1, abs(va))
        cert = {"method": "mpmath 50 digits", "extremal": mpmath.nstr(va, 40), "runner_up": mpmath.nstr(vb, 40), "equal": bool(equal)}
        if vb > va and not equal:
            a, b = b, a
            cert["extremal"], cert["runner_up"] = cert["runner_up"], cert["extremal"]
    return a, b, cert


def _extremal_census(kind: str, worker, n: int, chunk: int, jobs: int, checkpoint, resume: bool, stop_after) -> CensusRecord:
    if not 4 <= n <= MAX_CENSUS_ORDER:
        raise OrderTooLarge(f"census order must be in [4, {MAX_CENSUS_ORDER}]")
    t0 = time.perf_counter()
    ck, total = _run(kind, n, worker, chunk, jobs, checkpoint, resume, stop_after)
    entries = [e for s in sorted(ck.done) for e in ck.done[s]["top"]]
    entries.sort(key=lambda e: (-float(e["value"]), e["index"]))
    best = entries[0]
    second = entries[1] if len(entries) > 1 else None
    tie, cert = False, None
    if second is not None:
        v1, v2 = float(best["value"]), float(second["value"])
        if abs(v1 - v2) < TIE_REL * max(abs(v1), 1e-300):
            tie = True
            best, second, cert = _certify(kind, best, second)
    rec = CensusRecord(
        n=n,
        kind=kind,
        extremal_code=best["code"],
        extremal_value=float(best["value"]),
        extremal_root=complex(float(best["root"][0]), float(best["root"][1])),
        extremal_index=best["index"],
        extremal_coeffs=tuple(best["coeffs"]),
        runner_up_code=second["code"] if second else None,
        runner_up_value=float(second["value"]) if second else None,
        runner_up_index=second["index"] if second else None,
        tie=tie,
        certificate=cert,
        index_range=(0, total),
        wall_time=time.perf_counter() - t0,
    )
    ck.add_record(rec.to_json(include_time=False))
    return rec


def max_modulus_census(n: int, jobs: int = 1, chunk: int = DEFAULT_CHUNK, checkpoint=None, resume: bool = False, stop_after: int | None = None) -> CensusRecord:
    """Tree of order ``n`` whose Wiener roots reach the largest modulus."""
    return _extremal_census("max-mod", _max_mod_chunk, n, chunk, jobs, checkpoint, resume, stop_after)


def max_imaginary_census(n: int, jobs: int = 1, chunk: int = DEFAULT_CHUNK, checkpoint=None, resume: bool = False, stop_after: int | None = None) -> CensusRecord:
    """Tree of order ``n`` with a Wiener root of largest imaginary part."""
    return _extremal_census("max-im", _max_im_chunk, n, chunk, jobs, checkpoint, resume, stop_after)


# ---------------------------------------------------------------- repeated roots

_P = (1 << 61) - 1


def _gcd_degree_mod_p(a: list[int]) -> int:
    """Degree of gcd(a, a') over GF(p); a lower bound on the true repeated part."""
    f = [x % _P for x in a]
    g = [x % _P for x in derivative(a)]

    def strip(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    f, g = strip(f), strip(g)
    while g:
        inv = pow(g[-1], _P - 2, _P)
        while len(f) >= len(g):
            q = f[-1] * inv % _P
            shift = len(f) - len(g)
            for i, c in enumerate(g):
                f[i + shift] = (f[i + shift] - q * c) % _P
            strip(f)
            if not f:
                break
        f, g = g, f
    return len(f) - 1


def _strip_minus_one(a: list[int]) -> tuple[list[int], int]:
    mult = 0
    while len(a) > 1:
        q, r = synthetic_divide(a, -1)
        if r != 0:
            break
        a, mult = q, mult + 1
    return a, mult


def _double_root_chunk(start: int, seqs: list[list[int]]) -> dict:
    div, other = [], []
    cache: dict[tuple, tuple[int, tuple]] = {}
    for off, lv in enumerate(seqs):
        t = levels_to_tree(lv)
        coeffs = distance_distribution(t).counts
        hit = cache.get(coeffs)
        if hit is None:
            rest, mult = _strip_minus_one(list(coeffs))
            factor: tuple = ()
            if len(rest) > 2 and _gcd_degree_mod_p(rest) > 0:
                g = repeated_root_factor(rest)
                if len(g) > 1:
                    factor = g
            hit = (mult, factor)
            cache[coeffs] = hit
        mult, factor = hit
        if mult >= 2 or factor:
            code = canonical_code(t).hex()
            if mult >= 2:
                div.append({"index": start + off, "code": code, "multiplicity": mult})
            if factor:
                other.append({"index": start + off, "code": code, "factor": [str(c) for c in factor]})
    return {"trees": len(seqs), "div": div, "other": other}


def double_root_census(n: int, jobs: int = 1, chunk: int = DEFAULT_CHUNK, checkpoint=None, resume: bool = False, stop_after: int | None = None) -> DoubleRootResult:
    """Trees of order ``n`` with ``(x+1)^2 | W`` plus any with a repeated root other than -1.

    Both tests are exact integer arithmetic: synthetic division by ``x+1``
    and a gcd with the derivative once the ``x+1`` factors are removed.
    """
    if not 3 <= n <= MAX_DOUBLE_ROOT_ORDER:
        raise OrderTooLarge(f"double-root census order must be in [3, {MAX_DOUBLE_ROOT_ORDER}]")
    ck, _ = _run("double-root", n, _double_root_chunk, chunk, jobs, checkpoint, resume, stop_after)
    div = [e for s in sorted(ck.done) for e in ck.done[s]["div"]]
    other = [e for s in sorted(ck.done) for e in ck.done[s]["other"]]
    res = DoubleRootResult(len(div), [e["code"] for e in div], other)
    ck.add_record({"count": res.count, "trees": res.trees, "repeated_other_than_minus1": other})
    return res


# ---------------------------------------------------------------- all-real minima

def all_real_census(D: int, cap: int = ALL_REAL_CAP) -> AllRealResult:
    """Smallest order with a diameter-``D`` tree whose Wiener roots are all real.

    Repeated real roots are accepted. Candidates pass a cheap numeric screen
    before the exact Sturm count decides.
    """
    if D < 1:
        raise BadRange("diameter must be >= 1")
    for n in range(D + 1, cap + 1):
        if n > 22:
            break
        for lv in level_sequences(n):
            h = max(lv)
            if D not in (2 * h - 1, 2 * h):
                continue
            t = levels_to_tree(lv)
            dd = distance_distribution(t)
            if dd.diameter != D:
                continue
            coeffs = dd.counts
            if len(coeffs) > 1:
                rep = find_roots(coeffs)
                if any(abs(z.imag) > 1e-5 * max(1.0, abs(z)) for z in rep.roots):
                    continue
            ok, cert = all_roots_real(coeffs, allow_repeated=True) if len(coeffs) > 1 else (True, None)
            if ok:
                return AllRealResult(D, n, canonical_code(t).hex(), coeffs, cert.real_root_count if cert else 0)
    raise NotFoundWithinCap(f"no all-real tree of diameter {D} with order <= {cap}")


# ---------------------------------------------------------------- coefficient-ratio bounds

def _bad_codes(n: int) -> dict[str, str]:
    out = {}
    for name, make in FAMILY_MAKERS.items():
        if name == "TildeTn":
            continue
        try:
            out[canonical_code(make(n)).hex()] = name
        except ValueError:
            pass
    return out


def penultimate_spot(n: int) -> dict:
    """``d_{D-1}`` of the two diameter-6 exceptional trees, against 2n-14 and 2n-15."""
    a = distance_distribution(FAMILY_MAKERS["Tn"](n))
    b = distance_distribution(FAMILY_MAKERS["TnPrime"](n))
    return {
        "Tn": a[a.diameter - 1],
        "TnPrime": b[b.diameter - 1],
        "Tn_ok": a[a.diameter - 1] == 2 * n - 14,
        "TnPrime_ok": b[b.diameter - 1] == 2 * n - 15,
    }


def ratio_bound_check(n: int) -> RatioBoundReport:
    """Exact check of consecutive coefficient ratios ``d_k / d_{k+1}`` over all trees of order ``n``.

    Good trees must stay below max{(3n-1)/2, 2n-16}. The exceptional trees of
    diameter six are checked against max{(3n-1)/2, 2n-14} and also, recorded
    separately, against 2n-14 alone.
    """
    if not 3 <= n <= 14:
        raise OrderTooLarge("ratio-bound check covers 3 <= n <= 14")
    bad = _bad_codes(n)
    good_bound = max(Fraction(3 * n - 1, 2), Fraction(2 * n - 16))
    bad_bound = max(Fraction(3 * n - 1, 2), Fraction(2 * n - 14))
    strict = Fraction(2 * n - 14)
    rep = RatioBoundReport(n=n, trees=0)
    for idx, lv in enumerate(level_sequences(n)):
        rep.trees += 1
        t = levels_to_tree(lv)
        d = distance_distribution(t).counts
        D = len(d)
        ratios = [Fraction(d[k], d[k + 1]) for k in range(D - 1)]
        code = canonical_code(t).hex()
        name = bad.get(code)
        if name is None:
            for k, r in enumerate(ratios, start=1):
                if r > good_bound:
                    rep.good_violations.append({"index": idx, "k": k, "ratio": str(r), "bound": str(good_bound)})
            continue
        rep.bad_found.append(name)
        if D == 6:
            for k, r in enumerate(ratios, start=1):
                if r > bad_bound:
                    rep.bad_violations.append({"index": idx, "tree": name, "k": k, "ratio": str(r)})
                if r > strict:
                    rep.bad_violations_strict.append({"index": idx, "tree": name, "k": k, "ratio": str(r)})
    if n >= 10:
        s = penultimate_spot(n)
        rep.spot = {"Tn": s["Tn_ok"], "TnPrime": s["TnPrime_ok"]}
    return rep


# ---------------------------------------------------------------- family root brackets

def tn_bracket_scan(n_lo: int, n_hi: int) -> list[dict]:
    """Exact sign brackets and root-modulus bounds for the three exceptional families."""
    if n_lo < 10 or n_hi < n_lo:
        raise BadRange("need 10 <= n_lo <= n_hi")
    rows = []
    for n in range(n_lo, n_hi + 1):
        row: dict = {"n": n}
        p = list(closed_form_reduced("Tn", n).coeffs)
        a, b = -(2 * n - 16), -(2 * n - 15)
        row["W_at_-(2n-16)"] = horner(p, a)
        row["W_at_-(2n-15)"] = horner(p, b)
        row["Tn_signs_ok"] = row["W_at_-(2n-16)"] > 0 > row["W_at_-(2n-15)"]
        if row["Tn_signs_ok"]:
            lo, hi = bracket_real_root(p, b, a)
            root = float((lo + hi) / 2)
            row["Tn_root"] = root
            row["Tn_root_exceeds_2n-16"] = abs(root) > 2 * n - 16
        row["Tn_max_modulus"] = abs(find_roots(p).max_modulus)
        if n >= 13:
            q = list(closed_form_reduced("TnPrime", n).coeffs)
            row["Wp_at_-(2n-17)"] = horner(q, -(2 * n - 17))
            row["Wp_at_-(2n-16)"] = horner(q, -(2 * n - 16))
            row["TnPrime_signs_ok"] = row["Wp_at_-(2n-17)"] > 0 > row["Wp_at_-(2n-16)"]
        if n >= 10:
            q = list(closed_form_reduced("TnPrime", n).coeffs)
            row["TnPrime_max_modulus"] = abs(find_roots(q).max_modulus)
        r = list(closed_form_reduced("TnDoublePrime", n).coeffs)
        cert = sturm_real_root_count(r, hi=0)
        row["TnDoublePrime_negative_real_roots"] = cert.real_root_count
        row["TnDoublePrime_max_modulus"] = abs(find_roots(r).max_modulus)
        row["TnDoublePrime_bound"] = (1 + 1 / math.sqrt(2)) * n - 7
        rows.append(row)
    return rows
