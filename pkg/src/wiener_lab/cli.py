"""``wiener-lab`` command line entry point."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import census, density, families, root_engine
from .errors import BadParam, WienerLabError
from .tree_core import distance_distribution, expand_caterpillar
from .tree_enum import TreeStream
from .tree_io import read_trees, to_graph6
from .wiener_poly import WienerPoly, resilience, resilience_mc, tree_polynomial, wiener_index

FLOAT_DIGITS = 17


@dataclass
class RunConfig:
    command: str
    args: dict = field(default_factory=dict)
    out: str | None = None
    fmt: str = "json"
    jobs: int = 1
    seed: int | None = None
    tol: float = root_engine.DEFAULT_TOL

    def __post_init__(self):
        if self.tol <= 0:
            raise BadParam("tolerance must be positive")
        if self.jobs < 1:
            raise BadParam("jobs must be >= 1")


def _num(x: float) -> str:
    return repr(float(x))


def _cnum(z: complex) -> list[str]:
    return [_num(z.real), _num(z.imag)]


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("WIENER_LAB_JOBS", "1")))
    except ValueError:
        return 1


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from exc


def _family_params(ns) -> dict:
    return {k: v for k, v in (("n", ns.n), ("k", ns.k), ("a", ns.a), ("D", ns.D), ("t", ns.t), ("m", ns.m)) if v is not None}


def _add_family_flags(p, kind_flag: bool):
    if kind_flag:
        p.add_argument("--family", choices=["broom", "spider", "tn", "tnp", "tnpp", "tilde", "cat"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=_int_list)
    p.add_argument("--D", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--m", type=int)


def _need_params(kind: str, params: dict) -> None:
    need = {"broom": ["k", "n"], "spider": ["a", "k"], "cat": ["D", "t"]}.get(kind, ["n"])
    missing = [x for x in need if x not in params]
    if missing:
        raise _Usage(f"family {kind} needs --{' --'.join(missing)}")


class _Usage(Exception):
    pass


def _inputs(ns) -> list[tuple[int | None, int | None, WienerPoly]]:
    """(order, diameter, reduced polynomial) for each tree named on the command line."""
    if getattr(ns, "family", None):
        params = _family_params(ns)
        _need_params(ns.family, params)
        if ns.family == "cat":
            spec = families.RealRootCaterpillarSpec(params["D"], params["t"], params.get("m", 1))
            p = families.real_root_caterpillar_poly(spec)
            return [(families.make_real_root_caterpillar(spec).order, p.degree + 1, p)]
        t = families.family_tree(ns.family, **params)
        dd = distance_distribution(t)
        return [(t.n, dd.diameter, WienerPoly(dd.counts, reduced=True))]
    if not ns.file:
        raise _Usage("give a tree file or --family")
    out = []
    for t in read_trees(ns.file):
        dd = distance_distribution(t)
        out.append((t.n, dd.diameter, WienerPoly(dd.counts, reduced=True)))
    return out


# ---------------------------------------------------------------- poly

def _poly_json(n, diam, p: WienerPoly, reduced: bool) -> dict:
    coeffs = p.coeffs if reduced else (0,) + p.coeffs
    return {"n": n, "diameter": diam, "reduced": reduced, "coeffs": [str(c) for c in coeffs], "wiener_index": str(wiener_index(p))}


def cmd_poly(ns) -> int:
    items = [_poly_json(n, d, p, ns.reduced) for n, d, p in _inputs(ns)]
    if ns.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tree", "power", "coefficient"])
        for i, it in enumerate(items):
            for j, c in enumerate(it["coeffs"]):
                w.writerow([i, j, c])
        sys.stdout.write(buf.getvalue())
    else:
        _emit(items[0] if len(items) == 1 else items)
    return 0


# ---------------------------------------------------------------- roots

def _real_certificates(p: WienerPoly, rep) -> dict:
    cert = root_engine.sturm_real_root_count(p)
    boxes = []
    for r in sorted(set(round(x, 12) for x in rep.real_roots())):
        delta = max(1e-9, 1e-9 * abs(r))
        lo, hi = Fraction(r - delta), Fraction(r + delta)
        try:
            a, b = root_engine.bracket_real_root(p, lo, hi, shrink=Fraction(1, 2**20))
            boxes.append([str(a), str(b)])
        except WienerLabError:
            pass  # even-multiplicity root: no sign change to certify
    return {"sturm_distinct_real": cert.real_root_count, "squarefree_degree": cert.squarefree_part_degree, "brackets": boxes}


def _svg(rep, ann, path: str, show_annulus: bool) -> None:
    size = 800
    reach = max([abs(z) for z in rep.roots] + [1.0] + ([float(ann.R)] if show_annulus and ann else []))
    scale = (size / 2 - 30) / (1.1 * reach)
    cx = cy = size / 2

    def pt(z):
        return cx + z.real * scale, cy - z.imag * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="0" y1="{cy}" x2="{size}" y2="{cy}" stroke="black" stroke-width="1"/>',
        f'<line x1="{cx}" y1="0" x2="{cx}" y2="{size}" stroke="black" stroke-width="1"/>',
        f'<circle cx="{cx}" cy="{cy}" r="{scale:.4f}" fill="none" stroke="gray" stroke-width="1"/>',
    ]
    if show_annulus and ann is not None:
        for rad in (float(ann.r), float(ann.R)):
            parts.append(f'<circle cx="{cx}" cy="{cy}" r="{rad * scale:.4f}" fill="none" stroke="blue" stroke-dasharray="6,4"/>')
    for z in rep.roots:
        x, y = pt(z)
        parts.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="4" fill="red"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_roots(ns) -> int:
    rows = []
    for n, d, p in _inputs(ns):
        if p.degree < 1:
            rows.append({"n": n, "degree": 0, "roots": []})
            continue
        rep = root_engine.find_roots(p, tol=ns.tol)
        try:
            ann = root_engine.enestrom_kakeya(p)
        except WienerLabError:
            ann = None
        item = {
            "n": n,
            "degree": rep.degree,
            "precision": FLOAT_DIGITS,
            "roots": [_cnum(z) for z in rep.roots],
            "residuals": [_num(r) for r in rep.residuals],
            "max_modulus": _cnum(rep.max_modulus),
            "converged": rep.converged,
            "conjugate_paired": rep.conjugate_paired,
        }
        if ann is not None:
            item["annulus"] = [str(ann.r), str(ann.R)]
        if ns.exact_real:
            item["exact_real"] = _real_certificates(p, rep)
        rows.append(item)
        if ns.svg:
            _svg(rep, ann, ns.svg, ns.annulus)
    if ns.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tree", "re", "im", "residual"])
        for i, it in enumerate(rows):
            for z, r in zip(it["roots"], it.get("residuals", [])):
                w.writerow([i, z[0], z[1], r])
        sys.stdout.write(buf.getvalue())
    else:
        _emit(rows[0] if len(rows) == 1 else rows)
    return 0


# ---------------------------------------------------------------- family / enum

def cmd_family(ns) -> int:
    params = _family_params(ns)
    _need_params(ns.kind, params)
    if ns.emit == "graph6":
        if ns.kind == "cat":
            spec = families.RealRootCaterpillarSpec(params["D"], params["t"], params.get("m", 1))
            print(to_graph6(expand_caterpillar(families.make_real_root_caterpillar(spec))))
        else:
            print(to_graph6(families.family_tree(ns.kind, **params)))
        return 0
    ns.family = ns.kind
    ns.file = None
    if ns.emit == "roots":
        ns.tol, ns.exact_real, ns.svg, ns.csv, ns.annulus = root_engine.DEFAULT_TOL, False, None, False, False
        return cmd_roots(ns)
    ns.reduced, ns.csv = True, False
    return cmd_poly(ns)


def cmd_enum(ns) -> int:
    out = sys.stdout
    for t in TreeStream(ns.n, ns.start, ns.end):
        out.write(to_graph6(t) + "\n")
    return 0


# ---------------------------------------------------------------- census

def cmd_census(ns) -> int:
    lo, hi = ns.n_min, ns.n_max if ns.n_max is not None else ns.n_min
    if hi < lo:
        raise _Usage("--n-max must be >= --n-min")
    kw = {"jobs": ns.jobs, "checkpoint": ns.out, "resume": ns.resume, "chunk": ns.chunk}
    rows = []
    if ns.kind == "brackets":
        for r in census.tn_bracket_scan(lo, hi):
            rows.append({k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else (_num(v) if isinstance(v, float) else v)) for k, v in r.items()})
    for n in range(lo, hi + 1) if ns.kind != "brackets" else []:
        if ns.kind == "max-mod":
            rows.append(census.max_modulus_census(n, **kw).to_json(include_time=False))
        elif ns.kind == "max-im":
            rows.append(census.max_imaginary_census(n, **kw).to_json(include_time=False))
        elif ns.kind == "double-root":
            r = census.double_root_census(n, **kw)
            rows.append({"n": n, "count": r.count, "trees": r.trees, "repeated_other_than_minus1": r.repeated_other_than_minus1})
        elif ns.kind == "all-real":
            r = census.all_real_census(n)
            rows.append({"D": r.D, "n": r.n, "code": r.code, "coeffs": [str(c) for c in r.coeffs]})
        elif ns.kind == "ratio-bound":
            r = census.ratio_bound_check(n)
            rows.append({"n": n, "trees": r.trees, "ok": r.ok, "good_violations": r.good_violations, "bad_violations": r.bad_violations,
                         "bad_violations_against_2n-14": r.bad_violations_strict, "spot": r.spot})
    for r in rows:
        print(json.dumps(r, sort_keys=True))
    return 0


# ---------------------------------------------------------------- density / resilience / verify

def cmd_density(ns) -> int:
    if ns.mode == "real":
        if ns.target is None:
            raise _Usage("density real needs --target")
        hit = density.find_real_root_tree(ns.target, ns.eps, budget=ns.budget or 100_000)
    else:
        if ns.re is None or ns.im is None:
            raise _Usage("density complex needs --re and --im")
        hit = density.find_complex_root_tree(complex(ns.re, ns.im), ns.eps, budget=ns.budget or 2_000)
    out = hit.to_json()
    out["precision"] = FLOAT_DIGITS
    _emit(out)
    return 0


def cmd_resilience(ns) -> int:
    rows = []
    for t in read_trees(ns.file):
        exact = resilience(tree_polynomial(t), ns.p)
        item = {"n": t.n, "p": ns.p, "precision": FLOAT_DIGITS}
        if isinstance(exact, Fraction):
            item["exact"] = str(exact)
        item["value"] = _num(float(exact))
        if ns.mc_trials:
            mean, se = resilience_mc(t, ns.p, ns.mc_trials, seed=ns.seed, jobs=ns.jobs)
            item["mc_mean"], item["mc_stderr"], item["mc_trials"], item["seed"] = _num(mean), _num(se), ns.mc_trials, ns.seed
        rows.append(item)
    _emit(rows[0] if len(rows) == 1 else rows)
    return 0


def cmd_verify(ns) -> int:
    from .acceptance import run_all

    results = run_all(ns.level, echo=print)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wiener-lab", description="Wiener polynomials of trees: exact coefficients, roots and censuses.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", help="distance-count polynomial of a tree")
    p.add_argument("file", nargs="?")
    _add_family_flags(p, True)
    p.add_argument("--reduced", action="store_true")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true")
    g.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("roots", help="numeric roots with residuals")
    p.add_argument("file", nargs="?")
    _add_family_flags(p, True)
    p.add_argument("--tol", type=float, default=root_engine.DEFAULT_TOL)
    p.add_argument("--exact-real", action="store_true")
    p.add_argument("--svg")
    p.add_argument("--annulus", action="store_true", help="draw the coefficient-ratio annulus in the SVG")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true")
    g.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("family", help="build a named tree family")
    p.add_argument("kind", choices=["broom", "spider", "tn", "tnp", "tnpp", "tilde", "cat"])
    _add_family_flags(p, False)
    p.add_argument("--emit", choices=["graph6", "poly", "roots"], default="poly")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("enum", help="stream all free trees of order n as graph6")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--end", type=int)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("census", help="exhaustive experiments over all trees of an order")
    p.add_argument("kind", choices=["max-mod", "max-im", "double-root", "all-real", "ratio-bound", "brackets"])
    p.add_argument("--n-min", type=int, required=True, help="lowest order (diameter for all-real)")
    p.add_argument("--n-max", type=int)
    p.add_argument("--out", help="JSON-lines checkpoint file")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--chunk", type=int, default=census.DEFAULT_CHUNK)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("density", help="find a tree with a root near a target")
    p.add_argument("mode", choices=["real", "complex"])
    p.add_argument("--target", type=float)
    p.add_argument("--re", type=float)
    p.add_argument("--im", type=float)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("resilience", help="expected communicating pairs under random edge failure")
    p.add_argument("file")
    p.add_argument("--p", required=True, help="edge survival probability (decimal strings are exact)")
    p.add_argument("--mc-trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=cmd_resilience)

    p = sub.add_parser("verify", help="run the reproduction suite")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    jobs = getattr(ns, "jobs", 1)
    tol = getattr(ns, "tol", root_engine.DEFAULT_TOL)
    try:
        RunConfig(ns.command, vars(ns), getattr(ns, "out", None), jobs=jobs, tol=tol)
        return ns.func(ns)
    except _Usage as exc:
        ap.print_usage(sys.stderr)
        print(f"wiener-lab: error: {exc}", file=sys.stderr)
        return 2
    except (WienerLabError, OSError) as exc:
        print(f"wiener-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
