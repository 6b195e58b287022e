"""Generators for the extremal and constructive tree families, with closed-form oracles.

Every generator returns an explicit :class:`Tree` except the real-root
caterpillar, whose orders run into the hundreds of thousands and which is
returned as a :class:`WeightedCaterpillar`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import BadParam
from .tree_core import Tree, WeightedCaterpillar, build_tree, caterpillar_distribution, distance_distribution
from .wiener_poly import WienerPoly, wiener_polynomial

FAMILY_MIN_ORDER = {"Tn": 9, "TnPrime": 10, "TnDoublePrime": 6, "TildeTn": 8}


def _need(cond: bool, msg: str):
    if not cond:
        raise BadParam(msg)


def _path_edges(length: int, start: int = 0) -> list[tuple[int, int]]:
    return [(start + i, start + i + 1) for i in range(length - 1)]


def _attach_leaves(edges: list, hub: int, count: int, next_label: int) -> int:
    for _ in range(count):
        edges.append((hub, next_label))
        next_label += 1
    return next_label


# ---------------------------------------------------------------- brooms

def make_broom(k: int, n_leaves: int) -> Tree:
    """Path with ``k`` edges and ``n_leaves`` pendant leaves on its last vertex."""
    _need(k >= 1 and n_leaves >= 1, "broom needs k >= 1 and n_leaves >= 1")
    edges = _path_edges(k + 1)
    end = _attach_leaves(edges, k, n_leaves, k + 1)
    return build_tree(edges, end)


def broom_reduced_poly(k: int, n: int) -> WienerPoly:
    """Reduced Wiener polynomial of the broom, from direct pair counting.

    Distance 1: the k+n edges. Distance 2: C(n,2) leaf pairs, n leaves to the
    neighbour of the hub, k-1 path pairs. Distance l in 3..k+1: n leaf-path
    pairs plus k+1-l path pairs.
    """
    _need(k >= 1 and n >= 1, "broom needs k >= 1 and n >= 1")
    coeffs = [k + n, comb(n, 2) + n + k - 1]
    coeffs += [n + k + 1 - dist for dist in range(3, k + 2)]
    return WienerPoly(tuple(coeffs), reduced=True)


def broom_poly_in_n(k: int, x: float, n: float) -> float:
    """The broom's reduced polynomial at ``x`` as a quadratic in a real leaf count ``n``."""
    R, S = broom_parts(x, k)
    return (x / 2) * n * n + R * n + S


def broom_parts(x, k: int):
    R = 1 + x / 2 + sum(x**j for j in range(2, k + 1))
    S = sum((k - j) * x**j for j in range(k))
    return R, S


# ---------------------------------------------------------------- spider stars

def make_spider_star(a: Sequence[int], k: int) -> Tree:
    """Center with ``len(a)`` arms of ``k`` edges; the hub of arm i carries ``a[i]`` leaves."""
    _need(len(a) >= 2, "spider needs at least two arms")
    _need(k >= 1 and all(int(x) == x and x >= 1 for x in a), "spider needs k >= 1 and a_i >= 1")
    edges = []
    nxt = 1
    for ai in a:
        prev = 0
        for _ in range(k):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        nxt = _attach_leaves(edges, prev, int(ai), nxt)
    return build_tree(edges, nxt)


def spider_distribution(a: Sequence[int], k: int) -> tuple[int, ...]:
    """Exact distance counts of the spider star by arm-pair convolution.

    Works for multiplicities far beyond what an explicit tree could hold.
    Each arm is a path of k vertices at depths 1..k plus a_i leaves at depth
    k+1; the center sits at depth 0.
    """
    _need(len(a) >= 2 and k >= 1 and all(x >= 1 for x in a), "bad spider parameters")
    arms = [[1] * k + [int(x)] for x in a]
    D = 2 * k + 2
    counts = [0] * (D + 1)
    for arm in arms:
        # center to arm vertices
        for depth, mult in enumerate(arm, start=1):
            counts[depth] += mult
        # within one arm: path vertices j<l at depths, and leaves
        for i in range(k):
            for j in range(i + 1, k + 1):
                counts[j - i] += arm[i] * arm[j]
        counts[2] += comb(arm[k], 2)
    for x in range(len(arms)):
        for y in range(x + 1, len(arms)):
            for i, mi in enumerate(arms[x], start=1):
                for j, mj in enumerate(arms[y], start=1):
                    counts[i + j] += mi * mj
    return tuple(counts[1:])


def spider_ratio(a: Sequence[int]) -> Fraction:
    """``sum a_i^2 / (2 sum_{i<j} a_i a_j)``."""
    _need(len(a) >= 2 and all(x > 0 for x in a), "ratio needs at least two positive entries")
    s = sum(a)
    sq = sum(x * x for x in a)
    pairs = (s * s - sq) // 2
    return Fraction(sq, 2 * pairs)


def normalized_M(a: Sequence[int], k: int) -> tuple[Fraction, ...]:
    """Reduced spider polynomial divided by its leading coefficient (the far leaf pairs)."""
    counts = spider_distribution(a, k)
    lead = counts[-1]
    return tuple(Fraction(c, lead) for c in counts)


def limit_polynomial(a: Sequence[int], k: int) -> tuple[Fraction, ...]:
    """``x^(2k+1) + R(a) x`` as a coefficient vector."""
    _need(k >= 1, "k must be >= 1")
    c = [Fraction(0)] * (2 * k + 2)
    c[1] = spider_ratio(a)
    c[-1] = Fraction(1)
    return tuple(c)


def scaled(a: Sequence[int], c: int) -> tuple[int, ...]:
    return tuple(c * x for x in a)


# ---------------------------------------------------------------- extremal families

def make_Tn(n: int) -> Tree:
    """Path on 7 vertices, a hub on the middle vertex, n-8 leaves on the hub."""
    _need(n >= FAMILY_MIN_ORDER["Tn"], "T_n needs n >= 9")
    edges = _path_edges(7)
    edges.append((3, 7))
    end = _attach_leaves(edges, 7, n - 8, 8)
    return build_tree(edges, end)


def make_Tn_prime(n: int) -> Tree:
    """T_n with n-9 hub leaves plus a pendant on the path vertex next to the middle."""
    _need(n >= FAMILY_MIN_ORDER["TnPrime"], "T_n' needs n >= 10")
    edges = _path_edges(7)
    edges.append((3, 7))
    edges.append((4, 8))
    end = _attach_leaves(edges, 7, n - 9, 9)
    return build_tree(edges, end)


def make_Tn_dprime(n: int) -> Tree:
    """Path on 5 vertices with n-5 leaves on the middle vertex."""
    _need(n >= FAMILY_MIN_ORDER["TnDoublePrime"], "T_n'' needs n >= 6")
    edges = _path_edges(5)
    end = _attach_leaves(edges, 2, n - 5, 5)
    return build_tree(edges, end)


def make_tilde_Tn(n: int) -> Tree:
    """Path on 7 vertices with n-7 leaves on the middle vertex."""
    _need(n >= FAMILY_MIN_ORDER["TildeTn"], "tilde T_n needs n >= 8")
    edges = _path_edges(7)
    end = _attach_leaves(edges, 3, n - 7, 7)
    return build_tree(edges, end)


FAMILY_MAKERS = {
    "Tn": make_Tn,
    "TnPrime": make_Tn_prime,
    "TnDoublePrime": make_Tn_dprime,
    "TildeTn": make_tilde_Tn,
}


def closed_form_reduced(kind: str, n: int) -> WienerPoly:
    """Displayed reduced polynomials of T_n, T_n' and T_n''."""
    if kind == "Tn":
        _need(n >= 9, "T_n needs n >= 9")
        c = (n - 1, (n * n - 15 * n + 70) // 2, 2 * n - 10, 2 * n - 11, 2 * n - 14, 1)
    elif kind == "TnPrime":
        _need(n >= 10, "T_n' needs n >= 10")
        c = (n - 1, (n * n - 17 * n + 90) // 2, 2 * n - 9, 3 * n - 21, 2 * n - 15, 1)
    elif kind == "TnDoublePrime":
        _need(n >= 6, "T_n'' needs n >= 6")
        c = (n - 1, (n * n - 7 * n + 16) // 2, 2 * n - 8, 1)
    else:
        raise BadParam(f"no closed form for {kind!r}")
    return WienerPoly(c, reduced=True)


def pendant_extension_trees(n: int) -> tuple[Tree, Tree, Tree]:
    """T''_{n-1} plus one leaf: on a second path vertex, on a middle leaf, on a path end."""
    _need(n >= 7, "needs n >= 7")
    base = make_Tn_dprime(n - 1)
    # labels: path 0..4, middle 2, middle leaves 5..n-2
    on_second = build_tree(base.edges + [(1, n - 1)], n)
    on_leaf = build_tree(base.edges + [(5, n - 1)], n)
    on_end = build_tree(base.edges + [(4, n - 1)], n)
    return on_second, on_leaf, on_end


def pendant_extension_polys(n: int) -> tuple[WienerPoly, WienerPoly, WienerPoly]:
    """Full-form polynomials of the three :func:`pendant_extension_trees`, from their closed forms."""
    _need(n >= 7, "needs n >= 7")
    first = (0, n - 1, (n * n - 9 * n + 28) // 2, 3 * n - 15, 2)
    second = (0, n - 1, (n * n - 9 * n + 26) // 2, 3 * n - 15, 3)
    third = (0, n - 1, (n * n - 9 * n + 26) // 2, 2 * n - 9, n - 4, 1)
    return WienerPoly(first), WienerPoly(second), WienerPoly(third)


# ---------------------------------------------------------------- all-real caterpillar

@dataclass(frozen=True)
class RealRootCaterpillarSpec:
    D: int
    t: int
    m: int = 1

    def __post_init__(self):
        _need(self.D >= 3, "diameter must be >= 3")
        _need(self.t > 4 * self.D * self.D, f"t must exceed 4D^2 = {4 * self.D * self.D}")
        _need(self.m >= 1, "scale multiplier must be >= 1")

    @property
    def n(self) -> int:
        return self.m * self.t ** ((self.D - 1) * (self.D - 2) // 2)

    def multiplicities(self) -> tuple[int, ...]:
        out = []
        for i in range(1, self.D):
            q, r = divmod(self.n, self.t ** (i * (i - 1) // 2))
            _need(r == 0, "leaf multiplicity is not an integer")
            out.append(q)
        return tuple(out)


def make_real_root_caterpillar(spec: RealRootCaterpillarSpec) -> WeightedCaterpillar:
    """Spine of D-1 vertices; spine vertex i carries n / t^(i(i-1)/2) leaves."""
    return WeightedCaterpillar(spec.multiplicities())


def real_root_caterpillar_poly(spec: RealRootCaterpillarSpec) -> WienerPoly:
    return wiener_polynomial(caterpillar_distribution(make_real_root_caterpillar(spec))).as_reduced()


def leading_constants(spec: RealRootCaterpillarSpec) -> list[Fraction]:
    """Limits of ``d_i / n^2`` for i = 2..D.

    For i >= 3 this is ``sum_j a_j a_{j+i-2}``. Distance-2 leaf pairs inside
    one group number C(a_j n, 2), so the i = 2 rate is half of ``sum a_j^2``.
    """
    a = [Fraction(1, spec.t ** (i * (i - 1) // 2)) for i in range(1, spec.D)]
    out = []
    for i in range(2, spec.D + 1):
        c = sum(a[j] * a[j + i - 2] for j in range(spec.D - i + 1))
        out.append(c / 2 if i == 2 else c)
    return out


# ---------------------------------------------------------------- CLI lookup

def family_tree(kind: str, **params) -> Tree:
    kind = kind.lower()
    if kind == "broom":
        return make_broom(params["k"], params["n"])
    if kind == "spider":
        return make_spider_star(params["a"], params["k"])
    table = {"tn": "Tn", "tnp": "TnPrime", "tnpp": "TnDoublePrime", "tilde": "TildeTn"}
    if kind in table:
        return FAMILY_MAKERS[table[kind]](params["n"])
    raise BadParam(f"unknown family {kind!r}")


def reduced_family_poly(kind: str, **params) -> WienerPoly:
    """Reduced polynomial of a CLI family name, via the caterpillar path for ``cat``."""
    if kind.lower() == "cat":
        return real_root_caterpillar_poly(RealRootCaterpillarSpec(params["D"], params["t"], params.get("m", 1)))
    t = family_tree(kind, **params)
    return wiener_polynomial(distance_distribution(t)).as_reduced()
