"""Exact Wiener polynomials of trees, their roots, families and censuses."""

from .errors import WienerLabError
from .tree_core import (
    DistanceDistribution,
    Tree,
    WeightedCaterpillar,
    build_tree,
    canonical_code,
    caterpillar_distribution,
    diameter,
    distance_distribution,
)
from .tree_enum import count_trees, enumerate_trees
from .tree_io import from_edge_list, from_graph6, read_trees, to_edge_list, to_graph6
from .wiener_poly import WienerPoly, evaluate, reduce, resilience, resilience_mc, tree_polynomial, wiener_index, wiener_polynomial
from .root_engine import (
    RootReport,
    all_roots_real,
    bracket_real_root,
    enestrom_kakeya,
    find_roots,
    kurtz_condition,
    repeated_root_factor,
    sturm_real_root_count,
)

__version__ = "0.1.0"
