import itertools
from collections import Counter

import networkx as nx
import pytest

from wiener_lab.tree_core import build_tree, canonical_code
from wiener_lab.tree_enum import prufer_to_tree


def prufer_classes(n: int) -> Counter:
    """Canonical codes of every labelled tree on n vertices, deduplicated (brute force)."""
    if n == 1:
        return Counter({canonical_code(build_tree([], 1)): 1})
    if n == 2:
        return Counter({canonical_code(build_tree([(0, 1)], 2)): 1})
    seen = set()
    for seq in itertools.product(range(n), repeat=n - 2):
        seen.add(canonical_code(prufer_to_tree(list(seq))))
    return Counter(seen)


def nx_distance_counts(t) -> tuple:
    g = nx.Graph()
    g.add_nodes_from(range(t.n))
    g.add_edges_from(t.edges)
    c = Counter()
    for u, dist in nx.all_pairs_shortest_path_length(g):
        for v, d in dist.items():
            if u < v:
                c[d] += 1
    return tuple(c[i] for i in range(1, max(c) + 1)) if c else ()


@pytest.fixture(scope="session")
def oracle_classes():
    return {n: prufer_classes(n) for n in range(1, 9)}
