"""Trees, distance distributions, canonical codes and weighted caterpillars."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .errors import BadLabel, InvalidCaterpillar, NotATree, OrderTooLarge

# Explicit BFS is O(n^2); anything bigger has to come in as a WeightedCaterpillar.
MAX_EXPLICIT_ORDER = 10**5


@dataclass(frozen=True)
class Tree:
    """A labelled tree on vertices ``0..n-1``.

    Build instances through :func:`build_tree`, which validates the edge set.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class DistanceDistribution:
    """``counts[i-1]`` is the number of unordered vertex pairs at distance ``i``."""

    counts: tuple[int, ...]
    n: int

    @property
    def diameter(self) -> int:
        return len(self.counts)

    def __getitem__(self, distance: int) -> int:
        # 1-indexed by distance; out of range means no pairs
        if 1 <= distance <= len(self.counts):
            return self.counts[distance - 1]
        return 0

    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class WeightedCaterpillar:
    """Spine of ``len(multiplicities)`` vertices; spine vertex j carries ``multiplicities[j]`` leaves."""

    multiplicities: tuple[int, ...]

    def __post_init__(self):
        m = self.multiplicities
        if len(m) < 1:
            raise InvalidCaterpillar("spine must have at least one vertex")
        if any(int(x) != x or x < 0 for x in m):
            raise InvalidCaterpillar("multiplicities must be non-negative integers")
        if len(m) >= 2 and (m[0] < 1 or m[-1] < 1):
            raise InvalidCaterpillar("end spine vertices need at least one leaf each")
        object.__setattr__(self, "multiplicities", tuple(int(x) for x in m))

    @property
    def spine_len(self) -> int:
        return len(self.multiplicities)

    @property
    def order(self) -> int:
        return self.spine_len + sum(self.multiplicities)

    @property
    def diameter(self) -> int:
        s = self.spine_len
        if s == 1:
            return min(self.multiplicities[0], 2) if self.multiplicities[0] else 0
        return s + 1


def build_tree(edges: Iterable[Sequence[int]], n: int) -> Tree:
    """Validate an edge list on ``0..n-1`` and return the frozen :class:`Tree`."""
    if n < 1:
        raise NotATree("a tree needs at least one vertex")
    adj: list[list[int]] = [[] for _ in range(n)]
    seen = set()
    count = 0
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise BadLabel(f"edge ({u}, {v}) has a label outside [0, {n})")
        if u == v:
            raise NotATree(f"self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise NotATree(f"parallel edge {key}")
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
        count += 1
    if count != n - 1:
        raise NotATree(f"{count} edges on {n} vertices (a tree has {n - 1})")
    dist = _bfs(adj, 0)
    if any(d < 0 for d in dist):
        raise NotATree("graph is disconnected")
    return Tree(n, tuple(tuple(sorted(a)) for a in adj))


def tree_from_parents(parents: Sequence[int]) -> Tree:
    """Tree from a parent array where ``parents[0]`` is ignored (root)."""
    return build_tree(((parents[v], v) for v in range(1, len(parents))), len(parents))


def _bfs(adj, source: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def distances_from(t: Tree, source: int) -> list[int]:
    return _bfs(t.adjacency, source)


def distance_distribution(t: Tree) -> DistanceDistribution:
    """Exact pair counts per distance by BFS from every vertex."""
    if t.n > MAX_EXPLICIT_ORDER:
        raise OrderTooLarge(
            f"order {t.n} exceeds {MAX_EXPLICIT_ORDER}; supply a WeightedCaterpillar"
        )
    adj = t.adjacency
    n = t.n
    totals = [0] * n
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        frontier = [s]
        level = 0
        while frontier:
            level += 1
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if dist[w] < 0:
                        dist[w] = level
                        nxt.append(w)
            if nxt:
                totals[level] += len(nxt)
            frontier = nxt
    counts = totals[1:]
    while counts and counts[-1] == 0:
        counts.pop()
    # every unordered pair was seen from both ends
    return DistanceDistribution(tuple(c // 2 for c in counts), n)


def diameter(t: Tree) -> int:
    if t.n == 1:
        return 0
    far = _bfs(t.adjacency, 0)
    u = max(range(t.n), key=far.__getitem__)
    return max(_bfs(t.adjacency, u))


def centers(t: Tree) -> list[int]:
    """One or two central vertices, found by repeatedly stripping leaves."""
    n = t.n
    if n <= 2:
        return list(range(n))
    deg = [len(a) for a in t.adjacency]
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in t.adjacency[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_code(t: Tree, root: int) -> bytes:
    parent = [-1] * t.n
    order = [root]
    parent[root] = root
    for u in order:
        for w in t.adjacency[u]:
            if parent[w] < 0:
                parent[w] = u
                order.append(w)
    codes: list[bytes | None] = [None] * t.n
    children: list[list[bytes]] = [[] for _ in range(t.n)]
    for u in reversed(order):
        kids = children[u]
        kids.sort()
        codes[u] = b"(" + b"".join(kids) + b")"
        if u != root:
            children[parent[u]].append(codes[u])
    return codes[root]


def canonical_code(t: Tree) -> bytes:
    """AHU encoding rooted at the center; equal codes iff the trees are isomorphic."""
    return min(_rooted_code(t, c) for c in centers(t))


def caterpillar_distribution(c: WeightedCaterpillar) -> DistanceDistribution:
    """Closed-form pair counts of a weighted caterpillar in O(s^2) big-int operations."""
    m = c.multiplicities
    s = len(m)
    counts = [0] * (s + 2)
    for i in range(s):
        # leaves to their own spine vertex and within their own group
        counts[1] += m[i]
        counts[2] += comb(m[i], 2)
        for j in range(i + 1, s):
            gap = j - i
            counts[gap] += 1
            counts[gap + 1] += m[i] + m[j]
            counts[gap + 2] += m[i] * m[j]
    counts = counts[1:]
    while counts and counts[-1] == 0:
        counts.pop()
    return DistanceDistribution(tuple(counts), c.order)


def expand_caterpillar(c: WeightedCaterpillar) -> Tree:
    """Explicit tree for a weighted caterpillar (spine first, then leaves group by group)."""
    if c.order > MAX_EXPLICIT_ORDER:
        raise OrderTooLarge(f"order {c.order} is too large to expand")
    s = c.spine_len
    edges = [(i, i + 1) for i in range(s - 1)]
    nxt = s
    for i, mult in enumerate(c.multiplicities):
        for _ in range(mult):
            edges.append((i, nxt))
            nxt += 1
    return build_tree(edges, nxt)


def relabel(t: Tree, perm: Sequence[int]) -> Tree:
    """Tree with vertex ``v`` renamed to ``perm[v]``."""
    return build_tree(((perm[u], perm[v]) for u, v in t.edges), t.n)


def pair_distance_sum(t: Tree) -> int:
    """Sum of all pairwise distances, straight from BFS (independent of the polynomial)."""
    return sum(sum(_bfs(t.adjacency, s)) for s in range(t.n)) // 2
