"""Non-isomorphic free trees, one per class, in a fixed deterministic order.

Trees are generated as canonical level sequences with the successor rule of
Wright, Richmond, Odlyzko and McKay (constant amortized time per tree).
"""
from __future__ import annotations

import heapq
from itertools import islice
from typing import Iterator

from .errors import OrderTooLarge
from .tree_core import Tree, build_tree

MAX_ORDER = 22


def _next_rooted(levels: list[int], p: int | None = None) -> list[int] | None:
    # successor of a canonical rooted level sequence (Beyer-Hedetniemi step)
    if p is None:
        p = len(levels) - 1
        while levels[p] == 1:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while levels[q] != levels[p] - 1:
        q -= 1
    out = list(levels)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


def _split(levels: list[int]) -> tuple[list[int], list[int]]:
    # left: the first subtree of the root (shifted up a level); rest: root plus the others
    m = len(levels)
    seen = False
    for i, lv in enumerate(levels):
        if lv == 1:
            if seen:
                m = i
                break
            seen = True
    left = [lv - 1 for lv in levels[1:m]]
    rest = [0] + levels[m:]
    return left, rest


def _next_free(cand: list[int]) -> list[int] | None:
    left, rest = _split(cand)
    lh, rh = max(left), max(rest)
    ok = rh >= lh
    if ok and rh == lh:
        if len(left) > len(rest) or (len(left) == len(rest) and left > rest):
            ok = False
    if ok:
        return cand
    p = len(left)
    nxt = _next_rooted(cand, p)
    if nxt is None:
        return None
    if cand[p] > 2:
        new_left, _ = _split(nxt)
        suffix = list(range(1, max(new_left) + 2))
        nxt[-len(suffix):] = suffix
    return nxt


def level_sequences(n: int) -> Iterator[list[int]]:
    """Canonical level sequences of all free trees of order ``n``."""
    if n < 1:
        raise ValueError("order must be at least 1")
    if n > MAX_ORDER:
        raise OrderTooLarge(f"enumeration is capped at n = {MAX_ORDER}")
    if n == 1:
        yield [0]
        return
    if n == 2:
        yield [0, 1]
        return
    # start from the path rooted at its center
    layout: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while layout is not None:
        layout = _next_free(layout)
        if layout is None:
            return
        yield layout
        layout = _next_rooted(layout)


def levels_to_tree(levels: list[int]) -> Tree:
    stack: list[int] = []
    edges = []
    for v, lv in enumerate(levels):
        del stack[lv:]
        if stack:
            edges.append((stack[-1], v))
        stack.append(v)
    return build_tree(edges, len(levels))


class TreeStream:
    """Iterator over the free trees of order ``n`` between stream indices ``start`` and ``end``.

    Indices are 0-based positions in the generator's fixed order, so disjoint
    ranges can be processed independently and resumed exactly.
    """

    def __init__(self, n: int, start: int = 0, end: int | None = None):
        if n > MAX_ORDER:
            raise OrderTooLarge(f"enumeration is capped at n = {MAX_ORDER}")
        self.n = n
        self.start = start
        self.end = end
        self._it = islice(enumerate(level_sequences(n)), start, end)
        self.index = start

    def __iter__(self):
        return self

    def __next__(self) -> Tree:
        i, lv = next(self._it)
        self.index = i + 1
        return levels_to_tree(lv)

    def indexed(self) -> Iterator[tuple[int, Tree]]:
        for i, lv in self._it:
            self.index = i + 1
            yield i, levels_to_tree(lv)


def enumerate_trees(n: int, start: int = 0, end: int | None = None) -> TreeStream:
    return TreeStream(n, start, end)


def count_trees(n: int) -> int:
    return sum(1 for _ in level_sequences(n))


def random_tree(n: int, rng) -> Tree:
    """Uniform labelled tree on ``n`` vertices from a random Prüfer sequence.

    ``rng`` is a ``numpy.random.Generator`` (or anything with ``integers``).
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    if n <= 2:
        return build_tree([(0, 1)] if n == 2 else [], n)
    seq = [int(v) for v in rng.integers(0, n, size=n - 2)]
    return prufer_to_tree(seq)


def prufer_to_tree(seq: list[int]) -> Tree:
    n = len(seq) + 2
    deg = [1] * n
    for v in seq:
        deg[v] += 1
    leaves = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        deg[v] -= 1
        if deg[v] == 1:
            heapq.heappush(leaves, v)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return build_tree(edges, n)
