"""graph6 and plain edge-list reading/writing for trees."""
from __future__ import annotations

from pathlib import Path

from .errors import BadLabel, NotATree
from .tree_core import Tree, build_tree


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def _decode_n(data: bytes) -> tuple[int, int]:
    if data[0] != 126:
        return data[0] - 63, 1
    if data[1] != 126:
        n = 0
        for b in data[1:4]:
            n = (n << 6) | (b - 63)
        return n, 4
    n = 0
    for b in data[2:8]:
        n = (n << 6) | (b - 63)
    return n, 8


def to_graph6(t: Tree) -> str:
    """graph6 string (no header, no newline)."""
    n = t.n
    bits = []
    nbrs = [set(a) for a in t.adjacency]
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if i in nbrs[j] else 0)
    bits.extend([0] * (-len(bits) % 6))
    chars = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return _encode_n(n) + "".join(chars)


def from_graph6(line: str) -> Tree:
    line = line.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    data = line.encode("ascii")
    if not data:
        raise NotATree("empty graph6 string")
    n, pos = _decode_n(data)
    edges = []
    needed = n * (n - 1) // 2
    body = data[pos:]
    if len(body) * 6 < needed:
        raise NotATree("graph6 string is truncated")
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return build_tree(edges, n)


def to_edge_list(t: Tree) -> str:
    lines = [str(t.n)] + [f"{u} {v}" for u, v in t.edges]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Tree:
    """Parse ``n`` on the first line then one ``u v`` pair per line.

    Labels may be arbitrary tokens; unless they already are the integers
    ``0..n-1`` they are renumbered in sorted order.
    """
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 1:
        raise NotATree("edge list must start with the vertex count on its own line")
    n = int(rows[0][0])
    pairs = []
    for r in rows[1:]:
        if len(r) != 2:
            raise NotATree(f"bad edge line: {' '.join(r)!r}")
        pairs.append((r[0], r[1]))
    labels = {x for p in pairs for x in p}
    try:
        ints = {int(x) for x in labels}
        numeric = all(0 <= x < n for x in ints) and len(ints) == len(labels)
    except ValueError:
        numeric = False
    if numeric:
        edges = [(int(u), int(v)) for u, v in pairs]
    else:
        if len(labels) > n:
            raise BadLabel(f"{len(labels)} distinct labels but n = {n}")
        try:
            ordered = sorted(labels, key=int)
        except ValueError:
            ordered = sorted(labels)
        index = {lab: i for i, lab in enumerate(ordered)}
        edges = [(index[u], index[v]) for u, v in pairs]
    return build_tree(edges, n)


def read_trees(path: str | Path) -> list[Tree]:
    """Read a file holding either one edge-list tree or graph6 lines."""
    text = Path(path).read_text()
    stripped = [ln for ln in text.splitlines() if ln.strip()]
    if not stripped:
        raise NotATree(f"{path} is empty")
    first = stripped[0].strip()
    if first.isdigit():
        return [from_edge_list(text)]
    return [from_graph6(ln) for ln in stripped]
