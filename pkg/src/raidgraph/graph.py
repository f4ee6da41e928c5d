"""Simple undirected graphs on dense integer vertices ``0..n-1``.

Includes the edge-list text format, standard families, and a seeded
Erdős–Rényi generator that rejection-samples connected graphs.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Graph",
    "GraphFormatError",
    "parse_edge_list",
    "serialize_edge_list",
    "is_connected",
    "neighborhood",
    "generate",
    "random_connected",
    "FAMILIES",
]

FAMILIES = ("cycle", "path", "star", "complete")

# random_connected gives up after this many rejected samples
MAX_REJECTIONS = 10_000


class GraphFormatError(ValueError):
    """Malformed edge-list input or an edge set violating simplicity."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=True)
class Graph:
    """Immutable simple graph.

    ``adj[v]`` is the ascending tuple of neighbours of ``v``. Use
    :meth:`from_edges` rather than the raw constructor so the invariants
    (no loops, symmetry, no duplicates) are checked.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        if n < 1:
            raise GraphFormatError(f"vertex count must be >= 1, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphFormatError(f"duplicate edge {{{min(u, v)}, {max(u, v)}}}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Canonical edge list: ``(min, max)`` pairs ascending."""
        return tuple((u, w) for u in range(self.n) for w in self.adj[u] if u < w)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, w: int) -> bool:
        return w in self._adj_sets[u]

    @cached_property
    def _adj_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adj)

    @cached_property
    def neighbor_masks(self) -> np.ndarray:
        """Bitmask of ``adj(v)`` per vertex (int64; valid while n <= 62)."""
        masks = np.zeros(self.n, dtype=np.int64)
        for v, nb in enumerate(self.adj):
            bits = 0
            for w in nb:
                bits |= 1 << w
            masks[v] = bits
        return masks

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, w in self.edges:
            a[u, w] = a[w, u] = 1
        return a

    def strategies(self, v: int) -> tuple[int, ...]:
        """Ascending list of ``{v} ∪ adj(v)``."""
        return tuple(sorted((v, *self.adj[v])))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``"n m"`` header followed by exactly ``m`` lines ``"u v"``.

    Lines starting with ``#`` and blank lines are skipped. Errors carry the
    1-based line number of the offending line.
    """
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    n = m = 0
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        fields = line.split()
        if len(fields) != 2:
            raise GraphFormatError(f"expected two integers, got {raw!r}", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(f"expected two integers, got {raw!r}", lineno) from None
        if header is None:
            if a < 1:
                raise GraphFormatError(f"vertex count must be >= 1, got {a}", lineno)
            if b < 0:
                raise GraphFormatError(f"edge count must be >= 0, got {b}", lineno)
            header = (a, b)
            n, m = header
            continue
        if len(edges) == m:
            raise GraphFormatError(f"more than the declared {m} edges", lineno)
        if not (0 <= a < n and 0 <= b < n):
            raise GraphFormatError(f"vertex out of range 0..{n - 1} in edge ({a}, {b})", lineno)
        if a == b:
            raise GraphFormatError(f"self-loop at vertex {a}", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {{{key[0]}, {key[1]}}}", lineno)
        seen.add(key)
        edges.append((a, b))
    if header is None:
        raise GraphFormatError("missing 'n m' header")
    if len(edges) != m:
        raise GraphFormatError(f"declared {m} edges but found {len(edges)}", last_line)
    return Graph.from_edges(n, edges)


def serialize_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {w}" for u, w in g.edges)
    return "\n".join(lines) + "\n"


def is_connected(g: Graph) -> bool:
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == g.n


def neighborhood(g: Graph, w: Iterable[int]) -> frozenset[int]:
    """``N(W)``: every vertex adjacent to some member of ``w`` (may meet ``w``)."""
    out: set[int] = set()
    for v in w:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
        out.update(g.adj[v])
    return frozenset(out)


def generate(family: str, size: int) -> Graph:
    """Standard families; ``star(k)`` has centre 0 and leaves ``1..k``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    minimum = {"cycle": 3, "path": 1, "star": 1, "complete": 1}[family]
    if size < minimum:
        raise ValueError(f"{family} requires size >= {minimum}, got {size}")
    if family == "cycle":
        return Graph.from_edges(size, [(i, (i + 1) % size) for i in range(size)])
    if family == "path":
        return Graph.from_edges(size, [(i, i + 1) for i in range(size - 1)])
    if family == "star":
        return Graph.from_edges(size + 1, [(0, i) for i in range(1, size + 1)])
    return Graph.from_edges(size, [(i, j) for i in range(size) for j in range(i + 1, size)])


def random_connected(n: int, p: float, seed: int) -> Graph:
    """Seeded G(n, p) conditioned on connectivity.

    Uses numpy's PCG64 bit generator, whose stream is stable across
    platforms. Each attempt draws one uniform per vertex pair in
    lexicographic ``(i, j)`` order and keeps the edge when the draw is
    below ``p``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    rng = np.random.Generator(np.random.PCG64(seed))
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(MAX_REJECTIONS):
        keep = rng.random(len(iu)) < p
        g = Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))
        if is_connected(g):
            return g
    raise RuntimeError(
        f"no connected sample after {MAX_REJECTIONS} attempts; p={p} is too small for n={n}"
    )
