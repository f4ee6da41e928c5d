"""Graph derangements: existence, construction, Q-factors and counting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph, neighborhood

__all__ = [
    "Derangement",
    "InvalidDerangementError",
    "Pair",
    "Cycle",
    "QFactor",
    "HallWitness",
    "find_derangement",
    "hall_witness",
    "q_factor",
    "count_derangements",
    "derangement_upper_bound",
    "HALL_MAX_N",
    "COUNT_MAX_N",
]

HALL_MAX_N = 24
COUNT_MAX_N = 20


class InvalidDerangementError(ValueError):
    pass


@dataclass(frozen=True)
class Derangement:
    """Fixed-point-free bijection sending each vertex to a neighbour.

    ``map[v]`` is the image of ``v``. The graph is not stored; call
    :meth:`validate` against the graph it belongs to.
    """

    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(w) for w in self.map))

    @property
    def n(self) -> int:
        return len(self.map)

    def validate(self, g: Graph) -> None:
        if len(self.map) != g.n:
            raise InvalidDerangementError(f"map has length {len(self.map)}, graph has {g.n} vertices")
        seen = set()
        for v, w in enumerate(self.map):
            if w == v:
                raise InvalidDerangementError(f"fixed point at vertex {v}")
            if not 0 <= w < g.n or not g.has_edge(v, w):
                raise InvalidDerangementError(f"{v} -> {w} is not an edge")
            if w in seen:
                raise InvalidDerangementError(f"vertex {w} is the image of two vertices")
            seen.add(w)

    def cycles(self) -> list[tuple[int, ...]]:
        """Permutation cycles, each starting at its smallest vertex."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            v = start
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = self.map[v]
            out.append(tuple(cyc))
        return out


@dataclass(frozen=True)
class Pair:
    u: int
    w: int

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.u, self.w)


@dataclass(frozen=True)
class Cycle:
    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("a Cycle component needs at least 3 vertices")


@dataclass(frozen=True)
class QFactor:
    components: tuple[Pair | Cycle, ...]

    def validate(self, g: Graph) -> None:
        covered: list[int] = []
        for comp in self.components:
            vs = comp.vertices
            covered.extend(vs)
            if isinstance(comp, Pair):
                if not g.has_edge(comp.u, comp.w):
                    raise ValueError(f"pair {comp.u}-{comp.w} is not an edge")
            else:
                for a, b in zip(vs, vs[1:] + vs[:1]):
                    if not g.has_edge(a, b):
                        raise ValueError(f"cycle step {a}-{b} is not an edge")
        if sorted(covered) != list(range(g.n)):
            raise ValueError("components do not partition the vertex set")


@dataclass(frozen=True)
class HallWitness:
    """A vertex set ``W`` with ``|N(W)| < |W|``."""

    w: frozenset[int]
    neighborhood: frozenset[int]


def find_derangement(g: Graph) -> Derangement | None:
    """Perfect matching between left and right copies of ``V``.

    Left copy ``v`` may be matched to right copy ``w`` when ``{v, w}`` is
    an edge; a perfect matching is exactly a derangement. Kuhn's
    augmenting-path search visits left vertices and their neighbours in
    ascending order, so the result is deterministic.
    """
    match_right = [-1] * g.n

    def augment(u: int, visited: list[bool]) -> bool:
        # iterative DFS over alternating paths; stack holds (left vertex, next neighbour index)
        stack = [(u, 0)]
        path: list[tuple[int, int]] = []
        while stack:
            v, i = stack[-1]
            nbrs = g.adj[v]
            if i == len(nbrs):
                stack.pop()
                if path:
                    path.pop()
                continue
            stack[-1] = (v, i + 1)
            w = nbrs[i]
            if visited[w]:
                continue
            visited[w] = True
            path.append((v, w))
            if match_right[w] == -1:
                for left, right in path:
                    match_right[right] = left
                return True
            stack.append((match_right[w], 0))
        return False

    for u in range(g.n):
        if not augment(u, [False] * g.n):
            return None
    image = [0] * g.n
    for w, v in enumerate(match_right):
        image[v] = w
    return Derangement(tuple(image))


def hall_witness(g: Graph) -> HallWitness | None:
    """Exhaustive search for a subset violating Hall's condition.

    Independent of :func:`find_derangement`. Returns a violating set of
    minimum size, ties broken by smallest bitmask.
    """
    if g.n > HALL_MAX_N:
        raise ValueError(f"hall_witness scans 2^n subsets; n={g.n} exceeds {HALL_MAX_N}")
    mask = int(kernels.hall_scan(g.neighbor_masks, g.n))
    if mask < 0:
        return None
    w = frozenset(v for v in range(g.n) if (mask >> v) & 1)
    return HallWitness(w, neighborhood(g, w))


def q_factor(g: Graph, d: Derangement) -> QFactor:
    """2-cycles of ``d`` become pairs, longer cycles become cycles."""
    d.validate(g)
    comps: list[Pair | Cycle] = []
    for cyc in d.cycles():
        if len(cyc) == 2:
            comps.append(Pair(*cyc))
        else:
            comps.append(Cycle(cyc))
    return QFactor(tuple(comps))


def count_derangements(g: Graph) -> int:
    """Number of derangements of ``g``: the permanent of its adjacency matrix."""
    if g.n > COUNT_MAX_N:
        raise ValueError(f"count_derangements supports n <= {COUNT_MAX_N}, got {g.n}")
    return kernels.permanent_mod64(g.adjacency_matrix().astype(np.uint64))


def derangement_upper_bound(n: int) -> int:
    """Nearest integer to ``n!/e``, i.e. the set-derangement number ``D_n``."""
    if not 1 <= n <= COUNT_MAX_N:
        raise ValueError(f"n must lie in 1..{COUNT_MAX_N}, got {n}")
    prev, cur = 1, 0  # D_0, D_1
    for k in range(2, n + 1):
        prev, cur = cur, (k - 1) * (cur + prev)
    return cur
