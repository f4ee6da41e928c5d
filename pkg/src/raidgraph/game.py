"""The Territorial Raider game with exact rational payoffs.

Every vertex holds one unit of resource and one player. A player either
stays home (defends) or raids a neighbour. A defender keeps a share ``h``
of its home outright and the rest of the resource at a vertex is split
evenly among everyone standing there. A raider whose own home is left
unraided also keeps its whole home unit.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .derangement import Derangement, count_derangements, find_derangement
from .graph import Graph, is_connected

__all__ = [
    "GameParams",
    "parse_h",
    "parse_h_list",
    "Profile",
    "InadmissibleProfileError",
    "GameInputError",
    "Deviation",
    "payoff",
    "payoff_vector",
    "deviations",
    "is_strict_nash",
    "enumerate_strict_nash",
    "profile_space_size",
    "derangement_to_profile",
    "profile_to_derangement",
    "lemma_conditions",
    "verify_equivalence",
    "EquivalenceReport",
    "HEntry",
    "ENUMERATION_GUARD",
]

ENUMERATION_GUARD = 10**7

# kernels compare scaled numerators by cross-multiplication in int64
_MAX_KERNEL_DENOMINATOR = 1 << 40


class InadmissibleProfileError(ValueError):
    pass


class GameInputError(ValueError):
    """Graph or size unsuitable for a game operation."""


def parse_h(text: str | Fraction | int) -> Fraction:
    """Exact rational from ``"0.1"``, ``"3/10"`` or an int; ``"0.1"`` is 1/10."""
    try:
        h = Fraction(text.strip()) if isinstance(text, str) else Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse h={text!r} as a decimal or fraction") from None
    if not 0 <= h <= 1:
        raise ValueError(f"h must lie in [0, 1], got {h}")
    return h


def parse_h_list(text: str) -> list[Fraction]:
    return [parse_h(part) for part in text.split(",") if part.strip()]


@dataclass(frozen=True)
class GameParams:
    h: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "h", parse_h(self.h))


@dataclass(frozen=True)
class Profile:
    """One strategy per player: ``map[v]`` is where player ``v`` goes.

    ``occupancy[w]`` counts players standing at ``w`` (the size of the
    preimage of ``w``).
    """

    map: tuple[int, ...]
    occupancy: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = tuple(int(w) for w in self.map)
        object.__setattr__(self, "map", m)
        occ = [0] * len(m)
        for w in m:
            if not 0 <= w < len(m):
                raise InadmissibleProfileError(f"target {w} out of range")
            occ[w] += 1
        object.__setattr__(self, "occupancy", tuple(occ))

    @property
    def n(self) -> int:
        return len(self.map)

    @classmethod
    def identity(cls, n: int) -> Profile:
        return cls(tuple(range(n)))

    def check(self, g: Graph) -> None:
        if self.n != g.n:
            raise InadmissibleProfileError(f"profile has {self.n} players, graph has {g.n} vertices")
        for v, w in enumerate(self.map):
            if w != v and not g.has_edge(v, w):
                raise InadmissibleProfileError(f"player {v} cannot move to non-neighbour {w}")


@dataclass(frozen=True)
class Deviation:
    player: int
    new_strategy: int
    old_payoff: Fraction
    new_payoff: Fraction


def _payoff(fmap, occ, h: Fraction, v: int) -> Fraction:
    target = fmap[v]
    k = occ[target]
    if target == v:
        return h + (1 - h) / k
    share = (1 - h) if fmap[target] == target else Fraction(1)
    if occ[v] == 0:
        return 1 + share / k
    return share / k


def payoff(g: Graph, f: Profile, params: GameParams, v: int) -> Fraction:
    f.check(g)
    return _payoff(f.map, f.occupancy, params.h, v)


def payoff_vector(g: Graph, f: Profile, params: GameParams) -> tuple[Fraction, ...]:
    f.check(g)
    return tuple(_payoff(f.map, f.occupancy, params.h, v) for v in range(g.n))


def _deviations(g: Graph, f: Profile, h: Fraction, v: int) -> list[Deviation]:
    fmap = list(f.map)
    occ = list(f.occupancy)
    a = fmap[v]
    old = _payoff(fmap, occ, h, v)
    out = []
    for s in g.strategies(v):
        if s == a:
            continue
        occ[a] -= 1
        occ[s] += 1
        fmap[v] = s
        new = _payoff(fmap, occ, h, v)
        fmap[v] = a
        occ[s] -= 1
        occ[a] += 1
        out.append(Deviation(v, s, old, new))
    return out


def deviations(g: Graph, f: Profile, v: int, params: GameParams) -> list[Deviation]:
    """Every unilateral switch available to player ``v``, ascending by target."""
    f.check(g)
    return _deviations(g, f, params.h, v)


def is_strict_nash(g: Graph, f: Profile, params: GameParams) -> tuple[bool, Deviation | None]:
    """Whether every unilateral switch strictly lowers the mover's payoff.

    On failure the first deviation that does not lower the payoff, in
    ascending ``(player, strategy)`` order, is returned as a counterexample.
    """
    f.check(g)
    for v in range(g.n):
        for d in _deviations(g, f, params.h, v):
            if d.new_payoff >= d.old_payoff:
                return False, d
    return True, None


def _require_game_graph(g: Graph) -> None:
    if g.n < 2:
        raise GameInputError("game operations need at least 2 vertices")
    if not is_connected(g):
        raise GameInputError("game operations need a connected graph")


def _strategy_table(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    lists = [g.strategies(v) for v in range(g.n)]
    kmax = max(len(s) for s in lists)
    strat = np.zeros((g.n, kmax), dtype=np.int64)
    for v, s in enumerate(lists):
        strat[v, : len(s)] = s
    return strat, np.array([len(s) for s in lists], dtype=np.int64)


def profile_space_size(g: Graph) -> int:
    return math.prod(g.degree(v) + 1 for v in range(g.n))


def _decode(index: int, strat: np.ndarray, nstrat: np.ndarray) -> Profile:
    digits = [0] * len(nstrat)
    for v in range(len(nstrat) - 1, -1, -1):
        index, digits[v] = divmod(index, int(nstrat[v]))
    return Profile(tuple(int(strat[v, c]) for v, c in enumerate(digits)))


def _kernel_chunk(args):
    strat, nstrat, p, q, lo, hi = args
    return kernels.strict_nash_indices(strat, nstrat, p, q, lo, hi)


def enumerate_strict_nash(
    g: Graph, params: GameParams, *, force: bool = False, jobs: int = 1
) -> list[Profile]:
    """All strict equilibria, by exhaustive search over admissible profiles.

    Profiles are visited as a mixed-radix counter, player 0 most
    significant and each player's strategies ascending; the result keeps
    that order regardless of ``jobs``.
    """
    _require_game_graph(g)
    total = profile_space_size(g)
    if total > ENUMERATION_GUARD and not force:
        raise GameInputError(
            f"{total} admissible profiles exceeds the guard of {ENUMERATION_GUARD}; pass force=True"
        )
    h = params.h
    if h.denominator > _MAX_KERNEL_DENOMINATOR:
        raise GameInputError(f"h denominator {h.denominator} too large for exact kernels")
    strat, nstrat = _strategy_table(g)
    p, q = h.numerator, h.denominator
    jobs = max(1, min(jobs, total))
    if jobs == 1:
        idx = kernels.strict_nash_indices(strat, nstrat, p, q, 0, total)
    else:
        bounds = [total * i // jobs for i in range(jobs + 1)]
        tasks = [(strat, nstrat, p, q, lo, hi) for lo, hi in zip(bounds, bounds[1:])]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_kernel_chunk, tasks))
        idx = np.sort(np.concatenate(parts))
    return [_decode(int(i), strat, nstrat) for i in idx]


def derangement_to_profile(d: Derangement) -> Profile:
    return Profile(d.map)


def profile_to_derangement(g: Graph, f: Profile) -> Derangement | None:
    """The profile as a derangement, if it is injective with no fixed points."""
    f.check(g)
    if any(w == v for v, w in enumerate(f.map)) or max(f.occupancy) > 1:
        return None
    return Derangement(f.map)


def lemma_conditions(g: Graph, f: Profile, v: int) -> tuple[bool, bool, bool]:
    """``(v raids some w, w holds more than one player, v holds at most one)``.

    A strict equilibrium never has all three true at any vertex.
    """
    f.check(g)
    w = f.map[v]
    return (w != v, f.occupancy[w] > 1, f.occupancy[v] <= 1)


@dataclass
class HEntry:
    h: Fraction
    ne_count: int
    set_equal: bool | None
    boundary: bool
    violations: list[str]


@dataclass
class EquivalenceReport:
    graph: Graph
    derangement_exists: bool
    derangement_count: int
    entries: list[HEntry]

    @property
    def holds(self) -> bool:
        return not any(e.violations for e in self.entries)

    @property
    def violations(self) -> list[str]:
        return [msg for e in self.entries for msg in e.violations]

    def to_json(self) -> dict:
        return {
            "graph": {"n": self.graph.n, "edges": [list(e) for e in self.graph.edges]},
            "n": self.graph.n,
            "h_values": [str(e.h) for e in self.entries],
            "derangement_exists": self.derangement_exists,
            "derangement_count": self.derangement_count,
            "ne_count": [e.ne_count for e in self.entries],
            "set_equal": [e.set_equal for e in self.entries],
            "boundary": [e.boundary for e in self.entries],
            "violations": self.violations,
            "holds": self.holds,
        }

    def to_text(self) -> str:
        counts = {e.ne_count for e in self.entries if not e.boundary}
        head = "EQUIVALENCE HOLDS" if self.holds else "EQUIVALENCE VIOLATED"
        if len(counts) == 1 and all(not e.boundary for e in self.entries):
            ne = f"strict NE={counts.pop()} at each h"
        else:
            ne = "strict NE=" + ", ".join(f"{e.ne_count} (h={e.h})" for e in self.entries)
        lines = [f"{head}; derangements={self.derangement_count}; {ne}"]
        for e in self.entries:
            if e.boundary:
                lines.append(f"h={e.h}: boundary h=1, strict NE set empty as expected"
                             if not e.violations else f"h={e.h}: boundary h=1 violated")
        lines.extend(f"violation: {msg}" for msg in self.violations)
        return "\n".join(lines) + "\n"


def verify_equivalence(
    g: Graph, hs: list[GameParams], *, force: bool = False, jobs: int = 1
) -> EquivalenceReport:
    """Check derangements and strict equilibria coincide at each ``h``.

    Set equality follows from two facts checked here: every strict
    equilibrium is a derangement, and the number of equilibria equals the
    permanent-based derangement count. ``h = 1`` is the boundary case where
    the equilibrium set must be empty.
    """
    _require_game_graph(g)
    found = find_derangement(g)
    count = count_derangements(g)
    entries = []
    for params in hs:
        ne = enumerate_strict_nash(g, params, force=force, jobs=jobs)
        problems = []
        if params.h == 1:
            if ne:
                problems.append(f"h=1: {len(ne)} strict NE found, expected none; first {list(ne[0].map)}")
            entries.append(HEntry(params.h, len(ne), None, True, problems))
            continue
        if (found is not None) != bool(ne):
            problems.append(
                f"h={params.h}: derangement {'exists' if found else 'absent'} but "
                f"{len(ne)} strict NE"
            )
        for f in ne:
            if profile_to_derangement(g, f) is None:
                problems.append(f"h={params.h}: strict NE {list(f.map)} is not a derangement")
        if found is not None and derangement_to_profile(found) not in set(ne):
            problems.append(f"h={params.h}: derangement {list(found.map)} is not a strict NE")
        if len(ne) != count:
            problems.append(f"h={params.h}: {len(ne)} strict NE but {count} derangements")
        entries.append(HEntry(params.h, len(ne), not problems, False, problems))
    return EquivalenceReport(g, found is not None, count, entries)
