"""Multi-agent Exp3 on the raider game, used to hunt for strict equilibria.

Each player runs its own Exp3 learner over ``{home} ∪ neighbours`` (home
first, then ascending). All players sample simultaneously from the
pre-round distributions, payoffs are scaled into ``[0, 1]`` by halving,
and only the played arm is updated. Any converged profile is handed to
the exact certifier; nothing uncertified is ever returned as an
equilibrium. Failure to find one says nothing about existence.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .game import (
    GameInputError,
    GameParams,
    Profile,
    _require_game_graph,
    is_strict_nash,
    payoff_vector,
)
from .graph import Graph

__all__ = [
    "Exp3PlayerState",
    "LearningRun",
    "LearningResult",
    "exp3_init",
    "exp3_round",
    "exp3_run",
    "player_streams",
]


def player_streams(seed: int, n: int) -> list[np.random.Generator]:
    """Independent PCG64 streams, one per player index, from one master seed."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)]


@dataclass
class Exp3PlayerState:
    player: int
    actions: tuple[int, ...]
    gamma: float
    rng: np.random.Generator = field(repr=False)
    log_weights: np.ndarray = field(default=None)
    plays: np.ndarray = field(default=None)

    def __post_init__(self):
        k = len(self.actions)
        if self.log_weights is None:
            self.log_weights = np.zeros(k)
        if self.plays is None:
            self.plays = np.zeros(k, dtype=np.int64)

    @property
    def weights(self) -> np.ndarray:
        """Weights rescaled so the largest is 1 (the scale cancels in the probabilities)."""
        return np.exp(self.log_weights - self.log_weights.max())

    def probabilities(self) -> np.ndarray:
        k = len(self.actions)
        e = np.exp(self.log_weights - self.log_weights.max())
        return (1.0 - self.gamma) * e / e.sum() + self.gamma / k


def _check_gamma(gamma: float) -> None:
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")


def _action_lists(g: Graph) -> list[tuple[int, ...]]:
    return [(v, *g.adj[v]) for v in range(g.n)]


def exp3_init(g: Graph, gamma: float, seed: int) -> list[Exp3PlayerState]:
    _require_game_graph(g)
    _check_gamma(gamma)
    rngs = player_streams(seed, g.n)
    return [Exp3PlayerState(v, acts, gamma, rngs[v]) for v, acts in enumerate(_action_lists(g))]


def exp3_round(states: list[Exp3PlayerState], g: Graph, params: GameParams):
    """One simultaneous round; mutates ``states`` and returns them.

    Returns ``(profile, payoffs, states)`` with exact payoffs.
    """
    probs = [s.probabilities() for s in states]
    choice = []
    for s, p in zip(states, probs):
        u = s.rng.random()
        i = int(np.searchsorted(np.cumsum(p), u, side="right"))
        choice.append(min(i, len(p) - 1))
    profile = Profile(tuple(s.actions[i] for s, i in zip(states, choice)))
    pay = payoff_vector(g, profile, params)
    for s, p, i, r in zip(states, probs, choice, pay):
        xhat = 0.5 * float(r) / p[i]
        s.log_weights[i] += s.gamma * xhat / len(s.actions)
        s.plays[i] += 1
    return profile, pay, states


@dataclass(frozen=True)
class LearningRun:
    params: GameParams
    rounds: int = 20_000
    gamma: float = 0.1
    seed: int = 0
    window: int = 500
    threshold: float = 0.95
    record_history: bool = False

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        _check_gamma(self.gamma)
        if not 0 < self.threshold <= 1:
            raise ValueError("threshold must lie in (0, 1]")
        if not 1 <= self.window <= self.rounds:
            raise ValueError("window must lie in 1..rounds")


@dataclass
class LearningResult:
    converged: bool
    certified: bool
    profile: Profile | None
    rounds_used: int
    seed: int
    modal_profile: Profile | None = None
    history: dict | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "converged": self.converged,
            "certified": self.certified,
            "profile": list(self.profile.map) if self.profile else None,
            "rounds_used": self.rounds_used,
            "seed": self.seed,
        }

    def round_log_csv(self) -> str:
        if self.history is None:
            raise ValueError("run was made without record_history")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "player", "action", "probability", "payoff"])
        acts, probs, pays = self.history["action"], self.history["probability"], self.history["payoff"]
        for t in range(acts.shape[0]):
            for v in range(acts.shape[1]):
                w.writerow([t, v, int(acts[t, v]), repr(float(probs[t, v])), repr(float(pays[t, v]))])
        return buf.getvalue()


def exp3_run(g: Graph, run: LearningRun) -> LearningResult:
    """Play up to ``run.rounds`` rounds and certify the modal profile.

    Convergence means every player's most frequent action over the last
    ``run.window`` rounds has frequency at least ``run.threshold``; play
    stops at the first round where that holds. ``profile`` is set only when
    the modal profile passes the exact strict-equilibrium check.
    """
    _require_game_graph(g)
    if g.n > 62:
        raise GameInputError("exp3_run supports at most 62 players")
    acts = _action_lists(g)
    kmax = max(len(a) for a in acts)
    strat = np.zeros((g.n, kmax), dtype=np.int64)
    for v, a in enumerate(acts):
        strat[v, : len(a)] = a
    nstrat = np.array([len(a) for a in acts], dtype=np.int64)
    rngs = player_streams(run.seed, g.n)
    uniforms = np.ascontiguousarray(np.stack([r.random(run.rounds) for r in rngs], axis=1))
    actions, chosen_p, payoffs, _, _, counts, rounds, converged = kernels.exp3_play(
        strat, nstrat, float(run.params.h), float(run.gamma), uniforms, int(run.window), float(run.threshold)
    )
    modal = None
    certified = False
    if converged:
        modal = Profile(tuple(int(strat[v, np.argmax(counts[v, : nstrat[v]])]) for v in range(g.n)))
        certified, _ = is_strict_nash(g, modal, run.params)
    history = None
    if run.record_history:
        history = {"action": strat[np.arange(g.n), actions], "probability": chosen_p, "payoff": payoffs}
    return LearningResult(
        converged=bool(converged),
        certified=bool(certified),
        profile=modal if certified else None,
        rounds_used=int(rounds),
        seed=run.seed,
        modal_profile=modal,
        history=history,
    )
