"""Compare the numba and numpy kernel backends.

Each kernel runs once untimed (JIT warm-up), then ``--repeats`` timed
runs per backend. Results are checked for agreement before timing.

Run:

    python benchmarks/bench_kernels.py
"""

import argparse
import statistics
import time

import numpy as np

from raidgraph import kernels
from raidgraph.exp3 import player_streams
from raidgraph.game import _strategy_table, profile_space_size
from raidgraph.graph import generate, random_connected


def _cases(scale):
    g_perm = random_connected(14 + scale, 0.5, 1)
    a = g_perm.adjacency_matrix().astype(np.uint64)
    g_hall = generate("cycle", 16 + scale)
    g_ne = random_connected(7, 0.5, 3)
    strat, nstrat = _strategy_table(g_ne)
    total = profile_space_size(g_ne)
    c4 = generate("cycle", 4)
    acts = [(v, *c4.adj[v]) for v in range(c4.n)]
    estrat = np.array(acts, dtype=np.int64)
    enstrat = np.full(c4.n, 3, dtype=np.int64)
    u = np.stack([r.random(20_000) for r in player_streams(0, c4.n)], axis=1)
    return {
        f"permanent n={g_perm.n}": lambda k: k.permanent_mod64(a),
        f"hall scan n={g_hall.n}": lambda k: k.hall_scan(g_hall.neighbor_masks, g_hall.n),
        f"strict NE enum ({total} profiles)": lambda k: k.strict_nash_indices(strat, nstrat, 1, 2, 0, total).tolist(),
        # window = T disables early stopping so both backends play all rounds
        "exp3 C4 T=20000": lambda k: k.exp3_play(estrat, enstrat, 0.5, 0.1, u, 20_000, 0.95)[6],
    }


def _time(fn, repeats):
    out = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--scale", type=int, default=0, help="grow the permanent/Hall instances")
    args = ap.parse_args()
    nb, npy = kernels.get_backend("numba"), kernels.get_backend("numpy")
    print(f"{'kernel':<34}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, fn in _cases(args.scale).items():
        assert fn(nb) == fn(npy), f"backends disagree on {name}"
        tn = statistics.mean(_time(lambda: fn(nb), args.repeats))
        tp = statistics.mean(_time(lambda: fn(npy), args.repeats))
        print(f"{name:<34}{tn:>12.4f}{tp:>12.4f}{tp / tn:>9.1f}x")


if __name__ == "__main__":
    main()
