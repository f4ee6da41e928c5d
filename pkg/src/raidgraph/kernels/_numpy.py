"""Vectorised numpy kernels; same contracts as ``_numba``."""

import numpy as np

_CHUNK = 1 << 16
_MOD = 1 << 64


def _bits(masks, n):
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.uint64)


def _popcounts(x):
    x = x.astype(np.uint64)
    c = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        c += (x & np.uint64(1)).astype(np.int64)
        x = x >> np.uint64(1)
    return c


def permanent_mod64(a):
    """Permanent of a square 0/1 matrix, reduced modulo 2**64."""
    a = np.ascontiguousarray(a, dtype=np.uint64)
    n = a.shape[0]
    if n == 0:
        return 1
    total = 0
    at = a.T.copy()
    for lo in range(1, 1 << n, _CHUNK):
        masks = np.arange(lo, min(lo + _CHUNK, 1 << n), dtype=np.int64)
        b = _bits(masks, n)
        rowsums = b @ at
        prods = np.prod(rowsums, axis=1, dtype=np.uint64)
        odd = (n - b.sum(axis=1, dtype=np.int64)) % 2 == 1
        total += int(prods[~odd].sum(dtype=np.uint64)) - int(prods[odd].sum(dtype=np.uint64))
    return total % _MOD


def hall_scan(masks, n):
    """Maximum-deficiency Hall violator as a bitmask, or -1 (see ``_numba``)."""
    best = None  # (deficiency, -size, -mask), maximised
    for lo in range(1, 1 << n, 1 << 18):
        subsets = np.arange(lo, min(lo + (1 << 18), 1 << n), dtype=np.int64)
        nb = np.zeros_like(subsets)
        for v in range(n):
            nb |= np.where((subsets >> v) & 1 == 1, masks[v], 0)
        k = _popcounts(subsets)
        d = k - _popcounts(nb)
        dmax = int(d.max())
        if dmax <= 0:
            continue
        sel = d == dmax
        kmin = int(k[sel].min())
        cand = int(subsets[sel & (k == kmin)].min())
        key = (dmax, -kmin, -cand)
        if best is None or key > best:
            best = key
    return -1 if best is None else -best[2]


def _decode(idx, nstrat):
    n = nstrat.shape[0]
    digits = np.empty((idx.shape[0], n), dtype=np.int64)
    rem = idx.copy()
    for v in range(n - 1, -1, -1):
        digits[:, v] = rem % nstrat[v]
        rem //= nstrat[v]
    return digits


def _scaled_payoff(v, target, is_home, home_occ, target_occ, target_defends, p, q):
    k = target_occ
    share = np.where(target_defends, q - p, q)
    raid = share + np.where(home_occ == 0, q * k, 0)
    return np.where(is_home, p * k + q - p, raid), k


def strict_nash_indices(strat, nstrat, p, q, start, stop):
    n = strat.shape[0]
    cols = np.arange(n)
    out = []
    for lo in range(start, stop, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.int64)
        fmap = strat[cols, _decode(idx, nstrat)]
        occ = (fmap[:, :, None] == cols).sum(axis=1)
        defends = fmap == cols
        ok = np.ones(idx.shape[0], dtype=bool)
        rows = np.arange(idx.shape[0])
        for v in range(n):
            a = fmap[:, v]
            n0, d0 = _scaled_payoff(
                v, a, a == v, occ[:, v], occ[rows, a], defends[rows, a], p, q
            )
            for j in range(nstrat[v]):
                s = int(strat[v, j])
                moving = a != s
                home_occ = occ[:, v] - (a == v) + (s == v)
                if s == v:
                    n1, d1 = _scaled_payoff(v, s, True, home_occ, home_occ, True, p, q)
                else:
                    n1, d1 = _scaled_payoff(
                        v, s, False, home_occ, occ[:, s] + 1, defends[:, s], p, q
                    )
                ok &= ~moving | (n1 * d0 < n0 * d1)
        out.append(idx[ok])
    if not out:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(out)


def _float_payoffs(fmap, h):
    n = fmap.shape[0]
    cols = np.arange(n)
    occ = np.bincount(fmap, minlength=n)
    k = occ[fmap]
    home = fmap == cols
    share = np.where(fmap[fmap] == fmap, 1.0 - h, 1.0)
    raid = share / k + (occ == 0)
    return np.where(home, h + (1.0 - h) / k, raid)


def exp3_play(strat, nstrat, h, gamma, uniforms, window, threshold):
    T, n = uniforms.shape
    kmax = strat.shape[1]
    valid = np.arange(kmax)[None, :] < nstrat[:, None]
    K = nstrat.astype(np.float64)
    rows = np.arange(n)
    logw = np.zeros((n, kmax))
    plays = np.zeros((n, kmax), dtype=np.int64)
    counts = np.zeros((n, kmax), dtype=np.int64)
    actions = np.zeros((T, n), dtype=np.int64)
    chosen_p = np.zeros((T, n))
    payoffs = np.zeros((T, n))
    need = threshold * window * (1.0 - gamma + gamma / K)
    rounds, converged = T, False
    for t in range(T):
        lw = np.where(valid, logw, -np.inf)
        e = np.exp(lw - lw.max(axis=1, keepdims=True))
        probs = (1.0 - gamma) * e / e.sum(axis=1, keepdims=True) + np.where(
            valid, gamma / K[:, None], 0.0
        )
        cdf = np.cumsum(probs, axis=1)
        choice = (uniforms[t][:, None] >= cdf).sum(axis=1)
        choice = np.minimum(choice, nstrat - 1)
        fmap = strat[rows, choice]
        r = _float_payoffs(fmap, h)
        pc = probs[rows, choice]
        actions[t], chosen_p[t], payoffs[t] = choice, pc, r
        logw[rows, choice] += gamma * (0.5 * r / pc) / K
        plays[rows, choice] += 1
        counts[rows, choice] += 1
        if t >= window:
            counts[rows, actions[t - window]] -= 1
        if t + 1 >= window and np.all(counts.max(axis=1) >= need):
            converged, rounds = True, t + 1
            break
    return (actions[:rounds], chosen_p[:rounds], payoffs[:rounds],
            logw, plays, counts, rounds, converged)
