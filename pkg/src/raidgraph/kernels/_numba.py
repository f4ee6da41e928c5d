"""numba-compiled kernels.

Integer conventions shared with ``_numpy``:

* Ryser sums run in uint64 and wrap modulo 2**64. Every step is a ring
  operation and the true permanent of an n <= 20 zero-one matrix is below
  20! < 2**63, so the wrapped result is exact.
* Game payoffs are scaled by ``q`` for ``h = p/q`` and returned as
  ``(numerator, occupancy)`` pairs; comparisons cross-multiply in int64.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True)
def _ctz(x):
    j = 0
    while (x & 1) == 0:
        x >>= 1
        j += 1
    return j


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _ryser(a):
    n = a.shape[0]
    rs = np.zeros(n, dtype=np.uint64)
    total = _ZERO
    size = 0
    for k in range(1, 1 << n):
        j = _ctz(k)
        gray = k ^ (k >> 1)
        if (gray >> j) & 1:
            size += 1
            for i in range(n):
                rs[i] += a[i, j]
        else:
            size -= 1
            for i in range(n):
                rs[i] -= a[i, j]
        prod = _ONE
        for i in range(n):
            prod *= rs[i]
            if prod == _ZERO:
                break
        if (n - size) % 2 == 0:
            total += prod
        else:
            total -= prod
    return total


def permanent_mod64(a):
    """Permanent of a square 0/1 matrix, reduced modulo 2**64."""
    a = np.ascontiguousarray(a, dtype=np.uint64)
    if a.shape[0] == 0:
        return 1
    return int(_ryser(a))


@njit(cache=True)
def hall_scan(masks, n):
    """Hall-violating subset of maximum deficiency ``|W| - |N(W)|``, or -1.

    Ties go to the smaller subset, then to the smaller bitmask.
    """
    best_def = 0
    best_k = n + 1
    best = np.int64(-1)
    for mask in range(1, np.int64(1) << n):
        nb = np.int64(0)
        k = 0
        for v in range(n):
            if (mask >> v) & 1:
                nb |= masks[v]
                k += 1
        d = k - _popcount(nb)
        if d > best_def or (d == best_def and d > 0 and k < best_k):
            best_def = d
            best_k = k
            best = mask
    return best


@njit(cache=True)
def _scaled_payoff(v, target, occ, fmap, p, q):
    k = occ[target]
    if target == v:
        return p * k + q - p, k
    share = q - p if fmap[target] == target else q
    if occ[v] == 0:
        return q * k + share, k
    return share, k


@njit(cache=True)
def _is_strict(fmap, occ, strat, nstrat, p, q):
    n = fmap.shape[0]
    for v in range(n):
        a = fmap[v]
        n0, d0 = _scaled_payoff(v, a, occ, fmap, p, q)
        for j in range(nstrat[v]):
            s = strat[v, j]
            if s == a:
                continue
            occ[a] -= 1
            occ[s] += 1
            fmap[v] = s
            n1, d1 = _scaled_payoff(v, s, occ, fmap, p, q)
            fmap[v] = a
            occ[s] -= 1
            occ[a] += 1
            if n1 * d0 >= n0 * d1:
                return False
    return True


@njit(cache=True)
def strict_nash_indices(strat, nstrat, p, q, start, stop):
    """Mixed-radix indices in ``[start, stop)`` of strict equilibria.

    Player 0 is the most significant digit; digit ``c`` of player ``v``
    selects ``strat[v, c]``.
    """
    n = strat.shape[0]
    digits = np.zeros(n, dtype=np.int64)
    rem = start
    for v in range(n - 1, -1, -1):
        digits[v] = rem % nstrat[v]
        rem //= nstrat[v]
    fmap = np.empty(n, dtype=np.int64)
    occ = np.zeros(n, dtype=np.int64)
    for v in range(n):
        fmap[v] = strat[v, digits[v]]
        occ[fmap[v]] += 1
    out = np.empty(64, dtype=np.int64)
    found = 0
    for idx in range(start, stop):
        if _is_strict(fmap, occ, strat, nstrat, p, q):
            if found == out.shape[0]:
                grown = np.empty(2 * found, dtype=np.int64)
                grown[:found] = out
                out = grown
            out[found] = idx
            found += 1
        v = n - 1
        while v >= 0:
            occ[fmap[v]] -= 1
            digits[v] += 1
            if digits[v] == nstrat[v]:
                digits[v] = 0
                fmap[v] = strat[v, 0]
                occ[fmap[v]] += 1
                v -= 1
            else:
                fmap[v] = strat[v, digits[v]]
                occ[fmap[v]] += 1
                break
    return out[:found]


@njit(cache=True)
def _float_payoff(v, target, occ, fmap, h):
    k = occ[target]
    if target == v:
        return h + (1.0 - h) / k
    share = 1.0 - h if fmap[target] == target else 1.0
    if occ[v] == 0:
        return 1.0 + share / k
    return share / k


@njit(cache=True)
def exp3_play(strat, nstrat, h, gamma, uniforms, window, threshold):
    """Repeated simultaneous Exp3 play, one learner per player.

    ``strat[v, :nstrat[v]]`` lists player v's actions. Weights are kept as
    logarithms. Stops early once, for every player, the modal action's
    count over the trailing ``window`` rounds reaches ``threshold`` times
    the largest expected count the exploration floor allows,
    ``window * (1 - gamma + gamma / K)``.
    """
    T, n = uniforms.shape
    kmax = strat.shape[1]
    logw = np.zeros((n, kmax))
    plays = np.zeros((n, kmax), dtype=np.int64)
    counts = np.zeros((n, kmax), dtype=np.int64)
    probs = np.zeros((n, kmax))
    actions = np.zeros((T, n), dtype=np.int64)
    chosen_p = np.zeros((T, n))
    payoffs = np.zeros((T, n))
    fmap = np.empty(n, dtype=np.int64)
    occ = np.zeros(n, dtype=np.int64)
    rounds = T
    converged = False
    for t in range(T):
        for v in range(n):
            K = nstrat[v]
            mx = logw[v, 0]
            for i in range(1, K):
                if logw[v, i] > mx:
                    mx = logw[v, i]
            s = 0.0
            for i in range(K):
                probs[v, i] = np.exp(logw[v, i] - mx)
                s += probs[v, i]
            for i in range(K):
                probs[v, i] = (1.0 - gamma) * probs[v, i] / s + gamma / K
        occ[:] = 0
        for v in range(n):
            K = nstrat[v]
            u = uniforms[t, v]
            choice = K - 1
            acc = 0.0
            for i in range(K):
                acc += probs[v, i]
                if u < acc:
                    choice = i
                    break
            actions[t, v] = choice
            chosen_p[t, v] = probs[v, choice]
            fmap[v] = strat[v, choice]
            occ[fmap[v]] += 1
        for v in range(n):
            K = nstrat[v]
            i = actions[t, v]
            r = _float_payoff(v, fmap[v], occ, fmap, h)
            payoffs[t, v] = r
            xhat = 0.5 * r / probs[v, i]
            logw[v, i] += gamma * xhat / K
            plays[v, i] += 1
            counts[v, i] += 1
            if t >= window:
                counts[v, actions[t - window, v]] -= 1
        if t + 1 >= window:
            ok = True
            for v in range(n):
                best = 0
                for i in range(nstrat[v]):
                    if counts[v, i] > best:
                        best = counts[v, i]
                K = nstrat[v]
                if best < threshold * window * (1.0 - gamma + gamma / K):
                    ok = False
                    break
            if ok:
                converged = True
                rounds = t + 1
                break
    return (actions[:rounds], chosen_p[:rounds], payoffs[:rounds],
            logw, plays, counts, rounds, converged)
