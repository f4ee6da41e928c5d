"""Brute-force reference implementations, independent of the package's fast paths."""

from fractions import Fraction
from itertools import combinations, permutations, product

from raidgraph.graph import Graph, is_connected


def brute_derangements(g: Graph):
    return [
        p for p in permutations(range(g.n))
        if all(p[v] != v and g.has_edge(v, p[v]) for v in range(g.n))
    ]


def brute_hall_max_deficiency(g: Graph) -> int:
    best = 0
    for k in range(1, g.n + 1):
        for w in combinations(range(g.n), k):
            nb = set()
            for v in w:
                nb.update(g.adj[v])
            best = max(best, k - len(nb))
    return best


def literal_payoff(g: Graph, fmap, h: Fraction, v: int) -> Fraction:
    """Direct case-by-case transcription of the payoff rules, using preimage sets."""
    pre = {w: [u for u in range(g.n) if fmap[u] == w] for w in range(g.n)}
    target = fmap[v]
    if target == v:
        return h + (1 - h) / len(pre[v])
    home_empty = len(pre[v]) == 0
    target_defends = fmap[target] == target
    if home_empty and target_defends:
        return 1 + (1 - h) / len(pre[target])
    if home_empty:
        return 1 + Fraction(1, len(pre[target]))
    if target_defends:
        return (1 - h) / len(pre[target])
    return Fraction(1, len(pre[target]))


def all_profiles(g: Graph):
    return product(*[sorted((v, *g.adj[v])) for v in range(g.n)])


def brute_strict_nash(g: Graph, h: Fraction):
    out = []
    for fmap in all_profiles(g):
        strict = True
        for v in range(g.n):
            cur = literal_payoff(g, fmap, h, v)
            for s in (v, *g.adj[v]):
                if s == fmap[v]:
                    continue
                alt = list(fmap)
                alt[v] = s
                if literal_payoff(g, alt, h, v) >= cur:
                    strict = False
                    break
            if not strict:
                break
        if strict:
            out.append(tuple(fmap))
    return out


def labeled_connected_graphs(n: int):
    """Every connected simple graph on vertex set 0..n-1 (labeled, not up to isomorphism)."""
    pairs = list(combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (bits >> i) & 1]
        if len(edges) < n - 1:
            continue
        g = Graph.from_edges(n, edges)
        if is_connected(g):
            yield g
