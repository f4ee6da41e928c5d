from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_derangements, brute_hall_max_deficiency, labeled_connected_graphs
from raidgraph.derangement import (
    Cycle,
    Derangement,
    InvalidDerangementError,
    Pair,
    count_derangements,
    derangement_upper_bound,
    find_derangement,
    hall_witness,
    q_factor,
)
from raidgraph.graph import Graph, generate, neighborhood, random_connected


def _double_cover_matching(g):
    b = nx.Graph()
    b.add_nodes_from((("L", v) for v in range(g.n)))
    b.add_nodes_from((("R", v) for v in range(g.n)))
    b.add_edges_from((("L", u), ("R", w)) for u in range(g.n) for w in g.adj[u])
    top = [("L", v) for v in range(g.n)]
    return len(nx.bipartite.maximum_matching(b, top_nodes=top)) // 2


def test_find_examples():
    d = find_derangement(generate("cycle", 4))
    d.validate(generate("cycle", 4))
    assert find_derangement(generate("star", 3)) is None
    assert brute_derangements(generate("star", 3)) == []
    assert find_derangement(generate("complete", 2)).map == (1, 0)


def test_find_is_deterministic():
    g = random_connected(10, 0.4, 5)
    assert find_derangement(g) == find_derangement(g)


def test_hall_examples():
    w = hall_witness(generate("star", 3))
    assert w.w == {1, 2, 3} and w.neighborhood == {0}
    assert hall_witness(generate("cycle", 4)) is None
    assert hall_witness(generate("complete", 2)) is None


def test_hall_guard():
    with pytest.raises(ValueError):
        hall_witness(generate("path", 25))


def test_hall_witness_choice_rule():
    # maximum deficiency, then fewest vertices, then smallest bitmask
    g = generate("path", 3)
    w = hall_witness(g)
    assert w.w == {0, 2}
    assert len(w.w) - len(w.neighborhood) == 1
    g = Graph.from_edges(5, [(0, 1), (0, 2), (3, 4), (3, 1)])
    assert brute_hall_max_deficiency(g) == 1
    best = min(
        (sum(1 << v for v in c) for k in range(1, 6) for c in combinations(range(5), k)
         if k - len(neighborhood(g, c)) == 1),
        key=lambda m: (bin(m).count("1"), m),
    )
    assert sum(1 << v for v in hall_witness(g).w) == best


def test_q_factor_examples():
    k2 = generate("complete", 2)
    assert q_factor(k2, Derangement((1, 0))).components == (Pair(0, 1),)
    c4 = generate("cycle", 4)
    assert q_factor(c4, Derangement((1, 2, 3, 0))).components == (Cycle((0, 1, 2, 3)),)
    c6 = generate("cycle", 6)
    qf = q_factor(c6, Derangement((1, 0, 3, 2, 5, 4)))
    assert qf.components == (Pair(0, 1), Pair(2, 3), Pair(4, 5))
    qf.validate(c6)


def test_q_factor_rejects_invalid():
    c4 = generate("cycle", 4)
    with pytest.raises(InvalidDerangementError):
        q_factor(c4, Derangement((2, 3, 0, 1)))  # not edges
    with pytest.raises(InvalidDerangementError):
        q_factor(c4, Derangement((1, 0, 2, 3)))  # fixed points
    with pytest.raises(InvalidDerangementError):
        q_factor(c4, Derangement((1, 0, 1, 2)))  # not injective


def test_count_examples():
    for name, size, expected in [("cycle", 4, 4), ("complete", 4, 9), ("path", 3, 0)]:
        g = generate(name, size)
        assert len(brute_derangements(g)) == expected
        assert count_derangements(g) == expected


def test_count_guard():
    with pytest.raises(ValueError):
        count_derangements(generate("cycle", 21))


def test_count_complete_20_exact():
    assert count_derangements(generate("complete", 20)) == derangement_upper_bound(20) == 895014631192902121


def test_upper_bound():
    assert [derangement_upper_bound(n) for n in (1, 2, 3, 4, 5)] == [0, 1, 2, 9, 44]
    import mpmath

    with mpmath.workdps(60):
        for n in range(1, 21):
            assert derangement_upper_bound(n) == int(mpmath.nint(mpmath.factorial(n) / mpmath.e))
    with pytest.raises(ValueError):
        derangement_upper_bound(0)
    with pytest.raises(ValueError):
        derangement_upper_bound(21)


def test_families():
    for n in range(3, 12):
        assert find_derangement(generate("cycle", n)) is not None
    for k in range(2, 10):
        assert find_derangement(generate("star", k)) is None


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_exhaustive_small(n):
    for g in labeled_connected_graphs(n):
        brute = brute_derangements(g)
        d = find_derangement(g)
        assert (d is not None) == bool(brute)
        assert count_derangements(g) == len(brute)
        if d is not None:
            assert d.map in brute
            q_factor(g, d).validate(g)
        assert (hall_witness(g) is None) == (d is not None)


graphs = st.integers(1, 9).flatmap(
    lambda n: st.builds(
        lambda n, es: Graph.from_edges(n, sorted(es)),
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1])),
    )
)


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_properties_on_arbitrary_graphs(g):
    # disconnected graphs are allowed here
    d = find_derangement(g)
    w = hall_witness(g)
    count = count_derangements(g)
    assert (d is None) == (w is not None)
    assert (count >= 1) == (d is not None)
    assert count <= derangement_upper_bound(g.n)
    deficiency = 0 if w is None else len(w.w) - len(w.neighborhood)
    assert deficiency == brute_hall_max_deficiency(g)
    assert deficiency == g.n - _double_cover_matching(g)
    if g.n <= 7:
        assert count == len(brute_derangements(g))
    if d is not None:
        d.validate(g)
        qf = q_factor(g, d)
        qf.validate(g)
        assert sorted(v for c in qf.components for v in c.vertices) == list(range(g.n))
