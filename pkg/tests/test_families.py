from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antiramsey.families import (
    FORESTS,
    LINEAR_FORESTS,
    MATCHINGS,
    ODD_GRAPHS,
    OUTERPLANAR,
    PLANAR,
    SINGLE_EDGE,
    TRIANGLE_FREE,
    BudgetExceeded,
    FamilyKind,
    at_most_k_edges,
    degenerate,
    enumerate_maximal_members,
    enumerate_members,
    family_chromatic_cap,
    family_contains,
    greedy_maximal_member,
    is_outerplanar,
    is_planar,
    k_colorable,
    max_degree,
    parse_family,
)
from antiramsey.graph import (
    SimpleGraph,
    book,
    chromatic_number,
    complete,
    complete_multipartite,
    cycle,
    petersen,
    wheel,
)

from conftest import random_graph

HEREDITARY = [
    SINGLE_EDGE,
    MATCHINGS,
    FORESTS,
    LINEAR_FORESTS,
    TRIANGLE_FREE,
    PLANAR,
    OUTERPLANAR,
    at_most_k_edges(2),
    max_degree(2),
    degenerate(1),
    k_colorable(2),
]


# --- independent oracles ------------------------------------------------------


def _has_complete_bipartite_sub(g, a, b):
    for verts in combinations(range(g.n), a + b):
        for left in combinations(verts, a):
            right = [v for v in verts if v not in left]
            if all(g.has_edge(x, y) for x in left for y in right):
                return True
    return False


def _has_clique_minor_tiny(g, k):
    """K_k minor on at most k+1 vertices: k singletons, or k-1 singletons plus an adjacent pair."""
    for verts in combinations(range(g.n), k):
        if all(g.has_edge(x, y) for x, y in combinations(verts, 2)):
            return True
    if g.n == k + 1:
        for x, y in combinations(range(g.n), 2):
            if not g.has_edge(x, y):
                continue
            rest = [v for v in range(g.n) if v not in (x, y)]
            if all(g.has_edge(u, v) for u, v in combinations(rest, 2)) and all(
                g.has_edge(u, x) or g.has_edge(u, y) for u in rest
            ):
                return True
    return False


def planar_oracle(g):
    assert g.n <= 6
    return not (_has_clique_minor_tiny(g, 5) or _has_complete_bipartite_sub(g, 3, 3))


def outerplanar_oracle(g):
    assert g.n <= 5
    return not (_has_clique_minor_tiny(g, 4) or _has_complete_bipartite_sub(g, 2, 3))


def forest_oracle(g):
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in g.edges():
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
    return True


def degeneracy_oracle(g):
    best = 0
    for mask in range(1, 1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        best = max(best, min(sum(g.has_edge(v, u) for u in vs) for v in vs))
    return best


# --- parsing and examples -----------------------------------------------------


def test_parse_family():
    assert parse_family("Matchings") == MATCHINGS
    assert parse_family("edges<=3") == at_most_k_edges(3)
    assert parse_family("maxdeg<=2") == max_degree(2)
    assert parse_family("chrom<=3") == k_colorable(3)
    assert parse_family("PLANAR") == PLANAR
    assert str(parse_family("degen<=2")) == "degen<=2"
    with pytest.raises(ValueError):
        parse_family("spanning-trees")


def test_membership_examples():
    assert family_contains(MATCHINGS, SimpleGraph.from_edges(4, [(0, 1), (2, 3)]))
    assert not family_contains(MATCHINGS, SimpleGraph.from_edges(3, [(0, 1), (1, 2)]))
    assert family_contains(PLANAR, complete(4))
    assert not family_contains(PLANAR, complete(5))
    assert not family_contains(PLANAR, complete_multipartite([3, 3]))
    assert not family_contains(PLANAR, petersen())
    assert family_contains(OUTERPLANAR, cycle(6))
    assert not family_contains(OUTERPLANAR, complete_multipartite([2, 3]))
    assert not family_contains(OUTERPLANAR, complete(4))
    assert family_contains(FORESTS, SimpleGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)]))
    assert not family_contains(LINEAR_FORESTS, SimpleGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)]))
    assert family_contains(ODD_GRAPHS, complete(4))
    assert not family_contains(ODD_GRAPHS, cycle(4))
    assert family_contains(SINGLE_EDGE, SimpleGraph.empty(5))
    assert family_contains(degenerate(2), wheel(5)) is False
    assert family_contains(degenerate(3), wheel(5))


def test_odd_graphs_not_hereditary():
    assert not ODD_GRAPHS.hereditary
    assert all(f.hereditary for f in HEREDITARY)
    with pytest.raises(ValueError):
        list(enumerate_maximal_members(ODD_GRAPHS, complete(4)))


def test_chromatic_caps():
    assert family_chromatic_cap(MATCHINGS) == 2
    assert family_chromatic_cap(FORESTS) == 2
    assert family_chromatic_cap(PLANAR) == 4
    assert family_chromatic_cap(OUTERPLANAR) == 3
    assert family_chromatic_cap(degenerate(2)) == 3
    assert family_chromatic_cap(k_colorable(3)) == 3
    assert family_chromatic_cap(max_degree(3)) == 4
    assert family_chromatic_cap(at_most_k_edges(3)) == 3
    assert family_chromatic_cap(at_most_k_edges(2)) == 2
    assert family_chromatic_cap(TRIANGLE_FREE) is None


def test_planarity_size_cap():
    with pytest.raises(ValueError):
        is_planar(complete(17))
    # isolated vertices do not count toward the cap
    assert is_planar(SimpleGraph.from_edges(40, [(0, 39)]))


def test_planarity_matches_minor_oracle(rng):
    for _ in range(300):
        g = random_graph(rng.randint(1, 6), rng.uniform(0.4, 1.0), rng)
        assert is_planar(g) == planar_oracle(g), g.edges()


def test_outerplanarity_matches_minor_oracle(rng):
    for _ in range(300):
        g = random_graph(rng.randint(1, 5), rng.uniform(0.3, 1.0), rng)
        assert is_outerplanar(g) == outerplanar_oracle(g), g.edges()


def test_structural_families_match_oracles(rng):
    for _ in range(100):
        g = random_graph(rng.randint(1, 7), rng.random(), rng)
        assert family_contains(FORESTS, g) == forest_oracle(g)
        assert family_contains(degenerate(2), g) == (degeneracy_oracle(g) <= 2)
        tri = any(g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c) for a, b, c in combinations(range(g.n), 3))
        assert family_contains(TRIANGLE_FREE, g) == (not tri)


@pytest.mark.parametrize("f", HEREDITARY, ids=str)
def test_cap_bounds_member_chromatic_number(f, rng):
    cap = family_chromatic_cap(f)
    for _ in range(40):
        g = random_graph(rng.randint(1, 7), rng.random(), rng)
        if cap is not None and family_contains(f, g):
            assert chromatic_number(g) <= cap


# --- maximal members ------------------------------------------------------------


def brute_maximal(f, g):
    edges = g.edges()
    members = []
    for mask in range(1 << len(edges)):
        sub = [e for i, e in enumerate(edges) if mask >> i & 1]
        if family_contains(f, SimpleGraph.from_edges(g.n, sub)):
            members.append(frozenset(sub))
    return {s for s in members if not any(s < t for t in members)}, {s for s in members if s}


@pytest.mark.parametrize("f", HEREDITARY, ids=str)
def test_maximal_members_match_subset_enumeration(f, rng):
    for _ in range(6):
        n = rng.randint(2, 6)
        g = random_graph(n, 0.6, rng)
        while g.edge_count > 12:
            g = random_graph(n, 0.5, rng)
        want_max, want_all = brute_maximal(f, g)
        got = [m.edges for m in enumerate_maximal_members(f, g)]
        assert len(got) == len(set(got))
        assert set(got) == want_max
        assert set(enumerate_members(f, g)) == want_all


def test_k4_maximal_member_counts():
    assert len(list(enumerate_maximal_members(FORESTS, complete(4)))) == 16
    assert len(list(enumerate_maximal_members(MATCHINGS, complete(4)))) == 3
    assert len(list(enumerate_maximal_members(SINGLE_EDGE, complete(4)))) == 6


def test_enumeration_is_deterministic():
    a = [m.sorted_edges() for m in enumerate_maximal_members(FORESTS, wheel(4))]
    b = [m.sorted_edges() for m in enumerate_maximal_members(FORESTS, wheel(4))]
    assert a == b


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_maximal_members(FORESTS, complete(7), budget=50))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.randoms(use_true_random=False), st.sampled_from(HEREDITARY))
def test_greedy_member_is_maximal(n, r, f):
    g = random_graph(n, 0.6, r)
    m = greedy_maximal_member(f, g)
    h = m.graph()
    assert family_contains(f, h)
    for e in g.edges():
        if e not in m.edges:
            assert not family_contains(f, SimpleGraph.from_edges(g.n, list(m.edges) + [e]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.randoms(use_true_random=False), st.sampled_from(HEREDITARY))
def test_heredity(n, r, f):
    g = random_graph(n, 0.6, r)
    if not family_contains(f, g):
        return
    for e in g.edges():
        rest = [x for x in g.edges() if x != e]
        assert family_contains(f, SimpleGraph.from_edges(n, rest))


def test_membership_ignores_isolated_vertices():
    for f in HEREDITARY:
        for h in (cycle(4), book(2), complete(3)):
            padded = SimpleGraph.from_edges(h.n + 3, h.edges())
            assert family_contains(f, h) == family_contains(f, padded)


def test_family_kind_strings():
    assert {k.value for k in FamilyKind} >= {"matchings", "planar", "forests", "edge"}
