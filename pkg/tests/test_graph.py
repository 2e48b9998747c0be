import math
import random
from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antiramsey.graph import (
    Edge,
    SimpleGraph,
    build_graph,
    chromatic_number,
    complete,
    complete_multipartite,
    cycle,
    delete_edges,
    find_subgraph,
    has_clique,
    is_isomorphic,
    named_graph,
    parse_graph_literal,
    path,
    petersen,
    read_edge_list,
    structural_stats,
    turan,
    write_edge_list,
)

from conftest import brute_chromatic, random_graph


def test_build_graph_examples():
    k3 = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert k3 == complete(3)
    assert build_graph(2, []).edge_count == 0
    c5 = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert c5.edge_count == 5


@pytest.mark.parametrize(
    "n, edges",
    [
        (3, [(0, 3)]),
        (3, [(1, 1)]),
        (3, [(0, 1), (1, 0)]),
        (65, []),
    ],
)
def test_build_graph_rejects(n, edges):
    with pytest.raises(ValueError):
        build_graph(n, edges)


def test_named_graph_sizes():
    w4 = named_graph("wheel", 4)
    assert (w4.n, w4.edge_count) == (5, 8)
    b3 = named_graph("book", 3)
    assert (b3.n, b3.edge_count) == (5, 7)
    k222 = named_graph("complete_multipartite", (2, 2, 2))
    assert (k222.n, k222.edge_count) == (6, 12)
    h = named_graph("join", cycle(4), 2)
    assert h.n == 6 and h.edge_count == 4 + 8
    assert named_graph("m", 2, 3).n == 7
    with pytest.raises(ValueError):
        named_graph("complete", 65)


def test_graph_literals():
    assert parse_graph_literal("K6") == complete(6)
    assert parse_graph_literal("W5").n == 6
    assert parse_graph_literal("M2,3").edge_count == 2 + 3 * 4
    assert parse_graph_literal("2K2").edge_count == 2
    assert parse_graph_literal("K4-e").edge_count == 5
    assert parse_graph_literal("petersen") == petersen()
    assert parse_graph_literal("some/file.txt") is None


def test_chromatic_examples():
    assert chromatic_number(complete(5)) == 5
    assert chromatic_number(cycle(5)) == 3
    assert chromatic_number(SimpleGraph.empty(0)) == 0
    assert chromatic_number(SimpleGraph.empty(4)) == 1


def test_petersen_chromatic_against_enumeration():
    g = petersen()
    edges = g.edges()
    two = any(all(c[u] != c[v] for u, v in edges) for c in product(range(2), repeat=10))
    three = any(all(c[u] != c[v] for u, v in edges) for c in product(range(3), repeat=10))
    assert not two and three
    assert chromatic_number(g) == 3


def test_chromatic_matches_brute_force(rng):
    for _ in range(60):
        g = random_graph(rng.randint(1, 7), rng.random(), rng)
        assert chromatic_number(g) == brute_chromatic(g)


def test_isomorphism_examples():
    assert is_isomorphic(cycle(4), complete_multipartite([2, 2]))
    assert not is_isomorphic(complete(3), path(3))
    rng = random.Random(5)
    perm = list(range(10))
    rng.shuffle(perm)
    assert is_isomorphic(petersen(), petersen().relabel(perm))


def test_isomorphism_size_cap():
    with pytest.raises(ValueError):
        is_isomorphic(complete(17), complete(17))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.randoms(use_true_random=False), st.floats(0.0, 1.0))
def test_isomorphism_invariant_under_relabeling(n, r, p):
    g = random_graph(n, p, r)
    perm = list(range(n))
    r.shuffle(perm)
    assert is_isomorphic(g, g.relabel(perm))
    assert is_isomorphic(g.relabel(perm), g)


def test_isomorphism_rejects_non_isomorphic_same_degrees():
    # C6 and two triangles share the degree sequence
    two_triangles = SimpleGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not is_isomorphic(cycle(6), two_triangles)


def _brute_girth(g):
    for k in range(3, g.n + 1):
        for verts in permutations(range(g.n), k):
            if verts[0] != min(verts):
                continue
            if all(g.has_edge(verts[i], verts[(i + 1) % k]) for i in range(k)):
                return k
    return math.inf


def test_structural_stats_examples():
    s = structural_stats(complete(4))
    assert (s.max_degree, s.degeneracy, s.girth, s.is_bipartite) == (3, 3, 3, False)
    s = structural_stats(path(4))
    assert s.degeneracy == 1 and s.girth == math.inf and s.is_bipartite
    assert s.to_dict()["girth"] == "inf"
    s = structural_stats(petersen())
    assert s.degeneracy == 3
    assert s.girth == _brute_girth(petersen()) == 5


def test_stats_invariants(rng):
    for _ in range(40):
        g = random_graph(rng.randint(1, 8), rng.random(), rng)
        s = structural_stats(g)
        assert s.degeneracy <= s.max_degree
        assert s.girth == _brute_girth(g)
        assert s.is_bipartite == (s.girth == math.inf or s.girth % 2 == 0)
        assert s.degeneracy + 1 >= chromatic_number(g)


def test_delete_edges():
    k4 = complete(4)
    c4 = delete_edges(k4, [(0, 2), (1, 3)])
    assert is_isomorphic(c4, cycle(4))
    assert delete_edges(k4, []) == k4
    k6 = delete_edges(complete(6), [(0, 1), (1, 2), (0, 2)])
    assert k6.edge_count == 12
    assert chromatic_number(k6) == brute_chromatic(k6) == 4
    with pytest.raises(ValueError):
        delete_edges(cycle(4), [(0, 2)])


def test_chromatic_monotone_under_edge_deletion(rng):
    for _ in range(30):
        g = random_graph(rng.randint(2, 8), 0.6, rng)
        es = g.edges()
        drop = [e for e in es if rng.random() < 0.3]
        assert chromatic_number(delete_edges(g, drop)) <= chromatic_number(g)


@pytest.mark.parametrize("n", range(1, 13))
@pytest.mark.parametrize("r", range(1, 6))
def test_turan_graph(n, r):
    g = turan(n, r)
    assert chromatic_number(g) == min(r, n)
    assert not has_clique(g, r + 1)


def test_find_subgraph_is_not_induced():
    phi = find_subgraph(cycle(4), complete(4))
    assert phi is not None and len(set(phi)) == 4
    assert find_subgraph(complete(3), complete_multipartite([3, 3])) is None


def test_edge_list_round_trip(rng):
    g = random_graph(7, 0.5, rng)
    text = write_edge_list(g)
    assert read_edge_list(text) == g
    assert write_edge_list(read_edge_list(text)) == text


def test_edge_list_reader_accepts_comments_and_order():
    text = "# a triangle\n3 3\n2 1\n0 2  # chord\n1 0\n"
    assert read_edge_list(text) == complete(3)
    assert write_edge_list(complete(3)) == "3 3\n0 1\n0 2\n1 2\n"


def test_edges_sorted():
    assert complete(3).edges() == [Edge(0, 1), Edge(0, 2), Edge(1, 2)]
