import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antiramsey.extremal import EdgeColoring, all_edges
from antiramsey.families import BudgetExceeded
from antiramsey.transversal import (
    ForbiddenScan,
    NotRainbow,
    PartedDigraph,
    PreconditionError,
    Transversal,
    find_transversal_exact,
    is_independent_transversal,
    itl_multifold,
    itl_transversal,
    rainbow_cut,
    random_parted_digraph,
    random_rainbow_instance,
    read_digraph,
    scan_forbidden_substructures,
    search_blocking_digraph,
    smd_construct,
    verify_rainbow_cut,
    write_digraph,
)


def brute_has_transversal(d):
    for pick in product(*(d.part_vertices(i) for i in range(d.m))):
        mask = sum(1 << x for x in pick)
        if all(not d.out[x] & mask for x in pick):
            return True
    return False


def test_parted_digraph_drops_internal_arcs():
    d = PartedDigraph.from_arcs(2, 2, [(0, 1), (0, 2), (3, 3)])
    assert d.dropped == 2
    assert d.arcs() == [(0, 2)]
    assert d.max_out_degree == 1
    with pytest.raises(ValueError):
        PartedDigraph.from_arcs(2, 2, [(0, 4)])


def test_arcless_examples():
    d = PartedDigraph.from_arcs(3, 4, [])
    assert itl_transversal(d).chosen == ((0,), (4,), (8,))
    assert find_transversal_exact(d).chosen == ((0,), (4,), (8,))
    t = itl_multifold(d, 2)
    assert is_independent_transversal(d, t) and t.fold == 2


def test_shift_pattern():
    # each vertex points at the vertex in the same slot of the other part
    d = PartedDigraph.from_arcs(2, 3, [(i, 3 + i) for i in range(3)] + [(3 + i, (i + 1) % 3) for i in range(3)])
    assert d.max_out_degree == 1
    t = itl_transversal(d)
    assert is_independent_transversal(d, t)
    assert find_transversal_exact(d) is not None


def test_itl_precondition():
    d = PartedDigraph.from_arcs(2, 2, [(0, 2)])
    with pytest.raises(PreconditionError):
        itl_transversal(d)


def test_itl_trace_positive_and_decreasing():
    rng = random.Random(3)
    d = random_parted_digraph(3, 7, 2, rng)
    trace = []
    t = itl_transversal(d, trace)
    assert is_independent_transversal(d, t)
    assert len(trace) == 4 and all(x > 0 for x in trace)
    assert trace[0] <= 7**3


def test_itl_agrees_with_exact_search():
    rng = random.Random(11)
    for _ in range(500):
        m = rng.randint(2, 4)
        delta = rng.randint(1, 3)
        s = m * delta + 1
        d = random_parted_digraph(m, s, delta, rng)
        t = itl_transversal(d)
        assert is_independent_transversal(d, t)
        assert find_transversal_exact(d) is not None


def test_exact_search_matches_brute_force():
    rng = random.Random(7)
    for _ in range(200):
        m, s = rng.randint(2, 3), rng.randint(1, 3)
        d = random_parted_digraph(m, s, rng.randint(0, 2), rng)
        t = find_transversal_exact(d)
        assert (t is not None) == brute_has_transversal(d)
        if t is not None:
            assert is_independent_transversal(d, t)


def test_exact_search_budget():
    d = smd_construct(4, 4, "basic").digraph
    with pytest.raises(BudgetExceeded):
        find_transversal_exact(d, budget=10)


def test_multifold_examples():
    rng = random.Random(1)
    d = random_parted_digraph(2, 9, 1, rng)
    t = itl_multifold(d, 2)
    assert t.fold == 2 and is_independent_transversal(d, t)
    d = random_parted_digraph(3, 6, 1, rng)
    t = itl_multifold(d, 1)
    assert is_independent_transversal(d, t)
    with pytest.raises(PreconditionError):
        itl_multifold(random_parted_digraph(2, 7, 1, rng), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(1, 2), st.integers(1, 3), st.randoms(use_true_random=False))
def test_multifold_property(m, delta, r, rnd):
    s = (2 * r + m) * delta + r
    d = random_parted_digraph(m, s, delta, rnd)
    t = itl_multifold(d, r)
    assert is_independent_transversal(d, t)


def test_independence_check_rejects_bad_sets():
    d = PartedDigraph.from_arcs(2, 2, [(0, 2)])
    assert not is_independent_transversal(d, Transversal(((0,), (2,))))
    assert not is_independent_transversal(d, Transversal(((0,), (1,))))
    assert not is_independent_transversal(d, Transversal(((1,),)))
    assert is_independent_transversal(d, Transversal(((1,), (2,))))


# --- constructions -----------------------------------------------------------------------


@pytest.mark.parametrize("m", [3, 4])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_smd_basic(m, d):
    rec = smd_construct(m, d, "basic")
    assert rec.claimed_s == (m - 1) * d
    assert rec.digraph.max_out_degree <= d
    assert rec.verified is True


@pytest.mark.parametrize("m, d", [(3, 3), (3, 4), (4, 4)])
def test_smd_small_m(m, d):
    rec = smd_construct(m, d, "small_m")
    assert rec.claimed_s == (m - 1) * (d + 1)
    assert rec.verified is True


@pytest.mark.parametrize("m, d", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 4), (4, 3)])
def test_smd_divisible(m, d):
    rec = smd_construct(m, d, "divisible")
    assert rec.claimed_s == m * d
    assert rec.verified is True


def test_smd_examples_and_preconditions():
    assert smd_construct(3, 2, "basic").claimed_s == 4
    assert smd_construct(3, 3, "small_m").claimed_s == 8
    rec = smd_construct(2, 3, "divisible")
    assert rec.claimed_s == 6
    # underlying undirected arcs form K_{2d,2d}
    und = {frozenset(a) for a in rec.digraph.arcs()}
    assert len(und) == 36
    with pytest.raises(PreconditionError):
        smd_construct(2, 3, "basic")
    with pytest.raises(PreconditionError):
        smd_construct(4, 3, "small_m")
    with pytest.raises(PreconditionError):
        smd_construct(3, 3, "divisible")


def test_small_smd_agrees_with_brute_force():
    for m, d, v in [(3, 1, "basic"), (3, 2, "basic"), (2, 1, "divisible"), (2, 2, "divisible")]:
        assert not brute_has_transversal(smd_construct(m, d, v).digraph)


def test_blocking_search():
    assert search_blocking_digraph(3, 3, 1) is None
    d = search_blocking_digraph(3, 2, 1)
    assert d is not None and d.max_out_degree <= 1
    assert not brute_has_transversal(d)
    assert search_blocking_digraph(2, 1, 1) is not None
    # for m = 2 the divisible pattern still blocks at s = 2, so s(2,1) = 3
    assert search_blocking_digraph(2, 2, 1) is not None
    assert search_blocking_digraph(2, 3, 1) is None


def test_forbidden_scan():
    assert scan_forbidden_substructures(PartedDigraph.from_arcs(4, 2, [])) == ForbiddenScan(False, False, False)
    assert not scan_forbidden_substructures(smd_construct(2, 2, "divisible").digraph).has_C2
    d = PartedDigraph.from_arcs(4, 1, [(0, 1), (2, 3)])
    assert scan_forbidden_substructures(d).has_cross4_2K2
    d = PartedDigraph.from_arcs(3, 1, [(0, 1), (1, 2)])
    rep = scan_forbidden_substructures(d)
    assert rep.has_cross3_P3 and not rep.has_C2
    assert scan_forbidden_substructures(PartedDigraph.from_arcs(2, 1, [(0, 1), (1, 0)])).has_C2


# --- file formats ---------------------------------------------------------------------


def test_digraph_round_trip():
    d = smd_construct(3, 2, "basic").digraph
    text = write_digraph(d)
    assert read_digraph(text) == d
    assert write_digraph(read_digraph(text)) == text
    with pytest.raises(ValueError):
        read_digraph("2 2 2\n0 2\n")


def test_transversal_json_round_trip():
    t = Transversal(((0, 1), (5, 6)), 2)
    assert Transversal.from_json(t.to_json()) == t


# --- rainbow cut -----------------------------------------------------------------------


def test_rainbow_cut_fresh_interior_color():
    m, p, s = 2, 2, 8
    q = s * p
    n = q * m
    labels = []
    nxt = 1
    for u, v in all_edges(n):
        if u // q != v // q:
            labels.append(nxt)
            nxt += 1
        else:
            labels.append(0)
    psi = EdgeColoring.from_labels(n, labels)
    parts = [list(range(q)), list(range(q, n))]
    res = rainbow_cut(psi, parts, p, s)
    assert res.classes == [(0, 1), (16, 17)]
    assert res.block_digraph.arcs() == []


def test_rainbow_cut_random_instances():
    rng = random.Random(99)
    for _ in range(30):
        psi, parts = random_rainbow_instance(2, 2, 8, rng)
        res = rainbow_cut(psi, parts, 2, 8)
        assert all(len(c) == 2 for c in res.classes)
        assert verify_rainbow_cut(psi, res.classes)


def test_rainbow_cut_rejects_non_rainbow():
    n = 8
    psi = EdgeColoring.from_labels(n, [0] * len(all_edges(n)))
    with pytest.raises(NotRainbow):
        rainbow_cut(psi, [list(range(4)), list(range(4, 8))], 1, 4)


def test_rainbow_cut_preconditions():
    rng = random.Random(0)
    psi, parts = random_rainbow_instance(2, 2, 8, rng)
    with pytest.raises(PreconditionError):
        rainbow_cut(psi, parts, 2, 4)
    with pytest.raises(PreconditionError):
        rainbow_cut(psi, [parts[0][:-1], parts[1]], 2, 8)


def test_verify_rainbow_cut_detects_clash():
    n = 4
    # interior color of {0,1} reused on the cross edge 0-2
    labels = {(0, 1): 0, (0, 2): 0, (0, 3): 1, (1, 2): 2, (1, 3): 3, (2, 3): 4}
    psi = EdgeColoring.from_labels(n, [labels[e] for e in all_edges(n)])
    assert not verify_rainbow_cut(psi, [(0, 1), (2, 3)])
    assert verify_rainbow_cut(psi, [(0,), (2,)])


def _blocker_exists_brute(m, s):
    """Every vertex picks exactly one out-neighbor (more arcs only help blocking)."""
    total = m * s
    choices = [[y for y in range(total) if y // s != x // s] for x in range(total)]
    for pick in product(*choices):
        d = PartedDigraph.from_arcs(m, s, list(enumerate(pick)))
        if not brute_has_transversal(d):
            return True
    return False


@pytest.mark.parametrize("m, s", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_blocking_search_matches_brute_force(m, s):
    assert (search_blocking_digraph(m, s, 1) is not None) == _blocker_exists_brute(m, s)


def test_rainbow_cut_when_every_interior_color_is_in_k():
    # every interior edge reuses a K color, so no choice of classes can avoid K's
    # colors altogether; only the colors between the chosen classes can be avoided
    m, p, s = 2, 2, 8
    q = s * p
    n = q * m
    k_colors = []
    labels = []
    for u, v in all_edges(n):
        if u // q != v // q:
            labels.append(len(k_colors))
            k_colors.append(len(k_colors))
        else:
            labels.append(None)
    rng = random.Random(8)
    labels = [rng.choice(k_colors) if c is None else c for c in labels]
    psi = EdgeColoring.from_labels(n, labels)
    parts = [list(range(q)), list(range(q, n))]
    res = rainbow_cut(psi, parts, p, s)
    assert verify_rainbow_cut(psi, res.classes)
    k_all = {psi.color(x, y) for x in parts[0] for y in parts[1]}
    assert all(psi.color(*c) in k_all for c in res.classes)
