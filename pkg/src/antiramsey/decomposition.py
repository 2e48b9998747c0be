"""F-decks, reduced chromatic numbers, stability and decomposition sizes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .families import (
    BudgetExceeded,
    FamilyKind,
    FamilySpec,
    MaximalMember,
    enumerate_maximal_members,
    enumerate_members,
    family_chromatic_cap,
    family_contains,
    greedy_maximal_member,
    largest_member_clique,
)
from .graph import (
    Edge,
    SimpleGraph,
    bits,
    chromatic_number,
    delete_edges,
    find_isomorphism,
    invariant,
    line_graph,
    popcount,
)


class UnsupportedMode(ValueError):
    pass


@dataclass
class Deck:
    host: SimpleGraph
    family: FamilySpec
    members: list[SimpleGraph]
    deduped: bool


@dataclass
class ReducedChromaticResult:
    value: int | None
    lo: int
    hi: int
    witness: MaximalMember
    exact: bool

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lo": self.lo,
            "hi": self.hi,
            "exact": self.exact,
            "witness_edges": [list(e) for e in self.witness.sorted_edges()],
        }


@dataclass
class StabilityReport:
    stable: bool
    chi: int
    chi_F: int
    critical_witness: MaximalMember | None


def dedupe_isomorphic(graphs: Iterable[SimpleGraph]) -> list[SimpleGraph]:
    """Keep the first representative of each isomorphism class."""
    buckets: dict[tuple, list[SimpleGraph]] = {}
    out = []
    for g in graphs:
        bucket = buckets.setdefault(invariant(g), [])
        if any(find_isomorphism(g, h) is not None for h in bucket):
            continue
        bucket.append(g)
        out.append(g)
    return out


def deck(g: SimpleGraph, f: FamilySpec, dedupe: bool = True, budget: int | None = None) -> Deck:
    """All graphs G - D for nonempty members D of ``f`` inside ``g``.

    Members keep the full vertex set of ``g``.
    """
    members = (delete_edges(g, d) for d in enumerate_members(f, g, budget))
    if dedupe:
        out = dedupe_isomorphic(members)
    else:
        out = list(members)
    return Deck(g, f, out, dedupe)


def chi_lower_bound(g: SimpleGraph, f: FamilySpec, chi: int | None = None) -> int:
    """max(1, ceil(chi(G)/cap)) when the family's chromatic cap exists, else 1."""
    if chi is None:
        chi = chromatic_number(g)
    cap = family_chromatic_cap(f)
    if g.n == 0:
        return 0
    if cap is None:
        return 1
    return max(1, math.ceil(chi / cap))


def _partition_search(g: SimpleGraph, f: FamilySpec, c: int, budget: int | None) -> list[Edge] | None:
    """Find a vertex partition into <= c classes whose inside edges form a member of f.

    G - D is c-colorable for a member D exactly when such a partition
    exists (take D = inside edges, which is a member by heredity).
    """
    n = g.n
    adj = g.adj
    order = sorted(range(n), key=lambda v: (-popcount(adj[v]), v))
    classes: list[int] = []
    inner = [0] * n
    cache: dict[tuple, bool] = {}
    nodes = 0

    def member() -> bool:
        key = tuple(inner)
        hit = cache.get(key)
        if hit is None:
            hit = family_contains(f, SimpleGraph(n, key))
            cache[key] = hit
        return hit

    def rec(i: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"partition search budget {budget} exceeded", progress=nodes)
        if i == n:
            return True
        v = order[i]
        options = list(range(len(classes)))
        if len(classes) < c:
            options.append(len(classes))
        for ci in options:
            if ci == len(classes):
                classes.append(0)
            new = adj[v] & classes[ci]
            if new:
                inner[v] |= new
                for w in bits(new):
                    inner[w] |= 1 << v
            ok = not new or member()
            if ok:
                classes[ci] |= 1 << v
                if rec(i + 1):
                    return True
                classes[ci] &= ~(1 << v)
            if new:
                inner[v] &= ~new
                for w in bits(new):
                    inner[w] &= ~(1 << v)
            if ci == len(classes) - 1 and classes[ci] == 0:
                classes.pop()
        return False

    if not rec(0):
        return None
    return [Edge(u, w) for u in range(n) for w in bits(inner[u]) if u < w]


def _reduced_exact_partition(g, f, chi, lo, budget):
    for c in range(lo, chi + 1):
        inside = _partition_search(g, f, c, budget)
        if inside is not None:
            witness = greedy_maximal_member(f, g, inside)
            return c, witness
    raise AssertionError("partition into chi(G) classes always succeeds")


def _reduced_exact_deck(g, f, chi, lo, budget):
    best, witness = None, None
    memo: dict[frozenset, int] = {}
    for member in enumerate_maximal_members(f, g, budget):
        val = memo.get(member.edges)
        if val is None:
            val = chromatic_number(delete_edges(g, member.edges))
            memo[member.edges] = val
        if best is None or val < best:
            best, witness = val, member
            if best <= lo:
                break
    return best, witness


def reduced_chromatic(
    g: SimpleGraph,
    f: FamilySpec,
    mode: str = "exact",
    method: str = "partition",
    budget: int | None = None,
    candidates: Sequence[Iterable[tuple[int, int]]] = (),
) -> ReducedChromaticResult:
    """chi_F(G): the least chromatic number of G - D over members D of f.

    ``exact`` mode searches either vertex partitions (``method="partition"``)
    or the maximal members of the deck (``method="deck"``); both stop early
    once the submultiplicative lower bound is met. ``bounded`` mode returns
    lo = ceil(chi/cap) and hi from candidate deletions.
    """
    chi = chromatic_number(g)
    if g.edge_count == 0:
        empty = MaximalMember(frozenset(), g)
        return ReducedChromaticResult(chi, chi, chi, empty, True)
    lo = chi_lower_bound(g, f, chi)
    if mode == "exact":
        if not f.hereditary:
            raise UnsupportedMode(f"exact mode needs a hereditary family, got {f}")
        if method == "partition":
            value, witness = _reduced_exact_partition(g, f, chi, lo, budget)
        elif method == "deck":
            value, witness = _reduced_exact_deck(g, f, chi, lo, budget)
        else:
            raise ValueError(f"unknown method {method!r}")
        return ReducedChromaticResult(value, value, value, witness, True)
    if mode != "bounded":
        raise ValueError(f"unknown mode {mode!r}")
    return _reduced_bounded(g, f, chi, candidates)


def clique_cover_candidate(g: SimpleGraph, c: int) -> list[Edge]:
    """Edges of floor(p/c) vertex-disjoint K_c's on consecutive vertices of a complete host."""
    out = []
    for start in range(0, g.n - c + 1, c):
        block = range(start, start + c)
        out.extend(Edge(u, v) for u, v in combinations(block, 2))
    return out


def _is_complete(g: SimpleGraph) -> bool:
    return g.edge_count == g.n * (g.n - 1) // 2


def _reduced_bounded(g, f, chi, candidates) -> ReducedChromaticResult:
    cap = family_chromatic_cap(f)
    if cap is None and not candidates:
        raise UnsupportedMode(f"bounded mode for {f} needs candidate deletions (no chromatic cap)")
    lo = chi_lower_bound(g, f, chi) if cap is not None else 1
    pool: list[MaximalMember] = []
    for cand in candidates:
        cand = [Edge(*sorted(e)) for e in cand]
        if not family_contains(f, SimpleGraph.from_edges(g.n, cand)):
            raise ValueError("candidate deletion is not a member of the family")
        pool.append(greedy_maximal_member(f, g, cand))
    if f.hereditary:
        pool.append(greedy_maximal_member(f, g))
        c = largest_member_clique(f)
        if c is not None and c >= 2 and _is_complete(g) and g.n >= c:
            cover = clique_cover_candidate(g, c)
            if family_contains(f, SimpleGraph.from_edges(g.n, cover)):
                pool.append(greedy_maximal_member(f, g, cover))
    best, witness = None, None
    for member in pool:
        val = chromatic_number(delete_edges(g, member.edges))
        if best is None or val < best:
            best, witness = val, member
    exact = best == lo
    return ReducedChromaticResult(best if exact else None, lo, best, witness, exact)


def is_stable(g: SimpleGraph, f: FamilySpec, budget: int | None = None) -> StabilityReport:
    chi = chromatic_number(g)
    res = reduced_chromatic(g, f, "exact", budget=budget)
    stable = res.value == chi
    return StabilityReport(stable, chi, res.value, None if stable else res.witness)


# --- decomposition sizes --------------------------------------------------------------


def arboricity(g: SimpleGraph) -> int:
    """Nash-Williams: max over vertex subsets H with |H| >= 2 of ceil(e(H)/(|H|-1))."""
    best = 0
    for mask in range(1, 1 << g.n):
        k = popcount(mask)
        if k < 2:
            continue
        e = sum(popcount(g.adj[v] & mask) for v in bits(mask)) // 2
        best = max(best, -(-e // (k - 1)))
    return best


def chromatic_index(g: SimpleGraph) -> int:
    if g.edge_count == 0:
        return 0
    return chromatic_number(line_graph(g))


def min_decomposition_size(g: SimpleGraph, f: FamilySpec) -> int:
    """F(G): fewest members of f whose edge sets partition E(G)."""
    k = f.kind
    m = g.edge_count
    if k is FamilyKind.SINGLE_EDGE:
        return m
    if k is FamilyKind.AT_MOST_K_EDGES:
        return -(-m // f.param)
    if k is FamilyKind.MATCHINGS:
        return chromatic_index(g)
    if k is FamilyKind.FORESTS:
        return arboricity(g)
    if k is FamilyKind.PLANAR:
        raise UnsupportedMode("thickness (planar decomposition size) is not supported")
    raise UnsupportedMode(f"decomposition size is not supported for {f}")
