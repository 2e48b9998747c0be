"""Hereditary graph families: membership, chromatic caps, maximal members."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import networkx as nx

from .graph import (
    Edge,
    SimpleGraph,
    chromatic_number,
    degeneracy,
    has_triangle,
    is_acyclic,
    join,
    popcount,
)

PLANARITY_MAX_VERTICES = 16


class BudgetExceeded(RuntimeError):
    """A bounded search gave up; ``progress`` counts the work done so far."""

    def __init__(self, message: str, progress: int = 0, best=None):
        super().__init__(message)
        self.progress = progress
        self.best = best


class FamilyKind(enum.Enum):
    SINGLE_EDGE = "edge"
    MATCHINGS = "matchings"
    AT_MOST_K_EDGES = "edges<="
    MAX_DEGREE = "maxdeg<="
    PLANAR = "planar"
    OUTERPLANAR = "outerplanar"
    FORESTS = "forests"
    LINEAR_FORESTS = "linforests"
    DEGENERATE = "degen<="
    K_COLORABLE = "chrom<="
    TRIANGLE_FREE = "trianglefree"
    ODD_GRAPHS = "odd"


_PARAMETRIZED = {
    FamilyKind.AT_MOST_K_EDGES,
    FamilyKind.MAX_DEGREE,
    FamilyKind.DEGENERATE,
    FamilyKind.K_COLORABLE,
}


@dataclass(frozen=True)
class FamilySpec:
    kind: FamilyKind
    param: int | None = None

    def __post_init__(self):
        if self.kind in _PARAMETRIZED:
            if self.param is None or self.param < 1:
                raise ValueError(f"{self.kind.name} needs a parameter >= 1")
        elif self.param is not None:
            raise ValueError(f"{self.kind.name} takes no parameter")

    @property
    def hereditary(self) -> bool:
        return self.kind is not FamilyKind.ODD_GRAPHS

    def __str__(self) -> str:
        if self.kind in _PARAMETRIZED:
            return f"{self.kind.value}{self.param}"
        return self.kind.value

    def contains(self, h: SimpleGraph) -> bool:
        return family_contains(self, h)


SINGLE_EDGE = FamilySpec(FamilyKind.SINGLE_EDGE)
MATCHINGS = FamilySpec(FamilyKind.MATCHINGS)
PLANAR = FamilySpec(FamilyKind.PLANAR)
OUTERPLANAR = FamilySpec(FamilyKind.OUTERPLANAR)
FORESTS = FamilySpec(FamilyKind.FORESTS)
LINEAR_FORESTS = FamilySpec(FamilyKind.LINEAR_FORESTS)
TRIANGLE_FREE = FamilySpec(FamilyKind.TRIANGLE_FREE)
ODD_GRAPHS = FamilySpec(FamilyKind.ODD_GRAPHS)


def at_most_k_edges(k: int) -> FamilySpec:
    return FamilySpec(FamilyKind.AT_MOST_K_EDGES, k)


def max_degree(t: int) -> FamilySpec:
    return FamilySpec(FamilyKind.MAX_DEGREE, t)


def degenerate(d: int) -> FamilySpec:
    return FamilySpec(FamilyKind.DEGENERATE, d)


def k_colorable(k: int) -> FamilySpec:
    return FamilySpec(FamilyKind.K_COLORABLE, k)


_FAMILY_RE = re.compile(r"(edges|maxdeg|degen|chrom)\s*<=\s*(\d+)")


def parse_family(text: str) -> FamilySpec:
    """Parse ``matchings``, ``edge``, ``edges<=K``, ``maxdeg<=T``, ``planar``, ... (case-insensitive)."""
    s = text.strip().lower()
    m = _FAMILY_RE.fullmatch(s)
    if m:
        return FamilySpec(FamilyKind(m[1] + "<="), int(m[2]))
    for kind in FamilyKind:
        if kind not in _PARAMETRIZED and kind.value == s:
            return FamilySpec(kind)
    raise ValueError(f"unknown family {text!r}")


# --- membership ---------------------------------------------------------------------


def _max_degree(h: SimpleGraph) -> int:
    return max((popcount(r) for r in h.adj), default=0)


def _to_nx(h: SimpleGraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(h.n))
    g.add_edges_from(h.edges())
    return g


def is_planar(h: SimpleGraph) -> bool:
    h = h.strip_isolated()
    if h.n > PLANARITY_MAX_VERTICES:
        raise ValueError(f"planarity test is capped at {PLANARITY_MAX_VERTICES} non-isolated vertices")
    return _planar_cached(h)


@lru_cache(maxsize=1 << 16)
def _planar_cached(h: SimpleGraph) -> bool:
    if h.n >= 3 and h.edge_count > 3 * h.n - 6:
        return False
    return nx.check_planarity(_to_nx(h))[0]


def is_outerplanar(h: SimpleGraph) -> bool:
    h = h.strip_isolated()
    if h.n > PLANARITY_MAX_VERTICES:
        raise ValueError(f"planarity test is capped at {PLANARITY_MAX_VERTICES} non-isolated vertices")
    if h.n >= 2 and h.edge_count > 2 * h.n - 3:
        return False
    return _planar_cached(join(h, 1))


def is_odd_graph(h: SimpleGraph) -> bool:
    return all(popcount(r) % 2 == 1 for r in h.adj if r)


def family_contains(f: FamilySpec, h: SimpleGraph) -> bool:
    """Exact membership of ``h`` in ``f``; isolated vertices never matter."""
    k = f.kind
    if k is FamilyKind.SINGLE_EDGE:
        return h.edge_count <= 1
    if k is FamilyKind.MATCHINGS:
        return _max_degree(h) <= 1
    if k is FamilyKind.AT_MOST_K_EDGES:
        return h.edge_count <= f.param
    if k is FamilyKind.MAX_DEGREE:
        return _max_degree(h) <= f.param
    if k is FamilyKind.FORESTS:
        return is_acyclic(h)
    if k is FamilyKind.LINEAR_FORESTS:
        return _max_degree(h) <= 2 and is_acyclic(h)
    if k is FamilyKind.DEGENERATE:
        return degeneracy(h) <= f.param
    if k is FamilyKind.K_COLORABLE:
        return chromatic_number(h) <= f.param
    if k is FamilyKind.TRIANGLE_FREE:
        return not has_triangle(h)
    if k is FamilyKind.PLANAR:
        return is_planar(h)
    if k is FamilyKind.OUTERPLANAR:
        return is_outerplanar(h)
    if k is FamilyKind.ODD_GRAPHS:
        return is_odd_graph(h)
    raise AssertionError(k)


def family_chromatic_cap(f: FamilySpec) -> int | None:
    """Largest chromatic number of a member, or None when unbounded."""
    k = f.kind
    if k in (FamilyKind.SINGLE_EDGE, FamilyKind.MATCHINGS, FamilyKind.FORESTS, FamilyKind.LINEAR_FORESTS):
        return 2
    if k is FamilyKind.OUTERPLANAR:
        return 3
    if k is FamilyKind.PLANAR:
        return 4
    if k in (FamilyKind.DEGENERATE, FamilyKind.MAX_DEGREE):
        return f.param + 1
    if k is FamilyKind.K_COLORABLE:
        return f.param
    if k is FamilyKind.AT_MOST_K_EDGES:
        q = 1
        while (q + 1) * q // 2 <= f.param:
            q += 1
        return q
    return None


def largest_member_clique(f: FamilySpec) -> int | None:
    """Largest p with K_p in the family (None when unbounded)."""
    if f.kind is FamilyKind.TRIANGLE_FREE:
        return 2
    if f.kind is FamilyKind.ODD_GRAPHS:
        return None
    return family_chromatic_cap(f)


# --- maximal members -------------------------------------------------------------


@dataclass(frozen=True)
class MaximalMember:
    edges: frozenset[Edge]
    host: SimpleGraph = field(repr=False)

    def graph(self) -> SimpleGraph:
        return SimpleGraph.from_edges(self.host.n, self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def _require_hereditary(f: FamilySpec) -> None:
    if not f.hereditary:
        raise ValueError(f"family {f} is not hereditary; enumeration needs monotone membership")


class _EdgeSearch:
    """Shared state for include/exclude backtracking over a host's edges."""

    def __init__(self, f: FamilySpec, g: SimpleGraph, budget: int | None):
        self.f = f
        self.g = g
        self.edges = g.edges()
        self.budget = budget
        self.nodes = 0
        self.adj = [0] * g.n
        self.cache: dict[tuple, bool] = {}

    def tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"enumeration budget {self.budget} exceeded", progress=self.nodes)

    def add(self, e: Edge) -> None:
        self.adj[e.u] |= 1 << e.v
        self.adj[e.v] |= 1 << e.u

    def remove(self, e: Edge) -> None:
        self.adj[e.u] &= ~(1 << e.v)
        self.adj[e.v] &= ~(1 << e.u)

    def member(self) -> bool:
        key = tuple(self.adj)
        hit = self.cache.get(key)
        if hit is None:
            hit = family_contains(self.f, SimpleGraph(self.g.n, key))
            self.cache[key] = hit
        return hit

    def member_with(self, e: Edge) -> bool:
        self.add(e)
        ok = self.member()
        self.remove(e)
        return ok


def enumerate_maximal_members(
    f: FamilySpec, g: SimpleGraph, budget: int | None = None
) -> Iterator[MaximalMember]:
    """Yield every inclusion-maximal edge set S of ``g`` with g[S] in ``f``, once each.

    Order is lexicographic on the include/exclude decision vector with
    include-first, so it is deterministic.
    """
    _require_hereditary(f)
    st = _EdgeSearch(f, g, budget)
    edges = st.edges
    chosen: list[Edge] = []
    skipped: list[Edge] = []

    def rec(i: int) -> Iterator[MaximalMember]:
        st.tick()
        if i == len(edges):
            if all(not st.member_with(e) for e in skipped):
                yield MaximalMember(frozenset(chosen), g)
            return
        e = edges[i]
        st.add(e)
        if st.member():
            chosen.append(e)
            yield from rec(i + 1)
            chosen.pop()
            st.remove(e)
            skipped.append(e)
            yield from rec(i + 1)
            skipped.pop()
        else:
            # e can never be added later either (hereditary), so skipping is forced
            st.remove(e)
            yield from rec(i + 1)

    yield from rec(0)


def enumerate_members(f: FamilySpec, g: SimpleGraph, budget: int | None = None) -> Iterator[frozenset[Edge]]:
    """Yield every nonempty edge set S of ``g`` with g[S] in ``f``."""
    _require_hereditary(f)
    st = _EdgeSearch(f, g, budget)
    edges = st.edges
    chosen: list[Edge] = []

    def rec(i: int) -> Iterator[frozenset[Edge]]:
        st.tick()
        if i == len(edges):
            if chosen:
                yield frozenset(chosen)
            return
        e = edges[i]
        st.add(e)
        if st.member():
            chosen.append(e)
            yield from rec(i + 1)
            chosen.pop()
        st.remove(e)
        yield from rec(i + 1)

    yield from rec(0)


def greedy_maximal_member(f: FamilySpec, g: SimpleGraph, start=()) -> MaximalMember:
    """Extend ``start`` (assumed a member) edge by edge in lexicographic order."""
    st = _EdgeSearch(f, g, None)
    chosen = set()
    for e in start:
        e = Edge(*sorted(e))
        st.add(e)
        chosen.add(e)
    for e in st.edges:
        if e not in chosen and st.member_with(e):
            st.add(e)
            chosen.add(e)
    return MaximalMember(frozenset(chosen), g)
