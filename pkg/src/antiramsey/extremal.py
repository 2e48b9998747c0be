"""Turán numbers, deck-based lower-bound colorings, F-colored copies, exact f(n, G|F)."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterator, Sequence

from .decomposition import dedupe_isomorphic, deck, reduced_chromatic
from .families import BudgetExceeded, FamilySpec, family_contains
from .graph import (
    Edge,
    SimpleGraph,
    bits,
    chromatic_number,
    contains_subgraph,
    find_isomorphism,
    invariant,
    popcount,
    turan,
)


# --- colorings of K_n -----------------------------------------------------------------


def edge_index(n: int, u: int, v: int) -> int:
    """Position of edge uv in the lexicographic list of E(K_n)."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def all_edges(n: int) -> list[Edge]:
    return [Edge(u, v) for u, v in combinations(range(n), 2)]


@dataclass(frozen=True)
class EdgeColoring:
    """Surjective coloring of E(K_n) by 0..k-1, stored in lexicographic edge order."""

    n: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) != self.n * (self.n - 1) // 2:
            raise ValueError("need exactly one color per edge of K_n")
        used = set(self.colors)
        if used != set(range(len(used))):
            raise ValueError("colors must be exactly 0..k-1, each used at least once")

    @property
    def k(self) -> int:
        return len(set(self.colors))

    def color(self, u: int, v: int) -> int:
        return self.colors[edge_index(self.n, u, v)]

    @classmethod
    def from_labels(cls, n: int, labels: Sequence[int]) -> "EdgeColoring":
        """Relabel arbitrary color labels to 0..k-1 in order of first appearance."""
        seen: dict[int, int] = {}
        out = []
        for c in labels:
            if c not in seen:
                seen[c] = len(seen)
            out.append(seen[c])
        return cls(n, tuple(out))

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k}"]
        lines += [f"{u} {v} {c}" for (u, v), c in zip(all_edges(self.n), self.colors)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EdgeColoring":
        rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        rows = [r for r in rows if r]
        n, k = int(rows[0][0]), int(rows[0][1])
        colors: dict[int, int] = {}
        for u, v, c in rows[1:]:
            u, v, c = int(u), int(v), int(c)
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u}, {v})")
            idx = edge_index(n, u, v)
            if idx in colors:
                raise ValueError(f"edge ({u}, {v}) colored twice")
            if not 0 <= c < k:
                raise ValueError(f"color {c} outside 0..{k - 1}")
            colors[idx] = c
        if len(colors) != n * (n - 1) // 2:
            raise ValueError("coloring file does not cover every edge of K_n")
        psi = cls(n, tuple(colors[i] for i in range(len(colors))))
        if psi.k != k:
            raise ValueError(f"header announces {k} colors, found {psi.k}")
        return psi


# --- Turán numbers ----------------------------------------------------------------------------


@dataclass
class TuranResult:
    n: int
    value: int
    extremal_graph: SimpleGraph
    exact: bool
    method: str  # "formula" | "search" | "bound"


def turan_number(n: int, r: int) -> TuranResult:
    """ex(n, K_r) from the balanced complete (r-1)-partite graph."""
    if r < 2 or n < 1:
        raise ValueError("need r >= 2 and n >= 1")
    g = turan(n, r - 1)
    return TuranResult(n, g.edge_count, g, True, "formula")


def turan_coefficient(r: int) -> float:
    """Leading coefficient c in ex(n, K_r) ~ c n^2, i.e. (r-2)/(2r-2)."""
    return (r - 2) / (2 * r - 2)


def kst_bound(n: int, a: int, b: int) -> float:
    """Kővári–Sós–Turán: ex(n, K_{a,b}) <= ((b-1)^(1/a) (n-a+1) n^(1-1/a) + (a-1) n) / 2."""
    if not 2 <= a <= b:
        raise ValueError("need 2 <= a <= b")
    return 0.5 * ((b - 1) ** (1 / a) * (n - a + 1) * n ** (1 - 1 / a) + (a - 1) * n)


def minimal_forbidden(forbidden: Sequence[SimpleGraph]) -> list[SimpleGraph]:
    """Strip isolated vertices, drop isomorphic copies and non-minimal members."""
    stripped = dedupe_isomorphic(g.strip_isolated() for g in forbidden)
    stripped.sort(key=lambda g: (g.edge_count, g.n))
    keep: list[SimpleGraph] = []
    for g in stripped:
        if not any(contains_subgraph(g, h) for h in keep):
            keep.append(g)
    return keep


def _free_of(g: SimpleGraph, forbidden: Sequence[SimpleGraph]) -> bool:
    return not any(contains_subgraph(g, h) for h in forbidden)


def _greedy_lower(n: int, forbidden, tries: int = 24) -> SimpleGraph:
    rng = random.Random(n * 7919 + len(forbidden))
    best = SimpleGraph.empty(n)
    for t in range(tries):
        edges = list(combinations(range(n), 2))
        if t:
            rng.shuffle(edges)
        adj = [0] * n
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            if not _free_of(SimpleGraph(n, tuple(adj)), forbidden):
                adj[u] &= ~(1 << v)
                adj[v] &= ~(1 << u)
        g = SimpleGraph(n, tuple(adj))
        if g.edge_count > best.edge_count:
            best = g
    return best


def graphs_with_at_least(
    n: int, forbidden: Sequence[SimpleGraph], target: int, budget: int | None = None
) -> list[SimpleGraph]:
    """All forbidden-free graphs on n vertices with >= target edges, one per isomorphism class.

    Vertex-by-vertex augmentation: deleting a minimum-degree vertex of a
    k-vertex graph with e edges leaves at least e - floor(2e/k) edges, so
    the threshold at each smaller order is known in advance. Each new
    vertex is added as a minimum-degree vertex.
    """
    forbidden = minimal_forbidden(forbidden)
    if any(h.edge_count == 0 for h in forbidden):
        raise ValueError("an edgeless forbidden graph is contained in every graph")
    thresholds = [0] * (n + 1)
    thresholds[n] = max(target, 0)
    for k in range(n, 1, -1):
        t = thresholds[k]
        thresholds[k - 1] = max(t - (2 * t) // k, 0)
    level = [SimpleGraph.empty(1)] if n >= 1 else [SimpleGraph.empty(0)]
    checks = 0
    for k in range(2, n + 1):
        need = thresholds[k]
        buckets: dict[tuple, list[SimpleGraph]] = {}
        nxt: list[SimpleGraph] = []
        for h in level:
            degs = h.degrees()
            e = h.edge_count
            for mask in range(1 << (k - 1)):
                dnew = popcount(mask)
                if e + dnew < need:
                    continue
                if any(degs[v] + (mask >> v & 1) < dnew for v in range(k - 1)):
                    continue
                adj = list(h.adj) + [mask]
                for v in bits(mask):
                    adj[v] |= 1 << (k - 1)
                g = SimpleGraph(k, tuple(adj))
                checks += 1
                if budget is not None and checks > budget:
                    raise BudgetExceeded(f"extremal search budget {budget} exceeded", progress=checks)
                if not _free_of(g, forbidden):
                    continue
                bucket = buckets.setdefault(invariant(g), [])
                if any(find_isomorphism(g, o) is not None for o in bucket):
                    continue
                bucket.append(g)
                nxt.append(g)
        level = nxt
    return level


def ex_exact_small(n: int, forbidden: Sequence[SimpleGraph], budget: int | None = 2_000_000, max_n: int = 10) -> TuranResult:
    """Exact ex(n, forbidden) by exhaustive augmentation, subgraph (not induced) containment.

    Isolated vertices of forbidden graphs are ignored. On budget exhaustion
    the greedy lower-bound graph is returned with ``exact=False``.
    """
    if not forbidden:
        raise ValueError("forbidden list must be nonempty")
    if n > max_n:
        raise ValueError(f"exact search is limited to n <= {max_n}")
    reduced = minimal_forbidden(forbidden)
    if any(h.edge_count == 0 for h in reduced):
        raise ValueError("an edgeless forbidden graph is contained in every graph")
    lower = _greedy_lower(n, reduced)
    try:
        found = graphs_with_at_least(n, reduced, lower.edge_count, budget)
    except BudgetExceeded:
        return TuranResult(n, lower.edge_count, lower, False, "bound")
    best = max(found, key=lambda g: g.edge_count)
    return TuranResult(n, best.edge_count, best, True, "search")


# --- F-colored copies -----------------------------------------------------------------


@dataclass
class EmbeddingCertificate:
    map: tuple[int, ...]  # G vertex -> host vertex
    class_decomposition: dict[int, tuple[Edge, ...]]  # color -> edges of G

    def to_dict(self) -> dict:
        return {
            "map": list(self.map),
            "classes": {str(c): [list(e) for e in es] for c, es in sorted(self.class_decomposition.items())},
        }


def verify_certificate(psi: EdgeColoring, g: SimpleGraph, f: FamilySpec, cert: EmbeddingCertificate) -> bool:
    """Re-check a certificate from scratch."""
    phi = cert.map
    if len(phi) != g.n or len(set(phi)) != g.n or any(not 0 <= x < psi.n for x in phi):
        return False
    classes: dict[int, list[Edge]] = {}
    for u, v in g.edges():
        classes.setdefault(psi.color(phi[u], phi[v]), []).append(Edge(u, v))
    if {c: tuple(sorted(es)) for c, es in classes.items()} != {
        c: tuple(sorted(es)) for c, es in cert.class_decomposition.items()
    }:
        return False
    return all(family_contains(f, SimpleGraph.from_edges(g.n, es)) for es in classes.values())


def _vertex_order(g: SimpleGraph) -> list[int]:
    order, placed = [], 0
    remaining = set(range(g.n))
    degs = g.degrees()
    while remaining:
        v = max(remaining, key=lambda u: (popcount(g.adj[u] & placed), degs[u], -u))
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    return order


def find_F_colored_copy(
    psi: EdgeColoring, g: SimpleGraph, f: FamilySpec, budget: int | None = None
) -> EmbeddingCertificate | None:
    """Search injections V(G) -> V(K_n) whose color classes all lie in f.

    Hereditary families prune a partial map as soon as a partial class
    leaves the family; non-hereditary families are checked only on full maps.
    Returns None only after a complete search.
    """
    n = psi.n
    if g.n > n:
        return None
    order = _vertex_order(g)
    back = [[u for u in order[:i] if g.adj[order[i]] >> u & 1] for i in range(g.n)]
    phi = [-1] * g.n
    cls_adj: dict[int, list[int]] = {}
    cache: dict[tuple, bool] = {}
    nodes = 0

    def ok(c: int) -> bool:
        key = tuple(cls_adj[c])
        hit = cache.get(key)
        if hit is None:
            hit = family_contains(f, SimpleGraph(g.n, key))
            cache[key] = hit
        return hit

    def rec(i: int, used: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"copy search budget {budget} exceeded", progress=nodes)
        if i == g.n:
            return f.hereditary or all(ok(c) for c in cls_adj)
        v = order[i]
        for x in range(n):
            if used >> x & 1:
                continue
            phi[v] = x
            touched = []
            for u in back[i]:
                c = psi.color(x, phi[u])
                row = cls_adj.setdefault(c, [0] * g.n)
                row[u] |= 1 << v
                row[v] |= 1 << u
                touched.append((c, u))
            good = not f.hereditary or all(ok(c) for c in {c for c, _ in touched})
            if good and rec(i + 1, used | (1 << x)):
                return True
            for c, u in touched:
                row = cls_adj[c]
                row[u] &= ~(1 << v)
                row[v] &= ~(1 << u)
                if not any(row):
                    del cls_adj[c]
        phi[v] = -1
        return False

    if not rec(0, 0):
        return None
    classes: dict[int, list[Edge]] = {}
    for u, v in g.edges():
        classes.setdefault(psi.color(phi[u], phi[v]), []).append(Edge(u, v))
    cert = EmbeddingCertificate(tuple(phi), {c: tuple(es) for c, es in classes.items()})
    assert verify_certificate(psi, g, f, cert)
    return cert


# --- lower-bound coloring -------------------------------------------------------------------


class MeaninglessBound(ValueError):
    pass


@dataclass
class LowerBoundColoring:
    coloring: EdgeColoring
    extremal: TuranResult
    reduced_deck: list[SimpleGraph]
    certified: bool  # checker found no F-colored copy

    @property
    def bound(self) -> int:
        """Certified f(n, G|F) >= colors + 1."""
        return self.coloring.k + 1


def lb_coloring(n: int, g: SimpleGraph, f: FamilySpec, budget: int | None = 2_000_000) -> LowerBoundColoring:
    """Rainbow deck-extremal graph plus one extra color on all other edges of K_n.

    Uses ex(n, D(G|F)) + 1 colors and admits no F-colored copy of G.
    """
    if n < g.n:
        raise ValueError("need n >= |G|")
    if family_contains(f, g):
        raise MeaninglessBound(f"G is a member of {f}, so f(n, G|F) = 1")
    if not family_contains(f, SimpleGraph.from_edges(2, [(0, 1)])):
        raise ValueError("family must contain K_2")
    members = deck(g, f, dedupe=True).members
    reduced = minimal_forbidden(members)
    ext = ex_exact_small(n, reduced, budget)
    if not ext.exact:
        raise BudgetExceeded("extremal search for the deck did not finish", best=ext)
    r = ext.extremal_graph
    labels = []
    fresh = 0
    extra = r.edge_count
    for u, v in all_edges(n):
        if r.has_edge(u, v):
            labels.append(fresh)
            fresh += 1
        else:
            labels.append(extra)
    psi = EdgeColoring.from_labels(n, labels)
    certified = find_F_colored_copy(psi, g, f) is None
    return LowerBoundColoring(psi, ext, reduced, certified)


# --- exact f(n, G|F) ----------------------------------------------------------------------


BELL_LIMIT_N = 5


@dataclass
class ForcingResult:
    n: int
    g: SimpleGraph
    family: FamilySpec
    value: int
    extremal_avoider: EdgeColoring | None
    attestation: str  # "exhaustive" | "symmetry-pruned" | "member"
    avoider_counts: set[int] = field(default_factory=set, repr=False)

    def to_dict(self, avoider_file: str | None = None) -> dict:
        return {
            "n": self.n,
            "f": self.value,
            "avoider_colors": self.extremal_avoider.k if self.extremal_avoider else 0,
            "avoider_file": avoider_file,
            "attestation": self.attestation,
        }


def restricted_growth_strings(length: int, prefix: Sequence[int] = ()) -> Iterator[tuple[int, ...]]:
    """All set partitions of range(length) as restricted growth strings, in lexicographic order.

    A nonempty ``prefix`` (itself a valid restricted growth string) fixes
    the first entries.
    """
    if length == 0:
        yield ()
        return
    a = [0] * length
    start = max(len(prefix), 1)
    a[: len(prefix)] = prefix

    def rec(i: int, top: int) -> Iterator[tuple[int, ...]]:
        if i == length:
            yield tuple(a)
            return
        for c in range(top + 2):
            a[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(start, max(a[:start]))


def host_copies(n: int, g: SimpleGraph) -> list[tuple[int, ...]]:
    """Distinct copies of G in K_n as host-edge-index tuples aligned with g.edges().

    Injections differing by an automorphism of G give the same edge set
    and equivalent color classes, so one per edge set is kept.
    """
    ge = g.edges()
    seen = set()
    out = []
    for phi in permutations(range(n), g.n):
        idx = tuple(edge_index(n, phi[u], phi[v]) for u, v in ge)
        key = frozenset(idx)
        if key not in seen:
            seen.add(key)
            out.append(idx)
    return out


class _PatternOracle:
    """Is a coloring of G's edges (as a partition pattern) F-colored?"""

    def __init__(self, g: SimpleGraph, f: FamilySpec):
        self.g = g
        self.f = f
        self.edges = g.edges()
        self.cache: dict[tuple, bool] = {}

    def __call__(self, pattern: tuple[int, ...]) -> bool:
        hit = self.cache.get(pattern)
        if hit is None:
            classes: dict[int, list[Edge]] = {}
            for e, c in zip(self.edges, pattern):
                classes.setdefault(c, []).append(e)
            hit = all(family_contains(self.f, SimpleGraph.from_edges(self.g.n, es)) for es in classes.values())
            self.cache[pattern] = hit
        return hit


def _normalize(colors) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(c, len(seen)) for c in colors)


def _avoids(rgs, copies, oracle) -> bool:
    for cp in copies:
        if oracle(_normalize([rgs[i] for i in cp])):
            return False
    return True


def f_exact_tiny(
    n: int,
    g: SimpleGraph,
    f: FamilySpec,
    mode: str = "auto",
    check_merge: bool = True,
    budget: int | None = None,
    jobs: int = 1,
) -> ForcingResult:
    """Exact f(n, G|F) over all colorings of K_n, up to renaming colors.

    n <= 5: every set partition of E(K_n) is scanned. n = 6: branch and
    bound over partial partitions (``mode="pruned"``). ``jobs`` > 1 shards
    the exhaustive scan by partition prefix across processes.
    """
    if not f.hereditary:
        raise ValueError(f"exact solver needs a hereditary family, got {f}")
    if g.n > n:
        raise ValueError("need |G| <= n")
    if family_contains(f, g):
        return ForcingResult(n, g, f, 1, None, "member", set())
    if mode == "auto":
        mode = "exhaustive" if n <= BELL_LIMIT_N else "pruned"
    if mode == "exhaustive" and n > BELL_LIMIT_N:
        raise ValueError(f"exhaustive mode is limited to n <= {BELL_LIMIT_N}")
    if mode == "pruned" and n > 6:
        raise ValueError("pruned mode is limited to n <= 6")
    if mode == "exhaustive":
        return _scan_all(n, g, f, check_merge, jobs)
    if mode == "pruned":
        return _branch_and_bound(n, g, f, host_copies(n, g), _PatternOracle(g, f), budget)
    raise ValueError(f"unknown mode {mode!r}")


SHARD_PREFIX = 4


def _scan_shard(n, g, f, prefix, check_merge):
    copies = host_copies(n, g)
    oracle = _PatternOracle(g, f)
    best, best_rgs = 0, None
    counts: set[int] = set()
    for rgs in restricted_growth_strings(n * (n - 1) // 2, prefix):
        k = max(rgs) + 1
        if k <= best and k in counts:
            continue  # already known achievable, nothing new to learn
        if not _avoids(rgs, copies, oracle):
            continue
        counts.add(k)
        if check_merge and k >= 2:
            merged = tuple(k - 2 if c == k - 1 else c for c in rgs)
            assert _avoids(merged, copies, oracle), "merging two classes created a copy"
        if k > best:
            best, best_rgs = k, rgs
    return best, best_rgs, counts


def _scan_all(n, g, f, check_merge, jobs) -> ForcingResult:
    m = n * (n - 1) // 2
    plen = min(SHARD_PREFIX, m)
    prefixes = list(restricted_growth_strings(plen)) if jobs > 1 else [()]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_shard, *zip(*[(n, g, f, pre, check_merge) for pre in prefixes])))
    else:
        parts = [_scan_shard(n, g, f, (), check_merge)]
    best, best_rgs = 0, None
    counts: set[int] = set()
    for b, rgs, c in parts:  # shards are in lexicographic order, so the first maximum wins
        counts |= c
        if b > best:
            best, best_rgs = b, rgs
    assert counts == set(range(1, best + 1)), f"avoider color counts not downward closed: {sorted(counts)}"
    return ForcingResult(n, g, f, best + 1, EdgeColoring(n, best_rgs), "exhaustive", counts)


def _branch_and_bound(n, g, f, copies, oracle, budget) -> ForcingResult:
    m = n * (n - 1) // 2
    # copies indexed by their last (largest) host edge so they are checked once complete
    by_last: list[list[tuple[int, ...]]] = [[] for _ in range(m)]
    for cp in copies:
        by_last[max(cp)].append(cp)
    rgs = [0] * m
    best, best_rgs = 0, None
    nodes = 0

    def rec(i: int, top: int) -> None:
        nonlocal best, best_rgs, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"pruned search budget {budget} exceeded", progress=nodes, best=best)
        if top + 1 + (m - i) <= best:
            return
        if i == m:
            best, best_rgs = top + 1, tuple(rgs)
            return
        for c in range(top + 1, -1, -1):
            rgs[i] = c
            if all(not oracle(_normalize([rgs[j] for j in cp])) for cp in by_last[i]):
                rec(i + 1, max(top, c))

    rgs[0] = 0
    if all(not oracle(_normalize([0 for _ in cp])) for cp in by_last[0]):
        rec(1, 0)
    if best_rgs is None:
        raise AssertionError("the monochromatic coloring always avoids when G is not a member")
    return ForcingResult(n, g, f, best + 1, EdgeColoring(n, best_rgs), "symmetry-pruned", set())


# --- classification ----------------------------------------------------------------------------


@dataclass
class ClassifyReport:
    chi: int
    chi_F: int | None
    chi_F_bounds: tuple[int, int]
    exact: bool
    case: str  # "i" | "ii" | "iii" | "undetermined"
    leading_term: str
    coefficient: float | None
    stable: bool | None
    certified_lower_bound: int | None = None
    n: int | None = None

    def to_dict(self) -> dict:
        return {
            "chi": self.chi,
            "chi_F": self.chi_F,
            "chi_F_bounds": list(self.chi_F_bounds),
            "exact": self.exact,
            "case": self.case,
            "leading_term": self.leading_term,
            "coefficient": self.coefficient,
            "stable": self.stable,
            "certified_lower_bound": self.certified_lower_bound,
            "n": self.n,
        }


def classify(g: SimpleGraph, f: FamilySpec, n: int | None = None, mode: str = "exact") -> ClassifyReport:
    """Which growth regime f(n, G|F) falls into, from chi_F(G).

    chi_F >= 3: (1+o(1)) ex(n, K_chi_F) with leading coefficient
    (chi_F-2)/(2 chi_F-2); chi_F = 2: o(n^2); chi_F = 1: f = 1.
    """
    res = reduced_chromatic(g, f, mode)
    chi = chromatic_number(g)
    lo, hi = res.lo, res.hi
    value = res.value if res.exact else None
    if value is None:
        case = "undetermined"
    elif value >= 3:
        case = "i"
    elif value == 2:
        case = "ii"
    else:
        case = "iii"
    if case == "i" and value is not None:
        term = f"(1+o(1)) ex(n, K_{value}) ~ {value - 2}/{2 * value - 2} n^2"
        coef = turan_coefficient(value)
    elif case == "ii":
        term = "o(n^2)"
        coef = 0.0
    elif case == "iii":
        term = "1"
        coef = None
    else:
        term = f"between (1+o(1)) ex(n, K_{lo}) and (1+o(1)) ex(n, K_{hi})"
        coef = None
    stable = (value == chi) if value is not None else None
    report = ClassifyReport(chi, value, (lo, hi), res.exact, case, term, coef, stable, None, n)
    if n is not None and case != "iii":
        lb = lb_coloring(n, g, f)
        if lb.certified:
            report.certified_lower_bound = lb.bound
    return report
