"""Small undirected simple graphs stored as per-vertex neighbor bitmasks.

Every search in this package runs on desk-scale graphs, so adjacency rows
are plain Python ints and all set operations are bit operations.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

MAX_VERTICES = 64
ISO_MAX_VERTICES = 16

INF = math.inf


class Edge(NamedTuple):
    u: int
    v: int


def norm_edge(u: int, v: int) -> Edge:
    return Edge(u, v) if u < v else Edge(v, u)


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int):
    """Yield the indices of set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has neighbors outside 0..{self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for w in bits(row):
                if not self.adj[w] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {w}")

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = [0] * n
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def edge_count(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[Edge]:
        """Edges in ascending lexicographic order."""
        out = []
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                out.append(Edge(u, u + 1 + v))
        return out

    def non_isolated(self) -> int:
        """Bitmask of vertices with at least one neighbor."""
        mask = 0
        for v, row in enumerate(self.adj):
            if row:
                mask |= 1 << v
        return mask

    def induced(self, mask: int) -> "SimpleGraph":
        """Subgraph induced on the vertices of ``mask``, relabeled 0..k-1."""
        verts = list(bits(mask))
        index = {v: i for i, v in enumerate(verts)}
        adj = []
        for v in verts:
            row = 0
            for w in bits(self.adj[v] & mask):
                row |= 1 << index[w]
            adj.append(row)
        return SimpleGraph(len(verts), tuple(adj))

    def strip_isolated(self) -> "SimpleGraph":
        return self.induced(self.non_isolated())

    def relabel(self, perm: Sequence[int]) -> "SimpleGraph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return SimpleGraph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def complement(self) -> "SimpleGraph":
        full = (1 << self.n) - 1
        return SimpleGraph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, edges={[tuple(e) for e in self.edges()]})"


@dataclass(frozen=True)
class GraphStats:
    max_degree: int
    degeneracy: int
    girth: float  # math.inf for forests
    is_bipartite: bool
    edge_count: int

    def to_dict(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "degeneracy": self.degeneracy,
            "girth": "inf" if self.girth == INF else int(self.girth),
            "is_bipartite": self.is_bipartite,
            "edge_count": self.edge_count,
        }


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
    """Build a graph, rejecting loops, duplicates and out-of-range endpoints."""
    if not 0 <= n <= MAX_VERTICES:
        raise ValueError(f"vertex count {n} outside 0..{MAX_VERTICES}")
    seen = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        e = norm_edge(u, v)
        if e in seen:
            raise ValueError(f"duplicate edge {tuple(e)}")
        seen.add(e)
    return SimpleGraph.from_edges(n, seen)


def delete_edges(g: SimpleGraph, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
    adj = list(g.adj)
    for u, v in edges:
        if not g.has_edge(u, v):
            raise ValueError(f"edge ({u}, {v}) is not in the graph")
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
    return SimpleGraph(g.n, tuple(adj))


def edge_subgraph(n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
    """Spanning subgraph on ``n`` vertices with the given edges (no checks)."""
    return SimpleGraph.from_edges(n, edges)


# --- generators -------------------------------------------------------------


def _check_size(n: int) -> None:
    if n > MAX_VERTICES:
        raise ValueError(f"generator would produce {n} > {MAX_VERTICES} vertices")
    if n < 0:
        raise ValueError("negative vertex count")


def complete(p: int) -> SimpleGraph:
    _check_size(p)
    return SimpleGraph.from_edges(p, combinations(range(p), 2))


def complete_multipartite(sizes: Sequence[int]) -> SimpleGraph:
    n = sum(sizes)
    _check_size(n)
    part = []
    for i, s in enumerate(sizes):
        part.extend([i] * s)
    return SimpleGraph.from_edges(n, ((u, v) for u, v in combinations(range(n), 2) if part[u] != part[v]))


def cycle(k: int) -> SimpleGraph:
    if k < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    _check_size(k)
    return SimpleGraph.from_edges(k, ((i, (i + 1) % k) for i in range(k)))


def path(k: int) -> SimpleGraph:
    """Path on ``k`` vertices."""
    _check_size(k)
    return SimpleGraph.from_edges(k, ((i, i + 1) for i in range(k - 1)))


def matching(t: int) -> SimpleGraph:
    """tK_2 on 2t vertices."""
    _check_size(2 * t)
    return SimpleGraph.from_edges(2 * t, ((2 * i, 2 * i + 1) for i in range(t)))


def join(h: SimpleGraph, r: int) -> SimpleGraph:
    """B(H, r) = H + rK_1: H joined completely to r new independent vertices."""
    n = h.n + r
    _check_size(n)
    edges = [tuple(e) for e in h.edges()]
    edges += [(u, h.n + j) for u in range(h.n) for j in range(r)]
    return SimpleGraph.from_edges(n, edges)


def wheel(k: int) -> SimpleGraph:
    """W_k = C_k + K_1; the apex is vertex k."""
    return join(cycle(k), 1)


def book(t: int) -> SimpleGraph:
    """B_t = K_2 + tK_1; the spine is the edge 01."""
    return join(complete(2), t)


def m_graph(s: int, t: int) -> SimpleGraph:
    """M_{s,t} = sK_2 + tK_1."""
    return join(matching(s), t)


def turan(n: int, r: int) -> SimpleGraph:
    """Balanced complete r-partite graph on n vertices."""
    if r < 1:
        raise ValueError("turan graph needs r >= 1")
    sizes = [n // r + (1 if i < n % r else 0) for i in range(r)]
    return complete_multipartite(sizes)


def petersen() -> SimpleGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph.from_edges(10, outer + spokes + inner)


_GENERATORS = {
    "complete": complete,
    "complete_multipartite": complete_multipartite,
    "cycle": cycle,
    "path": path,
    "matching": matching,
    "wheel": wheel,
    "book": book,
    "m": m_graph,
    "join": join,
    "turan": turan,
    "petersen": petersen,
    "empty": SimpleGraph.empty,
}


def named_graph(name: str, *params) -> SimpleGraph:
    """Canonical labeled instance of a named generator, e.g. ``named_graph("wheel", 5)``."""
    try:
        gen = _GENERATORS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}") from None
    return gen(*params)


_LITERALS = [
    (re.compile(r"k(\d+)-e"), lambda m: _minus_edge(complete(int(m[1])))),
    (re.compile(r"k(\d+(?:,\d+)+)"), lambda m: complete_multipartite([int(x) for x in m[1].split(",")])),
    (re.compile(r"k(\d+)"), lambda m: complete(int(m[1]))),
    (re.compile(r"c(\d+)"), lambda m: cycle(int(m[1]))),
    (re.compile(r"p(\d+)"), lambda m: path(int(m[1]))),
    (re.compile(r"w(\d+)"), lambda m: wheel(int(m[1]))),
    (re.compile(r"b(\d+)"), lambda m: book(int(m[1]))),
    (re.compile(r"m(\d+),(\d+)"), lambda m: m_graph(int(m[1]), int(m[2]))),
    (re.compile(r"(\d+)k2"), lambda m: matching(int(m[1]))),
    (re.compile(r"t(\d+),(\d+)"), lambda m: turan(int(m[1]), int(m[2]))),
    (re.compile(r"e(\d+)"), lambda m: SimpleGraph.empty(int(m[1]))),
    (re.compile(r"petersen"), lambda m: petersen()),
]


def _minus_edge(g: SimpleGraph) -> SimpleGraph:
    return delete_edges(g, [g.edges()[-1]])


def parse_graph_literal(text: str) -> SimpleGraph | None:
    """Parse generator literals such as ``K6``, ``W5``, ``M2,3``, ``K4-e``, ``2K2``.

    Returns None when ``text`` is not a literal.
    """
    s = text.strip().lower().replace("_", "").replace("{", "").replace("}", "")
    for pattern, make in _LITERALS:
        m = pattern.fullmatch(s)
        if m:
            return make(m)
    return None


# --- exact structure ----------------------------------------------------------


def max_clique(g: SimpleGraph) -> int:
    """Exact clique number by bitmask branch and bound."""
    best = 0

    def expand(size: int, cand: int) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        while cand:
            if size + popcount(cand) <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            expand(size + 1, cand & g.adj[v])

    expand(0, (1 << g.n) - 1)
    return best


def has_clique(g: SimpleGraph, k: int) -> bool:
    if k <= 0:
        return True

    def search(size: int, cand: int) -> bool:
        if size == k:
            return True
        while cand:
            if size + popcount(cand) < k:
                return False
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            if search(size + 1, cand & g.adj[v]):
                return True
        return False

    return search(0, (1 << g.n) - 1)


def greedy_coloring(g: SimpleGraph) -> list[int]:
    """DSATUR greedy coloring; ties broken by degree, then lowest index."""
    n = g.n
    color = [-1] * n
    sat = [0] * n  # bitmask of neighbor colors
    deg = g.degrees()
    for _ in range(n):
        v = max(
            (u for u in range(n) if color[u] < 0),
            key=lambda u: (popcount(sat[u]), deg[u], -u),
        )
        c = 0
        while sat[v] >> c & 1:
            c += 1
        color[v] = c
        for w in bits(g.adj[v]):
            sat[w] |= 1 << c
    return color


def chromatic_number(g: SimpleGraph) -> int:
    """Exact chromatic number: DSATUR branch and bound with clique lower bound."""
    n = g.n
    if n == 0:
        return 0
    if g.edge_count == 0:
        return 1
    lower = max_clique(g)
    best = max(greedy_coloring(g)) + 1
    if best == lower:
        return best
    adj = g.adj
    deg = g.degrees()
    color = [-1] * n
    classes: list[int] = []

    def pick() -> int:
        chosen, key = -1, None
        for u in range(n):
            if color[u] >= 0:
                continue
            s = sum(1 for cm in classes if cm & adj[u])
            k = (s, deg[u], -u)
            if key is None or k > key:
                chosen, key = u, k
        return chosen

    def search(done: int) -> bool:
        nonlocal best
        if done == n:
            best = len(classes)
            return best == lower
        v = pick()
        for c in range(len(classes)):
            if not classes[c] & adj[v]:
                color[v] = c
                classes[c] |= 1 << v
                stop = search(done + 1)
                classes[c] &= ~(1 << v)
                color[v] = -1
                if stop:
                    return True
        if len(classes) + 1 < best:
            color[v] = len(classes)
            classes.append(1 << v)
            stop = search(done + 1)
            classes.pop()
            color[v] = -1
            if stop:
                return True
        return False

    search(0)
    return best


def is_k_colorable(g: SimpleGraph, k: int) -> bool:
    return chromatic_number(g) <= k


def has_triangle(g: SimpleGraph) -> bool:
    return any(g.adj[u] & g.adj[v] for u, v in g.edges())


def is_acyclic(g: SimpleGraph) -> bool:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def degeneracy(g: SimpleGraph) -> int:
    alive = (1 << g.n) - 1
    best = 0
    while alive:
        v = min(bits(alive), key=lambda u: popcount(g.adj[u] & alive))
        best = max(best, popcount(g.adj[v] & alive))
        alive &= ~(1 << v)
    return best


def girth(g: SimpleGraph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = INF
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in bits(g.adj[u]):
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif parent[u] != w:
                        best = min(best, dist[u] + dist[w] + 1)
            frontier = nxt
    return best


def is_bipartite(g: SimpleGraph) -> bool:
    side = [-1] * g.n
    for root in range(g.n):
        if side[root] >= 0:
            continue
        side[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for w in bits(g.adj[u]):
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    stack.append(w)
                elif side[w] == side[u]:
                    return False
    return True


def structural_stats(g: SimpleGraph) -> GraphStats:
    degs = g.degrees()
    return GraphStats(
        max_degree=max(degs, default=0),
        degeneracy=degeneracy(g),
        girth=girth(g),
        is_bipartite=is_bipartite(g),
        edge_count=g.edge_count,
    )


def line_graph(g: SimpleGraph) -> SimpleGraph:
    es = g.edges()
    return SimpleGraph.from_edges(
        len(es),
        ((i, j) for i, j in combinations(range(len(es)), 2) if set(es[i]) & set(es[j])),
    )


# --- isomorphism and subgraph search ---------------------------------------------


def invariant(g: SimpleGraph) -> tuple:
    """Cheap isomorphism invariant used for bucketing."""
    degs = g.degrees()
    nbr = sorted(tuple(sorted(degs[w] for w in bits(g.adj[v]))) for v in range(g.n))
    return (g.n, g.edge_count, tuple(sorted(degs)), tuple(nbr))


def _refine(g: SimpleGraph) -> list[tuple]:
    degs = g.degrees()
    return [(degs[v], tuple(sorted(degs[w] for w in bits(g.adj[v])))) for v in range(g.n)]


def find_isomorphism(g: SimpleGraph, h: SimpleGraph) -> list[int] | None:
    """Return ``phi`` with g.adj mapped onto h.adj, or None."""
    if g.n > ISO_MAX_VERTICES or h.n > ISO_MAX_VERTICES:
        raise ValueError(f"isomorphism test is capped at {ISO_MAX_VERTICES} vertices")
    if g.n != h.n or g.edge_count != h.edge_count:
        return None
    cg, ch = _refine(g), _refine(h)
    if sorted(cg) != sorted(ch):
        return None
    n = g.n
    # most constrained first: rare labels, then high degree
    freq: dict[tuple, int] = {}
    for lab in cg:
        freq[lab] = freq.get(lab, 0) + 1
    order = []
    placed = 0
    remaining = set(range(n))
    while remaining:
        v = min(remaining, key=lambda u: (-popcount(g.adj[u] & placed), freq[cg[u]], -cg[u][0], u))
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    cand_by_label: dict[tuple, int] = {}
    for w in range(n):
        cand_by_label[ch[w]] = cand_by_label.get(ch[w], 0) | (1 << w)
    phi = [-1] * n

    def extend(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        cand = cand_by_label[cg[v]] & ~used
        for j in range(i):
            u = order[j]
            if g.adj[v] >> u & 1:
                cand &= h.adj[phi[u]]
            else:
                cand &= ~h.adj[phi[u]]
        for w in bits(cand):
            phi[v] = w
            if extend(i + 1, used | (1 << w)):
                return True
        phi[v] = -1
        return False

    return list(phi) if extend(0, 0) else None


def is_isomorphic(g: SimpleGraph, h: SimpleGraph) -> bool:
    return find_isomorphism(g, h) is not None


def find_subgraph(pattern: SimpleGraph, host: SimpleGraph) -> list[int] | None:
    """Find an injective edge-preserving map pattern -> host (not induced)."""
    k = pattern.n
    if k > host.n:
        return None
    if k == 0:
        return []
    pd = pattern.degrees()
    hd = host.degrees()
    if pattern.edge_count > host.edge_count:
        return None
    order = []
    placed = 0
    remaining = set(range(k))
    while remaining:
        v = max(remaining, key=lambda u: (popcount(pattern.adj[u] & placed), pd[u], -u))
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    by_degree = [0] * (max(pd) + 1)
    for d in range(len(by_degree)):
        by_degree[d] = sum(1 << w for w in range(host.n) if hd[w] >= d)
    phi = [-1] * k

    def extend(i: int, used: int) -> bool:
        if i == k:
            return True
        v = order[i]
        cand = by_degree[pd[v]] & ~used
        for u in bits(pattern.adj[v]):
            if phi[u] >= 0:
                cand &= host.adj[phi[u]]
        for w in bits(cand):
            phi[v] = w
            if extend(i + 1, used | (1 << w)):
                return True
        phi[v] = -1
        return False

    return list(phi) if extend(0, 0) else None


def contains_subgraph(host: SimpleGraph, pattern: SimpleGraph) -> bool:
    return find_subgraph(pattern, host) is not None


# --- edge-list text format ----------------------------------------------------------


def write_edge_list(g: SimpleGraph) -> str:
    es = g.edges()
    lines = [f"{g.n} {len(es)}"] + [f"{u} {v}" for u, v in es]
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> SimpleGraph:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ValueError("empty edge-list")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges, found {len(body)}")
    return build_graph(n, [(int(a), int(b)) for a, b in body])
