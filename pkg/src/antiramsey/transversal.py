"""Independent transversals in parted digraphs and the rainbow cut construction.

Vertices are global indices 0..m*s-1; vertex x lives in part x // s.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, log2
from typing import Iterable, Sequence

from .extremal import EdgeColoring
from .families import BudgetExceeded
from .graph import bits, popcount


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PartedDigraph:
    m: int
    s: int
    out: tuple[int, ...]  # out-neighbor bitmask per vertex
    dropped: int = field(default=0, compare=False)

    @classmethod
    def from_arcs(cls, m: int, s: int, arcs: Iterable[tuple[int, int]]) -> "PartedDigraph":
        """Build from arcs; loops and arcs inside a part are dropped and counted."""
        if m < 1 or s < 1:
            raise ValueError("need m >= 1 and s >= 1")
        total = m * s
        out = [0] * total
        dropped = 0
        for u, v in arcs:
            if not (0 <= u < total and 0 <= v < total):
                raise ValueError(f"arc ({u}, {v}) outside 0..{total - 1}")
            if u // s == v // s:
                dropped += 1
                continue
            out[u] |= 1 << v
        return cls(m, s, tuple(out), dropped)

    @property
    def order(self) -> int:
        return self.m * self.s

    def part(self, x: int) -> int:
        return x // self.s

    def part_vertices(self, i: int) -> range:
        return range(i * self.s, (i + 1) * self.s)

    def part_mask(self, i: int) -> int:
        return ((1 << self.s) - 1) << (i * self.s)

    @property
    def max_out_degree(self) -> int:
        return max((popcount(r) for r in self.out), default=0)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in bits(self.out[u])]

    def in_masks(self) -> list[int]:
        inn = [0] * self.order
        for u, v in self.arcs():
            inn[v] |= 1 << u
        return inn

    def undirected(self) -> list[int]:
        inn = self.in_masks()
        return [self.out[x] | inn[x] for x in range(self.order)]

    def induced(self, keep: Sequence[Sequence[int]]) -> tuple["PartedDigraph", list[int]]:
        """Sub-digraph on equally sized vertex lists per part, plus the old labels."""
        size = len(keep[0])
        if any(len(k) != size for k in keep):
            raise ValueError("parts must stay equal-sized")
        labels = [x for part in keep for x in part]
        index = {x: i for i, x in enumerate(labels)}
        arcs = [(index[u], index[v]) for u, v in self.arcs() if u in index and v in index]
        return PartedDigraph.from_arcs(len(keep), size, arcs), labels


@dataclass(frozen=True)
class Transversal:
    chosen: tuple[tuple[int, ...], ...]
    fold: int = 1

    def vertices(self) -> list[int]:
        return [x for part in self.chosen for x in part]

    def to_json(self) -> str:
        return json.dumps({"fold": self.fold, "chosen": [list(p) for p in self.chosen]})

    @classmethod
    def from_json(cls, text: str) -> "Transversal":
        data = json.loads(text)
        return cls(tuple(tuple(p) for p in data["chosen"]), data["fold"])


def is_independent_transversal(d: PartedDigraph, t: Transversal) -> bool:
    """Exactly ``fold`` distinct vertices in each part and no arc among them."""
    if len(t.chosen) != d.m:
        return False
    mask = 0
    for i, part in enumerate(t.chosen):
        if len(set(part)) != t.fold or any(d.part(x) != i for x in part):
            return False
        for x in part:
            mask |= 1 << x
    return all(not d.out[x] & mask for x in bits(mask))


# --- exact search -----------------------------------------------------------------------


def find_transversal_exact(d: PartedDigraph, fold: int = 1, budget: int | None = 10_000_000) -> Transversal | None:
    """Complete search; None means no independent (fold-)transversal exists."""
    if fold < 1:
        raise ValueError("fold must be >= 1")
    if fold > d.s:
        return None
    nbr = d.undirected()
    nodes = 0
    choice: list[tuple[int, ...]] = []
    subsets = [list(combinations(d.part_vertices(i), fold)) for i in range(d.m)]
    sub_masks = [[(sum(1 << x for x in c), c) for c in subs] for subs in subsets]

    def rec(i: int, forbidden: int, chosen_mask: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"transversal search budget {budget} exceeded", progress=nodes)
        if i == d.m:
            return True
        avail = d.part_mask(i) & ~forbidden
        if popcount(avail) < fold:
            return False
        for mask, c in sub_masks[i]:
            if mask & ~avail:
                continue
            inner = 0
            for x in c:
                inner |= nbr[x]
            if inner & mask:
                continue
            choice.append(c)
            if rec(i + 1, forbidden | inner, chosen_mask | mask):
                return True
            choice.pop()
        return False

    if rec(0, 0, 0):
        return Transversal(tuple(choice), fold)
    return None


# --- derandomized lemma ----------------------------------------------------------------


def _destroyed_weight(d: PartedDigraph, arcs, selected: dict[int, int], free_parts: int) -> int:
    """Number of completions (counted with multiplicity per arc) containing some arc.

    A completion picks one vertex in each of the ``free_parts`` unchosen
    parts. An arc survives into the count only if its chosen endpoints are
    the selected ones; each unchosen endpoint pins one free part.
    """
    s = d.s
    total = 0
    for u, v in arcs:
        pu, pv = u // s, v // s
        pinned = 0
        dead = False
        for x, p in ((u, pu), (v, pv)):
            sel = selected.get(p)
            if sel is None:
                pinned += 1
            elif sel != x:
                dead = True
                break
        if not dead:
            total += s ** (free_parts - pinned)
    return total


def itl_transversal(d: PartedDigraph, trace: list | None = None) -> Transversal:
    """Independent transversal via conditional expectations, for s > m * maxout.

    Parts are fixed in order; each step keeps the vertex that destroys the
    fewest completions. Every arc kills s^(m-2) of the s^m candidate sets,
    so while destroyed < s^(free parts) some completion survives. If
    ``trace`` is given, the surviving count after each step is appended.
    """
    m, s = d.m, d.s
    delta = d.max_out_degree
    if not s > m * delta:
        raise PreconditionError(f"need s > m*maxout, got s={s}, m={m}, maxout={delta}")
    arcs = d.arcs()
    selected: dict[int, int] = {}
    destroyed = _destroyed_weight(d, arcs, selected, m)
    surviving = s**m - destroyed
    assert surviving > 0, surviving
    if trace is not None:
        trace.append(surviving)
    for i in range(m):
        free = m - i - 1
        best, best_w = None, None
        for x in d.part_vertices(i):
            selected[i] = x
            w = _destroyed_weight(d, arcs, selected, free)
            if best_w is None or w < best_w:
                best, best_w = x, w
        selected[i] = best
        surviving = s**free - best_w
        assert surviving > 0, (i, surviving)
        if trace is not None:
            trace.append(surviving)
    t = Transversal(tuple((selected[i],) for i in range(m)), 1)
    assert is_independent_transversal(d, t)
    return t


def itl_multifold(d: PartedDigraph, r: int) -> Transversal:
    """Independent set with r vertices in each part, for s >= (2r+m)*maxout + r."""
    m, s = d.m, d.s
    delta = d.max_out_degree
    if r < 1:
        raise PreconditionError("fold r must be >= 1")
    if s < (2 * r + m) * delta + r:
        raise PreconditionError(f"need s >= (2r+m)*maxout + r, got s={s}, m={m}, r={r}, maxout={delta}")
    k = s - m * delta
    remaining = [list(d.part_vertices(i)) for i in range(m)]
    found: list[list[int]] = []
    for _ in range(k):
        sub, labels = d.induced(remaining)
        t = itl_transversal(sub)
        picked = [labels[x] for x in t.vertices()]
        found.append(picked)
        for i, x in enumerate(picked):
            remaining[i].remove(x)
    # conflict graph on the k disjoint transversals
    masks = [sum(1 << x for x in t) for t in found]
    nbr = d.undirected()
    reach = [0] * k
    for a in range(k):
        for x in found[a]:
            reach[a] |= nbr[x]
    conflict = [0] * k
    for a, b in combinations(range(k), 2):
        if reach[a] & masks[b]:
            conflict[a] |= 1 << b
            conflict[b] |= 1 << a
    # greedy minimum-degree independent set
    alive = (1 << k) - 1
    indep = []
    while alive:
        a = min(bits(alive), key=lambda j: (popcount(conflict[j] & alive), j))
        indep.append(a)
        alive &= ~(conflict[a] | (1 << a))
    assert len(indep) >= k / (2 * delta + 1)
    assert len(indep) >= r
    use = sorted(indep[:r])
    chosen = tuple(tuple(sorted(found[a][i] for a in use)) for i in range(m))
    t = Transversal(chosen, r)
    assert is_independent_transversal(d, t)
    return t


# --- random instances -----------------------------------------------------------------------


def random_parted_digraph(m: int, s: int, delta: int, rng: random.Random) -> PartedDigraph:
    """Each vertex draws ``delta`` out-neighbors uniformly from the other parts."""
    total = m * s
    arcs = []
    for x in range(total):
        others = [y for y in range(total) if y // s != x // s]
        for y in rng.sample(others, min(delta, len(others))):
            arcs.append((x, y))
    return PartedDigraph.from_arcs(m, s, arcs)


# --- forbidden substructures ----------------------------------------------------------------


@dataclass(frozen=True)
class ForbiddenScan:
    has_C2: bool
    has_cross4_2K2: bool
    has_cross3_P3: bool


def scan_forbidden_substructures(d: PartedDigraph) -> ForbiddenScan:
    arcs = d.arcs()
    s = d.s
    c2 = any(d.out[v] >> u & 1 for u, v in arcs)
    cross4 = False
    cross3 = False
    for (a, b), (c, e) in combinations(arcs, 2):
        parts = {a // s, b // s, c // s, e // s}
        shared = {a, b} & {c, e}
        if not shared and len(parts) == 4:
            cross4 = True
        elif len(shared) == 1 and len(parts) == 3:
            cross3 = True
        if cross4 and cross3:
            break
    return ForbiddenScan(c2, cross4, cross3)


# --- s(m, d) constructions -------------------------------------------------------------------


@dataclass
class SmdRecord:
    m: int
    d: int
    variant: str
    digraph: PartedDigraph
    claimed_s: int
    verified: bool | None  # None: search budget too small to decide


def _smd_basic(m: int, d: int) -> PartedDigraph:
    # V_i = A_{i,1..m-1}, |A_{i,j}| = d; every v in A_{i,j} (i < m) points to all of A_{m,i}
    s = (m - 1) * d

    def a(i, j):  # 0-based part i, block j
        start = i * s + j * d
        return range(start, start + d)

    arcs = []
    for i in range(m - 1):
        for j in range(m - 1):
            for v in a(i, j):
                arcs.extend((v, w) for w in a(m - 1, i))
    return PartedDigraph.from_arcs(m, s, arcs)


def _smd_small_m(m: int, d: int) -> PartedDigraph:
    # V_m split into V_{m,i} (size d+1); V_i split into A_{i,j} (size m-1), j = 0..d
    s = (m - 1) * (d + 1)
    last = (m - 1) * s

    def vm(i, j):
        return last + i * (d + 1) + j

    def a(i, j):
        start = i * s + j * (m - 1)
        return range(start, start + m - 1)

    arcs = []
    for i in range(m - 1):
        for j in range(d + 1):
            for v in a(i, j):
                arcs.extend((v, vm(i, jj)) for jj in range(d + 1) if jj != j)
            arcs.extend((vm(i, j), w) for w in a(i, j))
    return PartedDigraph.from_arcs(m, s, arcs)


def _smd_divisible(m: int, d: int) -> PartedDigraph:
    k = d // (m - 1)
    s = m * d
    last = (m - 1) * s

    def v_il(i, l):  # V_{i,l}, i < m-1 (0-based), l = 0..m-1, size d
        start = i * s + l * d
        return range(start, start + d)

    def vm(j, l):  # V_{m,j,l}, j = 0..m-2, l = 0..m-1, size k
        start = last + j * (m * k) + l * k
        return range(start, start + k)

    arcs = []
    for j in range(m - 1):
        for l in range(m):
            for v in vm(j, l):
                arcs.extend((v, w) for w in v_il(j, l))
            for w in v_il(j, l):
                for ll in range(m):
                    if ll != l:
                        arcs.extend((w, x) for x in vm(j, ll))
    return PartedDigraph.from_arcs(m, s, arcs)


def smd_construct(m: int, d: int, variant: str = "basic", budget: int | None = 5_000_000) -> SmdRecord:
    """Digraphs with out-degree <= d and no independent transversal.

    basic: s = (m-1)d for m >= 3; small_m: s = (m-1)(d+1) for 3 <= m <= d;
    divisible: s = md when (m-1) divides d.
    """
    if d < 1:
        raise PreconditionError("need d >= 1")
    if variant == "basic":
        if m < 3:
            raise PreconditionError("basic construction needs m >= 3")
        dg = _smd_basic(m, d)
    elif variant == "small_m":
        if not 3 <= m <= d:
            raise PreconditionError("small_m construction needs 3 <= m <= d")
        dg = _smd_small_m(m, d)
    elif variant == "divisible":
        if m < 2 or d % (m - 1):
            raise PreconditionError("divisible construction needs m >= 2 and (m-1) | d")
        dg = _smd_divisible(m, d)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    assert dg.max_out_degree <= d
    try:
        verified = find_transversal_exact(dg, 1, budget) is None
    except BudgetExceeded:
        verified = None
    return SmdRecord(m, d, variant, dg, dg.s, verified)


def search_blocking_digraph(m: int, s: int, d: int, budget: int | None = None) -> PartedDigraph | None:
    """Look for a digraph with parts of size s, out-degree <= d, and no independent transversal.

    Complete search over out-neighborhoods of exactly d vertices (adding
    arcs never creates transversals). A vertex's arcs kill at most
    d * s^(m-2) of the s^m candidate transversals, which prunes branches
    that cannot kill them all. Vertex 0's first arc is fixed by symmetry.
    Returns None when no such digraph exists.
    """
    total = m * s
    # candidate transversal t -> vertices; per vertex pair the transversals containing both
    tv = []
    for code in range(s**m):
        c, verts = code, []
        for i in range(m):
            verts.append(i * s + c % s)
            c //= s
        tv.append(verts)
    pair_kill: dict[tuple[int, int], int] = {}
    for idx, verts in enumerate(tv):
        for a, b in combinations(verts, 2):
            pair_kill[(a, b)] = pair_kill.get((a, b), 0) | (1 << idx)
    kills_per_arc = s ** (m - 2)

    def kill(u, v):
        return pair_kill[(u, v) if u < v else (v, u)]

    options: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(total)]
    for x in range(total):
        for c in combinations([y for y in range(total) if y // s != x // s], d):
            km = 0
            for y in c:
                km |= kill(x, y)
            options[x].append((km, c))
    # symmetry: vertex 0 (part 0) may assume its arc set contains vertex s (first of part 1)
    options[0] = [(km, c) for km, c in options[0] if s in c]
    full = (1 << (s**m)) - 1
    out: list[tuple[int, ...]] = [()] * total
    nodes = 0

    def rec(x: int, alive: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(f"blocking-digraph search budget {budget} exceeded", progress=nodes)
        if not alive:
            return True
        if x == total or popcount(alive) > (total - x) * d * kills_per_arc:
            return False
        for km, c in options[x]:
            out[x] = c
            if rec(x + 1, alive & ~km):
                return True
        out[x] = ()
        return False

    if rec(0, full):
        return PartedDigraph.from_arcs(m, s, [(x, y) for x in range(total) for y in out[x]])
    return None


def transversal_bound_search_feasible(m: int, s: int, fold: int = 1) -> bool:
    """Rough guard: the naive search space should stay below ~2^40."""
    return m * log2(max(comb(s, fold), 1)) <= 40


# --- rainbow cut ---------------------------------------------------------------------------


@dataclass
class RainbowCutResult:
    classes: list[tuple[int, ...]]
    p: int
    s: int
    block_digraph: PartedDigraph = field(repr=False)


class NotRainbow(ValueError):
    pass


def rainbow_cut(psi, parts: Sequence[Sequence[int]], p: int, s: int | None = None) -> RainbowCutResult:
    """Pick p vertices in each class so no interior color appears in K between the picks.

    ``psi`` is an EdgeColoring of the complete host; ``parts`` are the m
    classes of the rainbow complete multipartite graph K, each of size
    q = s*p. Default s = m*p^2 (so q = m*p^3).
    """
    m = len(parts)
    if m < 1 or p < 1:
        raise PreconditionError("need m >= 1 and p >= 1")
    if s is None:
        s = m * p * p
    q = s * p
    if any(len(c) != q for c in parts):
        raise PreconditionError(f"every class must have q = s*p = {q} vertices")
    if not s > m * 2 * comb(p, 2):
        raise PreconditionError(f"need s > m*2*C(p,2) = {m * 2 * comb(p, 2)}, got s={s}")
    flat = [x for c in parts for x in c]
    if len(set(flat)) != len(flat) or any(not 0 <= x < psi.n for x in flat):
        raise PreconditionError("classes must be disjoint vertex sets of the host")
    class_of = {x: i for i, c in enumerate(parts) for x in c}
    # K is rainbow: map each of its colors to the edge carrying it
    k_edge_of: dict[int, tuple[int, int]] = {}
    for i, j in combinations(range(m), 2):
        for x in parts[i]:
            for y in parts[j]:
                c = psi.color(x, y)
                if c in k_edge_of:
                    raise NotRainbow(f"color {c} repeats in K on {k_edge_of[c]} and {(x, y)}")
                k_edge_of[c] = (x, y)
    block_of = {}
    for i, c in enumerate(parts):
        for pos, x in enumerate(c):
            block_of[x] = i * s + pos // p
    arcs = set()
    for i, c in enumerate(parts):
        for j in range(s):
            block = c[j * p : (j + 1) * p]
            src = i * s + j
            for x, y in combinations(block, 2):
                hit = k_edge_of.get(psi.color(x, y))
                if hit is None:
                    continue
                for end in hit:
                    tgt = block_of[end]
                    if tgt // s != i:
                        arcs.add((src, tgt))
    bd = PartedDigraph.from_arcs(m, s, sorted(arcs))
    if bd.max_out_degree > 2 * comb(p, 2):
        raise AssertionError("block digraph out-degree exceeds 2*C(p,2)")
    t = itl_transversal(bd)
    chosen = []
    for i, (b,) in enumerate(t.chosen):
        j = b - i * s
        chosen.append(tuple(parts[i][j * p : (j + 1) * p]))
    result = RainbowCutResult(chosen, p, s, bd)
    if not verify_rainbow_cut(psi, chosen):
        raise AssertionError("rainbow cut postcondition failed")
    return result


def verify_rainbow_cut(psi, classes: Sequence[Sequence[int]]) -> bool:
    """Colors inside the classes never appear on edges between the classes."""
    inside = set()
    for c in classes:
        for x, y in combinations(c, 2):
            inside.add(psi.color(x, y))
    for a, b in combinations(range(len(classes)), 2):
        for x in classes[a]:
            for y in classes[b]:
                if psi.color(x, y) in inside:
                    return False
    return True


def random_rainbow_instance(m: int, p: int, s: int, rng: random.Random, duplicate: bool = True):
    """K_{qm} with a rainbow K_{q,...,q} and random interior colors drawn partly from K's colors."""
    q = s * p
    n = q * m
    parts = [list(range(i * q, (i + 1) * q)) for i in range(m)]
    part_of = [x // q for x in range(n)]
    labels = []
    next_color = 0
    k_colors = []
    for u, v in combinations(range(n), 2):
        if part_of[u] != part_of[v]:
            labels.append(next_color)
            k_colors.append(next_color)
            next_color += 1
        else:
            labels.append(None)
    fresh = next_color
    pool = list(range(fresh, fresh + max(3, n)))
    for i, lab in enumerate(labels):
        if lab is None:
            if duplicate and rng.random() < 0.5:
                labels[i] = rng.choice(k_colors)
            else:
                labels[i] = rng.choice(pool)
    return EdgeColoring.from_labels(n, labels), parts


# --- digraph text format -----------------------------------------------------------------


def write_digraph(d: PartedDigraph) -> str:
    arcs = d.arcs()
    return "\n".join([f"{d.m} {d.s} {len(arcs)}"] + [f"{u} {v}" for u, v in arcs]) + "\n"


def read_digraph(text: str) -> PartedDigraph:
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError("empty digraph file")
    m, s, a = (int(x) for x in rows[0])
    body = rows[1:]
    if len(body) != a:
        raise ValueError(f"header announces {a} arcs, found {len(body)}")
    return PartedDigraph.from_arcs(m, s, [(int(u), int(v)) for u, v in body])
