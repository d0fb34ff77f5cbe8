"""Exponential ground truth for small trees.

Everything here is deliberately independent of the formula engine: brute
force only calls the search solver. The D-unsolvable configurations form a
down-closed set (removing a pebble never helps), and every coordinate is
bounded by alpha(v, D) - 1 because a stack of alpha(v, D) on v solves D. The
enumerator walks that set coordinate by coordinate and, for every prefix,
only keeps the largest feasible value of the last coordinate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from typing import Iterator

from .errors import BudgetExceeded, CapExceeded, EmptyTarget
from .partition import PathPartition
from .solver import Budget, Solver, Status
from .tree import PebblingFn, Tree, build_tree, distances_from, format_edge_list, parse_edge_list

SUPPORTS = ("all", "leaves")


@dataclass(frozen=True)
class Caps:
    max_n: int = 8
    # configurations handed to the solver per instance
    max_checks: int = 5_000_000
    max_solver_states: int = 10**7


@dataclass(frozen=True)
class ExtremalReport:
    pi: int
    extremals: tuple[PebblingFn, ...]
    support: str
    universe: tuple[int, ...]
    checks: int = field(default=0, compare=False)

    def to_json(self, t: Tree | None = None) -> str:
        label = t.name if t is not None else str
        return json.dumps({
            "pi": self.pi,
            "support": self.support,
            "universe": [label(v) for v in self.universe],
            "extremals": [{label(v): k for v, k in f.to_dict().items()} for f in self.extremals],
        }, sort_keys=True)


class _Oracle:
    """Solver-backed membership test for the unsolvable set, with caps."""

    def __init__(self, t: Tree, d: PebblingFn, support: str, caps: Caps):
        if support not in SUPPORTS:
            raise ValueError(f"support must be one of {SUPPORTS}")
        if d.size == 0:
            raise EmptyTarget("target has size 0")
        if t.n > caps.max_n:
            raise CapExceeded(f"tree has {t.n} vertices, cap is {caps.max_n}")
        self.t, self.d, self.caps = t, d, caps
        self.solver = Solver(t, d, Budget(max_states=caps.max_solver_states))
        self.checks = 0
        self.cache: dict[tuple[int, ...], bool] = {}
        verts = t.leaves if support == "leaves" else tuple(range(t.n))
        dist = [distances_from(t, v) for v in range(t.n)]
        self.alpha = [sum(k << dist[v][u] for u, k in enumerate(d.counts)) for v in range(t.n)]
        # widest coordinate first so large stacks set the bound early
        self.universe = tuple(sorted(verts, key=lambda v: (-self.alpha[v], v)))

    def unsolvable(self, counts) -> bool:
        key = tuple(counts)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        self.checks += 1
        if self.checks > self.caps.max_checks:
            raise CapExceeded(f"more than {self.caps.max_checks} solver checks")
        v = self.solver.check(counts, witness=False)
        if v.status is Status.BUDGET_EXCEEDED:
            raise BudgetExceeded(v.states_explored)
        self.cache[key] = out = v.status is Status.UNSOLVABLE
        return out

    def top(self, counts, v, hi):
        """Largest x <= hi with counts + x on v unsolvable; counts must be."""
        c = list(counts)
        c[v] = hi
        if hi == 0 or self.unsolvable(c):
            return hi
        lo, hi = 0, hi - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            c[v] = mid
            if self.unsolvable(c):
                lo = mid
            else:
                hi = mid - 1
        return lo

    def frontier(self, bound=None) -> Iterator[tuple[int, ...]]:
        """Unsolvable points whose last universe coordinate is maximal.

        ``bound`` is a callable returning the current best size; subtrees
        whose upper bound falls below it are skipped.
        """
        uni = self.universe
        m = len(uni)
        counts = [0] * self.t.n
        his = [self.alpha[v] - 1 for v in uni]

        def rec(k, used, his):
            # callers guarantee the current prefix is unsolvable; tops are
            # per-coordinate maxima with everything after k at zero
            tops = list(his)
            if bound is not None:
                # inherited tops are already valid upper bounds
                slack = used + sum(tops) - bound()
                if slack < 0:
                    return
                for i in range(len(tops)):
                    x = self.top(counts, uni[k + i], tops[i])
                    slack -= tops[i] - x
                    tops[i] = x
                    if slack < 0:
                        return
            else:
                tops = [self.top(counts, uni[k + i], h) for i, h in enumerate(his)]
            v = uni[k]
            if k == m - 1:
                counts[v] = tops[0]
                yield tuple(counts)
                counts[v] = 0
                return
            for x in range(tops[0], -1, -1):
                counts[v] = x
                yield from rec(k + 1, used + x, tops[1:])
            counts[v] = 0

        if not self.unsolvable(counts):
            return
        if m == 0:
            yield tuple(counts)
            return
        yield from rec(0, 0, his)


def brute_pi(t: Tree, d: PebblingFn, support: str = "all", caps: Caps | None = None) -> ExtremalReport:
    """pi(T, D) over the chosen support universe, with every extremal."""
    o = _Oracle(t, d, support, caps or Caps())
    # a lone stack one shy of alpha is always unsolvable
    best = [max(o.alpha[v] for v in o.universe) - 1 if o.universe else -1]
    found: list[tuple[int, ...]] = []
    for c in o.frontier(bound=lambda: best[0]):
        s = sum(c)
        if s > best[0]:
            best[0] = s
            found = [c]
        elif s == best[0]:
            found.append(c)
    extremals = tuple(PebblingFn(c) for c in sorted(set(found)))
    return ExtremalReport(best[0] + 1, extremals, support, o.universe, o.checks)


def maximal_configurations(t: Tree, d: PebblingFn, support: str = "all",
                           caps: Caps | None = None) -> list[PebblingFn]:
    """Every D-maximal configuration whose support lies in the universe."""
    o = _Oracle(t, d, support, caps or Caps())
    out = []
    for c in o.frontier():
        ok = True
        for v in o.universe:
            c2 = list(c)
            c2[v] += 1
            if o.unsolvable(c2):
                ok = False
                break
        if ok and support == "leaves":
            # must also be maximal against pebbles added off the universe
            for v in range(t.n):
                if v in o.universe:
                    continue
                c2 = list(c)
                c2[v] += 1
                if o.unsolvable(c2):
                    ok = False
                    break
        if ok:
            out.append(PebblingFn(c))
    return out


def check_support_theorem(t: Tree, d: PebblingFn, caps: Caps | None = None) -> bool:
    """Every extremal configuration over all vertices lives on leaves."""
    rep = brute_pi(t, d, "all", caps)
    leaves = set(t.leaves)
    return all(set(c.support) <= leaves for c in rep.extremals)


def check_observation(t: Tree, d: PebblingFn, caps: Caps | None = None) -> bool:
    """Every D-maximal configuration covers the leaves outside supp(D)."""
    need = set(t.leaves) - set(d.support)
    if t.n == 1:
        need = set()
    return all(need <= set(c.support) for c in maximal_configurations(t, d, "all", caps))


def enumerate_partitions(t: Tree, r: int, max_n: int = 10) -> list[PathPartition]:
    """Every r-path partition: paths run away from r and end at leaves.

    The root starts one path per child; every other internal vertex passes
    its incoming path on to exactly one child.
    """
    if t.n > max_n:
        raise CapExceeded(f"tree has {t.n} vertices, cap is {max_n}")
    rt = t.rooted(r)
    internal = [x for x in rt.order if x != r and rt.children(x)]
    choices = [rt.children(x) for x in internal]
    out = []
    for pick in product(*choices):
        nxt = dict(zip(internal, pick))
        paths = []
        for x in rt.order:
            for c in rt.children(x):
                if x != r and nxt.get(x) == c:
                    continue
                seq = [x, c]
                while seq[-1] in nxt:
                    seq.append(nxt[seq[-1]])
                paths.append(tuple(seq))
        paths.sort(key=lambda p: (-len(p), p[-1], p))
        out.append(PathPartition(r, t.n, tuple(paths)))
    return out


def majorizes_or_equals(a, b) -> bool:
    """Lexicographic comparison of descending-sorted multisets."""
    a = sorted(a, reverse=True)
    b = sorted(b, reverse=True)
    return a >= b


# -- tree catalog -----------------------------------------------------------

def _rooted_code(adj, v, parent):
    return "(" + "".join(sorted(_rooted_code(adj, c, v) for c in adj[v] if c != parent)) + ")"


def _centers(adj):
    n = len(adj)
    if n <= 2:
        return list(range(n))
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] == 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for u in adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        layer = nxt
    return layer


def canonical_form(t: Tree) -> str:
    """Isomorphism-invariant string (AHU encoding rooted at the centre)."""
    adj = t.adjacency
    return min(_rooted_code(adj, c, -1) for c in _centers(adj))


def generate_catalog(max_n: int) -> list[Tree]:
    """All non-isomorphic trees on 1..max_n vertices by parent vectors."""
    out = []
    for n in range(1, max_n + 1):
        seen = {}

        def rec(parents):
            if len(parents) == n - 1:
                edges = [(p, i + 1) for i, p in enumerate(parents)]
                t = build_tree(edges, n=n)
                key = canonical_form(t)
                if key not in seen:
                    seen[key] = t
                return
            i = len(parents) + 1
            for p in range(i):
                parents.append(p)
                rec(parents)
                parents.pop()

        rec([])
        out.extend(seen[k] for k in sorted(seen))
    return out


CATALOG_FILE = "catalog_n7.txt"


def format_catalog(trees) -> str:
    return "\n".join(format_edge_list(t).rstrip("\n") + "\n" for t in trees)


def load_catalog(max_n: int = 7) -> list[Tree]:
    """Trees from the packaged fixture (n <= 7), generated beyond that."""
    if max_n > 7:
        return generate_catalog(max_n)
    text = resources.files("treepebble").joinpath("data", CATALOG_FILE).read_text()
    trees = [parse_edge_list(block) for block in text.split("\n\n") if block.strip()]
    return [t for t in trees if t.n <= max_n]


def automorphisms(t: Tree) -> list[tuple[int, ...]]:
    """All vertex permutations preserving adjacency (backtracking)."""
    n = t.n
    adj = [set(a) for a in t.adjacency]
    deg = [len(a) for a in adj]
    out = []
    img = [-1] * n
    used = [False] * n

    def rec(v):
        if v == n:
            out.append(tuple(img))
            return
        for w in range(n):
            if used[w] or deg[w] != deg[v]:
                continue
            if any(img[u] >= 0 and img[u] not in adj[w] for u in adj[v] if u < v):
                continue
            img[v] = w
            used[w] = True
            rec(v + 1)
            used[w] = False
            img[v] = -1

    rec(0)
    # edge count check removes maps that only preserve some adjacencies
    edges = {frozenset(e) for e in t.edges}
    return [p for p in out if all(frozenset((p[u], p[v])) in edges for u, v in t.edges)]


def target_representatives(t: Tree, targets, autos=None) -> list[PebblingFn]:
    """One target per automorphism orbit, smallest count vector first."""
    autos = autos if autos is not None else automorphisms(t)
    seen = set()
    out = []
    for d in targets:
        key = min(tuple(d.counts[p.index(i)] for i in range(t.n)) for p in autos)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


def minimal_solution_digraphs(t: Tree, c: PebblingFn, d: PebblingFn, max_n: int = 7):
    """Every minimal (C, D)-solution as an acyclic arc multiset.

    Minimal solutions on trees are acyclic, so one signed flow per edge
    describes them. A flow is a solution iff every vertex keeps
    c(v) + in(v) - 2 out(v) >= d(v), and minimal iff every vertex receiving
    a pebble ends exactly at d(v) (otherwise one incoming step could go).
    Edges are fixed leaf-upward so each vertex is checked as soon as its
    balance is known.
    """
    if t.n > max_n:
        raise CapExceeded(f"tree has {t.n} vertices, cap is {max_n}")
    rt = t.rooted(0)
    post = [x for x in reversed(rt.order) if x != 0]
    limit = max(c.size - d.size, 0)
    out: list[dict] = []
    flow: dict[tuple[int, int], int] = {}

    def balance(v, arcs):
        inn = sum(k for (a, b), k in arcs.items() if b == v)
        outk = sum(k for (a, b), k in arcs.items() if a == v)
        return c[v] + inn - 2 * outk - d[v], inn

    def ok(v, arcs):
        excess, inn = balance(v, arcs)
        return excess >= 0 and not (inn and excess)

    def rec(i, used):
        if i == len(post):
            if ok(0, flow):
                out.append(dict(flow))
            return
        x = post[i]
        p = rt.parent[x]
        for k in range(-(limit - used), limit - used + 1):
            arc = (x, p) if k > 0 else (p, x)
            if k:
                flow[arc] = abs(k)
            if ok(x, flow):
                rec(i + 1, used + abs(k))
            if k:
                del flow[arc]

    rec(0, 0)
    return out
