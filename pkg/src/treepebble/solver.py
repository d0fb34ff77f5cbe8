"""Exact D-solvability on trees by memoized depth-first search.

The final configuration has to dominate D pointwise (simultaneous
satisfaction). The search enumerates configurations reachable by pebbling
steps and keeps a table of states already shown unsolvable, which a
:class:`Solver` instance shares across every configuration it checks against
the same target.

Sound reductions used by the search:

* a step x -> y is only tried when the side of the edge containing y still
  holds an unmet target (minimal solutions never feed a satisfied side);
* weight pruning: sum_v c(v) 2^-dist(u,v) never increases under a step, so a
  state whose weight at some u is below the target's weight at u is dead;
* per-target necessity: reserving the demand of every other target, the
  greedy collection at each unmet target must still cover its demand;
* once a single target is unmet, greedy collection decides the state.
"""
from __future__ import annotations

import enum
import heapq
import json
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import AttributionMissing, BudgetExceeded
from .tree import PebblingFn, Tree, convex_hull, distances_from

DEFAULT_MAX_STATES = int(os.environ.get("TREEPEBBLE_MAX_STATES", 10**7))


class Move(NamedTuple):
    src: int
    dst: int


@dataclass(frozen=True)
class Budget:
    max_states: int = DEFAULT_MAX_STATES
    max_memo_bytes: int = 2 << 30
    # longest move list materialized for a witness solution
    max_moves: int = 10**6


class Status(enum.Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class Solution:
    """A replayed move sequence with its pebble lineage.

    ``attribution[i]`` is the target vertex whose delivered pebble descends
    from move i, or -1 when the move feeds nothing that is claimed.
    ``used`` is C[sigma], the original pebbles ending up in delivered ones.
    """

    tree: Tree = field(repr=False)
    config: PebblingFn = field(repr=False)
    target: PebblingFn = field(repr=False)
    moves: tuple[Move, ...]
    used: PebblingFn
    attribution: tuple[int, ...] | None = None

    @property
    def digraph(self) -> Counter:
        return Counter(self.moves)

    @property
    def sources(self) -> frozenset[int]:
        return frozenset(self.used.support)

    @property
    def merge_number(self) -> int:
        indeg = Counter(v for _, v in set(self.moves))
        return sum(k - 1 for k in indeg.values() if k >= 2)

    @property
    def cost(self) -> int:
        return len(self.moves) + self.target.size

    def final(self) -> PebblingFn:
        c = list(self.config.counts)
        for u, v in self.moves:
            c[u] -= 2
            c[v] += 1
        return PebblingFn(c)

    def to_json(self, names: bool = False) -> str:
        label = self.tree.name if names else int
        return json.dumps([{"from": label(u), "to": label(v)} for u, v in self.moves])


@dataclass(frozen=True)
class Verdict:
    status: Status
    solution: Solution | None = None
    states_explored: int = 0

    @property
    def solvable(self) -> bool:
        return self.status is Status.SOLVABLE

    @property
    def unsolvable(self) -> bool:
        return self.status is Status.UNSOLVABLE


class SolutionStats(NamedTuple):
    sources: frozenset
    merge_number: int
    greedy: bool


def replay(t: Tree, c: PebblingFn, d: PebblingFn, moves: Sequence, attribute: bool = True) -> Solution:
    """Execute ``moves`` from ``c`` and check the result dominates ``d``.

    Pebbles are consumed last-in first-out at every vertex, so pebbles passing
    through a vertex are forwarded before its own pebbles are touched.
    Raises ValueError on a non-edge, an overdrawn vertex or unmet demand.
    """
    moves = tuple(Move(int(u), int(v)) for u, v in moves)
    adj = t.adjacency
    # per-vertex pile: arrived tokens (mask, origins) plus untouched originals
    arrived: list[list[tuple[int, Counter]]] = [[] for _ in range(t.n)]
    original = list(c.counts)

    def take(v):
        if arrived[v]:
            return arrived[v].pop()
        if original[v] <= 0:
            raise ValueError(f"vertex {v} has no pebble left")
        original[v] -= 1
        return 0, Counter({v: 1})

    for i, (u, v) in enumerate(moves):
        if v not in adj[u]:
            raise ValueError(f"move {u}->{v} is not along an edge")
        m1, o1 = take(u)
        m2, o2 = take(u)
        arrived[v].append((m1 | m2 | (1 << i), o1 + o2))
    used = Counter()
    owner = [-1] * len(moves)
    for v, need in enumerate(d.counts):
        for _ in range(need):
            try:
                mask, origin = take(v)
            except ValueError:
                raise ValueError(f"demand at vertex {v} is not met") from None
            used += origin
            i = 0
            while mask:
                if mask & 1:
                    owner[i] = v
                mask >>= 1
                i += 1
    return Solution(t, c, d, moves, PebblingFn.from_dict(t.n, used),
                    tuple(owner) if attribute else None)


def greedy_collect(t: Tree, c: PebblingFn, r: int) -> int:
    """Most pebbles that can be gathered on ``r`` (leaf-to-root halving)."""
    rt = t.rooted(r)
    avail = list(c.counts)
    parent = rt.parent
    for x in reversed(rt.order[1:]):
        avail[parent[x]] += avail[x] >> 1
    return avail[r]


def _greedy_moves(adj, order, parent, c, r, need):
    """Moves that bring ``need`` pebbles to ``r`` greedily; None if too few."""
    avail = list(c)
    for x in reversed(order[1:]):
        avail[parent[x]] += avail[x] >> 1
    if avail[r] < need:
        return None
    moves: list[Move] = []

    def supply(v, q):
        # bring q pebbles onto v, children first
        rest = q - c[v]
        for u in adj[v]:
            if rest <= 0:
                break
            if u == parent[v]:
                continue
            k = min(avail[u] >> 1, rest)
            if k:
                supply(u, 2 * k)
                moves.extend([Move(u, v)] * k)
                rest -= k

    _run_deep(supply, r, need)
    return moves


def _run_deep(fn, *args):
    import sys
    import threading

    limit = sys.getrecursionlimit()
    if limit >= 100000:
        return fn(*args)
    # deep trees need a big stack for the recursive supply walk
    out = {}

    def target():
        sys.setrecursionlimit(max(limit, 200000))
        try:
            out["v"] = fn(*args)
        except BaseException as exc:  # re-raised in the caller's thread
            out["e"] = exc
        finally:
            sys.setrecursionlimit(limit)

    old = threading.stack_size()
    threading.stack_size(512 << 20)
    try:
        th = threading.Thread(target=target)
        th.start()
        th.join()
    finally:
        threading.stack_size(old)
    if "e" in out:
        raise out["e"]
    return out.get("v")


class Solver:
    """Decides solvability of many configurations against one target."""

    def __init__(self, t: Tree, d: PebblingFn, budget: Budget | None = None, prune: bool = True):
        if d.n != t.n:
            raise ValueError("target and tree have different vertex counts")
        self.tree = t
        self.target = d
        self.budget = budget or Budget()
        self.unsolvable: set[tuple[int, ...]] = set()
        # prune=False tries every legal step and skips all shortcuts
        self.prune = prune
        n = t.n
        self._dist = [distances_from(t, v) for v in range(n)] if n <= 64 else None
        self._targets = d.support
        self._rooted = {r: t.rooted(r) for r in self._targets}
        self._up = {r: [(x, rt.parent[x]) for x in reversed(rt.order[1:])] for r, rt in self._rooted.items()}
        self._parent = {r: [-1 if p is None else p for p in rt.parent] for r, rt in self._rooted.items()}
        self._single = prune and len(self._targets) == 1

        diam = t.diameter
        check_at = self._targets
        self._weights = []
        for u in check_at:
            du = self._dist[u] if self._dist else distances_from(t, u)
            w = [1 << (diam - du[v]) for v in range(n)]
            need = sum(w[v] * d.counts[v] for v in self._targets)
            self._weights.append((w, need))

        # targets on the far side of each directed edge (x, y)
        self._side: dict[tuple[int, int], tuple[int, ...]] = {}
        rt = t.rooted(0)
        below: list[set[int]] = [set() for _ in range(n)]
        for x in reversed(rt.order):
            if d.counts[x]:
                below[x].add(x)
            p = rt.parent[x]
            if p is not None:
                below[p] |= below[x]
        all_t = set(self._targets)
        for x in range(1, n) if n > 1 else ():
            p = rt.parent[x]
            self._side[(p, x)] = tuple(sorted(below[x]))
            self._side[(x, p)] = tuple(sorted(all_t - below[x]))
        self._bytes_per_state = 72 + 8 * n
        hull = convex_hull(t, d) if d.size else None
        self._hang = []
        for z in hull.vertices if hull else ():
            members = set(hull.hanging[z])
            if len(members) == 1:
                continue
            order, parent = [z], {z: None}
            for x in order:
                for y in t.adjacency[x]:
                    if y in members and y not in parent:
                        parent[y] = x
                        order.append(y)
            self._hang.append([(x, parent[x]) for x in reversed(order[1:])])

    # -- helpers ----------------------------------------------------------

    def _collect(self, state, r):
        avail = list(state)
        dem = self.target.counts
        for v in self._targets:
            if v != r:
                avail[v] -= dem[v]
        for x, p in self._up[r]:
            if avail[x] > 1:
                avail[p] += avail[x] >> 1
        return avail[r]

    def _reserved(self, state, r):
        dem = self.target.counts
        c = list(state)
        for v in self._targets:
            if v != r:
                c[v] -= dem[v]
        return c

    def _dead(self, state, unmet):
        dem = self.target.counts
        for r in unmet:
            if self._collect(state, r) < dem[r]:
                return True
        for w, need in self._weights:
            if sum(a * b for a, b in zip(w, state)) < need:
                return True
        return False

    def _moves(self, state, unmet):
        adj = self.tree.adjacency
        unmet_set = set(unmet)
        dist = self._dist
        out = []
        for x, cx in enumerate(state):
            if cx < 2:
                continue
            for y in adj[x]:
                side = [r for r in self._side[(x, y)] if r in unmet_set]
                if not side:
                    if self.prune:
                        continue
                    side = unmet
                key = min(dist[y][r] for r in side) if dist else 0
                out.append((key, x, y))
        out.sort()
        return [(x, y) for _, x, y in out]

    def _finish(self, c, moves, witness, explored):
        if not witness:
            return Verdict(Status.SOLVABLE, None, explored)
        if moves is None or len(moves) > self.budget.max_moves:
            return Verdict(Status.SOLVABLE, None, explored)
        return Verdict(Status.SOLVABLE, replay(self.tree, c, self.target, moves), explored)

    def _collapse(self, state, witness):
        """Push every pebble in a hanging subtree as far toward the hull as it goes.

        Pebbles off the hull can only help by reaching their attachment
        vertex, and greedy collection delivers the most, so this is exact.
        """
        c = list(state)
        moves: list[Move] | None = [] if witness else None
        cap = self.budget.max_moves
        for ups in self._hang:
            for x, p in ups:
                k = c[x] >> 1
                if k:
                    c[x] -= 2 * k
                    c[p] += k
                    if moves is not None:
                        if len(moves) + k > cap:
                            moves = None
                        else:
                            moves.extend([Move(x, p)] * k)
        return tuple(c), moves

    # -- search -----------------------------------------------------------

    def check(self, c, witness: bool = True) -> Verdict:
        """Verdict for ``c`` (a PebblingFn or a plain count sequence)."""
        t, d = self.tree, self.target
        start = tuple(c.counts) if isinstance(c, PebblingFn) else tuple(c)
        if len(start) != t.n:
            raise ValueError("configuration and tree have different vertex counts")
        if witness and not isinstance(c, PebblingFn):
            c = PebblingFn(start)
        dem = d.counts
        if all(a >= b for a, b in zip(start, dem)):
            return self._finish(c, [], witness, 0)
        if self._single:
            r = self._targets[0]
            if self._collect(start, r) < dem[r]:
                return Verdict(Status.UNSOLVABLE, None, 1)
            if not witness:
                return Verdict(Status.SOLVABLE, None, 1)
            rt = self._rooted[r]
            moves = _greedy_moves(t.adjacency, rt.order, self._parent[r], start, r, dem[r])
            return self._finish(c, moves, witness, 1)

        prefix: list[Move] | None = []
        if self.prune and self._hang:
            start, prefix = self._collapse(start, witness)

        explored = 0
        memo = self.unsolvable
        budget = self.budget
        path: list[tuple[int, int]] = []
        stack: list[list] = []

        def enter(state):
            """Returns 'done', 'fail' or a frame to push."""
            nonlocal explored
            explored += 1
            if state in memo:
                return "fail"
            unmet = [r for r in self._targets if state[r] < dem[r]]
            if not unmet:
                return ("done", [])
            if not self.prune:
                return [state, self._moves(state, unmet), 0]
            if self._dead(state, unmet):
                memo.add(state)
                return "fail"
            if len(unmet) == 1:
                # every other target is met; greedy collection is exact here
                r = unmet[0]
                if not witness:
                    return ("done", [])
                tail = _greedy_moves(t.adjacency, self._rooted[r].order, self._parent[r],
                                     self._reserved(state, r), r, dem[r])
                return ("done", tail)
            return [state, self._moves(state, unmet), 0]

        res = enter(start)
        if res == "fail":
            return Verdict(Status.UNSOLVABLE, None, explored)
        if isinstance(res, tuple):
            return self._finish(c, _join(prefix, res[1]), witness, explored)
        stack.append(res)
        while stack:
            if explored > budget.max_states or len(memo) * self._bytes_per_state > budget.max_memo_bytes:
                return Verdict(Status.BUDGET_EXCEEDED, None, explored)
            frame = stack[-1]
            state, options, i = frame
            if i >= len(options):
                memo.add(state)
                stack.pop()
                if path:
                    path.pop()
                continue
            frame[2] = i + 1
            x, y = options[i]
            nxt = list(state)
            nxt[x] -= 2
            nxt[y] += 1
            nxt = tuple(nxt)
            res = enter(nxt)
            if res == "fail":
                continue
            path.append((x, y))
            if isinstance(res, tuple):
                return self._finish(c, _join(prefix, path, res[1]), witness, explored)
            stack.append(res)
        return Verdict(Status.UNSOLVABLE, None, explored)


def _join(*parts):
    if any(p is None for p in parts):
        return None
    out = []
    for p in parts:
        out.extend(p)
    return out


def is_solvable(t: Tree, c: PebblingFn, d: PebblingFn, budget: Budget | None = None,
                witness: bool = True, prune: bool = True) -> Verdict:
    return Solver(t, d, budget, prune=prune).check(c, witness=witness)


def is_maximal_unsolvable(t: Tree, c: PebblingFn, d: PebblingFn, budget: Budget | None = None,
                          solver: Solver | None = None) -> bool:
    """True iff ``c`` is D-unsolvable and c + v is D-solvable for every v."""
    s = solver or Solver(t, d, budget)

    def verdict(cfg):
        v = s.check(cfg, witness=False)
        if v.status is Status.BUDGET_EXCEEDED:
            raise BudgetExceeded(v.states_explored)
        return v.solvable

    if verdict(c):
        return False
    return all(verdict(c.plus(v)) for v in range(t.n))


def minimalize(t: Tree, c: PebblingFn, d: PebblingFn, s: Solution) -> Solution:
    """Drop moves until none can be removed; the result has an acyclic digraph.

    Works on the move multiset: opposite arcs u->v, v->u cancel (each end
    gains a pebble), then single arcs are removed while the end balance
    c(v) + in(v) - 2 out(v) >= d(v) still holds. An acyclic multiset with
    nonnegative balances is executed in topological order.
    """
    arcs = Counter(Move(u, v) for u, v in s.moves)
    for a in list(arcs):
        back = Move(a.dst, a.src)
        k = min(arcs[a], arcs.get(back, 0))
        if k:
            arcs[a] -= k
            arcs[back] -= k
    arcs = Counter({a: k for a, k in arcs.items() if k > 0})

    def balance(v):
        return (c[v] + sum(k for a, k in arcs.items() if a.dst == v)
                - 2 * sum(k for a, k in arcs.items() if a.src == v) - d[v])

    changed = True
    while changed:
        changed = False
        for a in sorted(arcs):
            while arcs[a] and balance(a.dst) >= 1:
                arcs[a] -= 1
                changed = True
            if not arcs[a]:
                del arcs[a]

    # topological order of the arc digraph, smallest id first
    indeg = Counter()
    out: dict[int, list[Move]] = {}
    for a in arcs:
        indeg[a.dst] += 1
        out.setdefault(a.src, []).append(a)
    verts = {a.src for a in arcs} | {a.dst for a in arcs}
    heap = [v for v in verts if indeg[v] == 0]
    heapq.heapify(heap)
    moves: list[Move] = []
    while heap:
        v = heapq.heappop(heap)
        for a in sorted(out.get(v, ())):
            moves.extend([a] * arcs[a])
            indeg[a.dst] -= 1
            if indeg[a.dst] == 0:
                heapq.heappush(heap, a.dst)
    return replay(t, c, d, moves)


def solution_stats(s: Solution) -> SolutionStats:
    """Sources, merge number and whether each per-target part is greedy."""
    if s.attribution is None:
        raise AttributionMissing("solution carries no per-target attribution")
    greedy = True
    dist_cache: dict[int, list[int]] = {}
    for (u, v), r in zip(s.moves, s.attribution):
        if r < 0:
            continue
        if r not in dist_cache:
            dist_cache[r] = distances_from(s.tree, r)
        if not dist_cache[r][v] < dist_cache[r][u]:
            greedy = False
            break
    return SolutionStats(s.sources, s.merge_number, greedy)


def solution_from_json(t: Tree, c: PebblingFn, d: PebblingFn, text: str) -> Solution:
    """Load a move list; the result has no attribution."""
    moves = [(t.vertex(m["from"]), t.vertex(m["to"])) for m in json.loads(text)]
    return replay(t, c, d, moves, attribute=False)
