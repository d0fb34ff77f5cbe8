"""Target pebbling numbers pi(T, D) with explicit extremal witnesses.

The tree formula works on the convex hull T(D). Every hull vertex z owns the
subtree B_z hanging off it. A superstack candidate places alpha(z, D) * 2^h - 1
pebbles on the deepest leaf of B_z (at height h, or on z itself when B_z is
trivial) and fills every hanging subtree with its dead weight: 2^l - 1 pebbles
on the far leaf of each remaining path of its maximum path partition. All
dead weights together cost DW, and the candidate at z has size

    DW + (alpha(z, D) - 1) * 2^h(z).

pi(T, D) is one more than the largest candidate.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyTarget
from .partition import Candidate, PiResult, pi_t_fold
from .tree import PebblingFn, Tree, distances_from

CANDIDATE_MODES = ("all", "hull_leaves")


def _require_target(d: PebblingFn):
    if d.size == 0:
        raise EmptyTarget("target has size 0; pi(T, 0) is defined as 0")


def alpha(t: Tree, v: int, d: PebblingFn) -> int:
    """Smallest stack on ``v`` that solves ``d``: sum_u d(u) 2^dist(u, v)."""
    _require_target(d)
    dist = distances_from(t, t.vertex(v))
    return sum(c << dist[u] for u, c in enumerate(d.counts) if c)


@dataclass(frozen=True)
class FSequence:
    f: tuple[int, ...]
    indices: tuple[int, ...]
    n: int


def path_pi(n: int, d: PebblingFn) -> tuple[PiResult, FSequence]:
    """pi(P_n, D) = max(f_1, f_t) + 1 on the path 0 - 1 - ... - (n-1).

    f_j puts alpha(v_1, D_j^L) - 1 pebbles on the first endpoint and
    alpha(v_n, D_j^R) - 1 on the last, where D_j^L are the j leftmost target
    units and D_j^R the units from the j-th onward.
    """
    _require_target(d)
    if d.n != n:
        raise ValueError(f"target lives on {d.n} vertices, path has {n}")
    idx = d.multiset()
    t = len(idx)
    last = n - 1
    left = [0] * t
    acc = 0
    for j, i in enumerate(idx):
        acc += 1 << i
        left[j] = acc
    right = [0] * t
    acc = 0
    for j in range(t - 1, -1, -1):
        acc += 1 << (last - idx[j])
        right[j] = acc
    f = tuple(left[j] - 1 + right[j] - 1 for j in range(t))
    seq = FSequence(f, tuple(idx), n)

    i1, it = idx[0], idx[-1]
    from_left = Candidate(i1, 0, i1, left[-1] >> i1, f[-1])
    from_right = Candidate(it, last, last - it, right[0] >> (last - it), f[0])
    if f[-1] >= f[0]:
        counts = {0: left[-1] - 1}
        counts[last] = counts.get(last, 0) + right[-1] - 1
        leaf = 0
    else:
        counts = {last: right[0] - 1}
        counts[0] = counts.get(0, 0) + left[0] - 1
        leaf = last
    witness = PebblingFn.from_dict(n, counts)
    return PiResult(max(f[0], f[-1]) + 1, witness, leaf, (from_left, from_right)), seq


def tree_pi(t: Tree, d: PebblingFn, candidates: str = "all", dead_weight: bool = True) -> PiResult:
    """pi(T, D) in O(n) big-integer steps per call.

    ``candidates="hull_leaves"`` restricts the superstack search to the
    leaves of T(D) as in the original method; it undercounts whenever a
    hanging subtree at an interior hull vertex is deep enough (see the
    README). ``dead_weight=False`` drops the dead-weight completion and exists
    only for fault-injection runs.
    """
    _require_target(d)
    if candidates not in CANDIDATE_MODES:
        raise ValueError(f"candidates must be one of {CANDIDATE_MODES}")
    if d.n != t.n:
        raise ValueError("target and tree have different vertex counts")
    # One BFS from a target vertex; every later pass runs over BFS positions,
    # where parents precede children, so memory access stays sequential.
    adj = t.adjacency
    r0 = d.support[0]
    pos = [-1] * t.n
    pos[r0] = 0
    order = [r0]
    par = [-1]
    i = 0
    while i < len(order):
        for y in adj[order[i]]:
            if pos[y] < 0:
                pos[y] = len(order)
                order.append(y)
                par.append(i)
        i += 1
    m = len(order)
    rng = range(m - 1, 0, -1)

    dem = [0] * m
    for v in d.support:
        dem[pos[v]] = d.counts[v]
    # A vertex is in T(D) iff its subtree (rooted at a target) holds demand.
    below = dem[:]
    for i in rng:
        below[par[i]] += below[i]
    in_hull = [b > 0 for b in below]

    # Heights over non-hull children only, so height[z] is the height of B_z
    # for hull z; ties go to the smaller far-leaf label.
    height = [0] * m
    far = order[:]
    heavy = [-1] * m
    for i in rng:
        if in_hull[i]:
            continue
        p = par[i]
        h = height[i] + 1
        b = heavy[p]
        if b < 0 or h > height[p] or (h == height[p] and far[i] < far[b]):
            heavy[p] = i
            height[p] = h
            far[p] = far[i]

    # Path starts: non-hull vertex hanging from a hull vertex, or non-heavy child.
    starts = [i for i in range(1, m) if not in_hull[i] and (in_hull[par[i]] or heavy[par[i]] != i)]
    dw = sum((2 << height[i]) - 1 for i in starts) if dead_weight else 0

    down = dem
    hull_deg = [0] * m
    for i in rng:
        if in_hull[i]:
            p = par[i]
            down[p] += down[i] << 1
            hull_deg[p] += 1
            hull_deg[i] += 1
    alpha_of = [0] * m
    alpha_of[0] = down[0]
    for i in range(1, m):
        if in_hull[i]:
            alpha_of[i] = 2 * alpha_of[par[i]] - 3 * down[i]

    hull = sorted((order[i], i) for i in range(m) if in_hull[i])
    single = len(hull) == 1
    table = []
    for z, i in hull:
        h = height[i]
        is_leaf = single or hull_deg[i] == 1
        if (candidates == "hull_leaves" or h == 0) and not is_leaf:
            continue
        a = alpha_of[i]
        size = dw + (a - 1) * (1 << h) if dead_weight else a * (1 << h) - 1
        table.append(Candidate(z, far[i] if h else z, h, a, size))
    best = max(table, key=lambda c: (c.size, -c.leaf))

    counts = [0] * t.n
    if dead_weight:
        for i in starts:
            counts[far[i]] = (2 << height[i]) - 1
    counts[best.leaf] = best.alpha * (1 << best.height) - 1
    return PiResult(best.size + 1, PebblingFn(counts), best.leaf, tuple(table))


def strong_target_slack(t: Tree, d: PebblingFn) -> int:
    """pi_{|D|}(T) - s(D) + 1 - pi(T, D); nonnegative on trees."""
    _require_target(d)
    return pi_t_fold(t, d.size)[0] - d.support_size + 1 - tree_pi(t, d).pi


def basic_bounds(t: Tree) -> tuple[int, int]:
    diam = t.diameter
    lower = max(t.n, 1 << diam)
    upper = (t.n - diam) * ((1 << diam) - 1) + 1
    return lower, upper

