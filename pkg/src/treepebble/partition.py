"""Maximum path partitions, Chung configurations and single-target numbers.

For a rooted tree the greedy longest-path-first partition coincides with the
long-path decomposition: every vertex continues its path into the child of
greatest height. Ties go to the child whose subtree holds the smallest-id
deepest leaf, which is the same as preferring the smallest far endpoint
among equal-length greedy candidates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegeneratePartition
from .tree import PebblingFn, RootedTree, Tree


@dataclass(frozen=True)
class PathPartition:
    root: int
    n: int
    paths: tuple[tuple[int, ...], ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(p) - 1 for p in self.paths)

    @property
    def far_leaves(self) -> tuple[int, ...]:
        return tuple(p[-1] for p in self.paths)

    def __len__(self):
        return len(self.paths)

    def edge_sets(self) -> list[set[tuple[int, int]]]:
        return [{(min(a, b), max(a, b)) for a, b in zip(p, p[1:])} for p in self.paths]


@dataclass(frozen=True)
class Candidate:
    """One superstack candidate: a stack one shy of alpha at ``leaf``.

    ``hull_vertex`` is the vertex z of T(D) whose hanging subtree holds the
    leaf, ``height`` its distance from z, ``alpha`` the value alpha(z, D).
    """

    hull_vertex: int
    leaf: int
    height: int
    alpha: int
    size: int


@dataclass(frozen=True)
class PiResult:
    pi: int
    witness: PebblingFn
    superstack_leaf: int
    candidates: tuple[Candidate, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class ChungConfiguration:
    config: PebblingFn
    partition: PathPartition
    t: int


def _heights(adj, order, parent):
    """Height, smallest-id deepest leaf and heavy child for every vertex."""
    n = len(adj)
    height = [0] * n
    far = list(range(n))
    heavy = [-1] * n
    for x in reversed(order):
        best = -1
        for c in adj[x]:
            if c == parent[x]:
                continue
            if best < 0 or height[c] > height[best] or (height[c] == height[best] and far[c] < far[best]):
                best = c
        if best >= 0:
            heavy[x] = best
            height[x] = height[best] + 1
            far[x] = far[best]
    return height, far, heavy


def max_path_partition(rt: RootedTree) -> PathPartition:
    """Greedy maximum path partition of ``rt``, paths in greedy order.

    Each path is listed from its endpoint in the earlier paths (the root for
    P_1) to its far leaf.
    """
    adj = rt.base.adjacency
    parent = [-1 if p is None else p for p in rt.parent]
    height, far, heavy = _heights(adj, rt.order, parent)

    def chain(c):
        seq = [c]
        while heavy[seq[-1]] >= 0:
            seq.append(heavy[seq[-1]])
        return seq

    paths = []
    for x in rt.order:
        for c in adj[x]:
            if c == parent[x] or (x != rt.root and c == heavy[x]):
                continue
            paths.append(tuple([x] + chain(c)))
    paths.sort(key=lambda p: (-len(p), p[-1], p))
    return PathPartition(rt.root, rt.base.n, tuple(paths))


def chung_configuration(p: PathPartition, t: int) -> ChungConfiguration:
    if t < 1:
        raise ValueError("t must be positive")
    if not p.paths:
        raise DegeneratePartition(
            "single-vertex tree: use t-1 pebbles on the root as the Chung configuration")
    counts = [0] * p.n
    for i, (w, l) in enumerate(zip(p.far_leaves, p.lengths)):
        counts[w] = (t if i == 0 else 1) * (1 << l) - 1
    return ChungConfiguration(PebblingFn(counts), p, t)


def pi_single_target(t: Tree, r: int, t_mult: int = 1) -> PiResult:
    """pi_t(T, r) = |C_hat_{r,t}| + 1 with the Chung configuration as witness."""
    r = t.vertex(r)
    if t_mult < 1:
        raise ValueError("t must be positive")
    p = max_path_partition(t.rooted(r))
    if not p.paths:
        witness = PebblingFn.stack(t.n, r, t_mult - 1)
        return PiResult(t_mult, witness, r, (Candidate(r, r, 0, t_mult, t_mult - 1),))
    chung = chung_configuration(p, t_mult).config
    w1 = p.far_leaves[0]
    cand = Candidate(r, w1, p.lengths[0], t_mult, chung.size)
    return PiResult(chung.size + 1, chung, w1, (cand,))


def chung_sizes(t: Tree, t_mult: int = 1) -> list[int]:
    """|C_hat_{r,t}| for every root r, by rerooting in O(n) big-int steps.

    Uses sum_i 2^{l_i} = sum over edges p->x directed away from r of
    2^{h(x|p)} (or 2 when x is a leaf), where h(x|p) is the height of the
    component of T - p containing x measured from x.
    """
    n = t.n
    if n == 1:
        return [t_mult - 1]
    adj = t.adjacency
    rt = t.rooted(0)
    order = rt.order
    parent = [-1 if p is None else p for p in rt.parent]
    # hd[x] = h(x | parent(x))
    hd = [0] * n
    for x in reversed(order):
        p = parent[x]
        if p >= 0 and hd[x] + 1 > hd[p]:
            hd[p] = hd[x] + 1
    # hu[x] = h(parent(x) | x)
    hu = [0] * n
    for p in order:
        best1 = best2 = -1
        for c in adj[p]:
            if c == parent[p]:
                continue
            v = hd[c] + 1
            if v > best1:
                best1, best2 = v, best1
            elif v > best2:
                best2 = v
        base = hu[p] + 1 if parent[p] >= 0 else 0
        for c in adj[p]:
            if c == parent[p]:
                continue
            sib = best2 if hd[c] + 1 == best1 else best1
            hu[c] = max(base, sib, 0)

    deg = [len(a) for a in adj]

    def g(x, h):
        return (1 << h) if deg[x] >= 2 else 2

    total = [0] * n
    total[0] = sum(g(x, hd[x]) for x in order[1:])
    for c in order[1:]:
        p = parent[c]
        total[c] = total[p] - g(c, hd[c]) + g(p, hu[c])
    leaves = sum(1 for x in range(n) if deg[x] == 1)
    out = []
    for r in range(n):
        ecc = max([hd[c] + 1 for c in adj[r] if c != parent[r]] + ([hu[r] + 1] if parent[r] >= 0 else []))
        paths = leaves - (1 if deg[r] == 1 else 0)
        dead = total[r] - paths
        out.append((t_mult - 1) * (1 << ecc) + dead)
    return out


def pi_t_fold(t: Tree, t_mult: int = 1) -> tuple[int, int]:
    """pi_t(T) and the smallest root attaining it."""
    if t_mult < 1:
        raise ValueError("t must be positive")
    sizes = chung_sizes(t, t_mult)
    best = max(sizes)
    return best + 1, sizes.index(best)


def dead_weight(b: Tree, z: int) -> int:
    """Largest configuration on ``b`` that cannot move one pebble to ``z``."""
    p = max_path_partition(b.rooted(z))
    return sum((1 << l) - 1 for l in p.lengths)
