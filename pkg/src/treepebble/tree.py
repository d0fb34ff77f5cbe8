"""Trees, pebbling functions, distances and the convex hull of a target.

Vertices are dense integer ids ``0..n-1``. A tree may carry a name table so
that user-facing input and output can use labels such as ``v1`` or ``u``;
every algorithm works on ids.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    CycleDetected,
    Disconnected,
    DuplicateEdge,
    EmptyTarget,
    InvalidVertex,
    ParseError,
    SelfLoop,
)


class Tree:
    """Immutable tree on vertices ``0..n-1``.

    Build instances with :func:`build_tree` (validating) rather than calling
    the constructor directly.
    """

    def __init__(self, n: int, adjacency: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        self.n = n
        self.adjacency = tuple(tuple(sorted(a)) for a in adjacency)
        self.names = tuple(names) if names is not None else None
        self._index = {s: i for i, s in enumerate(self.names)} if self.names else None

    def __repr__(self):
        return f"Tree(n={self.n}, edges={list(self.edges)})"

    def __eq__(self, other):
        return (
            isinstance(other, Tree)
            and self.n == other.n
            and self.adjacency == other.adjacency
            and self.names == other.names
        )

    def __hash__(self):
        return hash((self.n, self.adjacency, self.names))

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        if self.n == 1:
            return (0,)
        return tuple(v for v in range(self.n) if len(self.adjacency[v]) == 1)

    def is_leaf(self, v: int) -> bool:
        return self.n == 1 or len(self.adjacency[v]) == 1

    @cached_property
    def diameter(self) -> int:
        far = max(range(self.n), key=distances_from(self, 0).__getitem__)
        return max(distances_from(self, far))

    def is_path(self) -> bool:
        return all(len(a) <= 2 for a in self.adjacency)

    def path_order(self) -> list[int]:
        """Vertices of a path tree listed from its smaller-id endpoint."""
        if not self.is_path():
            raise ValueError("tree is not a path")
        if self.n == 1:
            return [0]
        start = min(self.leaves)
        order, prev = [start], -1
        while len(order) < self.n:
            nxt = next(w for w in self.adjacency[order[-1]] if w != prev)
            prev = order[-1]
            order.append(nxt)
        return order

    # names ---------------------------------------------------------------

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def vertex(self, label) -> int:
        """Resolve a name or an integer id to an id."""
        if isinstance(label, int):
            if 0 <= label < self.n:
                return label
            raise InvalidVertex(f"vertex id {label} out of range 0..{self.n - 1}")
        label = str(label)
        if self._index is not None and label in self._index:
            return self._index[label]
        if label.isdigit() and int(label) < self.n and self._index is None:
            return int(label)
        raise InvalidVertex(f"unknown vertex {label!r}")

    def rooted(self, root: int) -> "RootedTree":
        return RootedTree.from_tree(self, root)


@dataclass(frozen=True)
class RootedTree:
    base: Tree
    root: int
    parent: tuple[int | None, ...]
    depth: tuple[int, ...]
    order: tuple[int, ...]

    @classmethod
    def from_tree(cls, t: Tree, root: int) -> "RootedTree":
        root = t.vertex(root)
        parent: list[int | None] = [None] * t.n
        depth = [0] * t.n
        order = [root]
        seen = [False] * t.n
        seen[root] = True
        adj = t.adjacency
        for x in order:
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    order.append(y)
        return cls(t, root, tuple(parent), tuple(depth), tuple(order))

    def children(self, v: int) -> list[int]:
        p = self.parent[v]
        return [w for w in self.base.adjacency[v] if w != p]


def build_tree(edges: Iterable[tuple], n: int | None = None, names: Sequence[str] | None = None) -> Tree:
    """Validate an edge list and return a :class:`Tree`.

    Raises SelfLoop, DuplicateEdge, CycleDetected or Disconnected naming the
    first offending edge or an unreachable component.
    """
    edges = [(int(u), int(v)) for u, v in edges]
    if n is None:
        n = 1 + max((max(e) for e in edges), default=0)
    if n < 1:
        raise ValueError("a tree needs at least one vertex")
    if names is not None and len(names) != n:
        raise ValueError(f"{len(names)} names given for {n} vertices")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seen = set()
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidVertex(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"duplicate edge ({u}, {v})")
        seen.add(key)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise CycleDetected(f"edge ({u}, {v}) closes a cycle")
        parent[ru] = rv
        adjacency[u].append(v)
        adjacency[v].append(u)
    roots = {find(x) for x in range(n)}
    if len(roots) > 1:
        r0 = find(0)
        stray = sorted(x for x in range(n) if find(x) != r0)
        raise Disconnected(f"{len(roots)} components; vertices {stray[:10]} unreachable from 0")
    return Tree(n, adjacency, names)


def path_tree(n: int, names: Sequence[str] | None = None) -> Tree:
    return build_tree([(i, i + 1) for i in range(n - 1)], n, names)


def star_tree(leaves: int) -> Tree:
    """K_{1,leaves} with centre 0."""
    return build_tree([(0, i) for i in range(1, leaves + 1)], leaves + 1)


# Edge-list text format ---------------------------------------------------

def parse_edge_list(text: str) -> Tree:
    """Parse the edge-list format.

    Optional first line ``n <count>``; then one edge ``u v`` per line, or a
    lone label to declare an isolated vertex (only useful for n = 1). ``#``
    starts a comment. If every label is a nonnegative integer they are ids,
    otherwise they are names numbered in order of first appearance.
    """
    n = None
    rows: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "n" and n is None and not rows:
            if len(tok) != 2 or not tok[1].isdigit():
                raise ParseError(f"line {lineno}: expected 'n <count>'")
            n = int(tok[1])
            continue
        if len(tok) > 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {line!r}")
        rows.append(tok)
    labels = [x for row in rows for x in row]
    if all(x.isdigit() for x in labels):
        edges = [(int(r[0]), int(r[1])) for r in rows if len(r) == 2]
        if n is None:
            n = 1 + max((int(x) for x in labels), default=0)
        try:
            return build_tree(edges, n)
        except InvalidVertex as exc:
            raise ParseError(str(exc)) from exc
    order: dict[str, int] = {}
    for x in labels:
        order.setdefault(x, len(order))
    if n is not None and n != len(order):
        raise ParseError(f"header says n={n} but {len(order)} vertex names appear")
    edges = [(order[r[0]], order[r[1]]) for r in rows if len(r) == 2]
    return build_tree(edges, len(order), list(order))


def format_edge_list(t: Tree) -> str:
    lines = [f"n {t.n}"]
    if t.n == 1:
        if t.names:
            lines.append(t.names[0])
    for u, v in t.edges:
        lines.append(f"{t.name(u)} {t.name(v)}")
    return "\n".join(lines) + "\n"


def read_tree(path) -> Tree:
    with open(path) as fh:
        return parse_edge_list(fh.read())


# Distances ---------------------------------------------------------------

def distances_from(t: Tree, v: int) -> list[int]:
    """BFS distances from ``v`` to every vertex."""
    dist = [-1] * t.n
    dist[v] = 0
    queue = deque([v])
    adj = t.adjacency
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for y in adj[x]:
            if dist[y] < 0:
                dist[y] = dx
                queue.append(y)
    return dist


# Pebbling functions ------------------------------------------------------

class PebblingFn:
    """A map V -> N used for configurations, targets and witnesses.

    Value semantics: arithmetic returns new objects. Counts are Python ints,
    so sizes such as ``t * 2**diam`` never overflow.
    """

    __slots__ = ("counts", "size", "_support")

    def __init__(self, counts: Iterable[int]):
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise ValueError("pebbling functions are nonnegative")
        self.counts = counts
        self.size = sum(counts)
        self._support = None

    @classmethod
    def zeros(cls, n: int) -> "PebblingFn":
        return cls((0,) * n)

    @classmethod
    def from_dict(cls, n: int, mapping: Mapping[int, int]) -> "PebblingFn":
        counts = [0] * n
        for v, c in mapping.items():
            if not 0 <= v < n:
                raise InvalidVertex(f"vertex {v} out of range 0..{n - 1}")
            counts[v] += c
        return cls(counts)

    @classmethod
    def stack(cls, n: int, v: int, k: int) -> "PebblingFn":
        return cls.from_dict(n, {v: k})

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def support(self) -> tuple[int, ...]:
        if self._support is None:
            self._support = tuple(v for v, c in enumerate(self.counts) if c)
        return self._support

    @property
    def support_size(self) -> int:
        return len(self.support)

    def __getitem__(self, v: int) -> int:
        return self.counts[v]

    def __len__(self):
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __eq__(self, other):
        return isinstance(other, PebblingFn) and self.counts == other.counts

    def __hash__(self):
        return hash(self.counts)

    def __repr__(self):
        body = ", ".join(f"{v}: {c}" for v, c in enumerate(self.counts) if c)
        return f"PebblingFn({{{body}}}, n={self.n})"

    def __add__(self, other: "PebblingFn") -> "PebblingFn":
        self._check_same_n(other)
        return PebblingFn(a + b for a, b in zip(self.counts, other.counts))

    def __sub__(self, other: "PebblingFn") -> "PebblingFn":
        self._check_same_n(other)
        if not other <= self:
            raise ValueError("can only subtract a sub-function")
        return PebblingFn(a - b for a, b in zip(self.counts, other.counts))

    def __le__(self, other: "PebblingFn") -> bool:
        self._check_same_n(other)
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def __ge__(self, other: "PebblingFn") -> bool:
        return other <= self

    def _check_same_n(self, other):
        if not isinstance(other, PebblingFn) or other.n != self.n:
            raise ValueError("pebbling functions live on different vertex sets")

    def plus(self, v: int, k: int = 1) -> "PebblingFn":
        """``F + v^k``."""
        c = list(self.counts)
        c[v] += k
        return PebblingFn(c)

    def restrict(self, vertices: Iterable[int]) -> "PebblingFn":
        c = [0] * self.n
        for v in vertices:
            c[v] = self.counts[v]
        return PebblingFn(c)

    @property
    def min(self) -> int:
        return min(self.counts)

    def is_positive(self) -> bool:
        return self.min > 0

    def is_stacked(self) -> bool:
        return len(self.support) == 1

    def big_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.counts) if c >= 2)

    def to_dict(self) -> dict[int, int]:
        return {v: c for v, c in enumerate(self.counts) if c}

    def multiset(self) -> list[int]:
        """Vertices listed with multiplicity, in id order."""
        return [v for v, c in enumerate(self.counts) for _ in range(c)]


def parse_pebbling_spec(t: Tree, spec: str) -> PebblingFn:
    """Parse ``name:count`` lists (``v3,v7:2``) or a JSON object."""
    import json

    spec = spec.strip()
    items: list[tuple[str, int]] = []
    if spec.startswith("{"):
        try:
            obj = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON pebbling spec: {exc}") from exc
        for k, c in obj.items():
            items.append((k, int(c)))
    elif spec:
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            label, _, count = part.partition(":")
            try:
                items.append((label.strip(), int(count) if count else 1))
            except ValueError as exc:
                raise ParseError(f"bad count in {part!r}") from exc
    counts = [0] * t.n
    for label, c in items:
        if c < 0:
            raise ParseError(f"negative count for {label!r}")
        try:
            counts[t.vertex(label)] += c
        except InvalidVertex as exc:
            raise ParseError(str(exc)) from exc
    return PebblingFn(counts)


def format_pebbling(t: Tree, f: PebblingFn) -> str:
    return ",".join(f"{t.name(v)}:{c}" for v, c in f.to_dict().items())


# Convex hull of a target -------------------------------------------------

@dataclass(frozen=True)
class HullDecomposition:
    """The subtree T(D) spanned by a target plus the subtrees hanging off it.

    ``attachment[v]`` is the hull vertex z whose hanging subtree B_z contains
    v (hull vertices are attached to themselves).
    """

    tree: Tree
    vertices: tuple[int, ...]
    in_hull: tuple[bool, ...]
    leaves: tuple[int, ...]
    attachment: tuple[int, ...]
    hanging: Mapping[int, tuple[int, ...]] = field(repr=False)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        h = self.in_hull
        return tuple((u, v) for u, v in self.tree.edges if h[u] and h[v])

    def hanging_tree(self, z: int) -> tuple[Tree, list[int]]:
        """B_z as a standalone tree; local vertex 0 is z.

        Returns the tree and the local-to-global vertex map.
        """
        verts = self.hanging[z]
        local = {g: i for i, g in enumerate(verts)}
        edges = [(local[u], local[v]) for u in verts for v in self.tree.adjacency[u]
                 if v in local and local[u] < local[v]]
        names = [self.tree.name(g) for g in verts] if self.tree.names else None
        return build_tree(edges, len(verts), names), list(verts)


def convex_hull(t: Tree, d: PebblingFn) -> HullDecomposition:
    """Prune leaves outside supp(d) until none remain."""
    if d.size == 0:
        raise EmptyTarget("the convex hull of an empty target is undefined")
    n = t.n
    adj = t.adjacency
    deg = [len(a) for a in adj]
    alive = [True] * n
    dem = d.counts
    queue = deque(v for v in range(n) if deg[v] == 1 and not dem[v])
    while queue:
        v = queue.popleft()
        if not alive[v] or deg[v] > 1:
            continue
        alive[v] = False
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1 and not dem[w]:
                    queue.append(w)
    vertices = tuple(v for v in range(n) if alive[v])
    if len(vertices) == 1:
        leaves = vertices
    else:
        leaves = tuple(v for v in vertices if deg[v] == 1)

    attachment = [-1] * n
    hanging: dict[int, list[int]] = {}
    for z in vertices:
        attachment[z] = z
        members = [z]
        queue = deque([z])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if attachment[y] < 0 and not alive[y]:
                    attachment[y] = z
                    members.append(y)
                    queue.append(y)
        hanging[z] = tuple(members)
    return HullDecomposition(t, vertices, tuple(alive), leaves, tuple(attachment), hanging)
