import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treepebble import (
    CycleDetected,
    Disconnected,
    DuplicateEdge,
    EmptyTarget,
    InvalidVertex,
    ParseError,
    PebblingFn,
    SelfLoop,
    build_tree,
    convex_hull,
    distances_from,
    format_edge_list,
    parse_edge_list,
    parse_pebbling_spec,
    path_tree,
    star_tree,
)

from conftest import tree_and_target, trees


def test_build_path():
    t = build_tree([(0, 1), (1, 2)], n=3)
    assert t.is_path and t.leaves == (0, 2) and t.diameter == 2


@pytest.mark.parametrize("edges,n,exc", [
    ([(0, 1), (1, 2), (2, 0)], 3, CycleDetected),
    ([(0, 1), (2, 3)], 4, Disconnected),
    ([(0, 1), (0, 1)], 2, DuplicateEdge),
    ([(0, 0)], 1, SelfLoop),
    ([(0, 5)], 2, InvalidVertex),
    ([], 2, Disconnected),
])
def test_build_errors(edges, n, exc):
    with pytest.raises(exc):
        build_tree(edges, n=n)


def test_single_vertex():
    t = build_tree([], n=1)
    assert t.leaves == (0,) and t.diameter == 0
    assert distances_from(t, 0) == [0]


def test_distances_examples():
    assert distances_from(path_tree(3), 0) == [0, 1, 2]
    assert distances_from(star_tree(3), 0) == [0, 1, 1, 1]


@given(trees())
def test_distance_properties(t):
    for v in range(t.n):
        dist = distances_from(t, v)
        assert dist.count(0) == 1 and dist[v] == 0
        for a, b in t.edges:
            assert abs(dist[a] - dist[b]) == 1


@given(trees())
def test_tree_invariants(t):
    assert len(t.edges) == t.n - 1
    assert all(t.neighbors(v) == tuple(sorted(t.neighbors(v))) for v in range(t.n))
    if t.n > 1:
        assert set(t.leaves) == {v for v in range(t.n) if t.degree(v) == 1}
    rt = t.rooted(t.n - 1)
    assert rt.parent[rt.root] is None
    for v in rt.order[1:]:
        assert v in t.neighbors(rt.parent[v]) and rt.depth[v] == rt.depth[rt.parent[v]] + 1


def test_parse_names_and_header():
    t = parse_edge_list("# a pendant\nn 3\na b\nb c  # trailing\n")
    assert t.n == 3 and t.names == ("a", "b", "c")
    assert t.vertex("c") == 2
    one = parse_edge_list("n 1\nr\n")
    assert one.n == 1 and one.name(0) == "r"


@pytest.mark.parametrize("text", ["n x\n0 1\n", "0 1 2\n", "n 4\na b\n", "0 1\n1 2\n2 0\n"])
def test_parse_errors(text):
    with pytest.raises((ParseError, CycleDetected)):
        parse_edge_list(text)


@given(trees())
def test_edge_list_round_trip(t):
    assert parse_edge_list(format_edge_list(t)) == t


def test_pebbling_spec():
    t = path_tree(7, names=[f"v{i}" for i in range(1, 8)])
    d = parse_pebbling_spec(t, "v1:2,v2,v5:1,v7:3")
    assert d.to_dict() == {0: 2, 1: 1, 4: 1, 6: 3}
    assert parse_pebbling_spec(t, '{"v3": 4}') == PebblingFn.stack(7, 2, 4)
    for bad in ("v9", "v1:x", '{"v1": -1}', "{oops"):
        with pytest.raises(ParseError):
            parse_pebbling_spec(t, bad)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=8), st.data())
def test_pebbling_algebra(counts, data):
    f = PebblingFn(counts)
    n = len(counts)
    g = PebblingFn(data.draw(st.lists(st.integers(0, 5), min_size=n, max_size=n)))
    for h in (f + g, f.plus(data.draw(st.integers(0, n - 1))), (f + g) - g):
        assert h.size == sum(h.counts)
        assert h.support == tuple(v for v in range(n) if h.counts[v])
    assert (f + g) - g == f
    assert f <= f + g
    sub = PebblingFn([c // 2 for c in counts])
    assert (f - sub).size == f.size - sub.size
    if f.size > sub.size:
        with pytest.raises(ValueError):
            sub - f


def test_pebbling_predicates():
    f = PebblingFn([3, 1, 0])
    assert f.big_vertices() == (0,) and not f.is_positive() and not f.is_stacked()
    assert PebblingFn.stack(3, 1, 4).is_stacked() and PebblingFn([1, 1, 2]).is_positive()
    assert f.multiset() == [0, 0, 0, 1]


def test_hull_figure1_is_whole_path(fig1):
    t, _, d = fig1
    h = convex_hull(t, d)
    assert h.vertices == tuple(range(7))
    assert all(h.hanging[z] == (z,) for z in h.vertices)


def test_hull_single_vertex():
    t = star_tree(3)
    h = convex_hull(t, PebblingFn.stack(4, 2, 2))
    assert h.vertices == (2,) and h.leaves == (2,)
    assert sorted(h.hanging[2]) == [0, 1, 2, 3]


def test_hull_pendant(pendant):
    h = convex_hull(pendant, PebblingFn.from_dict(6, {0: 1, 4: 1}))
    assert h.vertices == (0, 1, 2, 3, 4) and h.leaves == (0, 4)
    assert h.hanging[2] == (2, 5)
    assert all(h.hanging[z] == (z,) for z in (0, 1, 3, 4))
    b, glob = h.hanging_tree(2)
    assert b.n == 2 and glob == [2, 5]


def test_hull_empty_target():
    with pytest.raises(EmptyTarget):
        convex_hull(path_tree(3), PebblingFn.zeros(3))


@given(tree_and_target())
def test_hull_invariants(td):
    t, d = td
    h = convex_hull(t, d)
    hull = set(h.vertices)
    assert set(d.support) <= hull
    # connected: hull edges number |hull| - 1
    assert len(h.edges) == len(hull) - 1
    # minimal: every hull leaf carries demand (unless the hull is one vertex)
    if len(hull) > 1:
        assert all(d[v] > 0 for v in h.leaves)
    # hanging subtrees partition V, meeting the hull only at attachments
    seen = []
    for z in h.vertices:
        members = h.hanging[z]
        assert members[0] == z and not (set(members[1:]) & hull)
        seen.extend(members)
    assert sorted(seen) == list(range(t.n))


@given(tree_and_target(), st.randoms(use_true_random=False))
def test_hull_independent_of_edge_order(td, rnd):
    t, d = td
    edges = list(t.edges)
    rnd.shuffle(edges)
    edges = [(v, u) if rnd.random() < 0.5 else (u, v) for u, v in edges]
    t2 = build_tree(edges, n=t.n)
    h1, h2 = convex_hull(t, d), convex_hull(t2, d)
    assert h1.vertices == h2.vertices and h1.hanging == h2.hanging
