"""
Dead weight in hanging subtrees
===============================

Vertices outside the convex hull of the target can still hold pebbles that
never help: a subtree B_z hanging off a hull vertex z absorbs up to its dead
weight without being able to send a single pebble to z.
"""

from treepebble import PebblingFn, brute_pi, build_tree, convex_hull, tree_pi

# v1 - v2 - v3 - v4 - v5 with a pendant u on v3, target one pebble on each end
t = build_tree([(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)], names=["v1", "v2", "v3", "v4", "v5", "u"])
d = PebblingFn.from_dict(6, {0: 1, 4: 1})

hull = convex_hull(t, d)
print("hull:", [t.name(v) for v in hull.vertices])

res = tree_pi(t, d)
print("pi =", res.pi, "witness", {t.name(v): k for v, k in res.witness.to_dict().items()})

# without the pebble on u the superstack alone gives only 17
print("without dead weight:", tree_pi(t, d, dead_weight=False).pi)

# the exhaustive oracle agrees
print("oracle:", brute_pi(t, d).pi)

# a deep subtree on an interior hull vertex can host the superstack itself
t2 = build_tree([(0, 1), (1, 2), (1, 3), (3, 4)])
d2 = PebblingFn.from_dict(5, {0: 1, 2: 1})
print("interior hanging subtree: pi =", tree_pi(t2, d2).pi,
      "| hull leaves only:", tree_pi(t2, d2, candidates="hull_leaves").pi,
      "| oracle:", brute_pi(t2, d2).pi)
