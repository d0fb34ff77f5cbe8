"""
Single targets and the t-fold pebbling number
=============================================

For a single target r^t the extremal configuration is built from a maximum
path partition rooted at r.
"""

from treepebble import (PebblingFn, Solver, chung_configuration, max_path_partition,
                        pi_t_fold, star_tree)
from treepebble.partition import chung_sizes

t = star_tree(3)
print("pi_2 per root:", [s + 1 for s in chung_sizes(t, 2)])
pi2, root = pi_t_fold(t, 2)
print("pi_2(K_13) =", pi2, "at root", root)

p = max_path_partition(t.rooted(root))
print("path lengths:", p.lengths, "far leaves:", p.far_leaves)
c = chung_configuration(p, 2).config
print("Chung configuration:", c.to_dict())

s = Solver(t, PebblingFn.stack(4, root, 2))
print("unsolvable:", s.check(c, witness=False).unsolvable)
print("any extra pebble solves:", all(s.check(c.plus(v), witness=False).solvable for v in range(4)))
