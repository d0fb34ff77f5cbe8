"""
Target pebbling on a path
=========================

A target D on P_7 asks for two pebbles on v1, one on v2 and v5, and three on
v7. The extremal configurations put everything on the two endpoints.
"""

from treepebble import PebblingFn, Solver, path_pi, path_tree

t = path_tree(7, names=[f"v{i}" for i in range(1, 8)])
d = PebblingFn.from_dict(7, {0: 2, 1: 1, 4: 1, 6: 3})

# f_j splits the target units after the j-th one: the left part is solved
# from v1, the right part from v7, each stack one pebble short
res, seq = path_pi(7, d)
print("f sequence:", seq.f)
print("pi(P_7, D) =", res.pi, "witness", res.witness.to_dict())

# the sequence falls then rises, so its maximum sits at an end
steps = [b - a for a, b in zip(seq.f, seq.f[1:])]
print("steps:", steps)

# interior configurations of almost the same size are not extremal; this one
# of size 29 is already solvable
s = Solver(t, d)
c = PebblingFn.from_dict(7, {2: 3, 3: 21, 5: 5})
v = s.check(c)
print("{v3^3, v4^21, v6^5} solvable:", v.solvable)
print("  moves:", " ".join(f"{t.name(a)}->{t.name(b)}" for a, b in v.solution.moves))

# two pebbles fewer on v4 gives a maximal unsolvable one
c = PebblingFn.from_dict(7, {2: 3, 3: 19, 5: 5})
print("{v3^3, v4^19, v6^5} unsolvable:", s.check(c, witness=False).unsolvable)
print("  every augmentation solves:", all(s.check(c.plus(x), witness=False).solvable for x in range(7)))
