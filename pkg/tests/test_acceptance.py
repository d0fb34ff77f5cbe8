"""Acceptance criteria, one test (and one summary line) per criterion.

Two sub-checks fail on their own terms and are marked strict xfail; the parts
of those criteria that do hold are asserted by separate tests.
"""
import gc
import itertools
import random
import time

import pytest

from treepebble import (
    PebblingFn,
    Solver,
    alpha,
    basic_bounds,
    brute_pi,
    build_tree,
    chung_configuration,
    check_observation,
    check_support_theorem,
    load_catalog,
    max_path_partition,
    path_pi,
    path_tree,
    pi_t_fold,
    star_tree,
    strong_target_slack,
    tree_pi,
)
from treepebble.oracle import target_representatives

from conftest import random_tree


def all_targets(n, max_size):
    for k in range(1, max_size + 1):
        for combo in itertools.combinations_with_replacement(range(n), k):
            counts = [0] * n
            for v in combo:
                counts[v] += 1
            yield PebblingFn(counts)


def random_target(rng, n, max_size, max_support=None):
    counts = [0] * n
    pool = rng.sample(range(n), min(n, max_support or n))
    for _ in range(rng.randint(1, max_size)):
        counts[rng.choice(pool)] += 1
    return PebblingFn(counts)


def is_maximal(t, c, d):
    s = Solver(t, d)
    return s.check(c, witness=False).unsolvable and all(
        s.check(c.plus(v), witness=False).solvable for v in range(t.n))


# -- criterion 1 --------------------------------------------------------------

def test_criterion_1_values(fig1):
    t, _, d = fig1
    start = time.perf_counter()
    res, seq = path_pi(7, d)
    assert res.pi == tree_pi(t, d).pi == 212
    assert (seq.f[0], seq.f[-1]) == (166, 211)
    assert time.perf_counter() - start < 1


@pytest.mark.xfail(strict=True, reason="the stated configuration {v3^3, v4^21, v6^5} is D-solvable; "
                                       "(3,19,5) and (2,21,5) are the nearby maximal ones")
def test_criterion_1(fig1, record):
    t, c, d = fig1
    start = time.perf_counter()
    res, seq = path_pi(7, d)
    values = res.pi == tree_pi(t, d).pi == 212 and (seq.f[0], seq.f[-1]) == (166, 211)
    s = Solver(t, d)
    verdict = s.check(c)
    augmented = all(s.check(c.plus(v), witness=False).solvable for v in range(7))
    elapsed = time.perf_counter() - start
    ok = values and verdict.unsolvable and augmented and elapsed < 1
    moves = ", ".join(f"{t.name(a)}->{t.name(b)}" for a, b in verdict.solution.moves) if verdict.solution else ""
    record(1, ok, f"pi=212 and f_1=166, f_t=211: {values}; stated configuration unsolvable: "
                  f"{verdict.unsolvable} (solved by {moves}); all augmentations solve: {augmented}; "
                  f"{elapsed:.2f}s")
    assert ok


# -- criterion 2 --------------------------------------------------------------

def test_criterion_2(record):
    start = time.perf_counter()
    paths = all(pi_t_fold(path_tree(n), 1)[0] == 2 ** (n - 1) for n in range(1, 65))
    k13 = star_tree(3)
    pi2, root = pi_t_fold(k13, 2)
    w = chung_configuration(max_path_partition(k13.rooted(root)), 2).config
    shape = sorted(w.to_dict().values()) == [1, 7] and all(k13.is_leaf(v) and v != root for v in w.support)
    extremal = is_maximal(k13, w, PebblingFn.stack(4, root, 2))
    elapsed = time.perf_counter() - start
    ok = paths and pi2 == 9 and k13.is_leaf(root) and shape and extremal and elapsed < 1
    record(2, ok, f"pi(P_n)=2^(n-1) for n<=64: {paths}; pi_2(K13)={pi2} at leaf root {root} "
                  f"with witness {w.to_dict()} maximal={extremal}; {elapsed:.2f}s")
    assert ok


# -- criterion 3 --------------------------------------------------------------

def test_criterion_3(record):
    start = time.perf_counter()
    paths = all(tree_pi(path_tree(n), PebblingFn([1] * n)).pi == 2 ** n - 1 for n in range(2, 11))
    rng = random.Random(3)
    bad = []
    for _ in range(50):
        n = rng.randint(1, 10)
        t = random_tree(rng, n)
        d = PebblingFn([rng.randint(1, 3) for _ in range(n)])
        if tree_pi(t, d).pi != max(alpha(t, v, d) for v in range(n)):
            bad.append((t.edges, d.counts))
    elapsed = time.perf_counter() - start
    ok = paths and not bad and elapsed < 10
    record(3, ok, f"paths 2^n-1 for n=2..10: {paths}; random cover instances agreeing: {50 - len(bad)}/50; "
                  f"{elapsed:.2f}s")
    assert ok, bad


# -- criterion 4 --------------------------------------------------------------

@pytest.mark.slow
def test_criterion_4(record):
    start = time.perf_counter()
    bad = []
    catalog = 0
    for t in load_catalog(7):
        for d in target_representatives(t, all_targets(t.n, 3)):
            catalog += 1
            got, want = tree_pi(t, d).pi, brute_pi(t, d, "all").pi
            if got != want:
                bad.append((t.edges, d.counts, got, want))
    rng = random.Random(8)
    for _ in range(500):
        t = random_tree(rng, 8)
        d = random_target(rng, 8, 4)
        got, want = tree_pi(t, d).pi, brute_pi(t, d, "all").pi
        if got != want:
            bad.append((t.edges, d.counts, got, want))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1800
    record(4, ok, f"catalog n<=7, |D|<=3 up to symmetry: {catalog} instances; 500 random n=8, |D|<=4; "
                  f"disagreements: {len(bad)}; {elapsed:.0f}s")
    assert ok, bad[:5]


# -- criterion 5 --------------------------------------------------------------

def test_criterion_5_dead_weight_pin(pendant, record):
    d = PebblingFn.from_dict(6, {0: 1, 4: 1})
    res = tree_pi(pendant, d)
    rep = brute_pi(pendant, d)
    pinned = {PebblingFn.from_dict(6, {0: 16, 5: 1}), PebblingFn.from_dict(6, {4: 16, 5: 1})}
    ok = res.pi == rep.pi == 18 and res.witness in pinned and is_maximal(pendant, res.witness, d)
    record(5, ok, f"tree_pi={res.pi}, brute_pi={rep.pi}, witness={pendant.name(res.superstack_leaf)}:16 + u:1")
    assert ok


# -- criterion 6 --------------------------------------------------------------

@pytest.mark.slow
def test_criterion_6(record):
    start = time.perf_counter()
    support = observation = instances = 0
    for t in load_catalog(6):
        for d in all_targets(t.n, 2):
            instances += 1
            support += check_support_theorem(t, d)
            observation += check_observation(t, d)
    chung = chung_total = 0
    for t in load_catalog(7):
        for r in range(t.n):
            p = max_path_partition(t.rooted(r))
            for k in (1, 2, 3):
                c = chung_configuration(p, k).config if p.paths else PebblingFn.stack(t.n, r, k - 1)
                chung_total += 1
                chung += is_maximal(t, c, PebblingFn.stack(t.n, r, k))
    elapsed = time.perf_counter() - start
    ok = support == observation == instances and chung == chung_total
    record(6, ok, f"support theorem {support}/{instances}, observation {observation}/{instances} "
                  f"(n<=6, |D|<=2); Chung maximal {chung}/{chung_total} (n<=7, t<=3); {elapsed:.0f}s")
    assert ok


# -- criterion 7 --------------------------------------------------------------

def test_criterion_7(record):
    cases = []
    for t in load_catalog(7):
        for d in all_targets(t.n, 2):
            cases.append((t, d))
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 40)
        cases.append((random_tree(rng, n), random_target(rng, n, 6)))
    slack_ok = sum(strong_target_slack(t, d) >= 0 for t, d in cases)
    trees = {t for t, _ in cases}
    sandwich_ok = 0
    for t in trees:
        lo, hi = basic_bounds(t)
        sandwich_ok += lo <= pi_t_fold(t, 1)[0] <= hi
    ok = slack_ok == len(cases) and sandwich_ok == len(trees)
    record(7, ok, f"strong target slack >= 0 on {slack_ok}/{len(cases)} instances; "
                  f"bounds sandwich pi_1 on {sandwich_ok}/{len(trees)} trees")
    assert ok


# -- criterion 8 --------------------------------------------------------------

def _best_times(fns, repeat=5):
    """Minimum wall time per callable, runs interleaved to share any noise."""
    best = [float("inf")] * len(fns)
    for _ in range(repeat):
        for k, fn in enumerate(fns):
            gc.collect()
            start = time.perf_counter()
            fn()
            best[k] = min(best[k], time.perf_counter() - start)
    return best


def _big_instance(n, seed=5):
    rng = random.Random(seed)
    t = random_tree(rng, n)
    counts = [0] * n
    for v in rng.sample(range(n), 10):
        counts[v] = rng.randint(1, 3)
    return t, PebblingFn(counts)


@pytest.mark.slow
def test_criterion_8(record):
    t1, d1 = _big_instance(10 ** 5)
    t2, d2 = _big_instance(2 * 10 ** 5)
    a, b = _best_times([lambda: tree_pi(t1, d1), lambda: tree_pi(t2, d2)])
    t3 = random_tree(random.Random(1), 2000)
    (c,) = _best_times([lambda: pi_t_fold(t3, 2)], repeat=1)
    ok = a < 2 and b / a <= 3 and c < 30
    record(8, ok, f"tree_pi n=1e5, s(D)=10: {a:.2f}s; n=2e5: {b:.2f}s (ratio {b / a:.2f}); "
                  f"pi_t_fold n=2000, t=2: {c:.3f}s")
    assert ok


# -- criterion 9 --------------------------------------------------------------

def _path_instances():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(1, 30)
        yield n, random_target(rng, n, 8)


def _stated_rule_holds(n, seq):
    # positions are 1-based here
    for h in range(1, len(seq.f)):
        i, step = seq.indices[h] + 1, seq.f[h] - seq.f[h - 1]
        if i <= (n + 1) / 2 and not step > 0:
            return False
        if i > (n + 1) / 2 and not step < 0:
            return False
    return True


def _corrected_rule_holds(n, seq):
    # the far-end term loses the previous unit, so the sign follows i_h + i_{h-1}
    signs = []
    for h in range(1, len(seq.f)):
        i, prev, step = seq.indices[h], seq.indices[h - 1], seq.f[h] - seq.f[h - 1]
        key = i + prev - (n - 1)
        if step != 2 ** i - 2 ** (n - 1 - prev) or (step > 0) - (step < 0) != (key > 0) - (key < 0):
            return False
        signs.append((step > 0) - (step < 0))
    return signs == sorted(signs)


def test_criterion_9_endpoint_maximum():
    for n, d in _path_instances():
        _, seq = path_pi(n, d)
        assert max(seq.f) == max(seq.f[0], seq.f[-1])
        assert _corrected_rule_holds(n, seq)


@pytest.mark.xfail(strict=True, reason="the stated sign rule is contradicted already by the "
                                       "f-sequence (166, 103, 41, 25, 85, 148, 211)")
def test_criterion_9(record):
    stated = corrected = endpoint = 0
    for n, d in _path_instances():
        _, seq = path_pi(n, d)
        stated += _stated_rule_holds(n, seq)
        corrected += _corrected_rule_holds(n, seq)
        endpoint += max(seq.f) == max(seq.f[0], seq.f[-1])
    ok = stated == endpoint == 200
    record(9, ok, f"max f = max(f_1, f_t): {endpoint}/200; stated sign rule: {stated}/200; "
                  f"corrected valley rule: {corrected}/200")
    assert ok
