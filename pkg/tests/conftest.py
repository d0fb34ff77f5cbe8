import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from treepebble import PebblingFn, build_tree

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def trees(draw, min_n=1, max_n=8):
    """Random recursive trees with a shuffled labelling."""
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    perm = draw(st.permutations(range(n)))
    edges = [(perm[p], perm[i]) for i, p in enumerate(parents, 1)]
    return build_tree(edges, n=n)


@st.composite
def targets(draw, n, max_size=3):
    k = draw(st.integers(1, max_size))
    counts = [0] * n
    for _ in range(k):
        counts[draw(st.integers(0, n - 1))] += 1
    return PebblingFn(counts)


@st.composite
def tree_and_target(draw, min_n=1, max_n=8, max_size=3):
    t = draw(trees(min_n, max_n))
    return t, draw(targets(t.n, max_size))


def random_tree(rng: random.Random, n: int):
    return build_tree([(rng.randrange(i), i) for i in range(1, n)], n=n)


@pytest.fixture
def pendant():
    # v1 - v2 - v3 - v4 - v5 with u hanging off v3
    return build_tree([(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)], names=["v1", "v2", "v3", "v4", "v5", "u"])


@pytest.fixture
def fig1():
    from treepebble import path_tree
    t = path_tree(7, names=[f"v{i}" for i in range(1, 8)])
    d = PebblingFn.from_dict(7, {0: 2, 1: 1, 4: 1, 6: 3})
    c = PebblingFn.from_dict(7, {2: 3, 3: 21, 5: 5})
    return t, c, d


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Log one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def emit(criterion, ok, detail):
        lines.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
        print(lines[-1])
    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
