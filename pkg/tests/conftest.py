import os
import random
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cycledist.graphs import SimpleGraph
from cycledist.tanner import TannerGraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def labeled_contains(g: SimpleGraph, h: SimpleGraph) -> bool:
    """Subgraph containment by trying every injective vertex map (small graphs only)."""
    if h.n > g.n or h.m > g.m:
        return False
    hes = h.edge_list()
    for img in permutations(range(g.n), h.n):
        if all(g.has_edge(img[u], img[v]) for u, v in hes):
            return True
    return False


def brute_canonical(g: SimpleGraph) -> tuple:
    """Minimum sorted edge list over all vertex permutations."""
    best = None
    for perm in permutations(range(g.n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges))
        if best is None or key < best:
            best = key
    return best


def random_graph(n: int, p: float, rng: random.Random) -> SimpleGraph:
    return SimpleGraph(n, frozenset(e for e in combinations(range(n), 2) if rng.random() < p))


@pytest.fixture
def rng():
    return random.Random(12345)


def random_tree_code(r: np.random.Generator, n_v: int) -> TannerGraph:
    """Random Tanner tree: each new check joins one existing variable to 1-2 new ones."""
    edges, n, c = [], 1, 0
    while n < n_v:
        k = min(int(r.integers(1, 3)), n_v - n)
        edges.append((int(r.integers(n)), c))
        edges += [(n + i, c) for i in range(k)]
        n += k
        c += 1
    return TannerGraph.from_edges(n_v, c, edges)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
