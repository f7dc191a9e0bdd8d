import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from cycledist.canon import (canonical_digraph_form, canonical_form, canonical_graph, enumerate_graphs,
                             is_isomorphic)
from cycledist.graphs import SimpleGraph, complete_bipartite, cycle_graph, theta_graph

from conftest import brute_canonical
from test_graphs import graphs


def _all_labeled(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))


@given(graphs(max_n=9), st.randoms(use_true_random=False))
def test_canonical_form_is_permutation_invariant(g, r):
    perm = list(range(g.n))
    r.shuffle(perm)
    assert canonical_form(g.relabel(perm)) == canonical_form(g)
    assert canonical_graph(g.relabel(perm)) == canonical_graph(g)


@pytest.mark.parametrize("n", [4, 5])
def test_canonical_form_separates_classes_like_brute_force(n):
    by_brute, by_ours = {}, {}
    for g in _all_labeled(n):
        by_brute.setdefault(brute_canonical(g), set()).add(canonical_form(g))
        by_ours.setdefault(canonical_form(g), set()).add(brute_canonical(g))
    assert all(len(v) == 1 for v in by_brute.values())
    assert all(len(v) == 1 for v in by_ours.values())


def test_cospectral_but_distinct():
    # C6 and two disjoint triangles: same degrees, not isomorphic
    two_triangles = SimpleGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not is_isomorphic(cycle_graph(6), two_triangles)


def test_colored_forms():
    g = cycle_graph(4)
    assert canonical_form(g, [0, 1, 0, 1]) == canonical_form(g, [1, 0, 1, 0])
    assert canonical_form(g, [0, 0, 1, 1]) != canonical_form(g, [0, 1, 0, 1])


def test_digraph_forms():
    a = canonical_digraph_form(3, [(0, 1), (1, 2), (2, 0)])
    b = canonical_digraph_form(3, [(1, 0), (0, 2), (2, 1)])
    c = canonical_digraph_form(3, [(0, 1), (1, 2), (0, 2)])
    assert a == b and a != c


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_matches_brute_force_classes(n):
    want = {}
    for g in _all_labeled(n):
        want.setdefault(g.m, set()).add(brute_canonical(g))
    for m in range(n * (n - 1) // 2 + 1):
        got = enumerate_graphs(n, m)
        assert len(got) == len(want.get(m, ())), (n, m)
        assert {brute_canonical(g) for g in got} == want.get(m, set())


# graphs on 6 and 7 vertices by edge count (OEIS A008406 rows)
ROW6 = [1, 1, 2, 5, 9, 15, 21, 24, 24, 21, 15, 9, 5, 2, 1, 1]


def test_enumeration_counts_six_vertices():
    assert [len(enumerate_graphs(6, m)) for m in range(16)] == ROW6


@pytest.mark.parametrize("n, total, connected", [(6, 156, 112), (7, 1044, 853)])
def test_enumeration_totals(n, total, connected):
    ms = range(n * (n - 1) // 2 + 1)
    assert sum(len(enumerate_graphs(n, m)) for m in ms) == total
    assert sum(len(enumerate_graphs(n, m, connected=True)) for m in ms) == connected


@pytest.mark.parametrize("n, count", [(4, 1), (6, 2), (8, 5), (10, 19)])
def test_connected_cubic_counts(n, count):
    assert len(enumerate_graphs(n, 3 * n // 2, 3, 3, connected=True)) == count


def test_degree_bounds_and_uniqueness():
    got = enumerate_graphs(7, 9, 2, 3, connected=True)
    assert all(2 <= d <= 3 for g in got for d in g.degrees())
    assert all(g.is_connected() for g in got)
    assert len({canonical_form(g) for g in got}) == len(got)


def test_hereditary_pruning_matches_filter():
    tri_free = lambda g: all(not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c))  # noqa: E731
                             for a, b, c in combinations(range(g.n), 3))
    for m in range(0, 10):
        pruned = enumerate_graphs(6, m, hereditary=tri_free)
        filtered = [g for g in enumerate_graphs(6, m) if tri_free(g)]
        assert {canonical_form(g) for g in pruned} == {canonical_form(g) for g in filtered}


def test_isomorphism_examples():
    assert is_isomorphic(theta_graph(1, 2, 2), theta_graph(2, 2, 1).relabel([3, 2, 1, 0]))
    assert is_isomorphic(complete_bipartite(2, 2), cycle_graph(4))
