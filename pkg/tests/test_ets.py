from itertools import combinations

import pytest

from cycledist.canon import canonical_form
from cycledist.errors import NoSuchEtsError, NotFoundError, UnknownValueError, UnsupportedSizeError
from cycledist.ets import (DB330_FREE, DB331_FREE, OTHER, THETA_FREE, check_parity, classify, corollary_bound,
                           enumerate_ets, ets_bound_b, min_vn_degree, parity_ok, smallest_a, structure_sets,
                           turan_bruteforce, turan_exact, turan_regime, turan_value)
from cycledist.graphs import DB_330, DB_331, THETA_122, Dumbbell, SimpleGraph, Theta, contains_pattern

from conftest import brute_canonical


def brute_population(a, b, gamma, lo):
    m = (a * gamma - b) // 2
    classes = set()
    for es in combinations(combinations(range(a), 2), m):
        g = SimpleGraph(a, frozenset(es))
        if g.is_connected() and all(lo <= d <= gamma for d in g.degrees()):
            classes.add(brute_canonical(g))
    return classes


@pytest.mark.parametrize("a, b, gamma", [(4, 2, 3), (5, 3, 3), (6, 2, 3), (6, 4, 3), (5, 2, 4), (6, 4, 4), (6, 2, 4)])
def test_population_matches_brute_force(a, b, gamma):
    got = enumerate_ets(a, b, gamma).members
    assert {brute_canonical(g) for g in got} == brute_population(a, b, gamma, min_vn_degree(gamma))
    assert len({canonical_form(g) for g in got}) == len(got)


def test_small_populations():
    assert len(enumerate_ets(4, 2, 3).members) == 1
    sets = structure_sets(enumerate_ets(6, 2, 3))
    assert len(sets[THETA_FREE]) == 1 and len(sets[DB331_FREE]) == 1


def test_degree_floor():
    assert min_vn_degree(3) == min_vn_degree(3, strict=False) == 2
    assert (min_vn_degree(4), min_vn_degree(4, strict=False)) == (3, 2)
    lenient = enumerate_ets(6, 4, 4, strict=False).members
    assert len(lenient) > len(enumerate_ets(6, 4, 4).members)


@pytest.mark.parametrize("a, b, gamma", [(4, 1, 3), (3, 0, 4), (2, 0, 3)])
def test_parity_and_size(a, b, gamma):
    with pytest.raises(NoSuchEtsError):
        check_parity(a, b, gamma)


def test_classify_examples():
    # with gamma = 3 the shared-vertex dumbbell is vacuously present
    assert classify(THETA_122.graph(), 3) == DB331_FREE
    assert classify(THETA_122.graph(), 4) == OTHER
    assert classify(DB_331.graph(), 3) == THETA_FREE
    assert classify(DB_331.graph(), 4) == OTHER
    member = structure_sets(enumerate_ets(6, 2, 3))[THETA_FREE].members[0]
    assert classify(member, 3) == THETA_FREE


def test_structure_sets_are_defined_by_containment():
    pop = enumerate_ets(9, 4, 4)
    sets = structure_sets(pop)
    need = {THETA_FREE: (False, True, True), DB330_FREE: (True, False, True), DB331_FREE: (True, True, False)}
    for tag, s in sets.items():
        for g in s.members:
            assert tuple(contains_pattern(g, p) for p in (THETA_122, DB_330, DB_331)) == need[tag]
    assert sum(len(s) for s in sets.values()) <= len(pop.members)


@pytest.mark.parametrize("p, n, value", [
    (DB_331, 6, 12), (DB_330, 4, 6), (DB_330, 7, 13), (THETA_122, 3, 3), (THETA_122, 9, 20),
])
def test_turan_exact(p, n, value):
    assert turan_exact(p, n) == value


@pytest.mark.parametrize("p, n, value", [(THETA_122, 5, 6), (DB_330, 5, 7), (DB_331, 6, 12)])
def test_turan_bruteforce_small(p, n, value):
    assert turan_bruteforce(p, n)[0] == value
    val, witness = turan_bruteforce(p, n, mode="augment")
    assert val == value and witness.m == value and not contains_pattern(witness, p)


def test_turan_unknown_and_fallback():
    p = Dumbbell(3, 4, 0)
    assert turan_regime(p, 8) == "unknown"
    with pytest.raises(UnknownValueError):
        turan_exact(p, 8)
    assert turan_value(p, 6) == turan_bruteforce(p, 6)[0]
    with pytest.raises(UnsupportedSizeError):
        turan_bruteforce(THETA_122, 11)


def test_theta_222_against_bruteforce():
    # ex(n, C4-with-chord-free) has no formula here; the two search modes must agree
    p = Theta(2, 2, 2)
    for n in range(5, 8):
        assert turan_bruteforce(p, n, "labeled")[0] == turan_bruteforce(p, n, "augment")[0]


@pytest.mark.parametrize("a, gamma, p, b", [(6, 3, THETA_122, 0), (4, 4, DB_331, 4), (3, 3, DB_331, 3)])
def test_ets_bound_b(a, gamma, p, b):
    assert ets_bound_b(a, gamma, p) == b


# first a for which the closed forms follow from the generic branch of the exact value
@pytest.mark.parametrize("p, a0", [(THETA_122, 4), (DB_330, 5), (DB_331, 7)])
def test_turan_bound_dominates_closed_form(p, a0):
    for gamma in (3, 4, 5):
        for a in range(a0, 16):
            assert ets_bound_b(a, gamma, p) >= corollary_bound(a, gamma, p) - 1e-9


def test_closed_form_overshoots_at_exceptional_order():
    # ex(6, .) = 12 exceeds the generic-branch value, so the closed form is too strong there
    assert turan_value(DB_331, 6) == 12
    for gamma in (3, 4, 5):
        assert ets_bound_b(6, gamma, DB_331) == corollary_bound(6, gamma, DB_331) - 1.5


@pytest.mark.parametrize("b, gamma, p, a", [(0, 3, THETA_122, 6), (6, 4, DB_331, 6), (7, 5, DB_330, 9)])
def test_smallest_a(b, gamma, p, a):
    assert smallest_a(b, gamma, p) == a


def test_smallest_a_not_found():
    with pytest.raises(NotFoundError):
        smallest_a(0, 5, THETA_122, a_max=5)


def test_parity_rules():
    assert parity_ok(5, 1, 3) and not parity_ok(5, 2, 3)
    assert parity_ok(5, 2, 4) and not parity_ok(5, 1, 4)
