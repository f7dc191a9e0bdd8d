import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cycledist.errors import InvalidInputError, InvalidWalkError
from cycledist.qc import (FIXTURES, INF, ExponentMatrix, format_exponent_matrix, girth_qc, lift, load_fixture,
                          parse_exponent_matrix, qc_cycle_exists)
from cycledist.tanner import tanner_girth


@st.composite
def exponent_matrices(draw, max_gamma=3, max_eta=4, max_p=9):
    g = draw(st.integers(2, max_gamma))
    e = draw(st.integers(2, max_eta))
    p = draw(st.integers(2, max_p))
    cells = draw(st.lists(st.one_of(st.just(INF), st.integers(0, p - 1)), min_size=g * e, max_size=g * e))
    return ExponentMatrix(p, np.array(cells).reshape(g, e))


def test_lift_block_rule():
    t = lift(ExponentMatrix(3, [[1]]))
    # row r of the block connects to column (r + 1) mod 3
    assert t.check_adj == ((1,), (2,), (0,))


def test_lift_degrees():
    e = load_fixture("c1")
    t = lift(e)
    assert t.n_v == e.eta * e.p and t.n_c == e.gamma * e.p
    assert set(t.var_degrees()) == {e.gamma}


@pytest.mark.parametrize("token", ["inf", "-", "x", "-1", "∞", "i"])
def test_infinite_tokens(token):
    e = parse_exponent_matrix(f"1 2 5\n3 {token}\n")
    assert e.entries.tolist() == [[3, INF]]


@given(exponent_matrices())
def test_text_round_trip(e):
    assert parse_exponent_matrix(format_exponent_matrix(e)) == e


@pytest.mark.parametrize("text", ["1 2 5\n3\n", "2 1 5\n3\n", "1 1 5\n7\n", "x y z\n"])
def test_bad_text(text):
    with pytest.raises(InvalidInputError):
        parse_exponent_matrix(text)


def test_four_cycle_condition():
    e = ExponentMatrix(5, [[0, 1], [2, 3]])       # 0 - 1 + 3 - 2 = 0
    assert qc_cycle_exists(e, [(0, 0), (1, 1)])
    assert tanner_girth(lift(e)) == 4
    f = ExponentMatrix(5, [[0, 1], [2, 4]])
    assert not qc_cycle_exists(f, [(0, 0), (1, 1)])
    assert tanner_girth(lift(f)) > 4


def test_walk_errors():
    e = ExponentMatrix(5, [[0, INF], [2, 3]])
    with pytest.raises(InvalidWalkError):
        qc_cycle_exists(e, [(0, 0), (1, 1)])
    with pytest.raises(InvalidWalkError):
        qc_cycle_exists(e, [(0, 0), (0, 1)])
    with pytest.raises(InvalidWalkError):
        qc_cycle_exists(e, [(0, 0)])


@given(exponent_matrices())
def test_girth_qc_matches_bfs(e):
    bfs = tanner_girth(lift(e))
    got = girth_qc(e, k_max=6)
    assert got == (bfs if bfs <= 12 else math.inf)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_load(name):
    e = load_fixture(name)
    assert e.gamma >= 3 and e.eta > e.gamma
    assert girth_qc(e) >= 6


def test_unknown_fixture():
    with pytest.raises(InvalidInputError):
        load_fixture("c9")
