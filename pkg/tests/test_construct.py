import numpy as np
import pytest

from cycledist.construct import (ConstructionConfig, WeightState, check_weight, path_occurrences, peg_classic,
                                 peg_cycle, qc_peg_classic, qc_peg_cycle, regular_base, update_weights)
from cycledist.errors import ConstructionError, InvalidInputError
from cycledist.qc import INF, girth_qc, lift, load_fixture
from cycledist.tanner import TannerGraph, bfs_expansion, cycle_pairs_sharing_nodes, six_cycles, tanner_girth


def fig4():
    t = TannerGraph.from_edges(4, 3, [(0, 0), (1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (3, 2)])
    return t, bfs_expansion(t, 0)


def test_check_weight_example():
    t, exp = fig4()
    wt = np.array([0.3, 0.1, 0.2, 0.7])
    assert check_weight(exp, 1, wt) == pytest.approx(2 * 0.3 + 0.1 + 0.2)
    assert check_weight(exp, 2, wt) == pytest.approx(0.3 + 0.7)
    assert check_weight(exp, 0, np.zeros(4)) == 0


def test_check_weight_single_path():
    t = TannerGraph.from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)])
    exp = bfs_expansion(t, 0)
    # path v0 c0 v1 c1 holds two variables; extend with v2 to a third check
    t3 = TannerGraph.from_edges(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)])
    assert check_weight(bfs_expansion(t3, 0), 2, np.full(3, 0.25)) == pytest.approx(0.75)
    with pytest.raises(InvalidInputError):
        check_weight(bfs_expansion(TannerGraph.from_edges(2, 2, [(0, 0), (1, 1)]), 0), 1, np.zeros(2))
    assert exp.root == 0


def test_update_weights_example():
    t, exp = fig4()
    ws = WeightState.zeros(4)
    update_weights(ws, path_occurrences(exp, 1), 4)
    assert ws.wt.tolist() == [0.5, 0.25, 0.25, 0.0]
    before = ws.wt.copy()
    update_weights(ws, {}, 6)
    assert (ws.wt == before).all()
    with pytest.raises(InvalidInputError):
        update_weights(ws, {}, 5)


def test_cycle_peg_prefers_lighter_check():
    # after the v0-c1 connection, c1 weighs 2*0.5+0.25+0.25 = 1.5 vs c2 at 0.5
    t, exp = fig4()
    ws = WeightState(np.array([0.0, 0.0, 0.0, 0.0]))
    assert check_weight(exp, 1, ws) == check_weight(exp, 2, ws) == 0
    ws = WeightState(np.array([0.0, 0.0, 0.0, 1.0]))
    assert check_weight(exp, 1, ws) < check_weight(exp, 2, ws)


def test_trivial_constructions():
    t = peg_classic(ConstructionConfig(1, 3, [1], seed=5))
    assert t.n_edges == 1
    k22 = peg_classic(ConstructionConfig(2, 2, [2, 2]))
    assert k22.n_edges == 4 and tanner_girth(k22) == 4


def test_config_validation():
    with pytest.raises(InvalidInputError):
        ConstructionConfig(2, 3, [1])
    with pytest.raises(InvalidInputError):
        ConstructionConfig(1, 3, [4])


@pytest.mark.parametrize("builder", [peg_classic, peg_cycle])
def test_degrees_and_determinism(builder):
    cfg = ConstructionConfig.regular(60, 30, 3, seed=11)
    a, b = builder(cfg), builder(ConstructionConfig.regular(60, 30, 3, seed=11))
    assert a == b
    assert a.var_degrees() == [3] * 60
    assert builder(ConstructionConfig.regular(60, 30, 3, seed=12)) != a


def test_peg_girth_at_moderate_density():
    t = peg_classic(ConstructionConfig.regular(480, 240, 3, seed=0))
    assert tanner_girth(t) >= 6


def test_sparse_run_equals_classic():
    # the expansion never covers every check here, so the cycle-aware branch is never taken
    cfg = ConstructionConfig.regular(8, 40, 2, seed=3)
    ws = WeightState.zeros(8)
    assert peg_cycle(cfg, ws) == peg_classic(cfg)
    assert ws.events == [] and not ws.wt.any()


def test_weight_accounting_replay():
    ws = WeightState.zeros(135)
    peg_cycle(ConstructionConfig.regular(135, 81, 3, seed=2), ws)
    assert ws.events
    replay = sum(e.occurrences / e.cycle_len for e in ws.events)
    assert ws.wt.sum() == pytest.approx(replay, rel=1e-12)
    for e in ws.events:
        # every retained path to a depth-d check holds (d + 1) / 2 variables
        assert e.occurrences == e.n_paths * (e.cycle_len // 2)
    assert (ws.wt >= 0).all()


@pytest.mark.parametrize("builder", [qc_peg_cycle, qc_peg_classic])
def test_qc_round_trip_and_determinism(builder):
    e, t = builder(regular_base(3, 5), 27, seed=4)
    assert lift(e) == t
    assert builder(regular_base(3, 5), 27, seed=4)[0] == e
    assert t.var_degrees() == [3] * 135


def test_qc_trivial_base():
    e, t = qc_peg_cycle(np.array([[1]]), 7, seed=1)
    assert t.n_edges == 7 and all(len(cs) == 1 for cs in t.check_adj)


def test_qc_respects_mask():
    base = load_fixture("c3").base()
    e, t = qc_peg_cycle(base, 72, seed=0)
    assert ((e.entries != INF) == base.astype(bool)).all()


def test_qc_empty_column():
    with pytest.raises(ConstructionError):
        qc_peg_cycle(np.array([[1, 0], [1, 0]]), 5)


@pytest.mark.parametrize("seed", range(3))
def test_qc_girth_at_least_six(seed):
    e, _ = qc_peg_cycle(regular_base(3, 5), 27, seed)
    assert girth_qc(e) >= 6


def test_census_small_code():
    t = peg_cycle(ConstructionConfig.regular(40, 20, 3, seed=0))
    cyc = six_cycles(t)
    assert cycle_pairs_sharing_nodes(cyc) <= len(cyc) * (len(cyc) - 1) // 2
