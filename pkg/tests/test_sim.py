import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cycledist.errors import InvalidInputError
from cycledist.sim import (ChannelConfig, StopRule, bpsk_awgn_llr, code_rate, ebn0_to_sigma, fer_sweep, gf2_rank,
                           map_marginals, spa_decode, spa_decode_batch, wilson_ci)
from cycledist.tanner import TannerGraph

from conftest import random_tree_code

REP3 = TannerGraph.from_edges(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1)])
HAMMING = TannerGraph.from_matrix(np.array([[1, 1, 0, 1, 1, 0, 0], [1, 0, 1, 1, 0, 1, 0], [0, 1, 1, 1, 0, 0, 1]]))


def test_llr_statistics_and_determinism():
    a = bpsk_awgn_llr(10 ** 6, 0.8, np.random.default_rng(3))
    assert a.mean() == pytest.approx(2 / 0.64, rel=0.01)
    b = bpsk_awgn_llr(10 ** 6, 0.8, np.random.default_rng(3))
    assert np.array_equal(a, b)
    assert bpsk_awgn_llr(5, 1e-4, np.random.default_rng(0)).min() > 1e6


def test_repetition_code():
    hard, ok, it = spa_decode(REP3, np.array([2.0, -1.0, 3.0]), 20)
    assert hard.tolist() == [0, 0, 0] and ok
    r = spa_decode_batch(REP3, np.array([[2.0, -1.0, 3.0]]), 5, early_stop=False)
    assert np.allclose(r.soft, 4.0)


def test_trivial_decodes():
    hard, ok, it = spa_decode(HAMMING, np.full(7, 30.0))
    assert not hard.any() and ok and it == 1
    hard, ok, it = spa_decode(HAMMING, np.zeros(7))
    assert not hard.any() and ok


@pytest.mark.parametrize("seed", range(50))
def test_spa_equals_map_on_trees(seed):
    r = np.random.default_rng(seed)
    t = random_tree_code(r, int(r.integers(3, 13)))
    llr = r.normal(0.5, 2.0, t.n_v)
    soft = spa_decode_batch(t, llr[None, :], max_iter=2 * t.n_v + 2, early_stop=False).soft[0]
    assert np.allclose(soft, map_marginals(t, llr), atol=1e-9, rtol=0)


def test_gf2_rank():
    assert gf2_rank(HAMMING.to_matrix()) == 3
    assert gf2_rank(np.array([[1, 1], [1, 1]])) == 1
    assert code_rate(HAMMING) == pytest.approx(4 / 7)


@given(st.lists(st.lists(st.integers(0, 1), min_size=6, max_size=6), min_size=1, max_size=5))
def test_gf2_rank_counts_codewords(rows):
    h = np.array(rows)
    words = sum(1 for w in product((0, 1), repeat=6) if not ((h @ np.array(w)) % 2).any())
    assert words == 2 ** (6 - gf2_rank(h))


def test_wilson_brackets():
    for k, n in [(0, 10), (3, 10), (10, 10), (100, 10 ** 6)]:
        lo, hi = wilson_ci(k, n)
        assert lo <= k / n <= hi


def test_channel_config():
    with pytest.raises(InvalidInputError):
        ChannelConfig()
    with pytest.raises(InvalidInputError):
        ChannelConfig(ebn0_db=1.0, sigma=1.0)
    eb, s = ChannelConfig(ebn0_db=2.0).resolve(0.5)
    assert s == pytest.approx(ebn0_to_sigma(2.0, 0.5))
    assert ChannelConfig(sigma=s).resolve(0.5)[0] == pytest.approx(2.0)


def test_fer_extremes():
    noisy, clean = fer_sweep(HAMMING, [ChannelConfig(sigma=10.0), ChannelConfig(sigma=0.05)],
                             StopRule(50, 2000, 200), seed=1)
    assert noisy.ci95[0] <= 1.0 and noisy.fer > 0.8
    assert clean.frame_errors == 0 and clean.frames == 2000
    assert noisy.frames < 2000


def test_fer_reproducible_across_workers():
    pts = [ChannelConfig(sigma=0.9)]
    stop = StopRule(30, 3000, 250)
    a = fer_sweep(HAMMING, pts, stop, seed=9, workers=1)
    b = fer_sweep(HAMMING, pts, stop, seed=9, workers=2)
    c = fer_sweep(HAMMING, pts, stop, seed=9, workers=1)
    assert a == b == c


def test_all_zero_vs_random_codeword():
    # channel symmetry: sending a random codeword gives the same FER as the all-zero word
    words = np.array([w for w in product((0, 1), repeat=7)
                      if not ((HAMMING.to_matrix() @ np.array(w)) % 2).any()])
    r = np.random.default_rng(5)
    sigma, n = 0.8, 20000
    zero = bpsk_awgn_llr(7, sigma, r, n)
    e0 = spa_decode_batch(HAMMING, zero).hard.any(axis=1).sum()
    cw = words[r.integers(len(words), size=n)]
    y = (1 - 2 * cw) + sigma * r.standard_normal((n, 7))
    dec = spa_decode_batch(HAMMING, 2 * y / sigma ** 2).hard
    e1 = (dec != cw).any(axis=1).sum()
    lo0, hi0 = wilson_ci(int(e0), n)
    lo1, hi1 = wilson_ci(int(e1), n)
    assert lo0 <= hi1 and lo1 <= hi0


def test_decoder_input_checks():
    with pytest.raises(InvalidInputError):
        spa_decode(HAMMING, np.zeros(5))
    with pytest.raises(InvalidInputError):
        spa_decode(HAMMING, np.zeros(7), max_iter=0)
