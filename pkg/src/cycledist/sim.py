"""BPSK/AWGN Monte-Carlo frame-error simulation with a flooding sum-product decoder.

The all-zero codeword is transmitted. Check updates use the
``phi(x) = -log tanh(x/2)`` form with prefix/suffix exclusive sums, so no
message is ever recovered by subtracting it from a total.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.stats import binomtest

from .errors import InvalidInputError
from .tanner import TannerGraph

WORKERS_ENV = "CYCLEDIST_WORKERS"


# ---------------------------------------------------------------- channel


@dataclass(frozen=True)
class ChannelConfig:
    """One simulation point. Give either ``ebn0_db`` (with the code rate) or ``sigma``."""

    ebn0_db: float | None = None
    sigma: float | None = None

    def __post_init__(self) -> None:
        if (self.ebn0_db is None) == (self.sigma is None):
            raise InvalidInputError("give exactly one of ebn0_db and sigma")
        if self.sigma is not None and self.sigma <= 0:
            raise InvalidInputError("sigma must be positive")

    def resolve(self, rate: float) -> tuple[float, float]:
        """(Eb/N0 in dB, sigma) for a code of the given rate."""
        if self.sigma is not None:
            return 10 * math.log10(1.0 / (2 * rate * self.sigma ** 2)), self.sigma
        return self.ebn0_db, ebn0_to_sigma(self.ebn0_db, rate)


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    if not 0 < rate <= 1:
        raise InvalidInputError("rate must lie in (0, 1]")
    return math.sqrt(1.0 / (2 * rate * 10 ** (ebn0_db / 10)))


def bpsk_awgn_llr(length: int, sigma: float, rng: np.random.Generator, frames: int | None = None) -> np.ndarray:
    """Channel LLRs 2(1 + n)/sigma^2 for the all-zero codeword; shape (frames, length) if frames given."""
    if sigma <= 0:
        raise InvalidInputError("sigma must be positive")
    shape = (length,) if frames is None else (frames, length)
    return 2.0 * (1.0 + sigma * rng.standard_normal(shape)) / sigma ** 2


def gf2_rank(h: np.ndarray) -> int:
    """Rank over GF(2) by elimination on packed rows."""
    rows = [int("".join("1" if x else "0" for x in r), 2) for r in np.asarray(h) % 2]
    rank = 0
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = r
                rank += 1
                break
            r ^= pivots[top]
    return rank


def code_rate(t: TannerGraph) -> float:
    return (t.n_v - gf2_rank(t.to_matrix())) / t.n_v


# ---------------------------------------------------------------- decoder


def _phi(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return np.log1p(2.0 / np.expm1(x))


@dataclass
class _Layout:
    n_v: int
    n_c: int
    var_of_edge: np.ndarray
    groups: list[np.ndarray]              # per check degree: (n_checks, d) edge indices
    v_sum: sparse.csr_matrix              # (E, n_v), sums edge messages into variables
    h: sparse.csr_matrix                  # (n_c, n_v)


def _layout(t: TannerGraph) -> _Layout:
    var_of_edge, by_check = [], {}
    for c in range(t.n_c):
        for v in t.check_adj[c]:
            by_check.setdefault(c, []).append(len(var_of_edge))
            var_of_edge.append(v)
    var_of_edge = np.array(var_of_edge, dtype=np.int64)
    e = len(var_of_edge)
    groups: dict[int, list[list[int]]] = {}
    for c, es in by_check.items():
        groups.setdefault(len(es), []).append(es)
    v_sum = sparse.csr_matrix((np.ones(e), (np.arange(e), var_of_edge)), shape=(e, t.n_v))
    h = sparse.csr_matrix(t.to_matrix().astype(np.int64))
    return _Layout(t.n_v, t.n_c, var_of_edge, [np.array(g) for g in groups.values()], v_sum, h)


def _exclusive(vals: np.ndarray, op) -> np.ndarray:
    """op over all other entries along the last axis, via prefix and suffix scans."""
    pre = op.accumulate(vals, axis=-1)
    suf = op.accumulate(vals[..., ::-1], axis=-1)[..., ::-1]
    out = np.empty_like(vals)
    ident = 0.0 if op is np.add else 1.0
    out[..., 0] = suf[..., 1] if vals.shape[-1] > 1 else ident
    out[..., -1] = pre[..., -2] if vals.shape[-1] > 1 else ident
    if vals.shape[-1] > 2:
        out[..., 1:-1] = op(pre[..., :-2], suf[..., 2:])
    return out


def _check_update(lay: _Layout, v2c: np.ndarray) -> np.ndarray:
    c2v = np.empty_like(v2c)
    mag = _phi(np.abs(v2c))
    sgn = np.where(v2c < 0, -1.0, 1.0)
    for g in lay.groups:
        m = _exclusive(mag[:, g], np.add)
        s = _exclusive(sgn[:, g], np.multiply)
        # an exact zero (all other inputs saturated) would give an infinite message
        c2v[:, g] = s * _phi(np.maximum(m, 1e-300))
    return c2v


@dataclass
class DecodeResult:
    hard: np.ndarray          # (frames, n_v) uint8
    converged: np.ndarray     # (frames,) bool
    iterations: np.ndarray    # (frames,) int
    soft: np.ndarray          # (frames, n_v) a-posteriori LLRs


def spa_decode_batch(t: TannerGraph | _Layout, llr: np.ndarray, max_iter: int = 20, early_stop: bool = True) -> DecodeResult:
    lay = t if isinstance(t, _Layout) else _layout(t)
    llr = np.atleast_2d(np.asarray(llr, dtype=float))
    if llr.shape[1] != lay.n_v:
        raise InvalidInputError(f"llr length {llr.shape[1]} != n_v {lay.n_v}")
    if max_iter < 1:
        raise InvalidInputError("max_iter must be >= 1")
    frames = llr.shape[0]
    soft = llr.copy()
    hard = np.zeros((frames, lay.n_v), dtype=np.uint8)
    converged = np.zeros(frames, dtype=bool)
    iters = np.zeros(frames, dtype=np.int64)
    active = np.arange(frames)
    v2c = llr[:, lay.var_of_edge]
    for it in range(1, max_iter + 1):
        c2v = _check_update(lay, v2c)
        tot = llr[active] + (lay.v_sum.T @ c2v.T).T
        v2c = tot[:, lay.var_of_edge] - c2v
        hd = (tot < 0).astype(np.uint8)
        soft[active] = tot
        hard[active] = hd
        iters[active] = it
        ok = ~np.any((lay.h @ hd.T.astype(np.int64)) % 2, axis=0)
        converged[active] = ok
        if early_stop:
            keep = ~ok
            active, v2c = active[keep], v2c[keep]
            if active.size == 0:
                break
    return DecodeResult(hard, converged, iters, soft)


def spa_decode(t: TannerGraph, llr: np.ndarray, max_iter: int = 20, early_stop: bool = True) -> tuple[np.ndarray, bool, int]:
    """Decode one frame: (hard decisions, converged, iterations used)."""
    r = spa_decode_batch(t, np.asarray(llr)[None, :], max_iter, early_stop)
    return r.hard[0], bool(r.converged[0]), int(r.iterations[0])


def map_marginals(t: TannerGraph, llr: np.ndarray) -> np.ndarray:
    """Exact bitwise a-posteriori LLRs by enumerating every codeword (n_v <= 20)."""
    n = t.n_v
    if n > 20:
        raise InvalidInputError("brute-force marginals limited to n_v <= 20")
    words = ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1).astype(np.int64)
    h = t.to_matrix().astype(np.int64)
    code = words[~np.any((words @ h.T) % 2, axis=1)]
    logw = -(code @ np.asarray(llr, dtype=float))
    out = np.empty(n)
    from scipy.special import logsumexp
    for j in range(n):
        out[j] = logsumexp(logw[code[:, j] == 0]) - logsumexp(logw[code[:, j] == 1])
    return out


# ---------------------------------------------------------------- FER sweep


@dataclass
class FerResult:
    ebn0_db: float
    sigma: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ci95: tuple[float, float]


@dataclass
class StopRule:
    min_frame_errors: int = 100
    max_frames: int = 10 ** 6
    chunk: int = 500


def wilson_ci(errors: int, frames: int) -> tuple[float, float]:
    ci = binomtest(errors, frames).proportion_ci(0.95, method="wilson")
    return float(ci.low), float(ci.high)


def _run_chunk(args) -> tuple[int, int, int]:
    t, sigma, seed, point, chunk, frames, max_iter = args
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, point, chunk])))
    llr = bpsk_awgn_llr(t.n_v, sigma, rng, frames)
    r = spa_decode_batch(_layout_cached(t), llr, max_iter)
    bit_err = r.hard.sum(axis=1)
    return frames, int(np.count_nonzero(bit_err)), int(bit_err.sum())


_LAYOUTS: dict[int, tuple[TannerGraph, _Layout]] = {}


def _layout_cached(t: TannerGraph) -> _Layout:
    hit = _LAYOUTS.get(id(t))
    if hit is None or hit[0] is not t:
        hit = (t, _layout(t))
        _LAYOUTS[id(t)] = hit
    return hit[1]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise InvalidInputError(f"{WORKERS_ENV} must be an integer") from None


def fer_sweep(code: TannerGraph, points: Sequence[ChannelConfig], stop: StopRule | None = None,
              seed: int = 0, workers: int | None = None, max_iter: int = 20) -> list[FerResult]:
    """Simulate each point until ``min_frame_errors`` or ``max_frames``.

    Frames are drawn in fixed chunks whose random streams are keyed by
    (seed, point index, chunk index); chunks are merged in index order and
    the stop rule is applied after each, so the result does not depend on
    the number of workers.
    """
    if not points:
        raise InvalidInputError("need at least one simulation point")
    stop = stop or StopRule()
    workers = default_workers() if workers is None else max(1, workers)
    rate = code_rate(code)
    results = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for pi, pt in enumerate(points):
            ebn0, sigma = pt.resolve(rate)
            frames = errors = bits = 0
            chunk_idx = 0
            done = False
            while not done:
                jobs = []
                planned = frames
                for _ in range(workers):
                    n = min(stop.chunk, stop.max_frames - planned)
                    if n <= 0:
                        break
                    jobs.append((code, sigma, seed, pi, chunk_idx + len(jobs), n, max_iter))
                    planned += n
                outs = pool.map(_run_chunk, jobs) if pool else map(_run_chunk, jobs)
                for f, e, b in outs:
                    chunk_idx += 1
                    if done:
                        continue
                    frames, errors, bits = frames + f, errors + e, bits + b
                    if errors >= stop.min_frame_errors or frames >= stop.max_frames:
                        done = True
                if not jobs:
                    done = True
            results.append(FerResult(ebn0, sigma, frames, errors, bits, errors / frames, wilson_ci(errors, frames)))
    finally:
        if pool:
            pool.shutdown()
    return results


FER_COLUMNS = ("ebn0_db", "sigma", "frames", "frame_errors", "fer", "ci_lo", "ci_hi")


def fer_rows(results: Sequence[FerResult]) -> list[dict]:
    return [
        {"ebn0_db": r.ebn0_db, "sigma": r.sigma, "frames": r.frames, "frame_errors": r.frame_errors,
         "fer": r.fer, "ci_lo": r.ci95[0], "ci_hi": r.ci95[1]}
        for r in results
    ]
