"""Linear state-space model of an ETS under message passing.

Messages live on the arcs of the VN graph. ``A`` routes arc messages, ``B``
injects channel values, ``B_ex``/``D_ex`` inject external information through
the degree-1 checks, and ``C`` collects soft outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.sparse.csgraph import connected_components
from scipy.special import log_ndtr, logsumexp, ndtr

from .errors import DegreeOverflowError, InvalidInputError, NumericFailureError
from .graphs import SimpleGraph


@dataclass
class SystemMatrices:
    a_sys: np.ndarray
    b: np.ndarray
    b_ex: np.ndarray
    c: np.ndarray
    d_ex: np.ndarray
    arc_order: list[tuple[int, int]]
    ext_owner: list[int] = field(default_factory=list)   # variable of each degree-1 check


def build_system(g: SimpleGraph, gamma: int) -> SystemMatrices:
    degs = g.degrees()
    if max(degs) > gamma:
        raise DegreeOverflowError(f"max degree {max(degs)} exceeds gamma={gamma}")
    arcs = sorted([(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges])
    idx = {arc: i for i, arc in enumerate(arcs)}
    m = len(arcs)
    a_sys = np.zeros((m, m), dtype=np.int64)
    for i, (v, w) in enumerate(arcs):
        for u in g.neighbors(v):
            if u != w:
                a_sys[i, idx[(u, v)]] = 1
    owners = [u for u in range(g.n) for _ in range(gamma - degs[u])]
    b = np.zeros((m, g.n), dtype=np.int64)
    c = np.zeros((g.n, m), dtype=np.int64)
    b_ex = np.zeros((m, len(owners)), dtype=np.int64)
    d_ex = np.zeros((g.n, len(owners)), dtype=np.int64)
    for i, (u, v) in enumerate(arcs):
        b[i, u] = 1
        c[v, i] = 1
    for k, u in enumerate(owners):
        d_ex[u, k] = 1
        for i, (s, _) in enumerate(arcs):
            if s == u:
                b_ex[i, k] = 1
    return SystemMatrices(a_sys, b, b_ex, c, d_ex, arcs, owners)


def spectral_radius(mat: np.ndarray, tol: float = 1e-12, max_iter: int = 1_000_000) -> float:
    """Perron root of a nonnegative matrix by power iteration on ``mat + I``.

    The Collatz-Wielandt ratios of the iterate bracket the root; iteration
    stops when the bracket closes to ``tol`` or when the growth estimate has
    stopped drifting (reducible inputs whose bracket need not close).
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidInputError("spectral_radius needs a square matrix")
    if np.any(mat < 0) or not np.all(np.isfinite(mat)):
        raise InvalidInputError("spectral_radius needs finite nonnegative entries")
    n = mat.shape[0]
    if n == 0:
        return 0.0
    # the root of a reducible matrix is the largest root of its diagonal blocks;
    # singleton blocks contribute their diagonal entry, acyclic parts nothing
    count, label = connected_components(mat != 0, directed=True, connection="strong")
    if count > 1:
        best = 0.0
        for k in range(count):
            sel = np.flatnonzero(label == k)
            block = mat[np.ix_(sel, sel)]
            r = float(block[0, 0]) if sel.size == 1 else _perron_root(block, tol, max_iter)
            best = max(best, r)
        return best
    return _perron_root(mat, tol, max_iter)


def _perron_root(mat: np.ndarray, tol: float, max_iter: int) -> float:
    n = mat.shape[0]
    shifted = mat + np.eye(n)
    x = np.ones(n) / n
    prev = math.inf
    still = 0
    lo = hi = math.nan
    for _ in range(max_iter):
        y = shifted @ x
        ratios = y / x
        lo, hi = ratios.min(), ratios.max()
        if hi - lo < tol:
            return 0.5 * (lo + hi) - 1.0
        est = y.sum() / x.sum()
        still = still + 1 if abs(est - prev) < tol * 0.01 else 0
        if still >= 1000:
            return est - 1.0
        prev = est
        x = y / y.sum()
        if x.min() <= 0:
            # components that died out carry no information about the root
            x = np.maximum(x, 1e-300)
    raise NumericFailureError(f"power iteration did not converge; last bracket [{lo - 1:.12g}, {hi - 1:.12g}]")


def is_irreducible(mat: np.ndarray) -> bool:
    mat = np.asarray(mat)
    n = mat.shape[0]
    if n == 0:
        return False
    if n == 1:
        return bool(mat[0, 0] > 0)
    count, _ = connected_components(mat != 0, directed=True, connection="strong")
    return count == 1


def system_radius(g: SimpleGraph, gamma: int | None = None) -> float:
    return spectral_radius(build_system(g, gamma or max(g.degrees())).a_sys)


# ---------------------------------------------------------------- density evolution

_PHI_SPLIT = 10.0


def _log_phi(x: float) -> float:
    if x <= 0:
        return 0.0
    if x < _PHI_SPLIT:
        return -0.4527 * x ** 0.86 + 0.0218
    return 0.5 * math.log(math.pi / x) - x / 4 + math.log1p(-10 / (7 * x))


def phi(x: float) -> float:
    """Two-piece closed-form approximation of the Gaussian-approximation phi function."""
    return math.exp(_log_phi(x))


def phi_inverse_log(log_y: float) -> float:
    """x with log phi(x) = log_y, using the piece that covers the target value."""
    if log_y >= 0:
        return 0.0
    if log_y >= _log_phi(_PHI_SPLIT - 1e-12):
        return ((0.0218 - log_y) / 0.4527) ** (1 / 0.86)
    hi = 2 * _PHI_SPLIT
    while _log_phi(hi) > log_y:
        hi *= 2
    return brentq(lambda x: _log_phi(x) - log_y, _PHI_SPLIT, hi, xtol=1e-13, rtol=1e-15)


@dataclass
class DeProfile:
    dv: int
    dc: int
    sigma: float
    means: np.ndarray
    sigma_is_variance: bool = False

    @property
    def channel_mean(self) -> float:
        var = self.sigma if self.sigma_is_variance else self.sigma ** 2
        return 2.0 / var


def check_update_mean(mv: float, dc: int) -> float:
    """Mean of the check-to-variable message given variable-to-check mean ``mv``."""
    f = phi(mv)
    if f > 1e-12:
        log_y = math.log(-math.expm1((dc - 1) * math.log1p(-f)))
    else:
        log_y = math.log(dc - 1) + _log_phi(mv)
    return phi_inverse_log(log_y)


def ga_density_evolution(dv: int, dc: int, sigma: float, iters: int, sigma_is_variance: bool = False) -> DeProfile:
    """Check-to-variable LLR means of a (dv, dc)-regular ensemble; entry 0 is 0."""
    if dv < 2 or dc <= dv or sigma <= 0 or iters < 0:
        raise InvalidInputError("need dv >= 2, dc > dv, sigma > 0, iters >= 0")
    var = sigma if sigma_is_variance else sigma * sigma
    m0 = 2.0 / var
    means = np.zeros(iters + 1)
    for l in range(1, iters + 1):
        means[l] = check_update_mean(m0 + (dv - 1) * means[l - 1], dc)
    return DeProfile(dv, dc, sigma, means, sigma_is_variance)


# ---------------------------------------------------------------- trajectories


@dataclass
class TrajectoryResult:
    soft_means: np.ndarray      # shape (L+1, a), or (L+1, 1) for set averages
    log_error_prob: np.ndarray  # natural log, shape (L+1,)

    @property
    def error_prob(self) -> np.ndarray:
        return np.exp(self.log_error_prob)

    @property
    def min_soft_mean(self) -> np.ndarray:
        return self.soft_means.min(axis=1)


def q_function(x: np.ndarray) -> np.ndarray:
    return ndtr(-np.asarray(x, dtype=float))


def log_error_probability(soft: np.ndarray) -> float:
    """log of max over variables of Q(mean / sqrt(2|mean|)); a zero mean gives log 1/2.

    Kept in log form because the probabilities leave double range within a
    dozen iterations.
    """
    soft = np.asarray(soft, dtype=float)
    arg = np.zeros_like(soft)
    nz = soft != 0
    arg[nz] = soft[nz] / np.sqrt(2 * np.abs(soft[nz]))
    return float(log_ndtr(-arg).max())


def error_probability(soft: np.ndarray) -> float:
    return math.exp(log_error_probability(soft))


def run_model(sm: SystemMatrices, lam: np.ndarray, ext: Sequence[float], iters: int) -> TrajectoryResult:
    """Iterate the mean recursion; ``ext[l]`` is the external mean at iteration l."""
    a = sm.c.shape[0]
    A = sm.a_sys.astype(float)
    drive = sm.b @ lam
    x = drive.astype(float)
    soft = np.zeros((iters + 1, a))
    logp = np.zeros(iters + 1)
    soft[0] = lam
    logp[0] = log_error_probability(lam)
    k = sm.b_ex.shape[1]
    for l in range(1, iters + 1):
        lam_ex = np.full(k, float(ext[l]))
        soft[l] = sm.c @ x + lam + sm.d_ex @ lam_ex
        x = A @ x + drive + sm.b_ex @ lam_ex
        logp[l] = log_error_probability(soft[l])
    return TrajectoryResult(soft, logp)


def ets_trajectory(g: SimpleGraph, gamma: int, lambda_mean: float, de: DeProfile, iters: int) -> TrajectoryResult:
    if len(de.means) < iters + 1:
        raise InvalidInputError(f"density-evolution profile covers {len(de.means) - 1} iterations, need {iters}")
    sm = build_system(g, gamma)
    lam = np.full(g.n, float(lambda_mean))
    return run_model(sm, lam, de.means, iters)


def set_trajectory(members: Sequence[SimpleGraph], gamma: int, lambda_mean: float, de: DeProfile, iters: int) -> TrajectoryResult:
    """Per-iteration arithmetic mean over members (log-sum-exp in member order)."""
    if not members:
        raise InvalidInputError("cannot average over an empty set")
    logs = []
    mins = []
    for g in members:
        tr = ets_trajectory(g, gamma, lambda_mean, de, iters)
        logs.append(tr.log_error_prob)
        mins.append(tr.min_soft_mean)
    k = len(members)
    mean_log = logsumexp(np.vstack(logs), axis=0) - math.log(k)
    return TrajectoryResult(np.mean(np.vstack(mins), axis=0)[:, None], mean_log)
