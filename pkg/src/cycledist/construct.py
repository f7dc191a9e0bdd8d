"""Progressive edge growth: classical, cycle-weighted, and quasi-cyclic cycle-weighted.

When every check is already reachable from the current variable, a new edge
must close cycles. The cycle-weighted variants then pick, among the deepest
checks, the one whose shortest paths run through the least-weighted
variables, and afterwards charge those variables ``1/cycle_length`` per path
occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConstructionError, InvalidInputError
from .qc import ExponentMatrix, INF, lift
from .tanner import LayeredExpansion, TannerGraph, bfs_expansion

TIE_EPS = 1e-9


@dataclass
class ConstructionConfig:
    n_v: int
    n_c: int
    degrees: Sequence[int]
    seed: int = 0

    def __post_init__(self) -> None:
        self.degrees = [int(d) for d in self.degrees]
        if len(self.degrees) != self.n_v:
            raise InvalidInputError("degree sequence length must equal n_v")
        if any(d < 1 or d > self.n_c for d in self.degrees):
            raise InvalidInputError("each degree must lie in [1, n_c]")

    @classmethod
    def regular(cls, n_v: int, n_c: int, d: int, seed: int = 0) -> "ConstructionConfig":
        return cls(n_v, n_c, [d] * n_v, seed)


@dataclass
class WeightEvent:
    variable: int
    check: int
    cycle_len: int
    n_paths: int
    occurrences: int          # sum over variables of per-path occurrences


@dataclass
class WeightState:
    wt: np.ndarray
    events: list[WeightEvent] = field(default_factory=list)

    @classmethod
    def zeros(cls, n: int) -> "WeightState":
        return cls(np.zeros(n))


class _Builder:
    """Mutable Tanner graph exposing the attributes ``bfs_expansion`` reads."""

    def __init__(self, n_v: int, n_c: int):
        self.n_v, self.n_c = n_v, n_c
        self.var_adj: list[list[int]] = [[] for _ in range(n_v)]
        self.check_adj: list[list[int]] = [[] for _ in range(n_c)]

    def add(self, v: int, c: int) -> None:
        if c in self.var_adj[v]:
            raise ConstructionError(f"edge {v}-{c} already present")
        self.var_adj[v].append(c)
        self.check_adj[c].append(v)

    def freeze(self) -> TannerGraph:
        return TannerGraph(self.n_v, self.n_c, tuple(tuple(a) for a in self.var_adj))


# ---------------------------------------------------------------- weights


def check_weight(exp: LayeredExpansion, c: int, w_state: WeightState | np.ndarray) -> float:
    """Sum over retained root-to-c paths of the weights of the variables on each path."""
    wt = w_state.wt if isinstance(w_state, WeightState) else np.asarray(w_state)
    if c not in exp.check_depth:
        raise InvalidInputError(f"check {c} not reached in this expansion")
    vcount, ccount = exp.path_counts()
    vsum = {exp.root: float(wt[exp.root])}
    csum: dict[int, float] = {}
    target_depth = exp.check_depth[c]
    for depth, layer in enumerate(exp.layers[1:target_depth + 1], start=1):
        if depth % 2:
            for cc in layer:
                csum[cc] = sum(vsum[v] for v in exp.check_parents[cc])
        else:
            for v in layer:
                vsum[v] = sum(csum[cc] for cc in exp.var_parents[v]) + vcount[v] * float(wt[v])
    return csum[c]


def path_occurrences(exp: LayeredExpansion, c: int) -> dict[int, int]:
    """How many retained root-to-c paths pass through each variable."""
    vcount, _ = exp.path_counts()
    down_c = {c: 1}
    down_v: dict[int, int] = {}
    for depth in range(exp.check_depth[c], 0, -1):
        if depth % 2:
            for cc, g in list(down_c.items()):
                if exp.check_depth[cc] != depth:
                    continue
                for v in exp.check_parents[cc]:
                    down_v[v] = down_v.get(v, 0) + g
        else:
            for v, g in list(down_v.items()):
                if exp.var_depth[v] != depth:
                    continue
                for cc in exp.var_parents[v]:
                    down_c[cc] = down_c.get(cc, 0) + g
    return {v: vcount[v] * g for v, g in down_v.items()}


def update_weights(w_state: WeightState, occurrences: dict[int, int], cycle_len: int) -> WeightState:
    """Add ``occurrences[v] / cycle_len`` to each listed variable."""
    if cycle_len < 4 or cycle_len % 2:
        raise InvalidInputError("cycle length must be even and >= 4")
    w = 1.0 / cycle_len
    for v, k in occurrences.items():
        w_state.wt[v] += k * w
    return w_state


def _pick(rng: np.random.Generator, cands: Sequence[int]) -> int:
    cands = sorted(cands)
    return cands[int(rng.integers(len(cands)))]


def _min_by(cands: Sequence[int], key) -> list[int]:
    vals = {c: key(c) for c in cands}
    lo = min(vals.values())
    return [c for c in cands if vals[c] <= lo + TIE_EPS]


# ---------------------------------------------------------------- PEG


def _peg(cfg: ConstructionConfig, cycle_aware: bool, w_state: WeightState | None = None) -> TannerGraph:
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    b = _Builder(cfg.n_v, cfg.n_c)
    ws = w_state if w_state is not None else WeightState.zeros(cfg.n_v)
    for v in range(cfg.n_v):
        for k in range(cfg.degrees[v]):
            if k == 0:
                cands = _min_by(range(cfg.n_c), lambda c: len(b.check_adj[c]))
                b.add(v, _pick(rng, cands))
                continue
            exp = bfs_expansion(b, v)
            unreached = [c for c in range(cfg.n_c) if c not in exp.check_depth]
            if unreached:
                cands = _min_by(unreached, lambda c: len(b.check_adj[c]))
                b.add(v, _pick(rng, cands))
                continue
            own = set(b.var_adj[v])
            layers = [[c for c in layer if c not in own] for layer in exp.check_layers]
            deepest = next((layer for layer in reversed(layers) if layer), None)
            if deepest is None:
                raise ConstructionError(f"variable {v} cannot take another edge")
            depth = exp.check_depth[deepest[0]]
            if cycle_aware:
                cands = _min_by(deepest, lambda c: check_weight(exp, c, ws))
            else:
                cands = _min_by(deepest, lambda c: len(b.check_adj[c]))
            c = _pick(rng, cands)
            if cycle_aware:
                occ = path_occurrences(exp, c)
                update_weights(ws, occ, depth + 1)
                ws.events.append(WeightEvent(v, c, depth + 1, exp.path_counts()[1][c], sum(occ.values())))
            b.add(v, c)
    return b.freeze()


def peg_classic(cfg: ConstructionConfig) -> TannerGraph:
    return _peg(cfg, cycle_aware=False)


def peg_cycle(cfg: ConstructionConfig, w_state: WeightState | None = None) -> TannerGraph:
    return _peg(cfg, cycle_aware=True, w_state=w_state)


# ---------------------------------------------------------------- quasi-cyclic PEG


def qc_peg_cycle(base: np.ndarray, p: int, seed: int = 0, cycle_aware: bool = True) -> tuple[ExponentMatrix, TannerGraph]:
    """Assign one circulant shift per nonzero base entry, column block by column block.

    Edges grow from the first variable of each block; each accepted edge is
    completed to its full circulant. With ``cycle_aware=False`` the deepest
    available check is chosen by degree and chance only (classical QC-PEG).
    """
    base = np.asarray(base, dtype=np.int64)
    if base.ndim != 2 or not np.isin(base, (0, 1)).all():
        raise InvalidInputError("base matrix must be a binary 2-D array")
    if p < 2:
        raise InvalidInputError("lifting degree must be >= 2")
    gamma, eta = base.shape
    if np.any(base.sum(axis=0) == 0):
        raise ConstructionError("every column block of the base matrix needs a nonzero entry")
    rng = np.random.Generator(np.random.PCG64(seed))
    b = _Builder(eta * p, gamma * p)
    block_wt = np.zeros(eta)
    shifts = np.full((gamma, eta), INF, dtype=np.int64)

    def wt_view() -> np.ndarray:
        return np.repeat(block_wt, p)

    for i in range(eta):
        root = i * p
        rows = [r for r in range(gamma) if base[r, i]]
        assigned: set[int] = set()
        for k in range(len(rows)):
            available = [r * p + x for r in rows if r not in assigned for x in range(p)]
            if k == 0:
                c = _pick(rng, available)
            else:
                exp = bfs_expansion(b, root)
                unreached = [c for c in available if c not in exp.check_depth]
                if unreached:
                    c = _pick(rng, unreached)
                else:
                    depth = max(exp.check_depth[c] for c in available)
                    deepest = [c for c in available if exp.check_depth[c] == depth]
                    if cycle_aware:
                        wv = wt_view()
                        cands = _min_by(deepest, lambda cc: check_weight(exp, cc, wv))
                    else:
                        cands = _min_by(deepest, lambda cc: len(b.check_adj[cc]))
                    c = _pick(rng, cands)
                    if cycle_aware:
                        w = 1.0 / (depth + 1)
                        for v, occ in path_occurrences(exp, c).items():
                            block_wt[v // p] += occ * w
            r, x = divmod(c, p)
            s = (-x) % p
            shifts[r, i] = s
            assigned.add(r)
            for rr in range(p):
                b.add(i * p + (rr + s) % p, r * p + rr)
    e = ExponentMatrix(p, shifts)
    t = b.freeze()
    return e, t


def qc_peg_classic(base: np.ndarray, p: int, seed: int = 0) -> tuple[ExponentMatrix, TannerGraph]:
    return qc_peg_cycle(base, p, seed, cycle_aware=False)


def regular_base(gamma: int, eta: int) -> np.ndarray:
    return np.ones((gamma, eta), dtype=np.int64)


def lifted_matches(e: ExponentMatrix, t: TannerGraph) -> bool:
    return lift(e) == t
