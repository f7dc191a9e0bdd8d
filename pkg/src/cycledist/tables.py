"""Row generators for the smallest-a table, the spectral-radius grids and the set trajectories."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .ets import SET_TAGS, enumerate_ets, population_rows, radius_summary, structure_sets, table1
from .graphs import Dumbbell, Theta, dumbbell_graph, theta_graph
from .statespace import TrajectoryResult, ets_trajectory, ga_density_evolution, set_trajectory, system_radius

CYCLE_PAIRS = ((3, 3), (3, 4), (3, 5), (4, 4), (4, 5), (5, 5))
DISTANCES = (-2, -1, 0, 1, 2, 3, 4)


def radius_pattern(r1: int, r2: int, dist: int) -> Theta | Dumbbell | None:
    """The theta/dumbbell graph joining a C_r1 and a C_r2 at the given distance, if any.

    A negative distance -k means the cycles share a path of k edges; the
    third branch must be long enough to keep the graph simple.
    """
    if dist >= 0:
        return Dumbbell(r1, r2, dist)
    k = -dist
    l2, l3 = r1 - k, r2 - k
    # the shared path must be the shortest branch for the two cycles to be C_r1 and C_r2
    if k > min(l2, l3):
        return None
    return Theta(*sorted((k, l2, l3)))


def table2() -> list[dict]:
    rows = []
    for d in DISTANCES:
        for r1, r2 in CYCLE_PAIRS:
            p = radius_pattern(r1, r2, d)
            if p is None:
                continue
            rows.append({"distance": d, "cycles": f"C{r1},C{r2}", "graph": p.name,
                         "rho": system_radius(p.graph())})
    return rows


@dataclass
class SetRow:
    gamma: int
    a: int
    b: int
    tag: str
    count: int
    median: float
    mean: float


TABLE34_RANGES = {3: (range(4, 11), range(1, 5)), 4: (range(4, 11), range(1, 5))}


def table34(gamma: int, a_values=None, b_values=None, min_nonempty: int = 2) -> list[SetRow]:
    """Per-(a, b) structure-set statistics; rows kept when ``min_nonempty`` sets are nonempty.

    b = 0 populations are regular and carry no information, so they are
    never listed.
    """
    if gamma not in TABLE34_RANGES and (a_values is None or b_values is None):
        raise InvalidInputError(f"no default ranges for gamma={gamma}")
    a_def, b_def = TABLE34_RANGES.get(gamma, (None, None))
    rows = []
    for a, b in population_rows(gamma, a_values or a_def, b_values or b_def):
        if b == 0:
            continue
        sets = structure_sets(enumerate_ets(a, b, gamma))
        tags = [t for t in SET_TAGS if not (gamma == 3 and t == SET_TAGS[1])]
        if sum(1 for t in tags if sets[t].members) < min_nonempty:
            continue
        for t in tags:
            n, med, mean = radius_summary([system_radius(g, gamma) for g in sets[t].members])
            rows.append(SetRow(gamma, a, b, t, n, med, mean))
    return rows


@dataclass
class Fig5Config:
    a: int = 10
    b: int = 4
    gamma: int = 4
    dc: int = 8
    sigma: float = 0.83
    lambda_mean: float = 0.01
    iterations: int = 60


def fig5(cfg: Fig5Config | None = None) -> dict[str, TrajectoryResult]:
    cfg = cfg or Fig5Config()
    sets = structure_sets(enumerate_ets(cfg.a, cfg.b, cfg.gamma))
    de = ga_density_evolution(cfg.gamma, cfg.dc, cfg.sigma, cfg.iterations)
    return {t: set_trajectory(sets[t].members, cfg.gamma, cfg.lambda_mean, de, cfg.iterations)
            for t in SET_TAGS if sets[t].members}


def fig5_single(g, cfg: Fig5Config | None = None) -> TrajectoryResult:
    cfg = cfg or Fig5Config()
    de = ga_density_evolution(cfg.gamma, cfg.dc, cfg.sigma, cfg.iterations)
    return ets_trajectory(g, cfg.gamma, cfg.lambda_mean, de, cfg.iterations)


def table1_rows() -> list[dict]:
    return table1()


def log10_curves(res: dict[str, TrajectoryResult]) -> np.ndarray:
    return np.vstack([res[t].log_error_prob for t in SET_TAGS if t in res]) / np.log(10)


# ---------------------------------------------------------------- FER comparison


@dataclass
class FerComparison:
    ebn0_grid: tuple[float, ...] = (2.0, 2.5, 3.0, 3.25, 3.5, 3.75, 4.0)
    fixture: str = "c2"
    baseline_seed: int = 0
    sim_seed: int = 2024
    min_frame_errors: int = 100
    max_frames: int = 10 ** 6
    max_iter: int = 20
    workers: int | None = None


def fer_comparison(cfg: FerComparison | None = None, progress=None) -> dict[str, list]:
    """FER of a fixture code and of a classical QC-PEG code with the same base and lifting degree.

    The sweep climbs the Eb/N0 grid and stops after the first point where
    either code falls short of ``min_frame_errors`` within ``max_frames``.
    """
    from .construct import qc_peg_classic
    from .qc import lift, load_fixture
    from .sim import ChannelConfig, StopRule, fer_sweep

    cfg = cfg or FerComparison()
    e = load_fixture(cfg.fixture)
    codes = {cfg.fixture: lift(e), "qc-peg": qc_peg_classic(e.base(), e.p, cfg.baseline_seed)[1]}
    stop = StopRule(cfg.min_frame_errors, cfg.max_frames)
    out: dict[str, list] = {name: [] for name in codes}
    for i, x in enumerate(cfg.ebn0_grid):
        short = False
        for name, t in codes.items():
            # same stream for both codes at a point: common noise realisations
            r = fer_sweep(t, [ChannelConfig(ebn0_db=x)], stop, cfg.sim_seed + 1000 * i, cfg.workers, cfg.max_iter)[0]
            out[name].append(r)
            if progress:
                progress(name, r)
            short |= r.frame_errors < cfg.min_frame_errors
        if short:
            break
    return out


def comparison_point(out: dict[str, list], min_frame_errors: int = 100) -> int | None:
    """Index of the highest grid point where every code recorded enough frame errors."""
    names = list(out)
    n = min(len(out[k]) for k in names)
    ok = [i for i in range(n) if all(out[k][i].frame_errors >= min_frame_errors for k in names)]
    return ok[-1] if ok else None
