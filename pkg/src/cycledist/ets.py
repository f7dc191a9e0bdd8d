"""Elementary trapping sets through their variable-node graphs.

Covers enumeration of (a, b)-ETS populations, classification into the three
structure-free sets, Turán numbers for the forbidden patterns, and the
lower bound on b that follows from forbidding a pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .canon import enumerate_graphs
from .errors import NoSuchEtsError, NotFoundError, UnknownValueError, UnsupportedSizeError
from .graphs import DB_330, DB_331, THETA_122, Dumbbell, PatternGraph, SimpleGraph, Theta, contains_pattern

THETA_FREE = "theta-free"
DB330_FREE = "db330-free"
DB331_FREE = "db331-free"
OTHER = "other"
SET_TAGS = (THETA_FREE, DB330_FREE, DB331_FREE)

NAMED_PATTERNS = {THETA_FREE: THETA_122, DB330_FREE: DB_330, DB331_FREE: DB_331}


@dataclass
class EtsClass:
    a: int
    b: int
    gamma: int
    members: list[SimpleGraph] = field(default_factory=list)

    @property
    def m(self) -> int:
        return (self.a * self.gamma - self.b) // 2


@dataclass
class StructureSet:
    tag: str
    a: int
    b: int
    gamma: int
    members: list[SimpleGraph] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)


def check_parity(a: int, b: int, gamma: int) -> None:
    total = a * gamma - b
    if a < 1 or b < 0 or total < 0 or total % 2:
        raise NoSuchEtsError(f"no ({a},{b})-ETS exists for gamma={gamma}: a*gamma-b must be even and >= 0")
    if total // 2 > a * (a - 1) // 2:
        raise NoSuchEtsError(f"({a},{b})-ETS with gamma={gamma} needs more edges than K_{a} has")


def min_vn_degree(gamma: int, strict: bool = True) -> int:
    """Lowest admissible VN-graph degree.

    ``strict`` requires every variable to see more degree-2 than degree-1
    checks (degree > gamma/2); otherwise degree >= ceil(gamma/2) is allowed.
    """
    return gamma // 2 + 1 if strict else math.ceil(gamma / 2)


def enumerate_ets(a: int, b: int, gamma: int, connected: bool = True, strict: bool = True) -> EtsClass:
    """All non-isomorphic VN graphs of (a, b)-ETSs in a gamma-variable-regular code."""
    check_parity(a, b, gamma)
    m = (a * gamma - b) // 2
    members = enumerate_graphs(a, m, min_vn_degree(gamma, strict), gamma, connected)
    return EtsClass(a, b, gamma, members)


def classify(g: SimpleGraph, gamma: int) -> str:
    """Tag a VN graph with the structure-free set it belongs to."""
    has_theta = contains_pattern(g, THETA_122)
    has_331 = contains_pattern(g, DB_331)
    # with gamma = 3 no vertex can host two cycles, so the shared-vertex dumbbell never occurs
    has_330 = True if gamma == 3 else contains_pattern(g, DB_330)
    if not has_theta and has_330 and has_331:
        return THETA_FREE
    if gamma != 3 and has_theta and has_331 and not contains_pattern(g, DB_330):
        return DB330_FREE
    if has_theta and has_330 and not has_331:
        return DB331_FREE
    return OTHER


def structure_sets(population: EtsClass) -> dict[str, StructureSet]:
    sets = {tag: StructureSet(tag, population.a, population.b, population.gamma) for tag in SET_TAGS}
    for g in population.members:
        tag = classify(g, population.gamma)
        if tag != OTHER:
            sets[tag].members.append(g)
    return sets


# ---------------------------------------------------------------- Turán numbers


def _half_sq(n: int) -> int:
    return n * n // 4


def turan_threshold(p: PatternGraph) -> int | None:
    """Smallest n from which a closed formula for ex(n, p) is known, else None."""
    if p == THETA_122:
        return 4
    if p == DB_330:
        return 5
    if p == DB_331:
        return 6
    if isinstance(p, Dumbbell):
        r1, r2, q = p.params
        if (r1 + r2) % 2 == 1:
            k = 3 * r1 + 3 * r2 + 2 * q - 12
            return k * k + k
        if r1 % 2 == 1 and r2 % 2 == 1:
            k = 3 * r1 + 3 * r2 + 2 * q - 11
            return k * k + k
    return None


def turan_regime(p: PatternGraph, n: int) -> str:
    """'complete', 'exact' or 'asymptotic' (formula taken on trust) or 'unknown'."""
    if n < p.n_vertices:
        return "complete"
    if p in (THETA_122, DB_330, DB_331):
        return "exact"
    t = turan_threshold(p)
    if t is not None and n >= t:
        return "asymptotic"
    return "unknown"


def turan_exact(p: PatternGraph, n: int) -> int:
    """ex(n, p) from closed formulas; raises when no formula covers (p, n)."""
    if n < 1:
        raise UnknownValueError("n must be >= 1")
    if n < p.n_vertices:
        return n * (n - 1) // 2
    if p == THETA_122:
        return _half_sq(n)
    if p == DB_330:
        return _half_sq(n) + 1
    if p == DB_331:
        return 12 if n == 6 else _half_sq(n) + (n + 1) // 2 - 1
    t = turan_threshold(p)
    if t is None or n < t:
        raise UnknownValueError(f"no exact value of ex({n}, {p.name}) is available")
    r1, r2, q = p.params
    if (r1 + r2) % 2 == 1:
        return _half_sq(n)
    if q == 0:
        return _half_sq(n) + 1
    return _half_sq(n) + (n + 1) // 2 - 1


def turan_value(p: PatternGraph, n: int) -> int:
    """Exact formula where available, otherwise an exhaustive search for small n."""
    try:
        return turan_exact(p, n)
    except UnknownValueError:
        if n <= 10:
            return turan_bruteforce(p, n)[0]
        raise


def _free(p: PatternGraph):
    return lambda g: not contains_pattern(g, p)


def turan_bruteforce(p: PatternGraph, n: int, mode: str = "auto") -> tuple[int, SimpleGraph]:
    """ex(n, p) by search, independent of any formula, with one extremal witness.

    ``labeled`` scans all labeled graphs with m edges for m descending
    (n <= 7); ``augment`` generates p-free graphs up to isomorphism with
    hereditary pruning (n <= 10).
    """
    if mode == "auto":
        mode = "labeled" if n <= 7 else "augment"
    if (mode == "labeled" and n > 7) or n > 10:
        raise UnsupportedSizeError(f"brute-force Turán search limited to n <= 7 (labeled) or 10, got {n}")
    all_pairs = list(combinations(range(n), 2))
    if mode == "labeled":
        for m in range(len(all_pairs), -1, -1):
            for es in combinations(all_pairs, m):
                g = SimpleGraph(n, frozenset(es))
                if not contains_pattern(g, p):
                    return m, g
    else:
        free = _free(p)
        for m in range(len(all_pairs), -1, -1):
            found = enumerate_graphs(n, m, hereditary=free)
            if found:
                return m, found[0]
    raise AssertionError("the empty graph is always pattern-free")


# ---------------------------------------------------------------- bounds on b


def ets_bound_b(a: int, gamma: int, p: PatternGraph) -> int:
    """Least b compatible with a p-free VN graph on a vertices: a*gamma - 2 ex(a, p)."""
    return a * gamma - 2 * turan_value(p, a)


def corollary_bound(a: int, gamma: int, p: PatternGraph) -> float:
    """Closed-form lower bounds on b (real valued) for the three named patterns."""
    if p == THETA_122:
        return a * gamma - a * a / 2
    if p == DB_330:
        return a * gamma - a * a / 2 - 2
    if p == DB_331:
        return a * gamma - (a + 1) ** 2 / 2 + 2
    raise UnknownValueError(f"no closed-form bound for {p.name}")


def parity_ok(a: int, b: int, gamma: int) -> bool:
    if gamma % 2:
        return (a - b) % 2 == 0
    return b % 2 == 0


def smallest_a(b: int, gamma: int, p: PatternGraph, a_max: int = 30, require_a_ge_b: bool = True) -> int:
    """Smallest a admitting a p-free (a, b)-ETS according to the Turán bound on b.

    Candidates must satisfy the parity rules and, by default, a >= b.
    """
    start = max(1, b) if require_a_ge_b else 1
    for a in range(start, a_max + 1):
        if not parity_ok(a, b, gamma):
            continue
        if ets_bound_b(a, gamma, p) <= b:
            return a
    raise NotFoundError(f"no a <= {a_max} for b={b}, gamma={gamma}, {p.name}")


TABLE1_LAYOUT = {3: range(0, 4), 4: range(0, 7, 2), 5: range(0, 8)}


def table1(a_max: int = 30) -> list[dict]:
    rows = []
    for gamma, bs in TABLE1_LAYOUT.items():
        for b in bs:
            row = {"gamma": gamma, "b": b}
            for tag, p in NAMED_PATTERNS.items():
                row[tag] = smallest_a(b, gamma, p, a_max)
            rows.append(row)
    return rows


# ---------------------------------------------------------------- spectral tables


def population_rows(gamma: int, a_range: Iterable[int], b_range: Iterable[int]) -> list[tuple[int, int]]:
    pairs = []
    for a in a_range:
        for b in b_range:
            try:
                check_parity(a, b, gamma)
            except NoSuchEtsError:
                continue
            pairs.append((a, b))
    return pairs


def radius_summary(values: Sequence[float]) -> tuple[int, float, float]:
    if not values:
        return 0, float("nan"), float("nan")
    arr = np.asarray(values, dtype=float)
    return len(arr), float(np.median(arr)), float(arr.mean())
