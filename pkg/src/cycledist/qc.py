"""Quasi-cyclic codes: exponent matrices, circulant lifting and the walk condition for cycles.

Block (i, j) with shift s places a 1 at row ``i*p + r``, column
``j*p + (r + s) mod p``. Infinite entries (stored as -1) are zero blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, InvalidWalkError
from .tanner import TannerGraph

INF = -1
_INF_TOKENS = {"inf", "i", "-", "x", "∞", "-1"}

FIXTURES = {
    "c1": "c1.txt",
    "chordless": "chordless_p27.txt",
    "c2": "c2.txt",
    "tsfree": "tsfree_p80.txt",
    "c3": "c3.txt",
    "irregular-tsfree": "irregular_tsfree_p72.txt",
    "c4": "c4.txt",
    "bg2": "bg2_p64.txt",
}


@dataclass(frozen=True)
class ExponentMatrix:
    p: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        e = np.array(self.entries, dtype=np.int64)
        if e.ndim != 2:
            raise InvalidInputError("exponent matrix must be two-dimensional")
        if self.p < 2:
            raise InvalidInputError("lifting degree must be >= 2")
        if np.any((e != INF) & ((e < 0) | (e >= self.p))):
            raise InvalidInputError(f"finite exponents must lie in [0, {self.p})")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def gamma(self) -> int:
        return self.entries.shape[0]

    @property
    def eta(self) -> int:
        return self.entries.shape[1]

    def base(self) -> np.ndarray:
        return (self.entries != INF).astype(np.uint8)

    def is_fully_connected(self) -> bool:
        return bool(self.base().all())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExponentMatrix) and self.p == other.p and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.p, self.entries.tobytes()))


def parse_exponent_matrix(text: str) -> ExponentMatrix:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        gamma, eta, p = (int(x) for x in lines[0][:3])
        rows = []
        for ln in lines[1:1 + gamma]:
            if len(ln) != eta:
                raise InvalidInputError(f"expected {eta} entries per row, got {len(ln)}")
            rows.append([INF if tok.lower() in _INF_TOKENS else int(tok) for tok in ln])
    except ValueError:
        raise InvalidInputError("malformed exponent matrix") from None
    if len(rows) != gamma:
        raise InvalidInputError(f"expected {gamma} rows, got {len(rows)}")
    return ExponentMatrix(p, np.array(rows))


def format_exponent_matrix(e: ExponentMatrix) -> str:
    lines = [f"{e.gamma} {e.eta} {e.p}"]
    for row in e.entries:
        lines.append(" ".join("inf" if x == INF else str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def read_exponent_matrix(path: str) -> ExponentMatrix:
    with open(path) as fh:
        return parse_exponent_matrix(fh.read())


def load_fixture(name: str) -> ExponentMatrix:
    if name not in FIXTURES:
        raise InvalidInputError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    text = resources.files("cycledist.data").joinpath(FIXTURES[name]).read_text()
    return parse_exponent_matrix(text)


def lift(e: ExponentMatrix) -> TannerGraph:
    p = e.p
    adj: list[list[int]] = [[] for _ in range(p * e.eta)]
    for i in range(e.gamma):
        for j in range(e.eta):
            s = int(e.entries[i, j])
            if s == INF:
                continue
            for r in range(p):
                adj[j * p + (r + s) % p].append(i * p + r)
    return TannerGraph(p * e.eta, p * e.gamma, tuple(tuple(a) for a in adj))


def qc_cycle_exists(e: ExponentMatrix, walk: Sequence[tuple[int, int]], k: int | None = None) -> bool:
    """Does the closed block walk (m_0, n_0), ..., (m_{k-1}, n_{k-1}) lift to a 2k-cycle?"""
    walk = [(int(m), int(n)) for m, n in walk]
    k = len(walk) if k is None else k
    if k < 2 or len(walk) != k:
        raise InvalidWalkError("walk must list k >= 2 block positions")
    total = 0
    for i in range(k):
        m, n = walk[i]
        m_next, n_next = walk[(i + 1) % k]
        if m == m_next or n == n_next:
            raise InvalidWalkError(f"consecutive positions {walk[i]} and {walk[(i + 1) % k]} repeat a row or column")
        a, b = e.entries[m, n], e.entries[m, n_next]
        if a == INF or b == INF:
            raise InvalidWalkError(f"walk touches an infinite entry in row {m}")
        total += int(a) - int(b)
    return total % e.p == 0


def girth_qc(e: ExponentMatrix, k_max: int = 6) -> float:
    """Smallest 2k <= 2*k_max admitting a closed walk with zero shift sum, else ``math.inf``.

    States (current column, last row, running sum mod p) are tracked as
    boolean arrays per start (n_0, m_0), so walks are never listed
    explicitly.
    """
    if k_max < 2:
        raise InvalidInputError("k_max must be >= 2")
    ent = e.entries
    fin = ent != INF
    gamma, eta, p = e.gamma, e.eta, e.p
    # moves[m] = list of (n, n', shift) for the step through row m
    moves = [
        [(n, n2, (int(ent[m, n]) - int(ent[m, n2])) % p)
         for n in range(eta) if fin[m, n] for n2 in range(eta) if n2 != n and fin[m, n2]]
        for m in range(gamma)
    ]
    best = math.inf
    for n0 in range(eta):
        for m0 in range(gamma):
            if not fin[m0, n0]:
                continue
            reach = np.zeros((eta, gamma, p), dtype=bool)   # [column, last row, sum]
            for n, n2, sh in moves[m0]:
                if n == n0:
                    reach[n2, m0, sh] = True
            for t in range(2, k_max + 1):
                if 2 * t >= best:
                    break
                cnt = reach.sum(axis=1)                       # per column and sum, over last rows
                nxt = np.zeros_like(reach)
                for m in range(gamma):
                    allowed = (cnt - reach[:, m, :]) > 0     # arrived through a row other than m
                    for n, n2, sh in moves[m]:
                        if allowed[n].any():
                            nxt[n2, m] |= np.roll(allowed[n], sh)
                reach = nxt
                closing = reach[n0, :, 0].copy()
                closing[m0] = False
                if closing.any():
                    best = min(best, 2 * t)
                    break
    return best
