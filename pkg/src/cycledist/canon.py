"""Canonical labeling and isomorph-free generation of small graphs.

Canonical labeling uses colour refinement followed by an
individualization-refinement search. The canonical encoding is the
lexicographically smallest tuple of permuted adjacency rows over all leaves
of the search tree. Automorphisms found at equal leaves prune sibling
branches that lie in an already explored orbit.

Generation is canonical augmentation by vertex addition: a graph on k+1
vertices is accepted from its parent only when the added vertex lies in the
orbit of a canonically chosen minimum-degree vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, Sequence

from .errors import InvalidInputError, UnsupportedSizeError
from .graphs import SimpleGraph, _bits

MAX_CANON_N = 12


@dataclass(frozen=True, order=True)
class CanonicalForm:
    label: bytes

    def hex(self) -> str:
        return self.label.hex()


@dataclass
class Labeling:
    key: tuple
    order: list[int]           # order[position] = vertex
    automorphisms: list[tuple[int, ...]]


def _refine(out: Sequence[int], inn: Sequence[int] | None, col: list[int]) -> list[int]:
    n = len(col)
    k = max(col) + 1
    while True:
        cells = [0] * k
        for v in range(n):
            cells[col[v]] |= 1 << v
        if inn is None:
            sig = [(col[v],) + tuple((out[v] & c).bit_count() for c in cells) for v in range(n)]
        else:
            sig = [
                (col[v],)
                + tuple((out[v] & c).bit_count() for c in cells)
                + tuple((inn[v] & c).bit_count() for c in cells)
                for v in range(n)
            ]
        uniq = sorted(set(sig))
        if len(uniq) == k:
            return col
        rank = {s: i for i, s in enumerate(uniq)}
        col = [rank[s] for s in sig]
        k = len(uniq)


def _normalize_colors(n: int, colors: Sequence[int] | None) -> tuple[list[int], tuple]:
    if colors is None:
        return [0] * n, ()
    vals = sorted(set(colors))
    rank = {c: i for i, c in enumerate(vals)}
    census = tuple((c, sum(1 for x in colors if x == c)) for c in vals)
    return [rank[c] for c in colors], census


def canonical_labeling(
    out: Sequence[int],
    colors: Sequence[int] | None = None,
    inn: Sequence[int] | None = None,
) -> Labeling:
    """Canonical labeling of a (possibly directed, possibly coloured) graph.

    ``out[v]`` is the bitmask of v's out-neighbours. Pass ``inn`` for directed
    graphs; leave it as None for undirected ones.
    """
    n = len(out)
    col0, census = _normalize_colors(n, colors)
    state: dict = {"first": None, "first_order": None, "best": None, "best_order": None}
    autos: list[tuple[int, ...]] = []

    def leaf(col: list[int]) -> None:
        rows = [0] * n
        for v in range(n):
            r = 0
            for u in _bits(out[v]):
                r |= 1 << col[u]
            rows[col[v]] = r
        key = tuple(rows)
        order = [0] * n
        for v in range(n):
            order[col[v]] = v
        if state["first"] is None:
            state["first"], state["first_order"] = key, order
            state["best"], state["best_order"] = key, order
            return
        for ref_key, ref_order in ((state["first"], state["first_order"]), (state["best"], state["best_order"])):
            if key == ref_key:
                perm = tuple(ref_order[col[v]] for v in range(n))
                if any(perm[v] != v for v in range(n)) and perm not in autos:
                    autos.append(perm)
                return
        if key < state["best"]:
            state["best"], state["best_order"] = key, order

    def same_orbit_rep(prefix: list[int], x: int, explored: list[int]) -> bool:
        gens = [g for g in autos if all(g[p] == p for p in prefix)]
        if not gens:
            return False
        parent = list(range(n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in gens:
            for v in range(n):
                ra, rb = find(v), find(g[v])
                if ra != rb:
                    parent[ra] = rb
        rx = find(x)
        return any(find(y) == rx for y in explored)

    def search(col: list[int], prefix: list[int]) -> None:
        col = _refine(out, inn, col)
        k = max(col) + 1
        if k == n:
            leaf(col)
            return
        sizes = [0] * k
        for c in col:
            sizes[c] += 1
        target = min((s, c) for c, s in enumerate(sizes) if s > 1)[1]
        members = [v for v in range(n) if col[v] == target]
        explored: list[int] = []
        for x in members:
            if explored and same_orbit_rep(prefix, x, explored):
                continue
            explored.append(x)
            child = [
                c + 1 if (c > target or (c == target and v != x)) else c
                for v, c in enumerate(col)
            ]
            search(child, prefix + [x])

    if n == 0:
        return Labeling((), [], [])
    search(col0, [])
    return Labeling((n, census) + state["best"], state["best_order"], autos)


def _encode(key: tuple, n: int) -> bytes:
    width = (n + 7) // 8 or 1
    head = repr(key[:2]).encode()
    return head + b"|" + b"".join(int(r).to_bytes(width, "big") for r in key[2:])


def canonical_form(g: SimpleGraph, colors: Sequence[int] | None = None) -> CanonicalForm:
    if g.n > MAX_CANON_N:
        raise UnsupportedSizeError(f"canonical labeling supports n <= {MAX_CANON_N}, got {g.n}")
    lab = canonical_labeling(g.adj, colors)
    return CanonicalForm(_encode(lab.key, g.n))


def canonical_digraph_form(n: int, arcs: Sequence[tuple[int, int]]) -> CanonicalForm:
    """Canonical form of a directed graph given as (tail, head) arcs."""
    out = [0] * n
    inn = [0] * n
    for u, v in arcs:
        out[u] |= 1 << v
        inn[v] |= 1 << u
    lab = canonical_labeling(out, None, inn)
    return CanonicalForm(_encode(lab.key, n))


def is_isomorphic(g: SimpleGraph, h: SimpleGraph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)


def canonical_graph(g: SimpleGraph) -> SimpleGraph:
    lab = canonical_labeling(g.adj)
    pos = [0] * g.n
    for p, v in enumerate(lab.order):
        pos[v] = p
    return g.relabel(pos)


# ---------------------------------------------------------------- generation


def _same_orbit(adj: Sequence[int], lab: Labeling, a: int, b: int) -> bool:
    n = len(adj)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in lab.automorphisms:
        for v in range(n):
            ra, rb = find(v), find(g[v])
            if ra != rb:
                parent[ra] = rb
    if find(a) == find(b):
        return True
    ca = canonical_labeling(adj, [1 if v == a else 0 for v in range(n)]).key
    cb = canonical_labeling(adj, [1 if v == b else 0 for v in range(n)]).key
    return ca == cb


def _deletion_keys(adj: Sequence[int]) -> list[tuple]:
    deg = [r.bit_count() for r in adj]
    return [(deg[v], tuple(sorted(deg[u] for u in _bits(adj[v])))) for v in range(len(adj))]


def _is_canonical_child(adj: list[int]) -> tuple[bool, Labeling | None]:
    """Is the last vertex in the orbit of the canonical deletion vertex?"""
    n = len(adj)
    new = n - 1
    keys = _deletion_keys(adj)
    best = min(keys)
    if keys[new] != best:
        return False, None
    cands = [v for v in range(n) if keys[v] == best]
    if len(cands) == 1:
        return True, None
    lab = canonical_labeling(adj)
    pos = {v: p for p, v in enumerate(lab.order)}
    w = max(cands, key=lambda v: pos[v])
    if w == new:
        return True, lab
    return _same_orbit(adj, lab, new, w), lab


def _extend(
    adj: list[int],
    n_target: int,
    m_target: int,
    lo: int,
    hi: int,
    hereditary: Callable[[list[int]], bool] | None,
) -> Iterator[list[int]]:
    """Canonical children of one parent that can still reach the targets."""
    k = len(adj)
    deg = [r.bit_count() for r in adj]
    e = sum(deg) // 2
    rem = n_target - k - 1            # vertices still to add after this child
    final = rem == 0
    open_vs = [v for v in range(k) if deg[v] < hi]
    if final:
        d_range = [m_target - e] if lo <= m_target - e <= hi else []
    else:
        d_range = range(0, min(hi, k) + 1)
    lab_parent = None
    seen: set = set()
    for d in d_range:
        if d > len(open_vs):
            break
        if d + rem < lo:
            continue
        e_child = e + d
        if e_child > m_target:
            break
        # every later vertex has degree at most (current minimum + steps taken)
        cap = sum(min(hi, d + i) for i in range(1, rem + 1))
        if m_target - e_child > cap:
            continue
        for combo in combinations(open_vs, d):
            smask = 0
            for v in combo:
                smask |= 1 << v
            ok = True
            deficit = max(0, lo - d)
            for v in range(k):
                dv = deg[v] + (smask >> v & 1)
                if dv < d or dv + rem < lo:
                    ok = False
                    break
                deficit += max(0, lo - dv)
            if not ok:
                continue
            future = m_target - e_child
            # each future edge fixes at most one unit of existing deficit
            if future < deficit or 2 * future < deficit + rem * lo:
                continue
            child = [adj[v] | ((1 << k) if smask >> v & 1 else 0) for v in range(k)] + [smask]
            if hereditary is not None and not hereditary(child):
                continue
            accepted, lab = _is_canonical_child(child)
            if not accepted:
                continue
            if lab_parent is None:
                lab_parent = canonical_labeling(adj) if k > 0 else Labeling((), [], [])
            if lab_parent.automorphisms:
                lab = lab or canonical_labeling(child)
                if lab.key in seen:
                    continue
                seen.add(lab.key)
            yield child


def enumerate_graphs(
    n: int,
    m: int,
    deg_lo: int = 0,
    deg_hi: int | None = None,
    connected: bool = False,
    hereditary: Callable[[SimpleGraph], bool] | None = None,
) -> list[SimpleGraph]:
    """One representative per isomorphism class, sorted by canonical label.

    ``hereditary`` is an optional predicate closed under vertex deletion
    (e.g. "contains no copy of H"); failing partial graphs are pruned.
    """
    if n > MAX_CANON_N:
        raise UnsupportedSizeError(f"generation supports n <= {MAX_CANON_N}, got {n}")
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    deg_hi = n - 1 if deg_hi is None else min(deg_hi, n - 1)
    deg_lo = max(deg_lo, 0)
    if deg_lo > deg_hi or m < 0 or m > n * (n - 1) // 2:
        return []
    if 2 * m < n * deg_lo or 2 * m > n * deg_hi:
        return []
    pred = None
    if hereditary is not None:
        pred = lambda rows: hereditary(SimpleGraph.from_adjacency(rows))  # noqa: E731

    results: list[SimpleGraph] = []
    if n == 1:
        graphs = [[0]] if m == 0 and deg_lo == 0 else []
    else:
        level = [[0]]
        for _ in range(n - 1):
            nxt = []
            for parent in level:
                nxt.extend(_extend(parent, n, m, deg_lo, deg_hi, pred))
            level = nxt
        graphs = level
    for rows in graphs:
        g = SimpleGraph.from_adjacency(rows)
        if connected and not g.is_connected():
            continue
        results.append(canonical_graph(g))
    results.sort(key=lambda g: canonical_form(g).label)
    return results
