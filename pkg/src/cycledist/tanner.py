"""Tanner graphs, ETS <-> VN-graph correspondence, layered BFS and cycle distance."""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegreeOverflowError,
    InvalidInputError,
    MultiEdgeError,
    NotThetaOrDumbbellError,
)
from .graphs import SimpleGraph


@dataclass(frozen=True)
class TannerGraph:
    n_v: int
    n_c: int
    var_adj: tuple = ()

    def __post_init__(self) -> None:
        rows = []
        for v, checks in enumerate(self.var_adj):
            cs = sorted(int(c) for c in checks)
            if len(set(cs)) != len(cs):
                raise InvalidInputError(f"duplicate incidence at variable {v}")
            if cs and not (0 <= cs[0] and cs[-1] < self.n_c):
                raise InvalidInputError(f"check index out of range at variable {v}")
            rows.append(tuple(cs))
        if len(rows) != self.n_v:
            raise InvalidInputError("adjacency length must equal n_v")
        object.__setattr__(self, "var_adj", tuple(rows))

    @classmethod
    def from_edges(cls, n_v: int, n_c: int, edges: Iterable[tuple[int, int]]) -> "TannerGraph":
        adj: list[list[int]] = [[] for _ in range(n_v)]
        for v, c in edges:
            adj[v].append(c)
        return cls(n_v, n_c, tuple(tuple(a) for a in adj))

    @classmethod
    def from_matrix(cls, h: np.ndarray) -> "TannerGraph":
        h = np.asarray(h)
        n_c, n_v = h.shape
        return cls(n_v, n_c, tuple(tuple(np.flatnonzero(h[:, v]).tolist()) for v in range(n_v)))

    def to_matrix(self) -> np.ndarray:
        h = np.zeros((self.n_c, self.n_v), dtype=np.uint8)
        for v, cs in enumerate(self.var_adj):
            h[list(cs), v] = 1
        return h

    @cached_property
    def check_adj(self) -> tuple[tuple[int, ...], ...]:
        rows: list[list[int]] = [[] for _ in range(self.n_c)]
        for v, cs in enumerate(self.var_adj):
            for c in cs:
                rows[c].append(v)
        return tuple(tuple(r) for r in rows)

    def edges(self) -> list[tuple[int, int]]:
        return [(v, c) for v, cs in enumerate(self.var_adj) for c in cs]

    @property
    def n_edges(self) -> int:
        return sum(len(cs) for cs in self.var_adj)

    def var_degrees(self) -> list[int]:
        return [len(cs) for cs in self.var_adj]

    def check_degrees(self) -> list[int]:
        return [len(vs) for vs in self.check_adj]

    def is_variable_regular(self, gamma: int | None = None) -> bool:
        degs = set(self.var_degrees())
        return len(degs) == 1 and (gamma is None or degs == {gamma})

    def girth(self) -> float:
        return tanner_girth(self)


# ---------------------------------------------------------------- girth and cycles


def tanner_girth(t: TannerGraph) -> float:
    """Shortest cycle length by BFS from every node; ``math.inf`` for forests."""
    n = t.n_v + t.n_c
    nbrs: list[Sequence[int]] = [
        [t.n_v + c for c in cs] for cs in t.var_adj
    ] + [list(vs) for vs in t.check_adj]
    best = math.inf
    for s in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in nbrs[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
        if best == 4:
            break
    return best


def six_cycles(t: TannerGraph) -> list[tuple[int, ...]]:
    """All 6-cycles as (v0, c0, v1, c1, v2, c2) in a rotation/reflection-normal form."""
    seen = set()
    out = []
    chk = t.check_adj
    var_sets = [set(cs) for cs in t.var_adj]
    for v0 in range(t.n_v):
        for ca, cb in combinations(t.var_adj[v0], 2):
            for v1 in chk[ca]:
                if v1 <= v0:
                    continue
                for v2 in chk[cb]:
                    if v2 <= v0 or v2 == v1:
                        continue
                    for cc in var_sets[v1] & var_sets[v2]:
                        if cc in (ca, cb):
                            continue
                        cyc = (v0, ca, v1, cc, v2, cb) if v1 < v2 else (v0, cb, v2, cc, v1, ca)
                        if cyc not in seen:
                            seen.add(cyc)
                            out.append(cyc)
    return sorted(out)


def cycle_pairs_sharing_nodes(cycles: Sequence[tuple[int, ...]]) -> int:
    """Number of unordered cycle pairs that share a variable or a check node.

    Cycles are alternating (v, c, v, c, ...) tuples; sharing a node means the
    pair sits at distance <= 0.
    """
    by_node: dict[tuple[str, int], list[int]] = defaultdict(list)
    for idx, cyc in enumerate(cycles):
        for pos, node in enumerate(cyc):
            by_node[("v" if pos % 2 == 0 else "c", node)].append(idx)
    pairs = set()
    for members in by_node.values():
        for i, j in combinations(members, 2):
            pairs.add((i, j))
    return len(pairs)


# ---------------------------------------------------------------- ETS subgraphs


@dataclass(frozen=True)
class EtsSubgraph:
    variables: tuple[int, ...]
    check_members: dict = field(hash=False)   # check -> tuple of member variables (1 or 2)

    def __post_init__(self) -> None:
        for c, vs in self.check_members.items():
            if len(vs) not in (1, 2):
                raise InvalidInputError(f"check {c} has degree {len(vs)} in the subgraph; not elementary")

    @property
    def a(self) -> int:
        return len(self.variables)

    @property
    def b(self) -> int:
        return sum(1 for vs in self.check_members.values() if len(vs) == 1)


def ets_of_variables(t: TannerGraph, variables: Iterable[int]) -> EtsSubgraph:
    s = tuple(sorted(set(variables)))
    members: dict[int, list[int]] = defaultdict(list)
    for v in s:
        for c in t.var_adj[v]:
            members[c].append(v)
    return EtsSubgraph(s, {c: tuple(vs) for c, vs in sorted(members.items())})


def vn_graph_of_ets(e: EtsSubgraph) -> SimpleGraph:
    """Drop degree-1 checks and turn each degree-2 check into an edge."""
    pos = {v: i for i, v in enumerate(e.variables)}
    edges = set()
    for c, vs in e.check_members.items():
        if len(vs) == 2:
            pair = tuple(sorted((pos[vs[0]], pos[vs[1]])))
            if pair in edges:
                raise MultiEdgeError(f"variables {vs} share two degree-2 checks")
            edges.add(pair)
    return SimpleGraph(max(1, e.a), frozenset(edges))


def ets_from_vn_graph(g: SimpleGraph, gamma: int) -> tuple[EtsSubgraph, TannerGraph]:
    """Place a check on every edge and pad each vertex with degree-1 checks up to gamma."""
    degs = g.degrees()
    if max(degs) > gamma:
        raise DegreeOverflowError(f"max degree {max(degs)} exceeds gamma={gamma}")
    edges = []
    members: dict[int, tuple[int, ...]] = {}
    c = 0
    for u, v in g.edge_list():
        edges += [(u, c), (v, c)]
        members[c] = (u, v)
        c += 1
    for u in range(g.n):
        for _ in range(gamma - degs[u]):
            edges.append((u, c))
            members[c] = (u,)
            c += 1
    host = TannerGraph.from_edges(g.n, c, edges)
    return EtsSubgraph(tuple(range(g.n)), members), host


def ets_parameters(g: SimpleGraph, gamma: int) -> tuple[int, int]:
    if g.max_degree > gamma:
        raise DegreeOverflowError(f"max degree {g.max_degree} exceeds gamma={gamma}")
    return g.n, g.n * gamma - 2 * g.m


# ---------------------------------------------------------------- cycle distance


def _cycle_edges(g: SimpleGraph, cyc: Sequence[int]) -> set[tuple[int, int]]:
    k = len(cyc)
    if k < 3 or len(set(cyc)) != k:
        raise InvalidInputError(f"not a cycle: {list(cyc)}")
    es = set()
    for i in range(k):
        u, v = cyc[i], cyc[(i + 1) % k]
        if not g.has_edge(u, v):
            raise InvalidInputError(f"{u}-{v} is not an edge of the graph")
        es.add((min(u, v), max(u, v)))
    return es


def cycle_pair_distance(g: SimpleGraph, c1: Sequence[int], c2: Sequence[int]) -> int:
    """Distance between two cycles of g.

    Cycles sharing one path form a theta graph; the distance is minus its
    shortest branch. One shared vertex gives 0, disjoint cycles give the
    length of the shortest path joining them.
    """
    e1, e2 = _cycle_edges(g, c1), _cycle_edges(g, c2)
    shared_v = set(c1) & set(c2)
    shared_e = e1 & e2
    if not shared_e:
        if not shared_v:
            return _set_distance(g, set(c1), set(c2))
        if len(shared_v) == 1:
            return 0
        raise NotThetaOrDumbbellError("cycles meet in several vertices without sharing an edge")
    ends = defaultdict(int)
    for u, v in shared_e:
        ends[u] += 1
        ends[v] += 1
    path_vertices = set(ends)
    is_path = (
        len(path_vertices) == len(shared_e) + 1
        and max(ends.values()) <= 2
        and _connected_edges(shared_e)
    )
    if not is_path or path_vertices != shared_v:
        raise NotThetaOrDumbbellError("cycles share more than one segment")
    ell = len(shared_e)
    return -min(ell, len(e1) - ell, len(e2) - ell)


def _connected_edges(edges: set[tuple[int, int]]) -> bool:
    adj = defaultdict(set)
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == len(adj)


def _set_distance(g: SimpleGraph, a: set[int], b: set[int]) -> int:
    dist = {v: 0 for v in a}
    queue = deque(a)
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                if w in b:
                    return dist[w]
                queue.append(w)
    raise NotThetaOrDumbbellError("cycles lie in different components")


# ---------------------------------------------------------------- layered expansion


@dataclass
class LayeredExpansion:
    """Breadth-first layers from a root variable with all shortest paths kept.

    Layer 0 holds the root; odd layers hold checks, even layers variables.
    ``var_parents[v]`` / ``check_parents[c]`` list the neighbours one layer up,
    so the retained edges are exactly the parent links.
    """

    root: int
    layers: list[list[int]]
    var_depth: dict[int, int]
    check_depth: dict[int, int]
    var_parents: dict[int, list[int]]
    check_parents: dict[int, list[int]]

    @property
    def retained_edges(self) -> list[tuple[int, int]]:
        es = [(v, c) for c, ps in self.check_parents.items() for v in ps]
        es += [(v, c) for v, ps in self.var_parents.items() for c in ps]
        return sorted(es)

    @property
    def check_layers(self) -> list[list[int]]:
        return self.layers[1::2]

    def deepest_checks(self) -> list[int]:
        cl = self.check_layers
        return list(cl[-1]) if cl else []

    def paths_to_check(self, c: int) -> list[list[tuple[str, int]]]:
        """Every retained root-to-c path as alternating ('v', i)/('c', j) nodes."""
        if c not in self.check_depth:
            raise InvalidInputError(f"check {c} not reached from variable {self.root}")
        out = []

        def back_c(cc: int, tail: list) -> None:
            for v in self.check_parents[cc]:
                back_v(v, [("c", cc)] + tail)

        def back_v(v: int, tail: list) -> None:
            if v == self.root:
                out.append([("v", v)] + tail)
                return
            for cc in self.var_parents[v]:
                back_c(cc, [("v", v)] + tail)

        back_c(c, [])
        return out

    def path_counts(self) -> tuple[dict[int, int], dict[int, int]]:
        """Number of retained paths from the root to every variable and check."""
        vcount = {self.root: 1}
        ccount: dict[int, int] = {}
        for depth, layer in enumerate(self.layers[1:], start=1):
            if depth % 2:
                for c in layer:
                    ccount[c] = sum(vcount[v] for v in self.check_parents[c])
            else:
                for v in layer:
                    vcount[v] = sum(ccount[c] for c in self.var_parents[v])
        return vcount, ccount


def bfs_expansion(t: TannerGraph, root: int, forbidden: Iterable[int] | None = None) -> LayeredExpansion:
    if not 0 <= root < t.n_v:
        raise InvalidInputError(f"root {root} out of range")
    banned = set(forbidden or ())
    var_depth = {root: 0}
    check_depth: dict[int, int] = {}
    var_parents: dict[int, list[int]] = {root: []}
    check_parents: dict[int, list[int]] = {}
    layers = [[root]]
    frontier = [root]
    depth = 0
    while frontier:
        depth += 1
        nxt: list[int] = []
        if depth % 2:
            for v in frontier:
                for c in t.var_adj[v]:
                    if c in banned:
                        continue
                    if c not in check_depth:
                        check_depth[c] = depth
                        check_parents[c] = [v]
                        nxt.append(c)
                    elif check_depth[c] == depth:
                        check_parents[c].append(v)
        else:
            chk = t.check_adj
            for c in frontier:
                for v in chk[c]:
                    if v not in var_depth:
                        var_depth[v] = depth
                        var_parents[v] = [c]
                        nxt.append(v)
                    elif var_depth[v] == depth:
                        var_parents[v].append(c)
        if nxt:
            layers.append(sorted(nxt))
        frontier = nxt
    return LayeredExpansion(root, layers, var_depth, check_depth, var_parents, check_parents)


# ---------------------------------------------------------------- alist


def write_alist(t: TannerGraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_alist(t))


def format_alist(t: TannerGraph) -> str:
    vd, cd = t.var_degrees(), t.check_degrees()
    mv, mc = max(vd, default=0), max(cd, default=0)
    lines = [f"{t.n_v} {t.n_c}", f"{mv} {mc}", " ".join(map(str, vd)), " ".join(map(str, cd))]
    for cs in t.var_adj:
        lines.append(" ".join(str(c + 1) for c in cs) + " 0" * (mv - len(cs)))
    for vs in t.check_adj:
        lines.append(" ".join(str(v + 1) for v in vs) + " 0" * (mc - len(vs)))
    # an isolated node still gets a line ("0") so the file stays line-aligned
    return "\n".join(line.strip() or "0" for line in lines) + "\n"


def parse_alist(text: str) -> TannerGraph:
    """Line-oriented alist reader; zero padding is optional."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n_v, n_c = int(lines[0][0]), int(lines[0][1])
        vd = [int(x) for x in lines[2]]
        adj = []
        for v in range(n_v):
            cs = [int(x) - 1 for x in lines[4 + v] if int(x) > 0]
            if len(cs) != vd[v]:
                raise InvalidInputError(f"alist degree mismatch at variable {v}")
            adj.append(tuple(cs))
    except (IndexError, ValueError):
        raise InvalidInputError("malformed alist file") from None
    t = TannerGraph(n_v, n_c, tuple(adj))
    if len(lines) >= 4 + n_v + n_c:
        for c in range(n_c):
            vs = sorted(int(x) - 1 for x in lines[4 + n_v + c] if int(x) > 0)
            if vs != list(t.check_adj[c]):
                raise InvalidInputError(f"alist check list {c} disagrees with variable lists")
    return t


def read_alist(path: str) -> TannerGraph:
    with open(path) as fh:
        return parse_alist(fh.read())
