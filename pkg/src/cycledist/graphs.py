"""Simple undirected graphs, theta/dumbbell patterns and subgraph containment.

Graphs are immutable. Vertices are ``0..n-1`` and adjacency is kept as one
integer bitmask per vertex, which keeps the path searches below cheap.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InvalidEdgeError, InvalidInputError, UnsupportedSizeError

MAX_PATTERN_LENGTH = 8


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInputError(f"vertex count must be >= 1, got {self.n}")
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InvalidEdgeError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidEdgeError(f"edge {u}-{v} out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "SimpleGraph":
        edges = list(edges)
        seen = {(min(u, v), max(u, v)) for u, v in edges}
        if len(seen) != len(edges):
            raise InvalidEdgeError("duplicate edge in edge list")
        return cls(n, frozenset(seen))

    @classmethod
    def from_adjacency(cls, adj: Sequence[int]) -> "SimpleGraph":
        n = len(adj)
        return cls(n, frozenset((u, v) for u in range(n) for v in _bits(adj[u]) if u < v))

    @cached_property
    def adj(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for u, v in self.edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return tuple(rows)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def max_degree(self) -> int:
        return max(self.degrees())

    @property
    def min_degree(self) -> int:
        return min(self.degrees())

    def is_regular(self) -> bool:
        return len(set(self.degrees())) == 1

    def is_connected(self) -> bool:
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def is_cycle(self) -> bool:
        return self.is_connected() and all(d == 2 for d in self.degrees())

    def relabel(self, perm: Sequence[int]) -> "SimpleGraph":
        """Vertex ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidInputError("relabeling must be a permutation of the vertices")
        return SimpleGraph(self.n, frozenset((perm[u], perm[v]) for u, v in self.edges))

    def to_line(self) -> str:
        return format_edge_line(self)

    def __repr__(self) -> str:
        body = " ".join(f"{u}-{v}" for u, v in self.edge_list())
        return f"SimpleGraph(n={self.n}, m={self.m}: {body})"


# ---------------------------------------------------------------- builders


def cycle_graph(k: int) -> SimpleGraph:
    if k < 3:
        raise InvalidInputError("a cycle needs at least 3 vertices")
    return SimpleGraph(k, frozenset((i, (i + 1) % k) for i in range(k)))


def path_graph(k: int) -> SimpleGraph:
    return SimpleGraph(k, frozenset((i, i + 1) for i in range(k - 1)))


def complete_graph(k: int) -> SimpleGraph:
    return SimpleGraph(k, frozenset((i, j) for i in range(k) for j in range(i + 1, k)))


def complete_bipartite(a: int, b: int) -> SimpleGraph:
    return SimpleGraph(a + b, frozenset((i, a + j) for i in range(a) for j in range(b)))


def disjoint_union(g: SimpleGraph, h: SimpleGraph) -> SimpleGraph:
    shifted = {(u + g.n, v + g.n) for u, v in h.edges}
    return SimpleGraph(g.n + h.n, frozenset(g.edges | shifted))


def add_edges(g: SimpleGraph, extra: Iterable[Sequence[int]]) -> SimpleGraph:
    return SimpleGraph(g.n, frozenset(set(g.edges) | {tuple(e) for e in extra}))


def theta_graph(l1: int, l2: int, l3: int) -> SimpleGraph:
    """Two endpoints 0 and 1 joined by three internally disjoint paths."""
    edges: list[tuple[int, int]] = []
    n = 2
    for length in (l1, l2, l3):
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, n))
            prev = n
            n += 1
        edges.append((prev, 1))
    return SimpleGraph.from_edges(n, edges)


def dumbbell_graph(r1: int, r2: int, q: int) -> SimpleGraph:
    """Cycles of lengths r1 and r2 joined by a path of length q (q=0: shared vertex)."""
    edges = [(i, (i + 1) % r1) for i in range(r1)]
    n = r1
    prev = 0
    for _ in range(q):
        edges.append((prev, n))
        prev = n
        n += 1
    y = prev
    ring = [y] + list(range(n, n + r2 - 1))
    n += r2 - 1
    edges += [(ring[i], ring[(i + 1) % r2]) for i in range(r2)]
    return SimpleGraph.from_edges(n, edges)


# ---------------------------------------------------------------- patterns


@dataclass(frozen=True)
class Theta:
    l1: int
    l2: int
    l3: int

    def __post_init__(self) -> None:
        if not (1 <= self.l1 <= self.l2 <= self.l3 and self.l2 >= 2):
            raise InvalidInputError(f"invalid theta parameters {self.params}")

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.l1, self.l2, self.l3)

    @property
    def n_vertices(self) -> int:
        return self.l1 + self.l2 + self.l3 - 1

    @property
    def n_edges(self) -> int:
        return self.l1 + self.l2 + self.l3

    @property
    def cycle_distance(self) -> int:
        return -self.l1

    def graph(self) -> SimpleGraph:
        return theta_graph(*self.params)

    @property
    def name(self) -> str:
        return "theta({},{},{})".format(*self.params)


@dataclass(frozen=True)
class Dumbbell:
    r1: int
    r2: int
    q: int

    def __post_init__(self) -> None:
        if not (3 <= self.r1 <= self.r2 and self.q >= 0):
            raise InvalidInputError(f"invalid dumbbell parameters {self.params}")

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.r1, self.r2, self.q)

    @property
    def n_vertices(self) -> int:
        return self.r1 + self.r2 + self.q - 1

    @property
    def n_edges(self) -> int:
        return self.r1 + self.r2 + self.q

    @property
    def cycle_distance(self) -> int:
        return self.q

    def graph(self) -> SimpleGraph:
        return dumbbell_graph(*self.params)

    @property
    def name(self) -> str:
        return "db({},{};{})".format(*self.params)


PatternGraph = Theta | Dumbbell

THETA_122 = Theta(1, 2, 2)
DB_330 = Dumbbell(3, 3, 0)
DB_331 = Dumbbell(3, 3, 1)

_SHORT_NAMES = {"theta": THETA_122, "theta122": THETA_122, "db330": DB_330, "db331": DB_331}


def parse_pattern(text: str) -> PatternGraph:
    """Accepts ``theta122``/``db330``/``db331`` or ``theta:l1,l2,l3`` / ``db:r1,r2,q``."""
    key = text.strip().lower().replace("_", "")
    if key in _SHORT_NAMES:
        return _SHORT_NAMES[key]
    kind, _, rest = key.partition(":")
    try:
        nums = [int(x) for x in rest.replace(";", ",").split(",")]
    except ValueError:
        raise InvalidInputError(f"cannot parse pattern {text!r}") from None
    if kind == "theta" and len(nums) == 3:
        return Theta(*sorted(nums))
    if kind in ("db", "dumbbell") and len(nums) == 3:
        r1, r2, q = nums
        return Dumbbell(min(r1, r2), max(r1, r2), q)
    raise InvalidInputError(f"cannot parse pattern {text!r}")


# ---------------------------------------------------------------- operations


def subdivide_edge(g: SimpleGraph, e: Sequence[int]) -> SimpleGraph:
    u, v = sorted(int(x) for x in e)
    if (u, v) not in g.edges:
        raise InvalidEdgeError(f"edge {u}-{v} not in graph")
    w = g.n
    edges = set(g.edges)
    edges.remove((u, v))
    edges.update({(u, w), (v, w)})
    return SimpleGraph(g.n + 1, frozenset(edges))


def girth(g: SimpleGraph) -> float:
    """Shortest cycle length, ``math.inf`` for forests."""
    best = math.inf
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in _bits(g.adj[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def _paths(adj: Sequence[int], s: int, t: int, length: int, blocked: int) -> Iterator[int]:
    """Masks of interior vertices of simple s-t paths with exactly ``length`` edges.

    Interior vertices avoid ``blocked`` as well as s and t.
    """
    forbid = blocked | (1 << s) | (1 << t)

    def walk(cur: int, rem: int, used: int) -> Iterator[int]:
        if rem == 1:
            if adj[cur] >> t & 1:
                yield used
            return
        for v in _bits(adj[cur] & ~forbid & ~used):
            yield from walk(v, rem - 1, used | (1 << v))

    yield from walk(s, length, 0)


def _cycles_through(adj: Sequence[int], x: int, r: int, blocked: int) -> set[int]:
    """Vertex masks (x excluded) of r-cycles through x that avoid ``blocked``."""
    found: set[int] = set()
    for y in _bits(adj[x] & ~blocked):
        for inner in _paths(adj, y, x, r - 1, blocked):
            found.add(inner | (1 << y))
    return found


def _check_pattern_size(p: PatternGraph) -> None:
    if max(p.params) > MAX_PATTERN_LENGTH:
        raise UnsupportedSizeError(f"pattern {p.name} exceeds length limit {MAX_PATTERN_LENGTH}")


def contains_pattern(g: SimpleGraph, p: PatternGraph) -> bool:
    """Subgraph (not induced) containment of a theta or dumbbell pattern."""
    _check_pattern_size(p)
    if g.n < p.n_vertices or g.m < p.n_edges:
        return False
    adj = g.adj
    if isinstance(p, Theta):
        ends = [v for v in range(g.n) if adj[v].bit_count() >= 3]
        for i, s in enumerate(ends):
            for t in ends[i + 1:]:
                if _theta_at(adj, s, t, p.params):
                    return True
        return False
    return _dumbbell_in(adj, g.n, p.r1, p.r2, p.q)


def _theta_at(adj: Sequence[int], s: int, t: int, lengths: tuple[int, int, int]) -> bool:
    l1, l2, l3 = lengths
    if l1 == 1 and not adj[s] >> t & 1:
        return False
    first = set(_paths(adj, s, t, l1, 0))
    for p1 in first:
        for p2 in set(_paths(adj, s, t, l2, p1)):
            for _ in _paths(adj, s, t, l3, p1 | p2):
                return True
    return False


def _dumbbell_in(adj: Sequence[int], n: int, r1: int, r2: int, q: int) -> bool:
    if q == 0:
        for x in range(n):
            if adj[x].bit_count() < 4:
                continue
            for c1 in _cycles_through(adj, x, r1, 0):
                if _cycles_through(adj, x, r2, c1):
                    return True
        return False
    for x in range(n):
        if adj[x].bit_count() < 3:
            continue
        for y in range(n):
            if y == x or adj[y].bit_count() < 3:
                continue
            for inner in set(_paths(adj, x, y, q, 0)):
                for c1 in _cycles_through(adj, x, r1, inner | (1 << y)):
                    if _cycles_through(adj, y, r2, inner | c1 | (1 << x)):
                        return True
    return False


# ---------------------------------------------------------------- serialization


def format_edge_line(g: SimpleGraph) -> str:
    return " ".join([str(g.n), str(g.m)] + [f"{u}-{v}" for u, v in g.edge_list()])


def parse_edge_line(line: str) -> SimpleGraph:
    parts = line.split()
    try:
        n, m = int(parts[0]), int(parts[1])
        edges = [tuple(int(x) for x in tok.split("-")) for tok in parts[2:]]
    except (ValueError, IndexError):
        raise InvalidInputError(f"malformed edge line: {line!r}") from None
    if len(edges) != m or any(len(e) != 2 for e in edges):
        raise InvalidInputError(f"edge count mismatch in line: {line!r}")
    return SimpleGraph.from_edges(n, edges)


def to_graph6(g: SimpleGraph) -> str:
    if g.n > 62:
        raise UnsupportedSizeError("graph6 short form supports n <= 62")
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def from_graph6(text: str) -> SimpleGraph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[10:]
    if not text or ord(text[0]) - 63 > 62 or ord(text[0]) < 63:
        raise InvalidInputError(f"unsupported graph6 string {text!r}")
    n = ord(text[0]) - 63
    bits = []
    for ch in text[1:]:
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise InvalidInputError(f"bad graph6 character {ch!r}")
        bits += [(val >> k) & 1 for k in range(5, -1, -1)]
    need = n * (n - 1) // 2
    if len(bits) < need:
        raise InvalidInputError("graph6 string too short")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return SimpleGraph.from_edges(n, edges)


def read_graphs(path: str) -> list[SimpleGraph]:
    """Reads edge-line or graph6 records, one per non-empty line."""
    graphs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            graphs.append(parse_edge_line(line) if line[0].isdigit() else from_graph6(line))
    return graphs
