"""Undirected simple graphs on vertices ``0..n-1`` stored as bitset rows.

Vertex subsets are plain sorted tuples of vertex indices. Edge sets are
lists of ``(u, v)`` pairs with ``u < v``, in ascending order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .rng import SplitMix64

Subset = tuple[int, ...]
Edge = tuple[int, int]

GRAPH6_MAX_N = 62


class GraphError(ValueError):
    """Invalid graph construction or subset argument."""


class Graph6Error(ValueError):
    """Malformed graph6 input."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for v in members:
        m |= 1 << v
    return m


def members_of(mask: int) -> Subset:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph. ``rows[v]`` is the neighbour bitmask of ``v``."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be >= 1, got {self.n}")
        if len(self.rows) != self.n:
            raise GraphError("rows must have one entry per vertex")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"vertex {v} has a neighbour out of range")
            if row >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            for w in members_of(row):
                if not self.rows[w] >> v & 1:
                    raise GraphError(f"adjacency not symmetric at ({v}, {w})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(popcount(r) for r in self.rows)

    @cached_property
    def e(self) -> int:
        return sum(self.degrees) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> Subset:
        return members_of(self.rows[v])

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in members_of(self.rows[u] >> (u + 1) << (u + 1))]

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n))
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    def is_connected(self) -> bool:
        return len(components(self)) == 1

    def is_regular(self) -> bool:
        return len(set(self.degrees)) == 1

    def is_complete(self) -> bool:
        return self.e == self.n * (self.n - 1) // 2

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.e}, graph6={write_graph6(self)!r})" if self.n <= GRAPH6_MAX_N else f"Graph(n={self.n}, e={self.e})"


def as_subset(g: Graph, members: Iterable[int]) -> Subset:
    """Validate and sort a vertex subset of ``g``."""
    out = tuple(sorted(members))
    if len(set(out)) != len(out):
        raise GraphError(f"subset has repeated vertices: {list(members)}")
    for v in out:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range for n={g.n}")
    return out


def proper_subset(g: Graph, members: Iterable[int]) -> Subset:
    """Like :func:`as_subset` but also requires ``0 < |U| < n``."""
    u = as_subset(g, members)
    if not 0 < len(u) < g.n:
        raise GraphError(f"subset size must satisfy 0 < m < n={g.n}, got m={len(u)}")
    return u


def complement(g: Graph, u: Subset) -> Subset:
    return members_of(g.full_mask & ~mask_of(u))


# ---------------------------------------------------------------- graph6


def _size_header(n: int) -> str:
    if not 0 <= n <= GRAPH6_MAX_N:
        raise Graph6Error(f"graph6 output supports n <= {GRAPH6_MAX_N}, got n={n}")
    return chr(n + 63)


def write_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 line (without trailing newline)."""
    out = [_size_header(g.n)]
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.rows[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line. Surrounding whitespace is ignored."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6Error("empty graph6 string", 0)
    for k, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside graph6 range", k)
    if s[0] == "~":
        raise Graph6Error(f"multi-byte size header: only n <= {GRAPH6_MAX_N} supported", 0)
    n = ord(s[0]) - 63
    if n == 0:
        raise Graph6Error("graph with zero vertices is not supported", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(s) - 1 != nbytes:
        raise Graph6Error(f"expected {nbytes} data bytes for n={n}, got {len(s) - 1}", min(len(s), 1 + nbytes))
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(s[1 + k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if nbytes:
        pad = 6 * nbytes - nbits
        if (ord(s[-1]) - 63) & ((1 << pad) - 1):
            raise Graph6Error("nonzero padding bits", len(s) - 1)
    return Graph(n, tuple(rows))


# ---------------------------------------------------------------- subsets


def vertex_boundary(g: Graph, u: Iterable[int]) -> Subset:
    """Vertices outside ``u`` having at least one neighbour in ``u``."""
    um = mask_of(as_subset(g, u))
    reach = 0
    for v in members_of(um):
        reach |= g.rows[v]
    return members_of(reach & ~um)


def cut_size(g: Graph, umask: int) -> int:
    """Number of edges leaving the vertex set encoded by ``umask``."""
    out = ~umask & g.full_mask
    return sum(popcount(g.rows[v] & out) for v in members_of(umask))


def inner_edge_count(g: Graph, umask: int) -> int:
    return sum(popcount(g.rows[v] & umask) for v in members_of(umask)) // 2


def edge_boundary(g: Graph, u: Iterable[int]) -> list[Edge]:
    """Edges with exactly one endpoint in ``u``."""
    um = mask_of(as_subset(g, u))
    return [(a, b) for a, b in g.edges() if (um >> a & 1) != (um >> b & 1)]


def induced_edges(g: Graph, u: Iterable[int]) -> list[Edge]:
    um = mask_of(as_subset(g, u))
    return [(a, b) for a, b in g.edges() if um >> a & 1 and um >> b & 1]


def induced_subgraph(g: Graph, u: Iterable[int]) -> tuple[Graph, Subset]:
    """Return ``(G[U], index_map)``; vertex ``i`` of ``G[U]`` is ``index_map[i]`` in ``g``."""
    members = as_subset(g, u)
    if not members:
        raise GraphError("induced subgraph of the empty set")
    pos = {v: i for i, v in enumerate(members)}
    rows = []
    um = mask_of(members)
    for v in members:
        rows.append(mask_of(pos[w] for w in members_of(g.rows[v] & um)))
    return Graph(len(members), tuple(rows)), members


def components(g: Graph, within: int | None = None) -> list[Subset]:
    """Connected components, ordered by smallest vertex.

    With ``within`` (a vertex bitmask) the components of the induced
    subgraph on those vertices are returned, labelled as in ``g``.
    """
    left = g.full_mask if within is None else within
    out = []
    while left:
        low = left & -left
        comp = frontier = low
        while frontier:
            nxt = 0
            for v in members_of(frontier):
                nxt |= g.rows[v]
            frontier = nxt & left & ~comp
            comp |= frontier
        out.append(members_of(comp))
        left &= ~comp
    return out


# ---------------------------------------------------------------- generators


def complete(n: int) -> Graph:
    _check_order(n)
    return Graph.from_edges(n, combinations(range(n), 2))


def empty(n: int) -> Graph:
    _check_order(n)
    return Graph(n, (0,) * n)


def path(n: int) -> Graph:
    _check_order(n)
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    _check_order(leaves)
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shift = g1.n
    edges = g1.edges() + [(a + shift, b + shift) for a, b in g2.edges()]
    return Graph.from_edges(g1.n + g2.n, edges)


def join(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union plus every edge between the two parts; ``g1`` comes first."""
    union = disjoint_union(g1, g2)
    cross = [(a, g1.n + b) for a in range(g1.n) for b in range(g2.n)]
    return Graph.from_edges(union.n, union.edges() + cross)


def complete_multipartite(part_sizes: Sequence[int]) -> Graph:
    if not part_sizes or any(s < 1 for s in part_sizes):
        raise GraphError(f"part sizes must be a nonempty list of positive integers, got {list(part_sizes)}")
    label = [i for i, s in enumerate(part_sizes) for _ in range(s)]
    n = len(label)
    return Graph.from_edges(n, [(a, b) for a, b in combinations(range(n), 2) if label[a] != label[b]])


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi graph driven by :class:`SplitMix64`.

    Pairs ``(i, j)``, ``i < j``, are visited in lexicographic order and each
    is kept when the next uniform draw is ``< p``.
    """
    _check_order(n)
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    rng = SplitMix64(seed)
    return Graph.from_edges(n, [(i, j) for i, j in combinations(range(n), 2) if rng.random() < p])


def from_edge_mask(n: int, mask: int) -> Graph:
    """Graph whose edge set is the bit pattern ``mask`` over pairs in lexicographic order."""
    return Graph.from_edges(n, [pair for k, pair in enumerate(combinations(range(n), 2)) if mask >> k & 1])


def labeled_graphs(n: int, connected_only: bool = True):
    """Yield all labelled graphs on ``n`` vertices in edge-mask order."""
    _check_order(n)
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for k, (a, b) in enumerate(pairs):
            if mask >> k & 1:
                rows[a] |= 1 << b
                rows[b] |= 1 << a
        g = Graph(n, tuple(rows))
        if not connected_only or g.is_connected():
            yield g


def _check_order(n: int) -> None:
    if n < 1:
        raise GraphError(f"vertex count must be >= 1, got {n}")
