"""Simple undirected graphs, BFS metric, geodesic intervals and collinear triples.

Vertices are the integers ``0..n-1``.  Everything here is immutable once built,
so graphs and distance matrices can be shared freely between workers.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .errors import Disconnected, NotDistinct, ParseError, SelfLoop, VertexOutOfRange

DIST_DTYPE = np.uint16


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]


class VertexSet(frozenset):
    """A frozenset of vertices that remembers where it came from.

    ``provenance`` is a short tag such as ``"solved"``, ``"constructed"`` or
    ``"greedy"``.  Equality and hashing are those of the plain frozenset.
    """

    def __new__(cls, items: Iterable[int] = (), provenance: str = "given"):
        obj = super().__new__(cls, items)
        obj.provenance = provenance
        return obj

    def sorted(self) -> list[int]:
        return sorted(self)

    def __repr__(self) -> str:
        return f"VertexSet({sorted(self)}, provenance={self.provenance!r})"


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Normalize an edge list into a :class:`Graph`.

    Duplicate edges (in either orientation) are merged; self-loops and
    endpoints outside ``[0, n)`` raise.
    """
    if n < 1:
        raise VertexOutOfRange(f"graph needs at least one vertex, got n={n}")
    seen: set[tuple[int, int]] = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u},{v}) outside [0,{n})")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        seen.add((u, v) if u < v else (v, u))
    norm = tuple(sorted(seen))
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in norm:
        adj[u].append(v)
        adj[v].append(u)
    return Graph(n, norm, tuple(tuple(sorted(a)) for a in adj))


def _bfs(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    return min(_bfs(g, 0)) >= 0


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs hop counts of a connected graph (dense, read-only)."""

    n: int
    d: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.d.setflags(write=False)

    def __call__(self, u: int, v: int) -> int:
        return int(self.d[u, v])

    def check(self, *vertices: int) -> None:
        for v in vertices:
            if not 0 <= v < self.n:
                raise VertexOutOfRange(f"vertex {v} outside [0,{self.n})")


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    d = np.empty((g.n, g.n), dtype=DIST_DTYPE)
    for s in range(g.n):
        row = _bfs(g, s)
        if row[0] < 0 or min(row) < 0:
            raise Disconnected("distances are only defined on connected graphs")
        d[s] = row
    return DistanceMatrix(g.n, d)


def interval(dm: DistanceMatrix, u: int, v: int) -> frozenset[int]:
    """Vertices lying on some shortest u,v-path."""
    dm.check(u, v)
    d = dm.d
    on_path = d[u] + d[:, v] == d[u, v]
    return frozenset(int(w) for w in np.flatnonzero(on_path))


def is_collinear_triple(dm: DistanceMatrix, x: int, y: int, z: int) -> bool:
    """True when one of the three vertices sits on a geodesic between the others."""
    dm.check(x, y, z)
    if x == y or y == z or x == z:
        raise NotDistinct(f"vertices must be pairwise distinct: {(x, y, z)}")
    d = dm.d
    dxy, dxz, dyz = int(d[x, y]), int(d[x, z]), int(d[y, z])
    return dxy == dxz + dyz or dxz == dxy + dyz or dyz == dxy + dxz


def collinear_mask_rows(d: np.ndarray, i: int) -> np.ndarray:
    """Boolean array ``out[j, k]``: is ``{i, j, k}`` collinear (for j, k != i, j != k)."""
    di = d[i].astype(np.int32)
    dd = d.astype(np.int32)
    a = di[:, None]  # d(i, j)
    b = di[None, :]  # d(i, k)
    out = (a == b + dd) | (b == a + dd) | (dd == a + b)
    out[i, :] = False
    out[:, i] = False
    np.fill_diagonal(out, False)
    return out


def iter_collinear_triples(dm: DistanceMatrix) -> Iterator[tuple[int, int, int]]:
    n = dm.n
    for x in range(n - 2):
        rows = collinear_mask_rows(dm.d, x)
        for y in range(x + 1, n - 1):
            for z in np.flatnonzero(rows[y, y + 1 :]):
                yield (x, y, y + 1 + int(z))


def collinear_triples(dm: DistanceMatrix) -> list[tuple[int, int, int]]:
    """All collinear triples ``x < y < z`` in lexicographic order."""
    return list(iter_collinear_triples(dm))


def triple_count_upper_bound(n: int) -> int:
    return n * (n - 1) * (n - 2) // 6


# --- edge-list text format -------------------------------------------------


def _content_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"line {lineno}: expected {count} integers, got {line!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer token in {line!r}") from None


def parse_edge_list_lines(lines: Iterable[str]) -> Graph:
    it = _content_lines(lines)
    try:
        lineno, header = next(it)
    except StopIteration:
        raise ParseError("empty edge list: missing 'n m' header") from None
    n, m = _ints(header, lineno, 2)
    if n < 1 or m < 0:
        raise ParseError(f"line {lineno}: bad header {header!r}")
    edges = [tuple(_ints(line, ln, 2)) for ln, line in it]
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    try:
        return build_graph(n, edges)
    except (SelfLoop, VertexOutOfRange) as exc:
        raise ParseError(str(exc)) from exc


def parse_edge_list(text: str) -> Graph:
    return parse_edge_list_lines(text.splitlines())


def read_edge_list(fh: TextIO | str) -> Graph:
    if isinstance(fh, str):
        with open(fh, encoding="utf-8") as f:
            return parse_edge_list(f.read())
    return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# --- small named graphs (used throughout tests and the CLI docs) -----------


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return build_graph(n, combinations(range(n), 2))
