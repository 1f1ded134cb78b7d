"""General position verification and exact gp(G) by branch and bound.

A general position set is an independent set of the 3-uniform hypergraph
whose hyperedges are the collinear triples.  The search works on bitsets
(Python ints): for every vertex pair ``(u, v)`` we keep ``mask[u][v]``, the
set of third vertices that would make ``{u, v, w}`` collinear.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import Disconnected, InfeasibleForcedSet, NotAGpSet, VertexOutOfRange
from .graph import (
    DistanceMatrix,
    Graph,
    VertexSet,
    all_pairs_distances,
    collinear_mask_rows,
    collinear_triples,
    is_connected,
    triple_count_upper_bound,
)

log = logging.getLogger(__name__)

EAGER_TRIPLE_LIMIT = 2_000_000
DEFAULT_BUDGET = 50_000_000


def first_violating_triple(dm: DistanceMatrix, s: Iterable[int]) -> tuple[int, int, int] | None:
    """Lexicographically first collinear triple inside ``s``, or None."""
    verts = sorted(set(s))
    dm.check(*verts)
    d = dm.d
    for x, y, z in combinations(verts, 3):
        dxy, dxz, dyz = int(d[x, y]), int(d[x, z]), int(d[y, z])
        if dxy == dxz + dyz or dxz == dxy + dyz or dyz == dxy + dxz:
            return (x, y, z)
    return None


def verify_general_position(dm: DistanceMatrix, s: Iterable[int]) -> bool:
    return first_violating_triple(dm, s) is None


def is_maximal_gp(dm: DistanceMatrix, s: Iterable[int]) -> bool:
    """True iff no vertex outside ``s`` can be added keeping general position."""
    verts = sorted(set(s))
    if not verify_general_position(dm, verts):
        raise NotAGpSet(f"{verts} is not a general position set")
    if len(verts) < 2:
        # any two distinct vertices are in general position
        return dm.n == len(verts)
    d = dm.d.astype(np.int32)
    inside = np.zeros(dm.n, dtype=bool)
    inside[verts] = True
    blocked = inside.copy()
    for x, y in combinations(verts, 2):
        dx, dy, dxy = d[x], d[y], d[x, y]
        blocked |= (dx + dy == dxy) | (dxy + dy == dx) | (dx + dxy == dy)
    return bool(blocked.all())


# --- search state ------------------------------------------------------------


class _LazyRow:
    """One row ``mask[i][*]`` computed on first access; used for huge graphs."""

    __slots__ = ("_d", "_i", "_cache")

    def __init__(self, d: np.ndarray, i: int):
        self._d = d
        self._i = i
        self._cache: dict[int, int] = {}

    def __getitem__(self, j: int) -> int:
        try:
            return self._cache[j]
        except KeyError:
            pass
        d, i = self._d, self._i
        di, dj, dij = d[i], d[j], d[i, j]
        hit = (di + dj == dij) | (dij + dj == di) | (di + dij == dj)
        hit[i] = hit[j] = False
        val = _bits(hit)
        self._cache[j] = val
        return val


def _bits(flags: np.ndarray) -> int:
    """Pack a boolean vector into an int with bit k set iff flags[k]."""
    if not flags.any():
        return 0
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True, eq=False)
class GpInstance:
    """One exact-solve request.

    ``seed`` is an optional known general position set used as the initial
    incumbent (for tree products the explicit maximal construction).  It is
    ignored unless it contains every forced vertex.
    """

    graph: Graph
    dm: DistanceMatrix
    forced: frozenset[int] = frozenset()
    budget: int | None = DEFAULT_BUDGET
    seed: frozenset[int] | None = None
    lazy: bool = False

    @property
    def triples(self) -> list[tuple[int, int, int]] | None:
        """Materialized hyperedges, or None in lazy mode."""
        if self.lazy:
            return None
        return collinear_triples(self.dm)


def make_instance(
    g: Graph,
    forced: Iterable[int] = (),
    budget: int | None = DEFAULT_BUDGET,
    seed: Iterable[int] | None = None,
    dm: DistanceMatrix | None = None,
) -> GpInstance:
    if not is_connected(g):
        raise Disconnected("gp is only defined for connected graphs")
    dm = dm if dm is not None else all_pairs_distances(g)
    forced = frozenset(int(v) for v in forced)
    dm.check(*forced)
    lazy = triple_count_upper_bound(g.n) > EAGER_TRIPLE_LIMIT
    return GpInstance(g, dm, forced, budget, frozenset(seed) if seed is not None else None, lazy)


@dataclass(frozen=True)
class GpResult:
    gp_number: int
    witness: VertexSet
    nodes_expanded: int
    proven_optimal: bool


class _Search:
    """Internal relabelled problem: bit ``i`` is the ``i``-th vertex in branching order."""

    def __init__(self, inst: GpInstance):
        n = inst.dm.n
        self.n = n
        d = inst.dm.d.astype(np.int32)
        degree = np.zeros(n, dtype=np.int64)
        if inst.lazy:
            raw_rows = None
            for i in range(n):
                degree[i] = int(collinear_mask_rows(inst.dm.d, i).sum()) // 2
        else:
            raw_rows = [collinear_mask_rows(inst.dm.d, i) for i in range(n)]
            for i in range(n):
                degree[i] = int(raw_rows[i].sum()) // 2
        self.degree = degree
        # branch on high-degree vertices first, lower index on ties
        self.order = sorted(range(n), key=lambda v: (-int(degree[v]), v))
        self.pos = [0] * n
        for p, v in enumerate(self.order):
            self.pos[v] = p
        perm = np.asarray(self.order)
        if inst.lazy:
            dp = d[np.ix_(perm, perm)]
            self.mask = [_LazyRow(dp, i) for i in range(n)]
        else:
            self.mask = []
            for i in range(n):
                rows = raw_rows[perm[i]][np.ix_(perm, perm)]
                self.mask.append([_bits(rows[j]) for j in range(n)])
        self.full = (1 << n) - 1

    def to_bits(self, verts: Iterable[int]) -> int:
        out = 0
        for v in verts:
            out |= 1 << self.pos[v]
        return out

    def to_vertices(self, bits: int) -> list[int]:
        return sorted(self.order[p] for p in _iter_bits(bits))


def _kill_for(search: _Search, chosen: int, cand: int) -> list[int]:
    """For each candidate position, the candidates it would eliminate given ``chosen``."""
    kill = [0] * search.n
    mask = search.mask
    chosen_list = list(_iter_bits(chosen))
    for c in _iter_bits(cand):
        row = mask[c]
        k = 0
        for s in chosen_list:
            k |= row[s]
        kill[c] = k
    return kill


def greedy_gp_lower_bound(inst: GpInstance) -> VertexSet:
    """Greedy maximal general position set containing the forced vertices.

    When the instance carries a usable seed, the seed itself (extended to
    maximality) is returned.
    """
    search = _Search(inst)
    return _greedy(search, inst)


def _greedy(search: _Search, inst: GpInstance) -> VertexSet:
    forced_bits = search.to_bits(inst.forced)
    if inst.seed is not None and inst.forced <= inst.seed and verify_general_position(inst.dm, inst.seed):
        start, tag = search.to_bits(inst.seed), "seeded"
    else:
        start, tag = forced_bits, "greedy"
    chosen = start
    blocked = 0
    for a, b in combinations(list(_iter_bits(chosen)), 2):
        blocked |= search.mask[a][b]
    if blocked & chosen:
        raise InfeasibleForcedSet("forced vertices are not in general position")
    mask = search.mask
    # ascending collinearity degree, lower index first
    for p in sorted(range(search.n), key=lambda p: (int(search.degree[search.order[p]]), search.order[p])):
        bit = 1 << p
        if chosen & bit or blocked & bit:
            continue
        row = mask[p]
        new_block = 0
        for s in _iter_bits(chosen):
            new_block |= row[s]
        chosen |= bit
        blocked |= new_block
    return VertexSet(search.to_vertices(chosen), provenance=tag)


def gp_number_exact(inst: GpInstance) -> GpResult:
    """Maximum general position set containing ``inst.forced``.

    Depth-first include/exclude search in descending collinear-degree order.
    Choosing ``v`` removes every candidate that forms a collinear triple with
    ``v`` and an already chosen vertex.  A node is pruned when even taking
    every surviving candidate cannot beat the incumbent; candidates that
    cannot coexist with enough others are filtered first.
    """
    if not is_connected(inst.graph):
        raise Disconnected("gp is only defined for connected graphs")
    if not verify_general_position(inst.dm, inst.forced):
        raise InfeasibleForcedSet(f"forced set {sorted(inst.forced)} is not in general position")
    search = _Search(inst)
    mask = search.mask
    n = search.n

    forced_bits = search.to_bits(inst.forced)
    blocked = 0
    for a, b in combinations(list(_iter_bits(forced_bits)), 2):
        blocked |= mask[a][b]
    cand0 = search.full & ~forced_bits & ~blocked

    incumbent = _greedy(search, inst)
    best_bits = search.to_bits(incumbent)
    best_size = len(incumbent)
    budget = inst.budget
    nodes = 0
    exhausted = False

    def expand(chosen: int, size: int, cand: int, kill: list[int]) -> None:
        nonlocal best_bits, best_size, nodes, exhausted
        while cand:
            nodes += 1
            if budget is not None and nodes > budget:
                exhausted = True
                return
            need = best_size + 1 - size
            if cand.bit_count() < need:
                return
            if need >= 2 and size >= 1:
                # every useful candidate must survive alongside need-1 others
                changed = True
                while changed:
                    changed = False
                    for c in _iter_bits(cand):
                        if (cand & ~kill[c]).bit_count() < need:
                            cand &= ~(1 << c)
                            changed = True
                    if cand.bit_count() < need:
                        return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            row = mask[v]
            new_cand = cand & ~kill[v]
            new_chosen = chosen | low
            if size + 1 > best_size:
                best_size = size + 1
                best_bits = new_chosen
            if new_cand:
                new_kill = kill[:]
                for c in _iter_bits(new_cand):
                    new_kill[c] = kill[c] | row[c]
                expand(new_chosen, size + 1, new_cand, new_kill)
                if exhausted:
                    return

    kill0 = _kill_for(search, forced_bits, cand0) if forced_bits else [0] * n
    expand(forced_bits, forced_bits.bit_count(), cand0, kill0)
    if best_bits & forced_bits != forced_bits:
        # the incumbent always contains the forced set; guard anyway
        raise InfeasibleForcedSet("no general position set contains the forced vertices")
    witness = VertexSet(search.to_vertices(best_bits), provenance="solved")
    log.debug("gp search: n=%d gp=%d nodes=%d exhausted=%s", n, best_size, nodes, exhausted)
    return GpResult(best_size, witness, nodes, not exhausted)


def gp_number(g: Graph, forced: Sequence[int] = (), budget: int | None = DEFAULT_BUDGET) -> GpResult:
    """Convenience wrapper: build the instance and solve."""
    return gp_number_exact(make_instance(g, forced=forced, budget=budget))
