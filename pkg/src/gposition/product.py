"""Cartesian products G□H, their additive metric, layers, and tree-product gp-sets."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal

import numpy as np

from .errors import FactorTooSmall, NotANonLeaf, NotATree, ParseError, VertexOutOfRange
from .graph import (
    DistanceMatrix,
    Graph,
    VertexSet,
    all_pairs_distances,
    build_graph,
    format_edge_list,
    interval,
    parse_edge_list_lines,
)
from .solver import DEFAULT_BUDGET, GpInstance, make_instance
from .trees import TreeProfile, is_tree, tree_profile

LayerKind = Literal["G", "H"]


@dataclass(frozen=True, eq=False)
class ProductGraph:
    """G□H with row-major indexing: vertex (a, b) is ``a * n(H) + b``."""

    g: Graph
    h: Graph
    materialized: Graph = field(repr=False)

    def flatten(self, a: int, b: int) -> int:
        if not (0 <= a < self.g.n and 0 <= b < self.h.n):
            raise VertexOutOfRange(f"coordinate ({a},{b}) outside {self.g.n}x{self.h.n}")
        return a * self.h.n + b

    def unflatten(self, v: int) -> tuple[int, int]:
        if not 0 <= v < self.materialized.n:
            raise VertexOutOfRange(f"vertex {v} outside [0,{self.materialized.n})")
        return divmod(v, self.h.n)

    @cached_property
    def dm_g(self) -> DistanceMatrix:
        return all_pairs_distances(self.g)

    @cached_property
    def dm_h(self) -> DistanceMatrix:
        return all_pairs_distances(self.h)

    @cached_property
    def dm(self) -> DistanceMatrix:
        """Distance matrix of the product assembled from the factor metrics."""
        dg = self.dm_g.d.astype(np.int32)
        dh = self.dm_h.d.astype(np.int32)
        n = self.materialized.n
        full = (dg[:, None, :, None] + dh[None, :, None, :]).reshape(n, n)
        return DistanceMatrix(n, full.astype(self.dm_g.d.dtype))


def cartesian_product(g: Graph, h: Graph) -> ProductGraph:
    nh = h.n
    edges = []
    for a in range(g.n):
        base = a * nh
        edges.extend((base + b, base + c) for b, c in h.edges)
    for b in range(nh):
        edges.extend((a * nh + b, c * nh + b) for a, c in g.edges)
    return ProductGraph(g, h, build_graph(g.n * nh, edges))


def product_distance(dm_g: DistanceMatrix, dm_h: DistanceMatrix, a: int, b: int, a2: int, b2: int) -> int:
    dm_g.check(a, a2)
    dm_h.check(b, b2)
    return int(dm_g.d[a, a2]) + int(dm_h.d[b, b2])


def product_interval(
    dm_g: DistanceMatrix, dm_h: DistanceMatrix, start: tuple[int, int], end: tuple[int, int]
) -> frozenset[tuple[int, int]]:
    """Interval between two product vertices as the set product of factor intervals."""
    (a, b), (a2, b2) = start, end
    ig = interval(dm_g, a, a2)
    ih = interval(dm_h, b, b2)
    return frozenset((x, y) for x in ig for y in ih)


@dataclass(frozen=True)
class Layer:
    kind: LayerKind
    anchor: int
    vertices: tuple[int, ...]


def layer(p: ProductGraph, kind: LayerKind, anchor: int) -> Layer:
    """A G-layer fixes the H coordinate ``anchor``; an H-layer fixes the G coordinate."""
    if kind == "G":
        if not 0 <= anchor < p.h.n:
            raise VertexOutOfRange(f"H-vertex {anchor} outside [0,{p.h.n})")
        verts = tuple(p.flatten(a, anchor) for a in range(p.g.n))
    elif kind == "H":
        if not 0 <= anchor < p.g.n:
            raise VertexOutOfRange(f"G-vertex {anchor} outside [0,{p.g.n})")
        verts = tuple(p.flatten(anchor, b) for b in range(p.h.n))
    else:
        raise ValueError(f"layer kind must be 'G' or 'H', got {kind!r}")
    return Layer(kind, anchor, verts)


def _check_factor(t: TreeProfile, anchor: int | None, name: str) -> int:
    if not is_tree(t.graph):
        raise NotATree(f"factor {name} is not a tree")
    if t.graph.n < 3:
        raise FactorTooSmall(f"factor {name} has order {t.graph.n} < 3")
    if anchor is None:
        return t.nonleaves[0]
    if not 0 <= anchor < t.graph.n:
        raise VertexOutOfRange(f"anchor {anchor} outside factor {name}")
    if t.graph.degree(anchor) < 2:
        raise NotANonLeaf(f"anchor {anchor} is a leaf of factor {name}")
    return anchor


def construct_maximal_gp(
    t_g: TreeProfile, t_h: TreeProfile, vi: int | None = None, vj: int | None = None
) -> VertexSet:
    """The set (L(T) x {vj}) ∪ ({vi} x L(T*)), as flattened product indices.

    ``vi`` and ``vj`` must be non-leaves; they default to the smallest-index
    non-leaf of each factor.  The result is a maximal general position set of
    size l(T) + l(T*).
    """
    vi = _check_factor(t_g, vi, "G")
    vj = _check_factor(t_h, vj, "H")
    nh = t_h.graph.n
    verts = [a * nh + vj for a in t_g.leaves] + [vi * nh + b for b in t_h.leaves]
    return VertexSet(verts, provenance="constructed")


def theorem_prediction(t_g: TreeProfile, t_h: TreeProfile) -> int:
    """gp of a product of two trees of order >= 3: the leaf counts add."""
    for t, name in ((t_g, "G"), (t_h, "H")):
        if t.graph.n < 3:
            raise FactorTooSmall(
                f"factor {name} has order {t.graph.n}; use the exact solver for order < 3"
            )
    return t_g.leaf_count + t_h.leaf_count


def tree_factor_profiles(p: ProductGraph) -> tuple[TreeProfile, TreeProfile] | None:
    if p.g.n >= 3 and p.h.n >= 3 and is_tree(p.g) and is_tree(p.h):
        return tree_profile(p.g), tree_profile(p.h)
    return None


def product_instance(
    p: ProductGraph, forced: Iterable[int] = (), budget: int | None = DEFAULT_BUDGET
) -> GpInstance:
    """Solver instance for a product, seeded with the explicit construction for tree factors."""
    seed = None
    profiles = tree_factor_profiles(p)
    if profiles is not None:
        seed = construct_maximal_gp(*profiles)
    return make_instance(p.materialized, forced=forced, budget=budget, seed=seed, dm=p.dm)


def parse_product_spec(text: str) -> tuple[Graph, Graph]:
    """Two edge-list sections separated by a line holding only ``%``."""
    lines = text.splitlines()
    cuts = [i for i, line in enumerate(lines) if line.strip() == "%"]
    if len(cuts) != 1:
        raise ParseError(f"product spec needs exactly one '%' separator line, found {len(cuts)}")
    k = cuts[0]
    return parse_edge_list_lines(lines[:k]), parse_edge_list_lines(lines[k + 1 :])


def format_product_spec(g: Graph, h: Graph) -> str:
    return format_edge_list(g) + "%\n" + format_edge_list(h)
