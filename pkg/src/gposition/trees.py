"""Tree recognition, leaves, branching paths and tree gp-set facts."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import NotANonLeaf, NotATree, VertexOutOfRange
from .graph import Graph, VertexSet, is_connected


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


@dataclass(frozen=True)
class TreeProfile:
    graph: Graph
    leaves: tuple[int, ...]

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    @cached_property
    def nonleaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.graph.n) if self.graph.degree(v) >= 2)

    def is_leaf(self, v: int) -> bool:
        return self.graph.degree(v) == 1

    def branching_paths(self, root: int) -> list[tuple[int, ...]]:
        """The paths from ``root`` (degree >= 2) to every leaf, root first.

        Ordered by leaf index.
        """
        g = self.graph
        if not 0 <= root < g.n:
            raise VertexOutOfRange(f"vertex {root} outside [0,{g.n})")
        if g.degree(root) < 2:
            raise NotANonLeaf(f"vertex {root} has degree {g.degree(root)}")
        parent = _bfs_parents(g, root)
        paths = []
        for leaf in self.leaves:
            walk = [leaf]
            while walk[-1] != root:
                walk.append(parent[walk[-1]])
            paths.append(tuple(reversed(walk)))
        return paths

    @cached_property
    def all_branching_paths(self) -> dict[int, list[tuple[int, ...]]]:
        return {u: self.branching_paths(u) for u in self.nonleaves}


def _bfs_parents(g: Graph, root: int) -> list[int]:
    parent = [-1] * g.n
    parent[root] = root
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if parent[w] < 0:
                parent[w] = u
                queue.append(w)
    return parent


def tree_profile(g: Graph) -> TreeProfile:
    if not is_tree(g):
        raise NotATree("graph is not a tree")
    leaves = tuple(v for v in range(g.n) if g.degree(v) == 1)
    return TreeProfile(g, leaves)


def gp_number_tree(t: TreeProfile) -> int:
    """gp(T) equals the number of leaves (the single-vertex tree has gp 1)."""
    if t.graph.n == 1:
        return 1
    return t.leaf_count


def tree_gp_set(t: TreeProfile) -> VertexSet:
    if t.graph.n == 1:
        return VertexSet({0}, provenance="leaf-set")
    return VertexSet(t.leaves, provenance="leaf-set")


def components_without(g: Graph, u: int) -> list[list[int]]:
    """Connected components of ``g - u``, each sorted, ordered by smallest vertex."""
    seen = [False] * g.n
    seen[u] = True
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            x = queue.popleft()
            for w in g.adjacency[x]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def _component_degrees(g: Graph, comp: list[int]) -> dict[int, int]:
    members = set(comp)
    return {v: sum(1 for w in g.adjacency[v] if w in members) for v in comp}


def _is_path_component(g: Graph, comp: list[int]) -> bool:
    if len(comp) <= 2:
        return True
    degs = _component_degrees(g, comp).values()
    return all(d <= 2 for d in degs) and sum(1 for d in degs if d == 1) == 2


def _check_nonleaf(t: TreeProfile, u: int) -> None:
    g = t.graph
    if not 0 <= u < g.n:
        raise VertexOutOfRange(f"vertex {u} outside [0,{g.n})")
    if g.degree(u) < 2:
        raise NotANonLeaf(f"vertex {u} is a leaf")


def two_components_one_path(t: TreeProfile, u: int) -> bool:
    """``T - u`` has exactly two components and at least one is a path.

    This is the weaker statement: it also accepts a vertex whose path
    component hangs off ``u`` by an interior vertex (e.g. the middle of two
    joined cherries), and such a vertex is in no maximum gp-set.  Use
    :func:`nonleaf_in_some_gp_set` for the actual membership test.
    """
    _check_nonleaf(t, u)
    comps = components_without(t.graph, u)
    return len(comps) == 2 and any(_is_path_component(t.graph, c) for c in comps)


def nonleaf_in_some_gp_set(t: TreeProfile, u: int) -> bool:
    """Whether the non-leaf ``u`` lies in some maximum general position set.

    True exactly when ``u`` sits on a pendant path: ``T - u`` has two
    components and one of them is a path attached to ``u`` at an end vertex
    (a lone vertex or a single edge counts).
    """
    _check_nonleaf(t, u)
    g = t.graph
    comps = components_without(g, u)
    if len(comps) != 2:
        return False
    for comp in comps:
        degs = _component_degrees(g, comp)
        (attach,) = [w for w in g.adjacency[u] if w in degs]
        if all(d <= 2 for d in degs.values()) and degs[attach] <= 1:
            return True
    return False
