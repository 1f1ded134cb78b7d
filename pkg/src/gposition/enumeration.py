"""Free tree catalogs and the exhaustive verification sweeps.

Trees are grown one leaf at a time from the catalog of the previous order and
deduplicated by a center-rooted AHU encoding.  Each catalog member is rebuilt
from its key, so vertex labels are canonical too.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement

from .errors import NotATree, OrderOutOfRange
from .graph import Graph, build_graph
from .product import cartesian_product, product_instance, theorem_prediction
from .solver import DEFAULT_BUDGET, gp_number_exact, make_instance
from .trees import is_tree, nonleaf_in_some_gp_set, tree_profile, two_components_one_path

MAX_ORDER = 10


def tree_centers(g: Graph) -> list[int]:
    """One or two central vertices, found by repeatedly stripping leaves."""
    if g.n <= 2:
        return list(range(g.n))
    degree = [g.degree(v) for v in range(g.n)]
    layer = [v for v in range(g.n) if degree[v] <= 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in g.adjacency[v]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_key(g: Graph, root: int) -> str:
    parent = {root: -1}
    order = [root]
    for v in order:
        for w in g.adjacency[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    enc: dict[int, str] = {}
    for v in reversed(order):
        kids = sorted(enc[w] for w in g.adjacency[v] if parent.get(w) == v and w != root)
        enc[v] = "(" + "".join(kids) + ")"
    return enc[root]


def canonical_tree_key(g: Graph) -> str:
    """Isomorphism-invariant string for a tree.

    Nested-bracket encoding rooted at the center; for two centers, the smaller
    of the two encodings.
    """
    if not is_tree(g):
        raise NotATree("canonical keys are only defined for trees")
    return min(_rooted_key(g, c) for c in tree_centers(g))


def tree_from_key(key: str) -> Graph:
    """Rebuild a tree from its bracket encoding, numbering vertices in preorder."""
    edges = []
    stack: list[int] = []
    count = 0
    for ch in key:
        if ch == "(":
            if stack:
                edges.append((stack[-1], count))
            stack.append(count)
            count += 1
        elif ch == ")":
            stack.pop()
        else:
            raise ValueError(f"bad character {ch!r} in tree key")
    if stack or count == 0:
        raise ValueError(f"unbalanced tree key {key!r}")
    return build_graph(count, edges)


@dataclass(frozen=True)
class TreeCatalog:
    order: int
    trees: tuple[Graph, ...]
    canonical_keys: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)


@lru_cache(maxsize=None)
def _keys_of_order(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("()",)
    keys = set()
    for key in _keys_of_order(n - 1):
        t = tree_from_key(key)
        for v in range(t.n):
            grown = build_graph(n, list(t.edges) + [(v, n - 1)])
            keys.add(canonical_tree_key(grown))
    return tuple(sorted(keys))


def enumerate_free_trees(n: int) -> TreeCatalog:
    if not 1 <= n <= MAX_ORDER:
        raise OrderOutOfRange(f"tree order must be in [1, {MAX_ORDER}], got {n}")
    keys = _keys_of_order(n)
    return TreeCatalog(n, tuple(tree_from_key(k) for k in keys), keys)


def trees_in_range(lo: int, hi: int) -> list[tuple[str, Graph]]:
    out = []
    for n in range(lo, hi + 1):
        cat = enumerate_free_trees(n)
        out.extend(zip(cat.canonical_keys, cat.trees))
    return out


# --- Theorem sweep -----------------------------------------------------------


@dataclass
class PairRecord:
    key_g: str
    key_h: str
    order_g: int
    order_h: int
    leaves_g: int
    leaves_h: int
    predicted: int
    computed: int
    seed_size: int
    proven_optimal: bool
    nodes: int
    witness: list[int]
    elapsed_ms: float

    @property
    def ok(self) -> bool:
        return self.proven_optimal and self.predicted == self.computed


@dataclass
class SweepReport:
    min_order: int
    max_order: int
    records: list[PairRecord] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def pairs_checked(self) -> int:
        return len(self.records)

    @property
    def mismatches(self) -> list[tuple[str, str, int, int]]:
        return [(r.key_g, r.key_h, r.predicted, r.computed) for r in self.records if not r.ok]

    def to_dict(self, timing: bool = True) -> dict:
        recs = []
        for r in self.records:
            d = asdict(r)
            if not timing:
                d.pop("elapsed_ms")
            recs.append(d)
        out = {
            "command": "sweep",
            "min_order": self.min_order,
            "max_order": self.max_order,
            "pairs_checked": self.pairs_checked,
            "mismatches": [list(m) for m in self.mismatches],
            "total_nodes": sum(r.nodes for r in self.records),
            "elapsed_ms": round(self.elapsed_ms, 3),
            "pairs": recs,
        }
        if not timing:
            out.pop("elapsed_ms")
        return out


def check_tree_pair(key_g: str, key_h: str, budget: int | None = DEFAULT_BUDGET) -> PairRecord:
    start = time.perf_counter()
    g, h = tree_from_key(key_g), tree_from_key(key_h)
    pg, ph = tree_profile(g), tree_profile(h)
    p = cartesian_product(g, h)
    inst = product_instance(p, budget=budget)
    res = gp_number_exact(inst)
    return PairRecord(
        key_g=key_g,
        key_h=key_h,
        order_g=g.n,
        order_h=h.n,
        leaves_g=pg.leaf_count,
        leaves_h=ph.leaf_count,
        predicted=theorem_prediction(pg, ph),
        computed=res.gp_number,
        seed_size=len(inst.seed) if inst.seed is not None else 0,
        proven_optimal=res.proven_optimal,
        nodes=res.nodes_expanded,
        witness=sorted(res.witness),
        elapsed_ms=round((time.perf_counter() - start) * 1000, 3),
    )


def _check_pair_args(args):
    return check_tree_pair(*args)


def _default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def sweep_verify_theorem(
    min_order: int, max_order: int, jobs: int | None = None, budget: int | None = DEFAULT_BUDGET
) -> SweepReport:
    """Solve every unordered pair of free trees with orders in the range and compare
    the exact gp of their product against the sum of leaf counts."""
    if not 3 <= min_order <= max_order <= MAX_ORDER:
        raise OrderOutOfRange(f"need 3 <= min <= max <= {MAX_ORDER}, got [{min_order}, {max_order}]")
    start = time.perf_counter()
    keys = [k for k, _ in trees_in_range(min_order, max_order)]
    work = [(a, b, budget) for a, b in combinations_with_replacement(keys, 2)]
    jobs = jobs or _default_jobs()
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_check_pair_args, work, chunksize=4))
    else:
        records = [check_tree_pair(*w) for w in work]
    return SweepReport(min_order, max_order, records, (time.perf_counter() - start) * 1000)


# --- membership sweep --------------------------------------------------------


@dataclass
class MembershipRecord:
    key: str
    order: int
    vertex: int
    leaves: int
    characterization: bool
    two_component_rule: bool
    forced_optimum: int
    proven_optimal: bool

    @property
    def solver_attains(self) -> bool:
        return self.forced_optimum == self.leaves

    @property
    def ok(self) -> bool:
        return self.proven_optimal and self.characterization == self.solver_attains


@dataclass
class MembershipReport:
    max_order: int
    records: list[MembershipRecord] = field(default_factory=list)
    trees_checked: int = 0
    elapsed_ms: float = 0.0

    @property
    def mismatches(self) -> list[MembershipRecord]:
        return [r for r in self.records if not r.ok]

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "command": "membership",
            "max_order": self.max_order,
            "trees_checked": self.trees_checked,
            "vertices_checked": len(self.records),
            "mismatches": [asdict(r) for r in self.mismatches],
            "elapsed_ms": round(self.elapsed_ms, 3),
            "records": [dict(asdict(r), solver_attains=r.solver_attains) for r in self.records],
        }
        if not timing:
            out.pop("elapsed_ms")
        return out


def sweep_verify_membership(max_order: int, budget: int | None = DEFAULT_BUDGET) -> MembershipReport:
    """For every tree of order 3..max_order and each non-leaf u, compare the
    two-component characterization with a forced-inclusion exact solve."""
    if not 3 <= max_order <= 8:
        raise OrderOutOfRange(f"membership sweep needs 3 <= max_order <= 8, got {max_order}")
    start = time.perf_counter()
    report = MembershipReport(max_order)
    for key, g in trees_in_range(3, max_order):
        report.trees_checked += 1
        prof = tree_profile(g)
        for u in prof.nonleaves:
            res = gp_number_exact(make_instance(g, forced=[u], budget=budget))
            report.records.append(
                MembershipRecord(
                    key=key,
                    order=g.n,
                    vertex=u,
                    leaves=prof.leaf_count,
                    characterization=nonleaf_in_some_gp_set(prof, u),
                    two_component_rule=two_components_one_path(prof, u),
                    forced_optimum=res.gp_number,
                    proven_optimal=res.proven_optimal,
                )
            )
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report
