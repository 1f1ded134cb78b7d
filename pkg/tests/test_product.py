import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gposition.errors import FactorTooSmall, NotANonLeaf, NotATree, VertexOutOfRange
from gposition.graph import all_pairs_distances, cycle_graph, interval, path_graph, star_graph
from gposition.product import (
    cartesian_product,
    construct_maximal_gp,
    format_product_spec,
    layer,
    parse_product_spec,
    product_distance,
    product_interval,
    theorem_prediction,
)
from gposition.solver import is_maximal_gp, verify_general_position
from gposition.trees import tree_profile

from oracles import (
    brute_force_extendable,
    distance_table,
    interval_by_paths,
    product_by_definition,
    random_connected_graph,
    random_tree,
)

P2, P3, P4 = path_graph(2), path_graph(3), path_graph(4)
K13 = star_graph(3)


@pytest.mark.parametrize(
    "g, h, n, m",
    [(P2, P2, 4, 4), (P3, P3, 9, 12), (K13, P2, 8, 10)],
)
def test_product_sizes(g, h, n, m):
    p = cartesian_product(g, h)
    assert (p.materialized.n, p.materialized.m) == (n, m)
    assert p.materialized.m == g.n * h.m + h.n * g.m


def test_p2_square_is_c4():
    p = cartesian_product(P2, P2).materialized
    assert all(p.degree(v) == 2 for v in range(4))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5), st.integers(1, 5))
def test_product_matches_definition(seed, a, b):
    rng = random.Random(seed)
    g = random_connected_graph(rng, a, 0.4)
    h = random_connected_graph(rng, b, 0.4)
    assert cartesian_product(g, h).materialized == product_by_definition(g, h)


def test_index_round_trip():
    p = cartesian_product(K13, P3)
    for a in range(4):
        for b in range(3):
            assert p.unflatten(p.flatten(a, b)) == (a, b)
    with pytest.raises(VertexOutOfRange):
        p.flatten(4, 0)


def test_product_distance_examples():
    d3 = all_pairs_distances(P3)
    assert product_distance(d3, d3, 0, 0, 2, 2) == 4
    assert product_distance(d3, d3, 1, 2, 1, 2) == 0
    assert product_distance(all_pairs_distances(K13), d3, 1, 0, 2, 2) == 4
    with pytest.raises(VertexOutOfRange):
        product_distance(d3, d3, 0, 0, 3, 0)


def test_product_interval_examples():
    d3 = all_pairs_distances(P3)
    assert product_interval(d3, d3, (0, 0), (2, 2)) == {(a, b) for a in range(3) for b in range(3)}
    assert product_interval(d3, d3, (0, 1), (2, 1)) == {(0, 1), (1, 1), (2, 1)}
    got = product_interval(all_pairs_distances(K13), all_pairs_distances(P2), (1, 0), (2, 1))
    assert got == {(a, b) for a in (0, 1, 2) for b in (0, 1)}


def test_product_interval_matches_path_enumeration():
    p = cartesian_product(K13, P2)
    direct = interval_by_paths(p.materialized, p.flatten(1, 0), p.flatten(2, 1))
    assert {p.unflatten(v) for v in direct} == {(a, b) for a in (0, 1, 2) for b in (0, 1)}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_factored_metric_and_intervals(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, rng.randint(1, 5), 0.3)
    h = random_connected_graph(rng, rng.randint(1, 5), 0.3)
    p = cartesian_product(g, h)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    ref = distance_table(p.materialized)
    dmp = all_pairs_distances(p.materialized)
    nh = h.n
    for u in range(p.materialized.n):
        for v in range(p.materialized.n):
            (a, b), (c, d) = divmod(u, nh), divmod(v, nh)
            assert product_distance(dg, dh, a, b, c, d) == ref[u][v] == p.dm(u, v)
            direct = {divmod(w, nh) for w in interval(dmp, u, v)}
            assert product_interval(dg, dh, (a, b), (c, d)) == direct


def test_layers():
    p = cartesian_product(P3, P3)
    assert layer(p, "G", 0).vertices == (p.flatten(0, 0), p.flatten(1, 0), p.flatten(2, 0))
    q = cartesian_product(K13, P2)
    assert layer(q, "H", 0).vertices == (q.flatten(0, 0), q.flatten(0, 1))
    assert len(layer(cartesian_product(P2, P2), "G", 1).vertices) == 2
    with pytest.raises(VertexOutOfRange):
        layer(p, "G", 3)


def test_layer_induces_factor():
    g, h = star_graph(3), path_graph(4)
    p = cartesian_product(g, h)
    for b in range(h.n):
        verts = layer(p, "G", b).vertices
        induced = {(verts.index(u), verts.index(v)) for u, v in p.materialized.edges if u in verts and v in verts}
        assert induced == set(g.edges)
    for a in range(g.n):
        verts = layer(p, "H", a).vertices
        induced = {(verts.index(u), verts.index(v)) for u, v in p.materialized.edges if u in verts and v in verts}
        assert induced == set(h.edges)


def _coords(p, s):
    return {p.unflatten(v) for v in s}


def test_construct_examples():
    tk, tp = tree_profile(K13), tree_profile(P3)
    p = cartesian_product(K13, P3)
    s = construct_maximal_gp(tk, tp, 0, 1)
    assert _coords(p, s) == {(1, 1), (2, 1), (3, 1), (0, 0), (0, 2)}
    assert s.provenance == "constructed"
    q = cartesian_product(P3, P3)
    s = construct_maximal_gp(tp, tp)
    assert _coords(q, s) == {(0, 1), (2, 1), (1, 0), (1, 2)}
    assert len(construct_maximal_gp(tk, tk)) == 6


def test_construct_errors():
    tk = tree_profile(K13)
    with pytest.raises(FactorTooSmall):
        construct_maximal_gp(tree_profile(P2), tk)
    with pytest.raises(NotANonLeaf):
        construct_maximal_gp(tk, tk, vi=1)
    with pytest.raises(VertexOutOfRange):
        construct_maximal_gp(tk, tk, vj=9)


def test_theorem_prediction():
    assert theorem_prediction(tree_profile(P3), tree_profile(P3)) == 4
    assert theorem_prediction(tree_profile(K13), tree_profile(P4)) == 5
    assert theorem_prediction(tree_profile(star_graph(5)), tree_profile(star_graph(4))) == 9
    with pytest.raises(FactorTooSmall):
        theorem_prediction(tree_profile(P2), tree_profile(P3))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_construction_is_maximal_gp(seed):
    rng = random.Random(seed)
    g, h = random_tree(rng, rng.randint(3, 6)), random_tree(rng, rng.randint(3, 6))
    tg, th = tree_profile(g), tree_profile(h)
    vi, vj = rng.choice(tg.nonleaves), rng.choice(th.nonleaves)
    p = cartesian_product(g, h)
    s = construct_maximal_gp(tg, th, vi, vj)
    assert len(s) == tg.leaf_count + th.leaf_count
    assert verify_general_position(p.dm, s)
    assert is_maximal_gp(p.dm, s)
    assert not brute_force_extendable(p.materialized, s)


def test_product_spec_round_trip():
    text = format_product_spec(K13, P3)
    g, h = parse_product_spec(text)
    assert g == K13 and h == P3


def test_product_spec_needs_one_separator():
    from gposition.errors import ParseError

    with pytest.raises(ParseError):
        parse_product_spec("2 1\n0 1\n")
