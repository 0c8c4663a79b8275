from __future__ import annotations

from fractions import Fraction

import pytest

from liftgap.graphs import GraphError, is_strongly_connected
from liftgap.instances import (
    build_cgk_graph,
    build_cgk_loop,
    build_sym_pair,
    classify_edge,
    extend_to_complete,
    metric_objective,
    sympath_fractional_vector,
    unit_extension,
)

from oracles import bellman_ford

GRID = [(k, r) for k in range(1, 8) for r in range(2, 201) if r ** k <= 200]


def node_count(k, r):
    return r + 2 if k == 1 else r * node_count(k - 1, r) + 2


def edge_count(k, r):
    return 2 * (r + 1) if k == 1 else r * edge_count(k - 1, r) + 2 * (r + 1)


def total_weight(k, r):
    base = Fraction(2 * (r + 1))
    if k == 1:
        return base
    return r * total_weight(k - 1, r) + base * r ** (k - 1)


def test_param_validation():
    for bad in [(0, 3), (1, 1), (-2, 5)]:
        with pytest.raises(ValueError):
            build_cgk_graph(*bad)
        with pytest.raises(ValueError):
            build_cgk_loop(*bad)
    with pytest.raises(ValueError):
        build_sym_pair(0, 0)
    with pytest.raises(ValueError):
        build_sym_pair(1, -1)


def test_base_case_figures():
    g13 = build_cgk_graph(1, 3)
    assert (g13.n, g13.m) == (5, 8)
    assert all(w == 1 for w in g13.weights)
    assert g13.s is not None and g13.t is not None
    g12 = build_cgk_graph(1, 2)
    assert (g12.n, g12.m) == (4, 6)


def test_level2_counts():
    g23 = build_cgk_graph(2, 3)
    assert (g23.n, g23.m) == (17, 32)
    new_edges = [i for i, lbl in enumerate(g23.labels) if lbl["level"] == 2]
    assert len(new_edges) == 8
    assert all(g23.weights[i] == 3 for i in new_edges)


def test_counts_match_recurrences_full_grid():
    for k, r in GRID:
        g = build_cgk_graph(k, r)
        assert (g.n, g.m) == (node_count(k, r), edge_count(k, r)), (k, r)
        loop = build_cgk_loop(k, r)
        assert loop.n == node_count(k, r) - 2, (k, r)
        assert loop.m == edge_count(k, r) - 2, (k, r)
        assert loop.total_weight() == total_weight(k, r) - 2 * Fraction(r) ** (k - 1)


def test_loop_weight_anchor():
    loop = build_cgk_loop(2, 3)
    assert loop.total_weight() == 42
    assert loop.total_weight() <= 48  # 2k(r+1)r^(k-1)


def test_smallest_loop_is_wellformed_with_parallel_pairs():
    loop = build_cgk_loop(1, 2)
    assert (loop.n, loop.m) == (2, 4)
    assert loop.has_parallel_edges()
    assert all(len(loop.out_edges(v)) == 2 and len(loop.in_edges(v)) == 2
               for v in range(loop.n))


def test_sympath_connected():
    from liftgap.graphs import is_connected

    for ell, q in [(1, 0), (3, 0), (4, 1), (2, 2)]:
        g, gp = build_sym_pair(ell, q)
        assert is_connected(g)
        assert is_connected(gp)


def test_connectivity_and_degrees_grid():
    for k, r in GRID:
        if r ** k > 70:
            continue  # structural spot checks; counts cover the full grid
        g = build_cgk_graph(k, r)
        assert is_strongly_connected(g), (k, r)
        loop = build_cgk_loop(k, r)
        assert is_strongly_connected(loop), (k, r)
        assert all(
            len(loop.out_edges(v)) == 2 and len(loop.in_edges(v)) == 2
            for v in range(loop.n)
        ), (k, r)


def test_every_loop_edge_metric_tight_grid():
    from liftgap.graphs import single_source_distances

    for k, r in GRID:
        loop = build_cgk_loop(k, r)
        for source in range(loop.n):
            dist = single_source_distances(loop, source)
            for ei in loop.out_edges(source):
                e = loop.edges[ei]
                assert dist[e.head] == loop.weights[ei], (k, r, ei)
        if loop.n <= 50:
            # independent oracle route on the instances small enough for it
            for source in range(loop.n):
                oracle = bellman_ford(loop, source)
                assert oracle == single_source_distances(loop, source)


def test_sympath_edges_metric_tight(sympath30, metric30):
    g, _ = sympath30
    for i, e in enumerate(g.edges):
        assert metric30.dist[e.tail][e.head] == g.weights[i] == 1


def test_classify_replacement_edges(loop23):
    for i, lbl in enumerate(loop23.labels):
        if lbl.get("replacement"):
            cls = classify_edge(loop23, i)
            assert cls.level == 2
            assert cls.mediating is None and cls.outer is None


def test_classify_mediating(loop23):
    # an edge of a level-1 copy touching that copy's own terminal
    for i, lbl in enumerate(loop23.labels):
        if lbl["level"] == 1:
            cls = classify_edge(loop23, i)
            assert cls.mediating == (lbl["pos"] in (0, 3))
            assert cls.outer is False  # one level below the top is always inner


def test_classify_outer_inner_at_depth():
    loop = build_cgk_loop(3, 2)
    per_level = {}
    outer = {True: 0, False: 0}
    for i, lbl in enumerate(loop.labels):
        cls = classify_edge(loop, i)
        per_level[cls.level] = per_level.get(cls.level, 0) + 1
        if cls.level == 1:
            child = lbl["copy"][-1]
            want = child == 1 if lbl["side"] == "source" else child == 0
            assert cls.outer == want, (i, lbl)
            outer[cls.outer] += 1
    # level-3 count from the edge recurrence: 2 remnants + 2 closing edges
    assert per_level == {1: 24, 2: 12, 3: 4}
    assert outer[True] > 0


def test_classify_requires_labels():
    from liftgap.graphs import LabeledGraph

    bare = LabeledGraph(True, 2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        classify_edge(bare, 0)


def test_sym_pair_counts():
    g41, gp41 = build_sym_pair(4, 1)
    assert (g41.n, g41.m) == (24, 74)
    assert gp41.n == 24 + 3 and gp41.m == 74 + 4
    g30, gp30 = build_sym_pair(3, 0)
    assert (g30.n, g30.m) == (16, 30)
    g10, gp10 = build_sym_pair(1, 0)
    assert g10.n == 12
    assert gp10.n == 12 and gp10.m == g10.m + 1  # no new nodes at ell=1


def test_sym_pair_edge_lists_nest(sympath30):
    g, gp = sympath30
    assert gp.edges[: g.m] == g.edges
    assert all(lbl["class"] == "new" for lbl in gp.labels[g.m:])


def test_fractional_vector_values(sympath30):
    g, _ = sympath30
    x = sympath_fractional_vector(g)
    assert set(x) == {Fraction(1), Fraction(1, 2), Fraction(1, 3)}
    assert sum(x) == 15


def test_fractional_vector_41():
    g, _ = build_sym_pair(4, 1)
    x = sympath_fractional_vector(g)
    assert set(x) == {Fraction(1), Fraction(3, 10), Fraction(1, 6)}
    assert sum(x) == 23
    # degree at any clique node: 5 clique edges + 3 links
    v = next(
        g.edges[i].head
        for i, lbl in enumerate(g.labels)
        if lbl["class"] == "clique"
    )
    assert sum(x[i] for i in g.out_edges(v)) == 2


def test_fractional_sum_identity_full_grid():
    for ell in range(1, 11):
        for q in range(0, 11):
            g, _ = build_sym_pair(ell, q)
            assert sum(sympath_fractional_vector(g)) == 2 * ell + 6 * q + 9, (ell, q)


def test_unit_extension(sympath30):
    g, gp = sympath30
    x = sympath_fractional_vector(g)
    extended = unit_extension(gp, x)
    assert extended[: g.m] == x
    assert all(v == 1 for v in extended[g.m:])


def test_extend_to_complete_objective(loop23, two_thirds23):
    inst, extended = extend_to_complete(loop23, two_thirds23)
    assert metric_objective(inst, extended) == 28
    assert metric_objective(inst, extended) <= 32  # (4/3) k (r+1) r^(k-1)
    support = sum(1 for v in extended if v != 0)
    assert support == loop23.m


def test_extend_to_complete_sympath(sympath30):
    g, _ = sympath30
    x = sympath_fractional_vector(g)
    inst, extended = extend_to_complete(g, x)
    assert metric_objective(inst, extended) == 15


def test_extend_zero_vector(loop23):
    inst, extended = extend_to_complete(loop23, [Fraction(0)] * loop23.m)
    assert metric_objective(inst, extended) == 0


def test_extend_rejects_parallel_edges():
    loop = build_cgk_loop(1, 2)
    with pytest.raises(GraphError):
        extend_to_complete(loop, [Fraction(1, 2)] * loop.m)
