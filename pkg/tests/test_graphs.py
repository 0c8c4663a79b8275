from __future__ import annotations

from fractions import Fraction

import pytest

from liftgap.graphs import (
    MetricInstance,
    AmbiguousDetourError,
    DisconnectedGraphError,
    GraphError,
    LabeledGraph,
    NoDetourError,
    complete_edge_list,
    complete_graph,
    is_strongly_connected,
    metric_closure,
    unique_bfs_path_excluding,
)
from liftgap.instances import build_cgk_loop

from oracles import bellman_ford, enumerate_detours


def test_constructor_rejects_bad_edges():
    with pytest.raises(GraphError):
        LabeledGraph(True, 2, [(0, 0)])
    with pytest.raises(GraphError):
        LabeledGraph(True, 2, [(0, 2)])
    with pytest.raises(GraphError):
        LabeledGraph(True, 2, [(0, 1), (0, 1)])
    with pytest.raises(GraphError):
        LabeledGraph(True, 2, [(0, 1)], weights=[Fraction(-1)])


def test_undirected_edges_canonicalized():
    g = LabeledGraph(False, 3, [(2, 0), (1, 2)])
    assert g.edges[0] == (0, 2)
    assert g.edge_id(2, 0) == 0
    assert set(g.out_edges(2)) == {0, 1}


def test_parallel_edges_only_when_allowed():
    g = LabeledGraph(True, 2, [(0, 1), (0, 1)], allow_parallel=True)
    assert g.has_parallel_edges()
    assert g.edge_ids(0, 1) == (0, 1)
    with pytest.raises(GraphError):
        g.edge_id(0, 1)


def test_json_round_trip(loop23):
    text = loop23.to_json()
    back = LabeledGraph.from_json(text)
    assert back.edges == loop23.edges
    assert back.weights == loop23.weights
    assert back.labels == loop23.labels
    assert back.to_json() == text


def test_dot_contains_all_edges(loop23):
    dot = loop23.to_dot(bold_edges=[0], dashed_edges=[1])
    assert dot.count("->") == loop23.m
    assert "style=bold" in dot and 'style="bold,dashed"' in dot


def test_metric_closure_directed_cycle():
    g = LabeledGraph(True, 3, [(0, 1), (1, 2), (2, 0)])
    inst = metric_closure(g)
    for u in range(3):
        assert inst.dist[u][(u + 1) % 3] == 1
        assert inst.dist[(u + 1) % 3][u] == 2
    assert inst.triangle_violation() is None


def test_metric_closure_disconnected_names_pair():
    g = LabeledGraph(True, 2, [(0, 1)])
    with pytest.raises(DisconnectedGraphError) as err:
        metric_closure(g)
    assert (err.value.source, err.value.target) == (1, 0)


def test_metric_closure_matches_bellman_ford(loop23, metric23):
    for u in range(loop23.n):
        oracle = bellman_ford(loop23, u)
        assert tuple(oracle) == metric23.dist[u]


def test_every_loop_edge_is_metric_tight(loop23, metric23):
    for i, e in enumerate(loop23.edges):
        assert metric23.dist[e.tail][e.head] == loop23.weights[i]


def test_replacement_tail_distance(loop23, metric23):
    # distance between the tails of the two weight-3 closing edges,
    # frozen from an independent Bellman-Ford run
    repl = [i for i, lbl in enumerate(loop23.labels) if lbl.get("replacement")]
    a, b = (loop23.edges[i].tail for i in repl)
    assert bellman_ford(loop23, a)[b] == Fraction(7)
    assert metric23.dist[a][b] == Fraction(7)


def test_triangle_check_on_small_instances(metric30):
    assert metric30.triangle_violation() is None
    # exact check up to 24 nodes
    inst24 = metric_closure(build_cgk_loop(2, 4))
    assert inst24.n == 24
    assert inst24.triangle_violation() is None


def test_triangle_violation_detected():
    bad = MetricInstance(
        True,
        (
            (Fraction(0), Fraction(5), Fraction(1)),
            (Fraction(5), Fraction(0), Fraction(1)),
            (Fraction(1), Fraction(1), Fraction(0)),
        ),
    )
    assert bad.triangle_violation() == (0, 2, 1)


def test_strong_connectivity(loop23):
    assert is_strongly_connected(loop23)
    assert not is_strongly_connected(LabeledGraph(True, 2, [(0, 1)]))


def test_complete_graph_matches_edge_order(metric23):
    kg = complete_graph(metric23)
    assert kg.edges == tuple(complete_edge_list(metric23.n, True))
    assert all(
        kg.weights[i] == metric23.dist[e.tail][e.head]
        for i, e in enumerate(kg.edges)
    )


def test_unique_detour_on_small_loop():
    loop13 = build_cgk_loop(1, 3)
    for e in range(loop13.m):
        path = unique_bfs_path_excluding(loop13, e)
        detours = enumerate_detours(loop13, e)
        # hop-shortest and unique among shortest
        shortest = [p for p in detours if len(p) == len(detours[0])]
        assert len(shortest) == 1
        assert path == shortest[0]
        assert len(path) == 2  # the ride around the other closing cycle


def test_detour_for_chosen_edge_frozen():
    loop13 = build_cgk_loop(1, 3)
    assert unique_bfs_path_excluding(loop13, 0) == (5, 3)


def test_detour_tie_reports_both_witnesses():
    diamond = LabeledGraph(True, 4, [(0, 3), (0, 1), (1, 3), (0, 2), (2, 3)])
    with pytest.raises(AmbiguousDetourError) as err:
        unique_bfs_path_excluding(diamond, 0)
    assert set(err.value.witnesses) == {(1, 2), (3, 4)}


def test_detour_missing_raises():
    g = LabeledGraph(True, 2, [(0, 1), (1, 0)])
    with pytest.raises(NoDetourError):
        unique_bfs_path_excluding(g, 0)


def test_replacement_edge_detour_shape(loop23):
    # the closing-edge detour descends one copy, rides the other cycle,
    # and ascends the neighbor: (r+1) + (r-1) + (r+1) edges
    repl = [i for i, lbl in enumerate(loop23.labels) if lbl.get("replacement")]
    for e in repl:
        path = unique_bfs_path_excluding(loop23, e)
        assert len(path) == 10
        levels = [loop23.labels[p]["level"] for p in path]
        assert levels == [1, 1, 1, 1, 2, 2, 1, 1, 1, 1]
