"""Deterministic generators for both instance families.

The recursive directed family ("cgk") nests r copies of the previous level
between a fresh source and sink; the looped variant removes the outermost
terminals and closes the severed source/sink paths into two directed cycles.
The undirected family ("sympath") joins two horizontal paths to two cliques,
with outside terminals s and t.

Every generated edge carries labels (level, introducing copy address, route
side, position) so downstream modules can reconstruct the construction
without private bookkeeping.  Copy order is canonical: the source path visits
child copies left to right in construction order, the sink path in the
opposite order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .graphs import (
    EdgeVector,
    GraphError,
    LabeledGraph,
    MetricInstance,
    complete_edge_list,
    metric_closure,
)


def _validate_cgk(k: int, r: int) -> None:
    if k < 1:
        raise ValueError(f"level count k must be >= 1, got {k}")
    if r < 2:
        raise ValueError(f"branching r must be >= 2, got {r}")


def _validate_sympath(ell: int, q: int) -> None:
    if ell < 1:
        raise ValueError(f"path length ell must be >= 1, got {ell}")
    if q < 0:
        raise ValueError(f"clique parameter q must be >= 0, got {q}")


class _Builder:
    def __init__(self):
        self.count = 0
        self.edges: list[tuple[int, int]] = []
        self.weights: list[Fraction] = []
        self.labels: list[dict] = []

    def node(self) -> int:
        self.count += 1
        return self.count - 1

    def edge(self, tail: int, head: int, weight: Fraction, label: dict) -> int:
        self.edges.append((tail, head))
        self.weights.append(weight)
        self.labels.append(label)
        return len(self.edges) - 1


def _emit_copy(b: _Builder, level: int, r: int, addr: tuple[int, ...]) -> tuple[int, int]:
    """Emit one copy of the level-`level` building block; returns (source, sink)."""
    s = b.node()
    t = b.node()
    if level == 1:
        stations_src = [b.node() for _ in range(r)]
        stations_snk = stations_src
    else:
        kids = [_emit_copy(b, level - 1, r, addr + (i,)) for i in range(r)]
        stations_src = [kid[0] for kid in kids]
        stations_snk = [kid[1] for kid in kids]
    w = Fraction(r) ** (level - 1)

    def lab(side: str, pos: int) -> dict:
        return {"level": level, "copy": list(addr), "side": side, "pos": pos}

    src_stops = [s] + stations_src + [t]
    for pos in range(r + 1):
        b.edge(src_stops[pos], src_stops[pos + 1], w, lab("source", pos))
    snk_stops = [t] + stations_snk[::-1] + [s]
    for pos in range(r + 1):
        b.edge(snk_stops[pos], snk_stops[pos + 1], w, lab("sink", pos))
    return s, t


def build_cgk_graph(k: int, r: int) -> LabeledGraph:
    """The recursive directed family with terminals: levels k, branching r."""
    _validate_cgk(k, r)
    b = _Builder()
    s, t = _emit_copy(b, k, r, ())
    return LabeledGraph(True, b.count, b.edges, b.weights, b.labels, s=s, t=t)


def build_cgk_loop(k: int, r: int) -> LabeledGraph:
    """The looped variant: outer terminals removed, both severed paths closed.

    The two closing edges replace the four removed terminal edges and carry
    the top-level weight.  For (k, r) = (1, 2) the construction degenerates to
    two nodes with a parallel pair in each direction; that one graph is built
    with parallel edges permitted.
    """
    _validate_cgk(k, r)
    b = _Builder()
    if k == 1:
        stations_src = [b.node() for _ in range(r)]
        stations_snk = stations_src
    else:
        kids = [_emit_copy(b, k - 1, r, (i,)) for i in range(r)]
        stations_src = [kid[0] for kid in kids]
        stations_snk = [kid[1] for kid in kids]
    w = Fraction(r) ** (k - 1)

    def lab(side: str, pos: int, replacement: bool = False) -> dict:
        label = {"level": k, "copy": [], "side": side, "pos": pos}
        if replacement:
            label["replacement"] = True
        return label

    for i in range(1, r):
        b.edge(stations_src[i - 1], stations_src[i], w, lab("source", i))
    b.edge(stations_src[r - 1], stations_src[0], w, lab("source", r, True))
    for i in range(r - 1, 0, -1):
        b.edge(stations_snk[i], stations_snk[i - 1], w, lab("sink", r - i))
    b.edge(stations_snk[0], stations_snk[r - 1], w, lab("sink", r, True))

    return LabeledGraph(
        True, b.count, b.edges, b.weights, b.labels,
        allow_parallel=(k == 1 and r == 2),
    )


def cgk_level_of(g: LabeledGraph) -> int:
    """Top level k of a generated graph, recovered from edge labels."""
    levels = [lbl["level"] for lbl in g.labels if lbl and "level" in lbl]
    if not levels:
        raise GraphError("graph carries no construction labels")
    return max(levels)


def cgk_branching_of(g: LabeledGraph) -> int:
    """Branching r of a generated graph, recovered from edge labels."""
    k = cgk_level_of(g)
    top_source = [
        lbl for lbl in g.labels
        if lbl and lbl.get("level") == k and lbl.get("side") == "source"
    ]
    # Looped graphs have r top edges per cycle; graphs with terminals r+1.
    if any(lbl.get("replacement") for lbl in top_source):
        return len(top_source)
    return len(top_source) - 1


@dataclass(frozen=True)
class EdgeClass:
    """Construction class of an edge: level plus the case-analysis flags."""

    level: int
    mediating: Optional[bool]
    outer: Optional[bool]


def classify_edge(g: LabeledGraph, edge: int) -> EdgeClass:
    """Level / mediating / outer classification of a generated edge.

    Mediating: the edge touches a terminal of the copy that introduced it.
    Outer: following the route forward from the edge's head, the terminal
    reached is entered (other than by this route) by a terminal-incident edge
    of the parent copy; equivalently the introducing copy sits at the far end
    of its parent's visiting order for this route side.  Top-level edges have
    neither flag; edges directly below the top are all inner.
    """
    lbl = g.labels[edge]
    if not lbl or "level" not in lbl:
        raise GraphError(f"edge {edge} carries no construction labels")
    k = cgk_level_of(g)
    r = cgk_branching_of(g)
    level = lbl["level"]
    if level == k:
        return EdgeClass(level, None, None)
    mediating = lbl["pos"] in (0, r)
    if level == k - 1:
        outer = False
    else:
        child_index = lbl["copy"][-1]
        if lbl["side"] == "source":
            outer = child_index == r - 1
        else:
            outer = child_index == 0
    return EdgeClass(level, mediating, outer)


def build_sym_pair(ell: int, q: int) -> tuple[LabeledGraph, LabeledGraph]:
    """The two-path/two-clique undirected family and its closed companion.

    Returns (g, g_closed): `g` has terminals s, t attached to the cliques;
    `g_closed` additionally joins s to t by a fresh path of `ell` edges
    (appended last, so the companion's edge list extends `g`'s).
    """
    _validate_sympath(ell, q)
    c = 3 * q + 3
    b = _Builder()
    s = b.node()
    t = b.node()
    top = [b.node() for _ in range(ell + 1)]
    bottom = [b.node() for _ in range(ell + 1)]
    left = [b.node() for _ in range(c)]
    right = [b.node() for _ in range(c)]

    one = Fraction(1)
    for i in range(ell):
        b.edge(top[i], top[i + 1], one, {"class": "path", "row": "top"})
    for i in range(ell):
        b.edge(bottom[i], bottom[i + 1], one, {"class": "path", "row": "bottom"})
    for clique, name in ((left, "left"), (right, "right")):
        for i in range(c):
            for j in range(i + 1, c):
                b.edge(clique[i], clique[j], one, {"class": "clique", "clique": name})
    for u, link in ((top[0], "top-left"), (bottom[0], "bottom-left"), (s, "s")):
        for v in left:
            b.edge(u, v, one, {"class": "link", "link": link})
    for u, link in ((top[ell], "top-right"), (bottom[ell], "bottom-right"), (t, "t")):
        for v in right:
            b.edge(u, v, one, {"class": "link", "link": link})

    g = LabeledGraph(False, b.count, list(b.edges), list(b.weights),
                     [dict(l) for l in b.labels], s=s, t=t)

    inner = [b.node() for _ in range(ell - 1)]
    stops = [s] + inner + [t]
    for i in range(ell):
        b.edge(stops[i], stops[i + 1], one, {"class": "new"})
    g_closed = LabeledGraph(False, b.count, b.edges, b.weights, b.labels, s=s, t=t)
    return g, g_closed


def sympath_fractional_vector(g: LabeledGraph) -> EdgeVector:
    """The canonical fractional point of a generated two-clique path graph.

    Path edges get 1, clique edges (2 - 1/(q+1))/(3q+2), all remaining edges
    1/(3q+3); the total objective comes out to exactly 2*ell + 6*q + 9.
    """
    c = sum(
        1 for lbl in g.labels if lbl and lbl.get("class") == "link" and lbl.get("link") == "s"
    )
    if c == 0 or c % 3 != 0:
        raise GraphError("graph is not a generated two-clique path instance")
    q = (c - 3) // 3
    clique_value = (2 - Fraction(1, q + 1)) / (3 * q + 2)
    link_value = Fraction(1, 3 * q + 3)
    values = []
    for lbl in g.labels:
        if not lbl or "class" not in lbl:
            raise GraphError("graph is not a generated two-clique path instance")
        cls = lbl["class"]
        if cls == "path":
            values.append(Fraction(1))
        elif cls == "clique":
            values.append(clique_value)
        elif cls == "link":
            values.append(link_value)
        else:
            raise GraphError("fractional point is defined on the open instance only")
    return tuple(values)


def unit_extension(g_closed: LabeledGraph, x: Sequence[Fraction]) -> EdgeVector:
    """Extend a vector on the open instance with 1s on the closing path."""
    extra = g_closed.m - len(x)
    if extra < 0:
        raise GraphError("vector longer than the closed instance's edge list")
    return tuple(Fraction(v) for v in x) + (Fraction(1),) * extra


def extend_to_complete(
    g: LabeledGraph, x: Sequence[Fraction]
) -> tuple[MetricInstance, EdgeVector]:
    """Metric closure of g paired with x extended by zeros to all of K_n.

    The extended vector is indexed by the canonical complete-graph edge order.
    Graphs with parallel edges cannot be embedded in a simple complete graph
    and are rejected.
    """
    if len(x) != g.m:
        raise GraphError("vector must align with edges")
    if g.has_parallel_edges():
        raise GraphError("cannot extend a vector on a graph with parallel edges")
    inst = metric_closure(g)
    by_pair = {g.edges[i]: Fraction(v) for i, v in enumerate(x)}
    extended = tuple(
        by_pair.get(e, Fraction(0)) for e in complete_edge_list(g.n, g.directed)
    )
    return inst, extended


def metric_objective(inst: MetricInstance, x: Sequence[Fraction]) -> Fraction:
    """d . x for a vector indexed by the canonical complete-graph edge order."""
    edges = complete_edge_list(inst.n, inst.directed)
    if len(x) != len(edges):
        raise GraphError("vector must align with the complete edge list")
    return sum((inst.dist[e.tail][e.head] * Fraction(v) for e, v in zip(edges, x)),
               Fraction(0))
