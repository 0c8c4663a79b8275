"""Graph substrate: exact-rational weighted graphs, metrics, shortest paths.

Graphs are immutable after construction.  Edges are identified by their index
into ``LabeledGraph.edges`` (not by endpoint pair), which keeps edge vectors,
frames and protection-matrix rows well defined even in the one degenerate
generated case that carries a parallel pair.  All node ids are dense integers.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .rational import format_rational, parse_rational

#: An edge-indexed assignment of exact rationals (fractional points, capacities).
EdgeVector = tuple[Fraction, ...]


class GraphError(ValueError):
    """Structural or usage error in a graph operation."""


class DisconnectedGraphError(GraphError):
    """Raised when a required path does not exist; names the offending pair."""

    def __init__(self, source: int, target: int):
        super().__init__(f"no path from node {source} to node {target}")
        self.source = source
        self.target = target


class NoDetourError(GraphError):
    """No alternative path exists once the excluded edge is removed."""


class AmbiguousDetourError(GraphError):
    """Two distinct hop-shortest detours exist; both witnesses attached."""

    def __init__(self, edge: int, first: tuple[int, ...], second: tuple[int, ...]):
        super().__init__(
            f"shortest detour for edge {edge} is not unique: {list(first)} vs {list(second)}"
        )
        self.edge = edge
        self.witnesses = (first, second)


class Edge(NamedTuple):
    tail: int
    head: int


class LabeledGraph:
    """Directed or undirected graph with Fraction weights and per-edge labels.

    Undirected edges are stored once with ``tail < head``.  At most one edge
    per (ordered/unordered) pair is accepted unless ``allow_parallel`` is set;
    generators only ever need that for the smallest looped instance.
    """

    __slots__ = ("directed", "n", "edges", "weights", "labels", "s", "t",
                 "_out", "_in", "_pair_index")

    def __init__(
        self,
        directed: bool,
        n: int,
        edges: Iterable[tuple[int, int]],
        weights: Optional[Iterable[Fraction]] = None,
        labels: Optional[Iterable[Optional[dict]]] = None,
        s: Optional[int] = None,
        t: Optional[int] = None,
        allow_parallel: bool = False,
    ):
        if n < 1:
            raise GraphError("graph needs at least one node")
        self.directed = bool(directed)
        self.n = int(n)
        canon: list[Edge] = []
        for tail, head in edges:
            if not (0 <= tail < n and 0 <= head < n):
                raise GraphError(f"edge ({tail},{head}) out of range for n={n}")
            if tail == head:
                raise GraphError(f"self loop at node {tail} not allowed")
            if not directed and tail > head:
                tail, head = head, tail
            canon.append(Edge(tail, head))
        self.edges: tuple[Edge, ...] = tuple(canon)

        if weights is None:
            weights = [Fraction(1)] * len(self.edges)
        wlist = [Fraction(w) for w in weights]
        if len(wlist) != len(self.edges):
            raise GraphError("weights must align with edges")
        for i, w in enumerate(wlist):
            if w < 0:
                raise GraphError(f"negative weight on edge {i}")
        self.weights: tuple[Fraction, ...] = tuple(wlist)

        if labels is None:
            self.labels: tuple[Optional[dict], ...] = (None,) * len(self.edges)
        else:
            llist = list(labels)
            if len(llist) != len(self.edges):
                raise GraphError("labels must align with edges")
            self.labels = tuple(llist)

        for marker, name in ((s, "s"), (t, "t")):
            if marker is not None and not (0 <= marker < n):
                raise GraphError(f"terminal {name}={marker} out of range")
        self.s = s
        self.t = t

        self._pair_index: dict[Edge, list[int]] = {}
        for i, e in enumerate(self.edges):
            bucket = self._pair_index.setdefault(e, [])
            if bucket and not allow_parallel:
                raise GraphError(f"parallel edge ({e.tail},{e.head})")
            bucket.append(i)

        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(self.edges):
            out[e.tail].append(i)
            inc[e.head].append(i)
            if not directed:
                out[e.head].append(i)
                inc[e.tail].append(i)
        self._out = tuple(tuple(v) for v in out)
        self._in = tuple(tuple(v) for v in inc)

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_edges(self, v: int) -> tuple[int, ...]:
        """Edge ids leaving v (for undirected graphs: all incident)."""
        return self._out[v]

    def in_edges(self, v: int) -> tuple[int, ...]:
        """Edge ids entering v (for undirected graphs: all incident)."""
        return self._in[v]

    def other_end(self, edge: int, v: int) -> int:
        e = self.edges[edge]
        return e.head if e.tail == v else e.tail

    def edge_ids(self, tail: int, head: int) -> tuple[int, ...]:
        if not self.directed and tail > head:
            tail, head = head, tail
        return tuple(self._pair_index.get(Edge(tail, head), ()))

    def edge_id(self, tail: int, head: int) -> int:
        ids = self.edge_ids(tail, head)
        if len(ids) != 1:
            raise GraphError(f"edge ({tail},{head}) is missing or not unique")
        return ids[0]

    def has_parallel_edges(self) -> bool:
        return any(len(ids) > 1 for ids in self._pair_index.values())

    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "directed": self.directed,
            "n": self.n,
            "edges": [
                {
                    "tail": e.tail,
                    "head": e.head,
                    "weight": format_rational(self.weights[i]),
                    "labels": self.labels[i] or {},
                }
                for i, e in enumerate(self.edges)
            ],
            "s": self.s,
            "t": self.t,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LabeledGraph":
        edges = [(int(e["tail"]), int(e["head"])) for e in obj["edges"]]
        weights = [parse_rational(e.get("weight", "1")) for e in obj["edges"]]
        labels = [e.get("labels") or None for e in obj["edges"]]
        return cls(
            directed=bool(obj["directed"]),
            n=int(obj["n"]),
            edges=edges,
            weights=weights,
            labels=labels,
            s=obj.get("s"),
            t=obj.get("t"),
            allow_parallel=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "LabeledGraph":
        return cls.from_json_obj(json.loads(text))

    def to_dot(
        self,
        bold_edges: Iterable[int] = (),
        dashed_edges: Iterable[int] = (),
        name: str = "g",
    ) -> str:
        """DOT rendering; bold/dashed sets mark frame path/cycle edges."""
        bold = set(bold_edges)
        dashed = set(dashed_edges)
        kind = "digraph" if self.directed else "graph"
        arrow = "->" if self.directed else "--"
        lines = [f"{kind} {name} {{"]
        for v in range(self.n):
            marks = []
            if v == self.s:
                marks.append("s")
            if v == self.t:
                marks.append("t")
            suffix = f' [xlabel="{"/".join(marks)}"]' if marks else ""
            lines.append(f"  v{v}{suffix};")
        for i, e in enumerate(self.edges):
            attrs = [f'label="{format_rational(self.weights[i])}"']
            if i in dashed:
                attrs.append('style="bold,dashed"')
            elif i in bold:
                attrs.append("style=bold")
            lines.append(f'  v{e.tail} {arrow} v{e.head} [{", ".join(attrs)}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MetricInstance:
    """Complete graph on n nodes with exact shortest-path distances."""

    directed: bool
    dist: tuple[tuple[Fraction, ...], ...]
    s: Optional[int] = None
    t: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.dist)

    def triangle_violation(self) -> Optional[tuple[int, int, int]]:
        """First ordered triple breaking d(u,w) <= d(u,v) + d(v,w), else None."""
        n = self.n
        for u in range(n):
            for v in range(n):
                if v == u:
                    continue
                for w in range(n):
                    if w == u or w == v:
                        continue
                    if self.dist[u][w] > self.dist[u][v] + self.dist[v][w]:
                        return (u, v, w)
        return None

    def to_json_obj(self) -> dict:
        return {
            "directed": self.directed,
            "n": self.n,
            "dist": [[format_rational(d) for d in row] for row in self.dist],
            "s": self.s,
            "t": self.t,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MetricInstance":
        dist = tuple(
            tuple(parse_rational(cell) for cell in row) for row in obj["dist"]
        )
        return cls(directed=bool(obj["directed"]), dist=dist,
                   s=obj.get("s"), t=obj.get("t"))

    @classmethod
    def from_json(cls, text: str) -> "MetricInstance":
        return cls.from_json_obj(json.loads(text))


def single_source_distances(g: LabeledGraph, source: int) -> list[Optional[Fraction]]:
    """Dijkstra from one node; None marks unreachable nodes."""
    dist: list[Optional[Fraction]] = [None] * g.n
    dist[source] = Fraction(0)
    heap: list[tuple[Fraction, int]] = [(Fraction(0), source)]
    while heap:
        d, u = heapq.heappop(heap)
        if dist[u] is not None and d > dist[u]:
            continue
        for ei in g.out_edges(u):
            v = g.other_end(ei, u)
            nd = d + g.weights[ei]
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def metric_closure(g: LabeledGraph) -> MetricInstance:
    """All-pairs exact shortest-path distances of a nonnegatively weighted graph.

    The result satisfies the triangle inequality by construction.  A missing
    path raises :class:`DisconnectedGraphError` naming an unreachable pair.
    """
    rows: list[tuple[Fraction, ...]] = []
    for u in range(g.n):
        dist = single_source_distances(g, u)
        for v, d in enumerate(dist):
            if d is None:
                raise DisconnectedGraphError(u, v)
        rows.append(tuple(dist))  # type: ignore[arg-type]
    return MetricInstance(directed=g.directed, dist=tuple(rows), s=g.s, t=g.t)


def complete_edge_list(n: int, directed: bool) -> list[Edge]:
    """Canonical edge order of K_n: row-major ordered pairs (u<v if undirected)."""
    if directed:
        return [Edge(u, v) for u in range(n) for v in range(n) if v != u]
    return [Edge(u, v) for u in range(n) for v in range(u + 1, n)]


def complete_graph(inst: MetricInstance) -> LabeledGraph:
    """K_n over a metric instance, weights = distances, canonical edge order."""
    edges = complete_edge_list(inst.n, inst.directed)
    weights = [inst.dist[e.tail][e.head] for e in edges]
    return LabeledGraph(inst.directed, inst.n, edges, weights, s=inst.s, t=inst.t)


def is_connected(g: LabeledGraph) -> bool:
    """Connectivity of the undirected support."""
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for ei in list(g.out_edges(u)) + list(g.in_edges(u)):
            for w in g.edges[ei]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return all(seen)


def is_strongly_connected(g: LabeledGraph) -> bool:
    if not g.directed:
        return is_connected(g)

    def reach(adj_of) -> int:
        seen = [False] * g.n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for ei in adj_of(u):
                v = g.other_end(ei, u)
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count

    return reach(g.out_edges) == g.n and reach(g.in_edges) == g.n


def _shortest_detours(g: LabeledGraph, excluded: int, limit: int) -> list[tuple[int, ...]]:
    """Up to `limit` distinct hop-shortest tail->head paths avoiding `excluded`."""
    src, dst = g.edges[excluded]
    n = g.n
    dist = [-1] * n
    dist[src] = 0
    frontier = [src]
    while frontier and dist[dst] == -1:
        nxt = []
        for u in frontier:
            du = dist[u]
            for ei in g.out_edges(u):
                if ei == excluded:
                    continue
                v = g.other_end(ei, u)
                if dist[v] == -1:
                    dist[v] = du + 1
                    nxt.append(v)
        frontier = nxt
    if dist[dst] == -1:
        return []

    found: list[tuple[int, ...]] = []

    def backtrack(v: int, suffix: list[int]) -> None:
        if len(found) >= limit:
            return
        if v == src:
            found.append(tuple(reversed(suffix)))
            return
        for ei in g.in_edges(v):
            if ei == excluded:
                continue
            u = g.other_end(ei, v)
            if dist[u] == dist[v] - 1:
                suffix.append(ei)
                backtrack(u, suffix)
                suffix.pop()
                if len(found) >= limit:
                    return

    backtrack(dst, [])
    return found


def unique_bfs_path_excluding(g: LabeledGraph, edge: int) -> tuple[int, ...]:
    """The unique hop-shortest tail->head path avoiding the edge itself.

    Uniqueness is enforced, not assumed: a tie raises with both witnesses.
    """
    if not (0 <= edge < g.m):
        raise GraphError(f"edge index {edge} out of range")
    paths = _shortest_detours(g, edge, limit=2)
    if not paths:
        e = g.edges[edge]
        raise NoDetourError(
            f"no alternative path from {e.tail} to {e.head} once edge {edge} is removed"
        )
    if len(paths) > 1:
        raise AmbiguousDetourError(edge, paths[0], paths[1])
    return paths[0]
