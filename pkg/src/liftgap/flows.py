"""Exact max-flow and global cut certification.

Max-flow uses shortest augmenting paths (Edmonds-Karp), whose iteration bound
is independent of capacities, so it terminates on arbitrary rationals without
any scaling tricks.  Cut certification fixes node 0 as root and runs 2(n-1)
flows; restricted classes (side constraints of the path polytopes) get their
own flow families.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .graphs import GraphError, LabeledGraph


@dataclass(frozen=True)
class ViolatedCut:
    """Witness that some cut is below threshold; re-evaluates exactly."""

    nodes: frozenset[int]
    side: str  # "out" | "in" for directed graphs, "cut" for undirected
    capacity: Fraction
    threshold: Fraction


def _check_capacities(g: LabeledGraph, cap: Sequence[Fraction]) -> None:
    if len(cap) != g.m:
        raise GraphError("capacity vector must align with edges")
    for i, c in enumerate(cap):
        if c < 0:
            raise GraphError(f"negative capacity on edge {i}")


class _Residual:
    """Residual network; undirected edges become one arc per direction."""

    __slots__ = ("n", "arc_to", "arc_cap", "adj")

    def __init__(self, g: LabeledGraph, cap: Sequence[Fraction]):
        self.n = g.n
        self.arc_to: list[int] = []
        self.arc_cap: list[Fraction] = []
        self.adj: list[list[int]] = [[] for _ in range(g.n)]
        for i, e in enumerate(g.edges):
            back = cap[i] if not g.directed else Fraction(0)
            self._add(e.tail, e.head, cap[i])
            self._add(e.head, e.tail, back)

    def _add(self, u: int, v: int, c: Fraction) -> None:
        self.adj[u].append(len(self.arc_to))
        self.arc_to.append(v)
        self.arc_cap.append(c)

    def max_flow(self, s: int, t: int) -> Fraction:
        total = Fraction(0)
        arc_to, arc_cap, adj = self.arc_to, self.arc_cap, self.adj
        while True:
            prev_arc = [-1] * self.n
            prev_arc[s] = -2
            queue = deque([s])
            while queue:
                u = queue.popleft()
                if u == t:
                    break
                for a in adj[u]:
                    v = arc_to[a]
                    if prev_arc[v] == -1 and arc_cap[a] > 0:
                        prev_arc[v] = a
                        queue.append(v)
            if prev_arc[t] == -1:
                return total
            bottleneck = None
            v = t
            while v != s:
                a = prev_arc[v]
                if bottleneck is None or arc_cap[a] < bottleneck:
                    bottleneck = arc_cap[a]
                v = arc_to[a ^ 1]
            v = t
            while v != s:
                a = prev_arc[v]
                arc_cap[a] -= bottleneck
                arc_cap[a ^ 1] += bottleneck
                v = arc_to[a ^ 1]
            total += bottleneck

    def source_side(self, s: int) -> frozenset[int]:
        """Nodes reachable from s in the residual graph (a min-cut side)."""
        seen = [False] * self.n
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for a in self.adj[u]:
                v = self.arc_to[a]
                if not seen[v] and self.arc_cap[a] > 0:
                    seen[v] = True
                    stack.append(v)
        return frozenset(v for v in range(self.n) if seen[v])


def max_flow(g: LabeledGraph, cap: Sequence[Fraction], s: int, t: int) -> Fraction:
    """Exact s-t max-flow value (= min s-t cut capacity)."""
    if s == t:
        raise GraphError("max_flow needs distinct terminals")
    _check_capacities(g, cap)
    return _Residual(g, cap).max_flow(s, t)


def max_flow_with_cut(
    g: LabeledGraph, cap: Sequence[Fraction], s: int, t: int
) -> tuple[Fraction, frozenset[int]]:
    """Max-flow value plus the source side of a minimum cut."""
    if s == t:
        raise GraphError("max_flow needs distinct terminals")
    _check_capacities(g, cap)
    net = _Residual(g, cap)
    value = net.max_flow(s, t)
    return value, net.source_side(s)


def cut_capacity(
    g: LabeledGraph, cap: Sequence[Fraction], nodes: frozenset[int], side: str
) -> Fraction:
    """Exact capacity of the cut around `nodes` (side: out | in | cut)."""
    total = Fraction(0)
    for i, e in enumerate(g.edges):
        tin, hin = e.tail in nodes, e.head in nodes
        if tin == hin:
            continue
        if side == "cut" or (side == "out" and tin) or (side == "in" and hin):
            total += cap[i]
    return total


def _contract(
    g: LabeledGraph, cap: Sequence[Fraction], a: int, b: int
) -> tuple[LabeledGraph, list[Fraction], list[int]]:
    """Merge node b into a; drop a-b edges. Returns (graph, caps, old->new map)."""
    remap = []
    nxt = 0
    for v in range(g.n):
        if v == b:
            remap.append(-1)
        else:
            remap.append(nxt)
            nxt += 1
    remap[b] = remap[a]
    edges = []
    caps = []
    for i, e in enumerate(g.edges):
        u, v = remap[e.tail], remap[e.head]
        if u == v:
            continue
        edges.append((u, v))
        caps.append(cap[i])
    contracted = LabeledGraph(g.directed, g.n - 1, edges, caps, allow_parallel=True)
    return contracted, caps, remap


def global_min_cut_check(
    g: LabeledGraph,
    cap: Sequence[Fraction],
    threshold: Fraction,
    side: str = "both",
    restriction: Optional[tuple] = None,
) -> Optional[ViolatedCut]:
    """Certify that every cut in the requested class has capacity >= threshold.

    Classes:
      restriction None                 - all nonempty proper node sets
      ("crossing", s, t)               - sets containing s but not t
      ("noncrossing", s, t)            - sets with s, t on the same side
      ("avoid", w)                     - sets not containing w

    Returns None when certified, else a :class:`ViolatedCut` witness.  For
    directed graphs `side` selects the leaving ("out") or entering ("in")
    constraint family; over the unrestricted class the two have equal minima
    (complementation), but witnesses are reported per requested side.
    """
    if g.n < 2:
        raise GraphError("cut certification needs at least two nodes")
    _check_capacities(g, cap)
    threshold = Fraction(threshold)
    cut_side = "cut" if not g.directed else None

    def violated(value: Fraction, nodes: frozenset[int], want: str) -> ViolatedCut:
        if cut_side is not None:
            return ViolatedCut(nodes, "cut", value, threshold)
        if want == "in":
            # delta^-(complement) == delta^+(nodes)
            comp = frozenset(range(g.n)) - nodes
            return ViolatedCut(comp, "in", value, threshold)
        return ViolatedCut(nodes, "out", value, threshold)

    sides = ("out", "in") if side == "both" else (side,)

    if restriction is None:
        root = 0
        for want in sides if g.directed else ("out",):
            for v in range(1, g.n):
                value, nodes = max_flow_with_cut(g, cap, root, v)
                if value < threshold:
                    return violated(value, nodes, want)
                value, nodes = max_flow_with_cut(g, cap, v, root)
                if value < threshold:
                    return violated(value, nodes, want)
        return None

    tag = restriction[0]
    if tag == "crossing":
        s, t = restriction[1], restriction[2]
        value, nodes = max_flow_with_cut(g, cap, s, t)
        if value < threshold:
            return violated(value, nodes, "out")
        return None

    if tag == "noncrossing":
        s, t = restriction[1], restriction[2]
        if g.n == 2:
            return None  # every proper subset separates s from t
        contracted, caps, remap = _contract(g, cap, s, t)
        inner = global_min_cut_check(contracted, caps, threshold, side=side)
        if inner is None:
            return None
        expanded = frozenset(
            v for v in range(g.n) if remap[v] in inner.nodes
        )
        return ViolatedCut(expanded, inner.side, inner.capacity, threshold)

    if tag == "avoid":
        w = restriction[1]
        for want in sides if g.directed else ("out",):
            for v in range(g.n):
                if v == w:
                    continue
                if want == "out":
                    value, nodes = max_flow_with_cut(g, cap, v, w)
                    if value < threshold:
                        return ViolatedCut(nodes, "out" if g.directed else "cut",
                                           value, threshold)
                else:
                    value, nodes = max_flow_with_cut(g, cap, w, v)
                    if value < threshold:
                        comp = frozenset(range(g.n)) - nodes
                        return ViolatedCut(comp, "in", value, threshold)
        return None

    raise GraphError(f"unknown cut restriction {restriction!r}")
