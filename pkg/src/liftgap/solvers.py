"""Exact integer optima (bitmask DP) and exact LP optima (cutting planes).

The dynamic programs clear denominators and run over plain integers, which is
exact; results are rescaled back to Fractions.  The LP side starts from the
degree/balance system with box bounds and lazily adds violated cut
constraints found by min-cut separation until none remain; an exhaustive
subset-scan separation mode provides the independent oracle route for small
instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .graphs import (
    EdgeVector,
    GraphError,
    LabeledGraph,
    MetricInstance,
    complete_edge_list,
    complete_graph,
)
from .flows import global_min_cut_check, max_flow_with_cut
from .polytopes import PolytopeKind
from .simplex import solve_lp

DP_NODE_LIMIT = 22


class ResourceLimitError(RuntimeError):
    """Instance exceeds a hard resource cap (reported, never truncated)."""


@dataclass(frozen=True)
class DpResult:
    value: Fraction
    witness: tuple[int, ...]

    def to_json_obj(self) -> dict:
        from .rational import decimal_string, format_rational

        return {
            "value": format_rational(self.value),
            "value_decimal": decimal_string(self.value),
            "witness": list(self.witness),
        }


#: One pooled cut: node set S with the constraint sum over delta^+(S) (or
#: delta(S) when undirected) >= threshold.
Cut = tuple[frozenset[int], Fraction]


@dataclass(frozen=True)
class LpResult:
    value: Fraction
    point: EdgeVector
    cut_pool: tuple[Cut, ...]
    rounds: int

    def to_json_obj(self) -> dict:
        from .rational import decimal_string, format_rational

        return {
            "value": format_rational(self.value),
            "value_decimal": decimal_string(self.value),
            "point": [format_rational(v) for v in self.point],
            "cuts": [
                {"nodes": sorted(nodes), "threshold": format_rational(thr)}
                for nodes, thr in self.cut_pool
            ],
            "rounds": self.rounds,
        }


def _scaled_distances(inst: MetricInstance) -> tuple[list[list[int]], int]:
    scale = 1
    for row in inst.dist:
        for d in row:
            scale = lcm(scale, d.denominator)
    ints = [[int(d * scale) for d in row] for row in inst.dist]
    return ints, scale


def _check_dp_size(n: int) -> None:
    if n > DP_NODE_LIMIT:
        raise ResourceLimitError(
            f"bitmask DP capped at {DP_NODE_LIMIT} nodes, got {n}"
        )


def held_karp_tour(inst: MetricInstance) -> DpResult:
    """Exact minimum hamiltonian cycle cost over the instance's distances."""
    n = inst.n
    _check_dp_size(n)
    if n == 1:
        return DpResult(Fraction(0), (0,))
    dist, scale = _scaled_distances(inst)
    size = 1 << n
    infinity = (max(max(row) for row in dist) + 1) * (n + 1)
    dp = [infinity] * (size * n)
    parent = [-1] * (size * n)
    dp[(1 << 0) * n + 0] = 0
    for mask in range(1, size):
        if not mask & 1:
            continue
        base = mask * n
        for last in range(n):
            cost = dp[base + last]
            if cost >= infinity:
                continue
            row = dist[last]
            for nxt in range(1, n):
                bit = 1 << nxt
                if mask & bit:
                    continue
                cand = cost + row[nxt]
                slot = (mask | bit) * n + nxt
                if cand < dp[slot]:
                    dp[slot] = cand
                    parent[slot] = last
    full = size - 1
    best_last = -1
    best = infinity
    for last in range(1, n):
        cost = dp[full * n + last]
        if cost >= infinity:
            continue
        total = cost + dist[last][0]
        if total < best:
            best = total
            best_last = last
    if best_last == -1:
        raise GraphError("no hamiltonian cycle exists")
    order = []
    mask, last = full, best_last
    while last != -1:
        order.append(last)
        prev = parent[mask * n + last]
        mask ^= 1 << last
        last = prev
    order.reverse()
    return DpResult(Fraction(best, scale), tuple(order))


def held_karp_path(inst: MetricInstance, s: int, t: int) -> DpResult:
    """Exact minimum hamiltonian s-t path cost over the instance's distances."""
    n = inst.n
    _check_dp_size(n)
    if s == t:
        raise GraphError("path endpoints must be distinct")
    if not (0 <= s < n and 0 <= t < n):
        raise GraphError("path endpoints out of range")
    dist, scale = _scaled_distances(inst)
    size = 1 << n
    infinity = (max(max(row) for row in dist) + 1) * (n + 1)
    dp = [infinity] * (size * n)
    parent = [-1] * (size * n)
    dp[(1 << s) * n + s] = 0
    sbit = 1 << s
    for mask in range(1, size):
        if not mask & sbit:
            continue
        base = mask * n
        for last in range(n):
            cost = dp[base + last]
            if cost >= infinity:
                continue
            row = dist[last]
            for nxt in range(n):
                bit = 1 << nxt
                if mask & bit:
                    continue
                cand = cost + row[nxt]
                slot = (mask | bit) * n + nxt
                if cand < dp[slot]:
                    dp[slot] = cand
                    parent[slot] = last
    best = dp[(size - 1) * n + t]
    if best >= infinity:
        raise GraphError("no hamiltonian path exists")
    order = []
    mask, last = size - 1, t
    while last != -1:
        order.append(last)
        prev = parent[mask * n + last]
        mask ^= 1 << last
        last = prev
    order.reverse()
    return DpResult(Fraction(best, scale), tuple(order))


def tour_cost(inst: MetricInstance, order: Sequence[int]) -> Fraction:
    total = Fraction(0)
    for a, b in zip(order, order[1:]):
        total += inst.dist[a][b]
    total += inst.dist[order[-1]][order[0]]
    return total


def path_cost(inst: MetricInstance, order: Sequence[int]) -> Fraction:
    total = Fraction(0)
    for a, b in zip(order, order[1:]):
        total += inst.dist[a][b]
    return total


# -- LP over the relaxation polytopes ---------------------------------------


def _base_rows(
    kind: PolytopeKind, n: int, edges
) -> tuple[list[list[Fraction]], list[Fraction]]:
    zero, one, two = Fraction(0), Fraction(1), Fraction(2)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def incidence(select) -> list[Fraction]:
        row = [zero] * len(edges)
        for i, e in enumerate(edges):
            coeff = select(e)
            if coeff:
                row[i] = Fraction(coeff)
        return row

    tag = kind.tag
    for v in range(n):
        if tag == "st":
            rows.append(incidence(lambda e: 1 if v in e else 0))
            rhs.append(two)
        elif tag == "sp":
            rows.append(incidence(lambda e: 1 if v in e else 0))
            rhs.append(one if v in (kind.s, kind.t) else two)
        elif tag == "at":
            rows.append(incidence(lambda e: 1 if e.tail == v else 0))
            rhs.append(one)
            rows.append(incidence(lambda e: 1 if e.head == v else 0))
            rhs.append(one)
        elif tag == "atbal":
            rows.append(
                incidence(lambda e: 1 if e.tail == v else (-1 if e.head == v else 0))
            )
            rhs.append(zero)
        elif tag == "ap":
            rows.append(incidence(lambda e: 1 if e.tail == v else 0))
            rhs.append(zero if v == kind.t else one)
            rows.append(incidence(lambda e: 1 if e.head == v else 0))
            rhs.append(zero if v == kind.s else one)
    return rows, rhs


def _cut_classes(kind: PolytopeKind) -> list[tuple[str, Fraction]]:
    """The cut families of a kind as (membership rule, threshold) tags."""
    if kind.tag in ("at", "atbal"):
        return [("all", Fraction(1))]
    if kind.tag == "st":
        return [("all", Fraction(2))]
    if kind.tag == "sp":
        return [("noncrossing", Fraction(2)), ("crossing", Fraction(1))]
    return [("avoid-t", Fraction(1)), ("with-s", Fraction(1))]


def _class_contains(rule: str, kind: PolytopeKind, nodes: frozenset[int]) -> bool:
    if rule == "all":
        return True
    if rule == "crossing":
        return (kind.s in nodes) != (kind.t in nodes)
    if rule == "noncrossing":
        return (kind.s in nodes) == (kind.t in nodes)
    if rule == "avoid-t":
        return kind.t not in nodes
    if rule == "with-s":
        return kind.s in nodes
    raise ValueError(rule)


def _cut_row(edges, nodes: frozenset[int], directed: bool) -> list[Fraction]:
    row = [Fraction(0)] * len(edges)
    for i, e in enumerate(edges):
        tin, hin = e.tail in nodes, e.head in nodes
        if tin == hin:
            continue
        if directed:
            if tin:
                row[i] = Fraction(1)
        else:
            row[i] = Fraction(1)
    return row


def _canonical_cut(kind: PolytopeKind, n: int, nodes: frozenset[int],
                   threshold: Fraction) -> Cut:
    """Normalize a violated cut to the out-of-S form used for LP rows."""
    if not kind.directed:
        # delta(S) = delta(complement); fix the side containing node 0.
        if 0 not in nodes:
            nodes = frozenset(range(n)) - nodes
    return (nodes, threshold)


def _separate_flow(
    kind: PolytopeKind, kg: LabeledGraph, x: Sequence[Fraction]
) -> list[Cut]:
    """All violated cuts the flow sweeps discover at x, canonicalized."""
    n = kg.n
    found: dict[frozenset[int], Fraction] = {}

    def note(nodes: frozenset[int], threshold: Fraction) -> None:
        nodes, threshold = _canonical_cut(kind, n, nodes, threshold)
        if nodes not in found or found[nodes] < threshold:
            found[nodes] = threshold

    tag = kind.tag
    if tag in ("at", "atbal"):
        for v in range(1, n):
            for a, b in ((0, v), (v, 0)):
                value, nodes = max_flow_with_cut(kg, x, a, b)
                if value < 1:
                    note(nodes, Fraction(1))
    elif tag == "st":
        for v in range(1, n):
            value, nodes = max_flow_with_cut(kg, x, 0, v)
            if value < 2:
                note(nodes, Fraction(2))
    elif tag == "sp":
        s, t = kind.s, kind.t
        value, nodes = max_flow_with_cut(kg, x, s, t)
        if value < 1:
            note(nodes, Fraction(1))
        hit = global_min_cut_check(
            kg, x, Fraction(2), restriction=("noncrossing", s, t)
        )
        if hit is not None:
            note(hit.nodes, Fraction(2))
    else:  # ap
        s, t = kind.s, kind.t
        for v in range(n):
            if v != t:
                value, nodes = max_flow_with_cut(kg, x, v, t)
                if value < 1:
                    note(nodes, Fraction(1))
            if v != s:
                value, nodes = max_flow_with_cut(kg, x, s, v)
                if value < 1:
                    # delta^-(S) for S avoiding s == delta^+ of the complement
                    note(nodes, Fraction(1))
    return sorted(found.items(), key=lambda cut: (sorted(cut[0]), cut[1]))


def _separate_enumerate(
    kind: PolytopeKind, kg: LabeledGraph, x: Sequence[Fraction]
) -> list[Cut]:
    """Scan every proper subset for violated cuts (oracle separation).

    Returns the most violated handful so the working LP stays small; the
    scan itself is exhaustive, so an empty result certifies every cut.
    """
    n = kg.n
    if n > 16:
        raise ResourceLimitError("subset-scan separation capped at 16 nodes")
    found: dict[frozenset[int], tuple[Fraction, Fraction]] = {}
    classes = _cut_classes(kind)
    for bits in range(1, (1 << n) - 1):
        nodes = frozenset(v for v in range(n) if bits & (1 << v))
        for rule, threshold in classes:
            if not _class_contains(rule, kind, nodes):
                continue
            total = Fraction(0)
            for i, e in enumerate(kg.edges):
                tin, hin = e.tail in nodes, e.head in nodes
                if tin == hin:
                    continue
                if not kg.directed or tin:
                    total += x[i]
            if total < threshold:
                key, thr = _canonical_cut(kind, n, nodes, threshold)
                gap = thr - total
                if key not in found or found[key] < (gap, thr):
                    found[key] = (gap, thr)
    ranked = sorted(
        found.items(), key=lambda item: (-item[1][0], sorted(item[0]), item[1][1])
    )
    return [(nodes, thr) for nodes, (_, thr) in ranked[: 2 * n]]


def lp_optimize(
    kind: PolytopeKind, inst: MetricInstance, separation: str = "flow"
) -> LpResult:
    """Exact optimum of d.x over the polytope via lazy cut generation.

    `separation` picks how violated cuts are found: "flow" (min-cut sweeps)
    or "enumerate" (exhaustive subset scan; the small-instance oracle).
    Finitely many distinct cuts exist, each round adds at least one new one,
    so the loop terminates with a point no cut of the polytope rejects.
    """
    if kind.directed != inst.directed:
        want = "directed" if kind.directed else "undirected"
        raise GraphError(f"polytope {kind.tag} needs a {want} metric instance")
    if separation not in ("flow", "enumerate"):
        raise ValueError(f"unknown separation mode {separation!r}")
    n = inst.n
    edges = complete_edge_list(n, inst.directed)
    kg = complete_graph(inst)
    cost = [inst.dist[e.tail][e.head] for e in edges]
    base_rows, base_rhs = _base_rows(kind, n, edges)
    separate = _separate_flow if separation == "flow" else _separate_enumerate

    pool: dict[frozenset[int], Fraction] = {}
    rounds = 0
    while True:
        rounds += 1
        nstruct = len(edges)
        nslack = len(pool)
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        for row, b in zip(base_rows, base_rhs):
            rows.append(list(row) + [Fraction(0)] * nslack)
            rhs.append(b)
        for slack_index, (nodes, threshold) in enumerate(sorted(
            pool.items(), key=lambda cut: (sorted(cut[0]), cut[1])
        )):
            row = _cut_row(edges, nodes, inst.directed) + [Fraction(0)] * nslack
            row[nstruct + slack_index] = Fraction(-1)
            rows.append(row)
            rhs.append(threshold)
        upper: list[Optional[Fraction]] = [Fraction(1)] * nstruct + [None] * nslack
        value, solution = solve_lp(cost + [Fraction(0)] * nslack, rows, rhs, upper)
        point = tuple(solution[:nstruct])

        new_cuts = [
            (nodes, thr)
            for nodes, thr in separate(kind, kg, point)
            if pool.get(nodes, Fraction(0)) < thr
        ]
        if not new_cuts:
            return LpResult(
                value=value,
                point=point,
                cut_pool=tuple(sorted(pool.items(),
                                      key=lambda cut: (sorted(cut[0]), cut[1]))),
                rounds=rounds,
            )
        for nodes, thr in new_cuts:
            pool[nodes] = max(thr, pool.get(nodes, Fraction(0)))


def enumerate_all_cuts(kind: PolytopeKind, n: int) -> list[Cut]:
    """Every cut constraint of the polytope, materialized (tiny n only)."""
    if n > 16:
        raise ResourceLimitError("cut materialization capped at 16 nodes")
    cuts: dict[frozenset[int], Fraction] = {}
    for bits in range(1, (1 << n) - 1):
        nodes = frozenset(v for v in range(n) if bits & (1 << v))
        for rule, threshold in _cut_classes(kind):
            if _class_contains(rule, kind, nodes):
                key, thr = _canonical_cut(kind, n, nodes, threshold)
                if key not in cuts or cuts[key] < thr:
                    cuts[key] = thr
    return sorted(cuts.items(), key=lambda cut: (sorted(cut[0]), cut[1]))
