"""Feasibility checkers for the five relaxation polytopes and their cones.

Each checker certifies box bounds, degree/balance equalities and the full
family of cut constraints (via flow-based cut certification), or returns the
first violated constraint as an exactly re-evaluable witness.  Constraint
order is fixed: box by edge id, degree/balance by node id, cuts by root-flow
order, so witnesses are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .flows import global_min_cut_check
from .graphs import GraphError, LabeledGraph

TAGS = ("st", "sp", "at", "ap", "atbal")


@dataclass(frozen=True)
class PolytopeKind:
    """Which constraint system applies; path kinds carry their terminals."""

    tag: str
    s: Optional[int] = None
    t: Optional[int] = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown polytope tag {self.tag!r}")
        if self.tag in ("sp", "ap"):
            if self.s is None or self.t is None:
                raise ValueError(f"{self.tag} needs distinct terminals s and t")
            if self.s == self.t:
                raise ValueError("terminals must be distinct")

    @property
    def directed(self) -> bool:
        return self.tag in ("at", "ap", "atbal")

    @classmethod
    def st(cls) -> "PolytopeKind":
        return cls("st")

    @classmethod
    def sp(cls, s: int, t: int) -> "PolytopeKind":
        return cls("sp", s, t)

    @classmethod
    def at(cls) -> "PolytopeKind":
        return cls("at")

    @classmethod
    def ap(cls, s: int, t: int) -> "PolytopeKind":
        return cls("ap", s, t)

    @classmethod
    def at_bal(cls) -> "PolytopeKind":
        return cls("atbal")


@dataclass(frozen=True)
class ConstraintWitness:
    """A violated constraint with enough data to re-evaluate it exactly."""

    kind: str  # "box" | "degree" | "balance" | "cut"
    relation: str  # "==" | ">=" | "<="
    lhs: Fraction
    rhs: Fraction
    edge: Optional[int] = None
    node: Optional[int] = None
    nodes: Optional[frozenset[int]] = None
    side: Optional[str] = None

    def holds(self) -> bool:
        """True when lhs `relation` rhs is satisfied (i.e. not a violation)."""
        if self.relation == "==":
            return self.lhs == self.rhs
        if self.relation == ">=":
            return self.lhs >= self.rhs
        return self.lhs <= self.rhs

    def to_json_obj(self) -> dict:
        from .rational import format_rational

        return {
            "kind": self.kind,
            "relation": self.relation,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "edge": self.edge,
            "node": self.node,
            "nodes": sorted(self.nodes) if self.nodes is not None else None,
            "side": self.side,
        }


def _edge_sum(g: LabeledGraph, x: Sequence[Fraction], ids: Sequence[int]) -> Fraction:
    return sum((x[i] for i in ids), Fraction(0))


def _check_dimensions(kind: PolytopeKind, g: LabeledGraph, x: Sequence[Fraction]) -> None:
    if len(x) != g.m:
        raise GraphError("vector must assign a value to every edge")
    if kind.directed != g.directed:
        want = "directed" if kind.directed else "undirected"
        raise GraphError(f"polytope {kind.tag} needs a {want} graph")
    for v in (kind.s, kind.t):
        if v is not None and not (0 <= v < g.n):
            raise GraphError(f"terminal {v} out of range")


def _box_witness(x: Sequence[Fraction]) -> Optional[ConstraintWitness]:
    for i, val in enumerate(x):
        if val < 0:
            return ConstraintWitness("box", ">=", Fraction(val), Fraction(0), edge=i)
        if val > 1:
            return ConstraintWitness("box", "<=", Fraction(val), Fraction(1), edge=i)
    return None


def _degree_witnesses(
    kind: PolytopeKind, g: LabeledGraph, x: Sequence[Fraction]
) -> Optional[ConstraintWitness]:
    tag = kind.tag
    for v in range(g.n):
        if tag == "st":
            lhs = _edge_sum(g, x, g.out_edges(v))
            if lhs != 2:
                return ConstraintWitness("degree", "==", lhs, Fraction(2), node=v)
        elif tag == "sp":
            lhs = _edge_sum(g, x, g.out_edges(v))
            rhs = Fraction(1) if v in (kind.s, kind.t) else Fraction(2)
            if lhs != rhs:
                return ConstraintWitness("degree", "==", lhs, rhs, node=v)
        elif tag == "at":
            out = _edge_sum(g, x, g.out_edges(v))
            if out != 1:
                return ConstraintWitness("degree", "==", out, Fraction(1), node=v, side="out")
            into = _edge_sum(g, x, g.in_edges(v))
            if into != 1:
                return ConstraintWitness("degree", "==", into, Fraction(1), node=v, side="in")
        elif tag == "atbal":
            out = _edge_sum(g, x, g.out_edges(v))
            into = _edge_sum(g, x, g.in_edges(v))
            if out != into:
                return ConstraintWitness("balance", "==", out, into, node=v)
        elif tag == "ap":
            out = _edge_sum(g, x, g.out_edges(v))
            rhs = Fraction(0) if v == kind.t else Fraction(1)
            if out != rhs:
                return ConstraintWitness("degree", "==", out, rhs, node=v, side="out")
            into = _edge_sum(g, x, g.in_edges(v))
            rhs = Fraction(0) if v == kind.s else Fraction(1)
            if into != rhs:
                return ConstraintWitness("degree", "==", into, rhs, node=v, side="in")
    return None


def _cut_witness(
    kind: PolytopeKind, g: LabeledGraph, x: Sequence[Fraction]
) -> Optional[ConstraintWitness]:
    def from_cut(violated) -> ConstraintWitness:
        return ConstraintWitness(
            "cut", ">=", violated.capacity, violated.threshold,
            nodes=violated.nodes, side=violated.side,
        )

    tag = kind.tag
    if tag in ("at", "atbal"):
        hit = global_min_cut_check(g, x, Fraction(1), side="both")
        if hit:
            return from_cut(hit)
    elif tag == "st":
        hit = global_min_cut_check(g, x, Fraction(2))
        if hit:
            return from_cut(hit)
    elif tag == "sp":
        hit = global_min_cut_check(
            g, x, Fraction(2), restriction=("noncrossing", kind.s, kind.t)
        )
        if hit:
            return from_cut(hit)
        hit = global_min_cut_check(
            g, x, Fraction(1), restriction=("crossing", kind.s, kind.t)
        )
        if hit:
            return from_cut(hit)
    elif tag == "ap":
        hit = global_min_cut_check(
            g, x, Fraction(1), side="out", restriction=("avoid", kind.t)
        )
        if hit:
            return from_cut(hit)
        hit = global_min_cut_check(
            g, x, Fraction(1), side="in", restriction=("avoid", kind.s)
        )
        if hit:
            return from_cut(hit)
    return None


def check_point(
    kind: PolytopeKind, g: LabeledGraph, x: Sequence[Fraction]
) -> Optional[ConstraintWitness]:
    """Exact membership test of x in the polytope; None means feasible."""
    _check_dimensions(kind, g, x)
    x = [Fraction(v) for v in x]
    witness = _box_witness(x)
    if witness:
        return witness
    witness = _degree_witnesses(kind, g, x)
    if witness:
        return witness
    return _cut_witness(kind, g, x)


def check_cone_vector(
    kind: PolytopeKind, g: LabeledGraph, v: Sequence[Fraction]
) -> Optional[ConstraintWitness]:
    """Membership of (lambda, lambda*x) in the cone over the polytope.

    lambda < 0 is rejected; lambda = 0 requires the zero vector; otherwise the
    rescaled tail must pass :func:`check_point`.
    """
    if len(v) != g.m + 1:
        raise GraphError("cone vector needs one multiplier plus one edge entry each")
    lam = Fraction(v[0])
    tail = [Fraction(c) for c in v[1:]]
    if lam < 0:
        return ConstraintWitness("box", ">=", lam, Fraction(0), edge=None)
    if lam == 0:
        for i, c in enumerate(tail):
            if c != 0:
                return ConstraintWitness("box", "==", c, Fraction(0), edge=i)
        return None
    return check_point(kind, g, [c / lam for c in tail])
