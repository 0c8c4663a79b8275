"""Gap reports: run the full pipeline and collect exact numbers with provenance.

Every number in a report is an exact rational tagged with where it came from
("computed" when this run produced it, "lemma-bound" when it is a closed-form
bound valid for the parameter range, "formula" for parameter-only arithmetic)
plus a display-only decimal rendering.  Identical inputs yield byte-identical
JSON: keys are sorted and all rationals are canonical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .frames import build_frame_family
from .graphs import complete_graph
from .instances import (
    build_cgk_loop,
    build_sym_pair,
    extend_to_complete,
    metric_objective,
    sympath_fractional_vector,
    unit_extension,
)
from .lift import build_cgk_matrix, verify_one_round
from .polytopes import PolytopeKind, check_point
from .rational import decimal_string, format_rational
from .solvers import DP_NODE_LIMIT, held_karp_path, held_karp_tour, lp_optimize


class PipelineError(RuntimeError):
    """A pipeline stage rejected its input; carries the violation payload."""

    def __init__(self, stage: str, payload):
        super().__init__(f"stage {stage!r} failed")
        self.stage = stage
        self.payload = payload


@dataclass(frozen=True)
class ReportValue:
    value: Fraction
    provenance: str  # "computed" | "lemma-bound" | "formula"

    def to_json_obj(self) -> dict:
        return {
            "value": format_rational(self.value),
            "decimal": decimal_string(self.value),
            "provenance": self.provenance,
        }


def _maybe(rv: Optional[ReportValue]) -> Optional[dict]:
    return rv.to_json_obj() if rv is not None else None


@dataclass(frozen=True)
class GapReport:
    family: str
    params: dict
    n: Optional[int]
    m: Optional[int]
    total_weight: Optional[ReportValue]
    int_opt_bound: Optional[ReportValue]
    int_opt: Optional[ReportValue]
    int_opt_witness: Optional[tuple[int, ...]]
    frac_value: Optional[ReportValue]
    frac_certificate: Optional[str]
    lp_value: Optional[ReportValue]
    lemma_ratio: ReportValue
    ratio_limit: str

    def to_json_obj(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "n": self.n,
            "m": self.m,
            "total_weight": _maybe(self.total_weight),
            "int_opt_bound": _maybe(self.int_opt_bound),
            "int_opt": _maybe(self.int_opt),
            "int_opt_witness": (
                list(self.int_opt_witness) if self.int_opt_witness else None
            ),
            "frac_value": _maybe(self.frac_value),
            "frac_certificate": self.frac_certificate,
            "lp_value": _maybe(self.lp_value),
            "lemma_ratio": self.lemma_ratio.to_json_obj(),
            "ratio_limit": self.ratio_limit,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def to_csv(self) -> str:
        header = "k,r,n,m,W,IntOPT_bound,IntOPT,frac_value,lp_value,lemma_ratio"

        def cell(rv: Optional[ReportValue]) -> str:
            return format_rational(rv.value) if rv is not None else ""

        if self.family == "cgk":
            first, second = self.params["k"], self.params["r"]
        else:
            first, second = self.params["ell"], self.params["q"]
        row = ",".join(
            [
                str(first),
                str(second),
                "" if self.n is None else str(self.n),
                "" if self.m is None else str(self.m),
                cell(self.total_weight),
                cell(self.int_opt_bound),
                cell(self.int_opt),
                cell(self.frac_value),
                cell(self.lp_value),
                format_rational(self.lemma_ratio.value),
            ]
        )
        return header + "\n" + row + "\n"


def cgk_ratio_formula(k: int, r: int) -> Fraction:
    """Closed-form gap ratio bound for the directed family."""
    return Fraction(3, 2) * (k - Fraction(1, 2)) * (r - 1) / (k * (r + 1))


def sympath_ratio_formula(ell: int, q: int) -> Fraction:
    """Closed-form gap ratio bound for the path family."""
    return Fraction(3 * ell - 2, 2 * ell + 6 * q + 9)


def cgk_gap_report(
    k: int,
    r: int,
    with_lp: bool = False,
    formula_only: bool = False,
) -> GapReport:
    """Generate, certify, and solve the directed family at (k, r).

    Pipeline: loop graph -> frame family -> certificate matrix -> one-round
    verification over the balanced tour polytope -> metric -> exact tour DP
    (when within the DP cap) -> optional LP.  Any stage failure aborts with
    that stage's violation payload.
    """
    int_bound = (
        ReportValue(Fraction((2 * k - 1) * (r - 1)) * r ** (k - 1), "lemma-bound")
        if k >= 2 and r >= 3
        else None
    )
    frac_bound = Fraction(4, 3) * k * (r + 1) * r ** (k - 1)
    ratio = ReportValue(cgk_ratio_formula(k, r), "formula")
    if formula_only:
        # W(loop) has the closed form 2k(r+1)r^(k-1) - 2r^(k-1).
        weight = Fraction(2 * k * (r + 1) - 2) * r ** (k - 1)
        return GapReport(
            family="cgk",
            params={"k": k, "r": r},
            n=None,
            m=None,
            total_weight=ReportValue(weight, "formula"),
            int_opt_bound=int_bound,
            int_opt=None,
            int_opt_witness=None,
            frac_value=ReportValue(Fraction(2, 3) * weight, "formula"),
            frac_certificate=None,
            lp_value=None,
            lemma_ratio=ratio,
            ratio_limit="3/2",
        )

    loop = build_cgk_loop(k, r)
    family = build_frame_family(loop)
    x, matrix = build_cgk_matrix(loop, family)
    cert = verify_one_round(PolytopeKind.at_bal(), loop, x, matrix)
    if not cert.certified:
        raise PipelineError("one-round-certificate", cert.to_json_obj())

    inst, extended = extend_to_complete(loop, x)
    for i, e in enumerate(loop.edges):
        if inst.dist[e.tail][e.head] != loop.weights[i]:
            raise PipelineError(
                "metric-tightness", {"edge": i, "weight": format_rational(loop.weights[i])}
            )
    frac = metric_objective(inst, extended)
    if frac > frac_bound:
        raise PipelineError(
            "fractional-bound",
            {"value": format_rational(frac), "bound": format_rational(frac_bound)},
        )

    int_opt = None
    witness = None
    if inst.n <= DP_NODE_LIMIT:
        dp = held_karp_tour(inst)
        int_opt = ReportValue(dp.value, "computed")
        witness = dp.witness

    lp_value = None
    if with_lp:
        lp = lp_optimize(PolytopeKind.at_bal(), inst)
        hit = check_point(PolytopeKind.at_bal(), complete_graph(inst), lp.point)
        if hit is not None:
            raise PipelineError("lp-point", hit.to_json_obj())
        lp_value = ReportValue(lp.value, "computed")

    return GapReport(
        family="cgk",
        params={"k": k, "r": r},
        n=loop.n,
        m=loop.m,
        total_weight=ReportValue(loop.total_weight(), "computed"),
        int_opt_bound=int_bound,
        int_opt=int_opt,
        int_opt_witness=witness,
        frac_value=ReportValue(frac, "computed"),
        frac_certificate="one-round-lift-certificate",
        lp_value=lp_value,
        lemma_ratio=ratio,
        ratio_limit="3/2",
    )


def sympath_gap_report(
    ell: int,
    q: int,
    with_lp: bool = False,
    formula_only: bool = False,
) -> GapReport:
    """Generate, check, and solve the path family at (ell, q)."""
    int_bound = ReportValue(Fraction(3 * ell - 2), "lemma-bound")
    ratio = ReportValue(sympath_ratio_formula(ell, q), "formula")
    if formula_only:
        return GapReport(
            family="sympath",
            params={"ell": ell, "q": q},
            n=None,
            m=None,
            total_weight=None,
            int_opt_bound=int_bound,
            int_opt=None,
            int_opt_witness=None,
            frac_value=ReportValue(Fraction(2 * ell + 6 * q + 9), "formula"),
            frac_certificate=None,
            lp_value=None,
            lemma_ratio=ratio,
            ratio_limit="3/2",
        )

    open_graph, closed_graph = build_sym_pair(ell, q)
    x = sympath_fractional_vector(open_graph)
    hit = check_point(PolytopeKind.sp(open_graph.s, open_graph.t), open_graph, x)
    if hit is not None:
        raise PipelineError("path-feasibility", hit.to_json_obj())
    hit = check_point(PolytopeKind.st(), closed_graph, unit_extension(closed_graph, x))
    if hit is not None:
        raise PipelineError("tour-feasibility", hit.to_json_obj())

    inst, extended = extend_to_complete(open_graph, x)
    frac = metric_objective(inst, extended)
    if frac != 2 * ell + 6 * q + 9:
        raise PipelineError(
            "objective-identity",
            {"value": format_rational(frac), "expected": str(2 * ell + 6 * q + 9)},
        )

    int_opt = None
    witness = None
    if inst.n <= DP_NODE_LIMIT:
        dp = held_karp_path(inst, open_graph.s, open_graph.t)
        int_opt = ReportValue(dp.value, "computed")
        witness = dp.witness

    lp_value = None
    if with_lp:
        lp = lp_optimize(PolytopeKind.sp(inst.s, inst.t), inst)
        lp_value = ReportValue(lp.value, "computed")

    return GapReport(
        family="sympath",
        params={"ell": ell, "q": q},
        n=open_graph.n,
        m=open_graph.m,
        total_weight=ReportValue(open_graph.total_weight(), "computed"),
        int_opt_bound=int_bound,
        int_opt=int_opt,
        int_opt_witness=witness,
        frac_value=ReportValue(frac, "computed"),
        frac_certificate="round0-feasible",
        lp_value=lp_value,
        lemma_ratio=ratio,
        ratio_limit="3/2",
    )


def gap_report(family: str, **kwargs) -> GapReport:
    if family == "cgk":
        return cgk_gap_report(**kwargs)
    if family == "sympath":
        return sympath_gap_report(**kwargs)
    raise ValueError(f"unknown family {family!r}")
