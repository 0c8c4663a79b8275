"""Command-line interface.

Subcommands: gen, frames, verify (point|lift), solve (dp-tour|dp-path|lp),
gap, export.  Exit codes: 0 success/certified, 1 violation found, 2 usage
error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .frames import Frame, build_frame, build_frame_family
from .graphs import GraphError, LabeledGraph, MetricInstance, metric_closure
from .instances import build_cgk_graph, build_cgk_loop, build_sym_pair
from .lift import build_cgk_matrix, matrix_from_json, matrix_to_json, verify_one_round
from .polytopes import PolytopeKind, check_point
from .rational import parse_rational
from .report import PipelineError, gap_report
from .solvers import ResourceLimitError, held_karp_path, held_karp_tour, lp_optimize

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")


def _read_graph(path: str) -> LabeledGraph:
    with open(path, encoding="utf-8") as handle:
        return LabeledGraph.from_json(handle.read())


def _read_instance(path: str) -> MetricInstance:
    with open(path, encoding="utf-8") as handle:
        return MetricInstance.from_json(handle.read())


def _read_vector(args, size: int) -> list[Fraction]:
    if args.constant is not None:
        return [parse_rational(args.constant)] * size
    if args.vector is None:
        raise GraphError("need --vector FILE or --constant VALUE")
    with open(args.vector, encoding="utf-8") as handle:
        values = json.loads(handle.read())
    return [parse_rational(v) for v in values]


def _polytope(args) -> PolytopeKind:
    tag = args.polytope
    if tag in ("sp", "ap"):
        if args.s is None or args.t is None:
            raise GraphError(f"polytope {tag} needs --s and --t")
        return PolytopeKind(tag, args.s, args.t)
    return PolytopeKind(tag)


def _render_graph(g: LabeledGraph, fmt: str, frame: Optional[Frame] = None) -> str:
    if fmt == "json":
        return g.to_json()
    if fmt == "metric":
        return metric_closure(g).to_json()
    bold = frame.path if frame else ()
    dashed = [e for c in (frame.cycles if frame else ()) for e in c]
    return g.to_dot(bold_edges=bold, dashed_edges=dashed)


def _cmd_gen(args) -> int:
    if args.family == "cgk":
        g = build_cgk_loop(args.k, args.r) if args.graph == "loop" else build_cgk_graph(args.k, args.r)
    else:
        open_graph, closed_graph = build_sym_pair(args.ell, args.q)
        g = closed_graph if args.graph == "closed" else open_graph
    _write(_render_graph(g, args.format), args.out)
    return EXIT_OK


def _cmd_frames(args) -> int:
    loop = build_cgk_loop(args.k, args.r)
    if args.emit_dot and args.edge is None:
        raise GraphError("--emit-dot highlights a single frame; pass --edge")
    if args.edge is not None:
        if not (0 <= args.edge < loop.m):
            raise GraphError(f"edge index {args.edge} out of range (m={loop.m})")
        frame = build_frame(loop, args.edge)
        if args.emit_dot:
            _write(_render_graph(loop, "dot", frame), args.out)
        else:
            _write(json.dumps(frame.to_json_obj(), sort_keys=True), args.out)
        return EXIT_OK
    family = build_frame_family(loop)
    if args.emit_matrix:
        _, matrix = build_cgk_matrix(loop, family)
        _write(matrix_to_json(matrix), args.out)
        return EXIT_OK
    payload = [frame.to_json_obj() for frame in family.frames]
    _write(json.dumps(payload, sort_keys=True), args.out)
    return EXIT_OK


def _cmd_verify_point(args) -> int:
    g = _read_graph(args.graph)
    kind = _polytope(args)
    x = _read_vector(args, g.m)
    witness = check_point(kind, g, x)
    if witness is None:
        _write(json.dumps({"feasible": True}), args.out)
        return EXIT_OK
    _write(json.dumps({"feasible": False, "witness": witness.to_json_obj()},
                      sort_keys=True), args.out)
    return EXIT_VIOLATION


def _cmd_verify_lift(args) -> int:
    g = _read_graph(args.graph)
    kind = _polytope(args)
    with open(args.matrix, encoding="utf-8") as handle:
        matrix = matrix_from_json(handle.read())
    x = list(matrix[0][1:]) if len(matrix) == g.m + 1 else []
    report = verify_one_round(kind, g, x, matrix)
    _write(json.dumps(report.to_json_obj(), sort_keys=True), args.out)
    return EXIT_OK if report.certified else EXIT_VIOLATION


def _cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    if args.action == "dp-tour":
        result = held_karp_tour(inst)
        _write(json.dumps(result.to_json_obj(), sort_keys=True), args.out)
        return EXIT_OK
    if args.action == "dp-path":
        s = args.s if args.s is not None else inst.s
        t = args.t if args.t is not None else inst.t
        if s is None or t is None:
            raise GraphError("dp-path needs terminals (--s/--t or the instance's)")
        result = held_karp_path(inst, s, t)
        _write(json.dumps(result.to_json_obj(), sort_keys=True), args.out)
        return EXIT_OK
    kind = _polytope(args) if args.polytope else None
    if kind is None:
        raise GraphError("solve lp needs --polytope")
    lp = lp_optimize(kind, inst, separation=args.separation)
    _write(json.dumps(lp.to_json_obj(), sort_keys=True), args.out)
    return EXIT_OK


def _cmd_gap(args) -> int:
    kwargs = {"with_lp": args.with_lp, "formula_only": args.formula_only}
    if args.family == "cgk":
        report = gap_report("cgk", k=args.k, r=args.r, **kwargs)
    else:
        report = gap_report("sympath", ell=args.ell, q=args.q, **kwargs)
    _write(report.to_csv() if args.format == "csv" else report.to_json(), args.out)
    return EXIT_OK


def _cmd_export(args) -> int:
    g = _read_graph(args.graph)
    frame = None
    if args.frame:
        with open(args.frame, encoding="utf-8") as handle:
            frame = Frame.from_json_obj(json.loads(handle.read()))
    _write(_render_graph(g, args.format, frame), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liftgap",
        description="exact integrality-gap laboratory for TSP relaxations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", help="write output to this file instead of stdout")

    gen = sub.add_parser("gen", help="generate an instance family member")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    gen_cgk = gen_sub.add_parser("cgk", help="recursive directed family")
    gen_cgk.add_argument("--k", type=int, required=True)
    gen_cgk.add_argument("--r", type=int, required=True)
    gen_cgk.add_argument("--graph", choices=("base", "loop"), default="loop")
    gen_cgk.add_argument("--format", choices=("json", "dot", "metric"), default="json")
    add_out(gen_cgk)
    gen_sym = gen_sub.add_parser("sympath", help="two-clique path family")
    gen_sym.add_argument("--ell", type=int, required=True)
    gen_sym.add_argument("--q", type=int, required=True)
    gen_sym.add_argument("--graph", choices=("open", "closed"), default="open")
    gen_sym.add_argument("--format", choices=("json", "dot", "metric"), default="json")
    add_out(gen_sym)

    frames = sub.add_parser("frames", help="frames of the looped directed family")
    frames.add_argument("--k", type=int, required=True)
    frames.add_argument("--r", type=int, required=True)
    frames.add_argument("--edge", type=int, help="only this edge's frame")
    frames.add_argument("--emit-dot", action="store_true",
                        help="render the graph with the frame highlighted (needs --edge)")
    frames.add_argument("--emit-matrix", action="store_true",
                        help="emit the frame-derived certificate matrix instead")
    add_out(frames)

    verify = sub.add_parser("verify", help="feasibility / certificate checks")
    verify_sub = verify.add_subparsers(dest="what", required=True)
    vpoint = verify_sub.add_parser("point", help="polytope membership of a vector")
    vpoint.add_argument("--polytope", choices=("st", "sp", "at", "ap", "atbal"),
                        required=True)
    vpoint.add_argument("--s", type=int)
    vpoint.add_argument("--t", type=int)
    vpoint.add_argument("--graph", required=True)
    vpoint.add_argument("--vector", help="JSON list of rationals, one per edge")
    vpoint.add_argument("--constant", help="use this rational on every edge")
    add_out(vpoint)
    vlift = verify_sub.add_parser("lift", help="one-round protection matrix check")
    vlift.add_argument("--polytope", choices=("st", "sp", "at", "ap", "atbal"),
                       required=True)
    vlift.add_argument("--s", type=int)
    vlift.add_argument("--t", type=int)
    vlift.add_argument("--graph", required=True)
    vlift.add_argument("--matrix", required=True,
                       help="JSON dense matrix of rationals, (m+1) x (m+1)")
    add_out(vlift)

    solve = sub.add_parser("solve", help="exact integer / LP optima")
    solve.add_argument("action", choices=("dp-tour", "dp-path", "lp"))
    solve.add_argument("--instance", required=True, help="metric instance JSON")
    solve.add_argument("--polytope", choices=("st", "sp", "at", "ap", "atbal"))
    solve.add_argument("--s", type=int)
    solve.add_argument("--t", type=int)
    solve.add_argument("--separation", choices=("flow", "enumerate"), default="flow")
    add_out(solve)

    gap = sub.add_parser("gap", help="full pipeline gap report")
    gap.add_argument("--family", choices=("cgk", "sympath"), required=True)
    gap.add_argument("--k", type=int)
    gap.add_argument("--r", type=int)
    gap.add_argument("--ell", type=int)
    gap.add_argument("--q", type=int)
    gap.add_argument("--with-lp", action="store_true")
    gap.add_argument("--formula-only", action="store_true")
    gap.add_argument("--format", choices=("json", "csv"), default="json")
    add_out(gap)

    export = sub.add_parser("export", help="re-render a graph JSON file")
    export.add_argument("--graph", required=True)
    export.add_argument("--format", choices=("json", "dot", "metric"), default="dot")
    export.add_argument("--frame", help="frame JSON to highlight in DOT output")
    add_out(export)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "frames":
            return _cmd_frames(args)
        if args.command == "verify":
            if args.what == "point":
                return _cmd_verify_point(args)
            return _cmd_verify_lift(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "gap":
            if args.family == "cgk":
                if args.k is None or args.r is None:
                    parser.error("gap --family cgk needs --k and --r")
            elif args.ell is None or args.q is None:
                parser.error("gap --family sympath needs --ell and --q")
            return _cmd_gap(args)
        if args.command == "export":
            return _cmd_export(args)
        parser.error(f"unknown command {args.command!r}")
    except PipelineError as exc:
        sys.stderr.write(json.dumps(
            {"stage": exc.stage, "payload": exc.payload}, sort_keys=True) + "\n")
        return EXIT_VIOLATION
    except ResourceLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except (GraphError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
