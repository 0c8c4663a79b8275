from __future__ import annotations

import json
from fractions import Fraction

import pytest

from liftgap.cli import main
from liftgap.graphs import LabeledGraph, MetricInstance, metric_closure
from liftgap.instances import build_cgk_loop
from liftgap.lift import matrix_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_cgk_json_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "cgk", "--k", "2", "--r", "3")
    assert code == 0
    g = LabeledGraph.from_json(out)
    assert (g.n, g.m) == (15, 30)
    path = tmp_path / "loop.json"
    code, _, _ = run(capsys, "gen", "cgk", "--k", "2", "--r", "3", "--out", str(path))
    assert code == 0
    assert LabeledGraph.from_json(path.read_text()).to_json() == g.to_json()


def test_gen_base_graph_dot(capsys):
    code, out, _ = run(capsys, "gen", "cgk", "--k", "1", "--r", "3",
                       "--graph", "base", "--format", "dot")
    assert code == 0
    assert out.count("->") == 8
    assert out.count("v") >= 5


def test_gen_sympath(capsys):
    code, out, _ = run(capsys, "gen", "sympath", "--ell", "4", "--q", "1")
    assert code == 0
    g = LabeledGraph.from_json(out)
    assert (g.n, g.m) == (24, 74)


def test_frames_family_and_single_edge(capsys):
    code, out, _ = run(capsys, "frames", "--k", "2", "--r", "3")
    assert code == 0
    frames = json.loads(out)
    assert len(frames) == 30
    code, out, _ = run(capsys, "frames", "--k", "2", "--r", "3", "--edge", "4")
    assert code == 0
    assert json.loads(out)["owner"] == 4
    code, out, _ = run(capsys, "frames", "--k", "2", "--r", "3", "--edge", "4",
                       "--emit-dot")
    assert code == 0
    assert "style=bold" in out


def test_verify_point_feasible_and_violated(capsys, tmp_path):
    loop = build_cgk_loop(2, 3)
    gpath = tmp_path / "loop.json"
    gpath.write_text(loop.to_json())
    code, out, _ = run(capsys, "verify", "point", "--polytope", "atbal",
                       "--graph", str(gpath), "--constant", "2/3")
    assert code == 0
    assert json.loads(out)["feasible"] is True
    code, out, _ = run(capsys, "verify", "point", "--polytope", "at",
                       "--graph", str(gpath), "--constant", "2/3")
    assert code == 1
    payload = json.loads(out)
    assert payload["feasible"] is False
    assert payload["witness"]["kind"] == "degree"


def test_verify_point_vector_file(capsys, tmp_path):
    loop = build_cgk_loop(1, 3)
    gpath = tmp_path / "loop.json"
    gpath.write_text(loop.to_json())
    vpath = tmp_path / "x.json"
    vpath.write_text(json.dumps(["1/2"] * loop.m))
    code, out, _ = run(capsys, "verify", "point", "--polytope", "atbal",
                       "--graph", str(gpath), "--vector", str(vpath))
    assert code == 0


def test_frames_emit_matrix_drives_verify_lift(capsys, tmp_path):
    mpath = tmp_path / "X.json"
    gpath = tmp_path / "loop.json"
    code, _, _ = run(capsys, "frames", "--k", "2", "--r", "3",
                     "--emit-matrix", "--out", str(mpath))
    assert code == 0
    code, _, _ = run(capsys, "gen", "cgk", "--k", "2", "--r", "3",
                     "--out", str(gpath))
    assert code == 0
    code, out, _ = run(capsys, "verify", "lift", "--polytope", "atbal",
                       "--graph", str(gpath), "--matrix", str(mpath))
    assert code == 0
    assert json.loads(out)["certified"] is True


def test_verify_lift_certificate(capsys, tmp_path, loop23, certificate23):
    _, matrix = certificate23
    gpath = tmp_path / "loop.json"
    gpath.write_text(loop23.to_json())
    mpath = tmp_path / "X.json"
    mpath.write_text(matrix_to_json(matrix))
    code, out, _ = run(capsys, "verify", "lift", "--polytope", "atbal",
                       "--graph", str(gpath), "--matrix", str(mpath))
    assert code == 0
    assert json.loads(out)["certified"] is True

    rows = [list(r) for r in matrix]
    rows[3][7] = Fraction(1, 4)
    mpath.write_text(matrix_to_json(tuple(tuple(r) for r in rows)))
    code, out, _ = run(capsys, "verify", "lift", "--polytope", "atbal",
                       "--graph", str(gpath), "--matrix", str(mpath))
    assert code == 1
    assert json.loads(out)["certified"] is False


def test_solve_dp_and_lp(capsys, tmp_path):
    inst = metric_closure(build_cgk_loop(1, 4))
    ipath = tmp_path / "inst.json"
    ipath.write_text(inst.to_json())
    code, out, _ = run(capsys, "solve", "dp-tour", "--instance", str(ipath))
    assert code == 0
    assert json.loads(out)["value"] == "4"
    code, out, _ = run(capsys, "solve", "lp", "--polytope", "atbal",
                       "--instance", str(ipath))
    assert code == 0
    assert json.loads(out)["value"] == "4"


def test_solve_dp_path_uses_instance_terminals(capsys, tmp_path):
    dist = tuple(
        tuple(Fraction(0 if i == j else 1) for j in range(4)) for i in range(4)
    )
    inst = MetricInstance(False, dist, s=0, t=3)
    ipath = tmp_path / "inst.json"
    ipath.write_text(inst.to_json())
    code, out, _ = run(capsys, "solve", "dp-path", "--instance", str(ipath))
    assert code == 0
    assert json.loads(out)["value"] == "3"


def test_solve_resource_limit_exit_code(capsys, tmp_path):
    n = 23
    dist = tuple(
        tuple(Fraction(0 if i == j else 1) for j in range(n)) for i in range(n)
    )
    ipath = tmp_path / "big.json"
    ipath.write_text(MetricInstance(True, dist).to_json())
    code, _, err = run(capsys, "solve", "dp-tour", "--instance", str(ipath))
    assert code == 3
    assert "resource" in err


def test_gap_json_reproducible(capsys):
    code, first, _ = run(capsys, "gap", "--family", "cgk", "--k", "2", "--r", "3")
    assert code == 0
    code, second, _ = run(capsys, "gap", "--family", "cgk", "--k", "2", "--r", "3")
    assert first == second
    payload = json.loads(first)
    assert payload["frac_value"]["value"] == "28"
    assert payload["int_opt"]["value"] == "26"


def test_gap_formula_only_csv(capsys):
    code, out, _ = run(capsys, "gap", "--family", "cgk", "--k", "100", "--r", "100",
                       "--formula-only", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith("100,100,,,")


def test_gap_sympath(capsys):
    code, out, _ = run(capsys, "gap", "--family", "sympath", "--ell", "3", "--q", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["frac_value"]["value"] == "15"
    assert payload["int_opt"]["value"] == "17"


def test_export_round_trip(capsys, tmp_path):
    loop = build_cgk_loop(1, 3)
    gpath = tmp_path / "loop.json"
    gpath.write_text(loop.to_json())
    code, out, _ = run(capsys, "export", "--graph", str(gpath), "--format", "json")
    assert code == 0
    assert LabeledGraph.from_json(out).to_json() == loop.to_json()
    code, out, _ = run(capsys, "export", "--graph", str(gpath), "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["gen", "cgk", "--k", "2"])  # missing --r
    assert err.value.code == 2
    code, _, err_text = run(capsys, "verify", "point", "--polytope", "sp",
                            "--graph", "missing.json", "--constant", "1")
    assert code == 2
    assert "error" in err_text


def test_missing_file_is_usage_error(capsys):
    code, _, err_text = run(capsys, "solve", "dp-tour", "--instance", "nope.json")
    assert code == 2
