import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from opinionflow.cli import main, sweep
from opinionflow.files import dump_graph
from opinionflow.graphs import SignedDigraph
from opinionflow.reference import GRAPH1

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def graph1(tmp_path):
    p = tmp_path / "graph1.json"
    p.write_text(dump_graph(GRAPH1))
    return p


def _scenario(dirpath, name, P, t_end=20):
    data = {"graph": "graph1.json", "x0": [10, 20, 50],
            "transform": {"mode": "p_file", "path": P},
            "sim": {"dt": 1e-3, "t_end": t_end},
            "outputs": {"csv": f"{name}.csv", "report": f"{name}.json", "svg": f"{name}.svg"}}
    path = dirpath / f"{name}.scenario.json"
    path.write_text(json.dumps(data))
    return path


CASE1_P = {"kind": "diagonal", "values": [2, -2, -2]}
CASE2_P = {"rows": [[-2, -1, 2], [-2, 1, -2], [2, 1, 2]]}


# --------------------------------------------------------------- classify

def test_classify_graph1(capsys, graph1):
    code, out, _ = run(capsys, "classify", graph1)
    assert code == 0
    assert out.strip() == "Balanced, V1={1} V2={2,3}; irreducible; period 3; P exists (gauge)"


def test_classify_anti_balanced_triangle(capsys, tmp_path):
    p = tmp_path / "tri.json"
    p.write_text(dump_graph(SignedDigraph(-(np.ones((3, 3)) - np.eye(3)))))
    code, out, _ = run(capsys, "classify", p)
    assert code == 0
    assert out.startswith("AntiBalanced") and "P does not exist" in out


def test_classify_unsigned(capsys, tmp_path):
    p = tmp_path / "u.json"
    p.write_text(dump_graph(SignedDigraph(np.array([[0, 1.0], [2.0, 0]]))))
    code, out, _ = run(capsys, "classify", p)
    assert code == 0
    assert out.startswith("Unsigned") and "P exists (any positive diagonal)" in out


def test_classify_unbalanced_prints_witness(capsys, tmp_path):
    A = np.zeros((4, 4))
    A[0, 1] = A[1, 2] = A[2, 3] = 1.0
    A[3, 0] = -1.0
    p = tmp_path / "sq.json"
    p.write_text(dump_graph(SignedDigraph(A)))
    code, out, _ = run(capsys, "classify", p)
    assert code == 0 and out.startswith("Unbalanced") and "witness cycle" in out


def test_classify_parse_error_names_file_and_line(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2,\n "edges": [\n  {"i": 1, "j": 1, "w": 1}\n]}')
    code, _, err = run(capsys, "classify", p)
    assert code == 2
    assert "bad.json" in err and "line 3" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "classify", tmp_path / "nope.json")
    assert code == 2 and "error" in err


# ------------------------------------------------------ spectrum / design

def test_spectrum(capsys, graph1):
    code, out, _ = run(capsys, "spectrum", graph1)
    assert code == 0
    assert "-1+1.73205i" in out and "spectral radius: 2" in out


def test_design_with_magnitudes(capsys, graph1, tmp_path):
    rep = tmp_path / "d.json"
    code, out, _ = run(capsys, "design", graph1, "--magnitudes", 2, 2, 2, "--report", rep)
    assert code == 0 and "theta_x" in out
    data = json.loads(rep.read_text())
    np.testing.assert_allclose(data["theta_x"], np.diag([1.0, 4.0, 2.0]), atol=1e-12)


def test_design_non_member_exit_2(capsys, graph1, tmp_path):
    p = tmp_path / "P.json"
    p.write_text(json.dumps({"kind": "diagonal", "values": [1, 1, 1]}))
    code, _, err = run(capsys, "design", graph1, "--p", p)
    assert code == 2 and "negative entry" in err


# -------------------------------------------------------------------- run

def test_run_case1(capsys, graph1, tmp_path):
    sc = _scenario(tmp_path, "case1", CASE1_P)
    code, out, _ = run(capsys, "run", sc)
    assert code == 0 and "PASS" in out
    rep = json.loads((tmp_path / "case1.json").read_text())
    assert rep["pass"] is True
    np.testing.assert_allclose(rep["xf_simulated"], [-11.4, 11.4, 11.4], atol=0.05)
    assert set(rep) >= {"classification", "spectrum", "theta_x", "L_x", "xf_predicted",
                        "xf_simulated", "max_error", "stable", "pass"}
    assert (tmp_path / "case1.csv").exists() and (tmp_path / "case1.svg").exists()


def test_run_case2(capsys, graph1, tmp_path):
    sc = _scenario(tmp_path, "case2", CASE2_P)
    code, _, _ = run(capsys, "run", sc)
    assert code == 0
    rep = json.loads((tmp_path / "case2.json").read_text())
    np.testing.assert_allclose(rep["xf_simulated"], [-16.7, 33.3, 16.7], atol=0.05)


def test_run_deterministic(capsys, graph1, tmp_path):
    sc = _scenario(tmp_path, "case1", CASE1_P)
    run(capsys, "run", sc)
    first = [(tmp_path / f"case1.{ext}").read_bytes() for ext in ("csv", "json")]
    run(capsys, "run", sc)
    assert first == [(tmp_path / f"case1.{ext}").read_bytes() for ext in ("csv", "json")]


def test_run_verification_fail_exit_1(capsys, graph1, tmp_path):
    # too short a horizon to settle: prediction and simulation disagree
    sc = _scenario(tmp_path, "short", CASE1_P, t_end=0.5)
    code, out, _ = run(capsys, "run", sc)
    assert code == 1 and "FAIL" in out


def test_run_flag_overrides(capsys, graph1, tmp_path):
    sc = _scenario(tmp_path, "case1", CASE1_P)
    csv = tmp_path / "other.csv"
    code, _, _ = run(capsys, "run", sc, "--dt", 2e-3, "--t-end", 10, "--csv", csv)
    assert code == 0
    assert csv.read_text().splitlines()[-1].startswith("10,")


# ---------------------------------------------------------------- reverse

def test_reverse_constraint_violation(capsys, graph1):
    code, _, err = run(capsys, "reverse", graph1, "--x0", 10, 20, 50, "--xf", 20, 20, 50)
    assert code == 2 and "residual -0.5" in err


def test_reverse_gate_failure_reported(capsys, graph1):
    code, out, _ = run(capsys, "reverse", graph1, "--x0", 10, 20, 50, "--xf", -10, 17.5, 17.5)
    assert code == 1
    assert "gate: FAILS" in out and "not weight-balanced" in out


def test_reverse_weight_balanced_hits_target(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(dump_graph(SignedDigraph(np.array([[0, 1.0, 0], [0, 0, 1.0], [1.0, 0, 0]]))))
    xf = 80 / 3
    code, out, _ = run(capsys, "reverse", p, "--x0", 10, 20, 50, "--xf", xf, xf, xf)
    assert code == 0 and "gate: holds" in out


# ------------------------------------------------------------------ sweep

def test_sweep_empty_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", tmp_path)
    assert code == 0
    assert out.strip() == "name\tclass\tmax_error\tpass"


def test_sweep_two_cases(capsys, graph1, tmp_path):
    _scenario(tmp_path, "b_case2", CASE2_P)
    _scenario(tmp_path, "a_case1", CASE1_P)
    table = tmp_path / "table.tsv"
    code, out, _ = run(capsys, "sweep", tmp_path, "--out", table)
    rows = out.strip().splitlines()[1:]
    assert code == 0 and len(rows) == 2
    assert rows[0].startswith("a_case1") and rows[1].startswith("b_case2")
    assert all(r.endswith("\tpass") for r in rows)
    assert table.read_text() == out


def test_sweep_one_malformed(capsys, graph1, tmp_path):
    _scenario(tmp_path, "a", CASE1_P)
    _scenario(tmp_path, "c", CASE2_P)
    (tmp_path / "b.scenario.json").write_text('{"graph": "graph1.json", "x0": [1, 2, 3]')
    code, out, _ = run(capsys, "sweep", tmp_path)
    rows = out.strip().splitlines()[1:]
    assert code == 1
    assert [r.split("\t")[3].split(":")[0] for r in rows] == ["pass", "error", "pass"]


def test_sweep_parallel_matches_serial(graph1, tmp_path):
    _scenario(tmp_path, "a", CASE1_P)
    _scenario(tmp_path, "b", CASE2_P)
    assert sweep(tmp_path, jobs=2) == sweep(tmp_path, jobs=1)


def test_shipped_scenarios_pass(tmp_path):
    work = tmp_path / "scenarios"
    shutil.copytree(SCENARIOS, work, ignore=shutil.ignore_patterns("out"))
    (work / "out").mkdir()
    rows = sweep(work)
    assert len(rows) >= 4
    assert all(r[3] == "pass" for r in rows), rows
