import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opinionflow.design import TransformMatrix, design_laplacian
from opinionflow.dynamics import simulate
from opinionflow.errors import GraphFileError
from opinionflow.files import (dump_graph, dump_transform, load_scenario, parse_graph,
                               parse_transform, read_trajectory_csv, trajectory_csv,
                               trajectory_svg)
from opinionflow.graphs import SignedDigraph
from opinionflow.reference import GRAPH1, GRAPH1_A, GRAPH1_P_GAUGE, GRAPH1_X0, GRAPH2


@st.composite
def weighted_graphs(draw):
    n = draw(st.integers(1, 7))
    w = st.one_of(st.just(0.0), st.floats(allow_nan=False, allow_infinity=False,
                                          min_value=-1e300, max_value=1e300))
    A = np.array(draw(st.lists(w, min_size=n * n, max_size=n * n))).reshape(n, n)
    np.fill_diagonal(A, 0.0)
    return A


@settings(max_examples=200, deadline=None)
@given(weighted_graphs())
def test_graph_roundtrip_bit_exact(A):
    B = parse_graph(dump_graph(SignedDigraph(A))).A
    assert B.tobytes() == (A + 0.0).tobytes()


def test_reference_graphs_roundtrip():
    for G in (GRAPH1, GRAPH2):
        np.testing.assert_array_equal(parse_graph(dump_graph(G)).A, G.A)


def test_graph_rejects_nonfinite_weight():
    with pytest.raises(GraphFileError):
        parse_graph('{"n": 2, "edges": [{"i": 1, "j": 2, "w": NaN}]}')


def test_graph_rejects_bad_n():
    with pytest.raises(GraphFileError, match="n"):
        parse_graph('{"n": 0, "edges": []}')


# --------------------------------------------------------------- P files

def test_transform_diagonal_and_full():
    T = parse_transform('{"kind": "diagonal", "values": [2, -2, -2]}')
    np.testing.assert_array_equal(T.P, GRAPH1_P_GAUGE)
    T = parse_transform({"rows": [[1, 2], [3, 4]]})
    assert T.kind == "full" and T.P.shape == (2, 2)


def test_transform_block_needs_r():
    with pytest.raises(GraphFileError, match="r"):
        parse_transform({"kind": "block", "rows": np.eye(4).tolist()})


def test_transform_ragged_rows():
    with pytest.raises(GraphFileError, match="different lengths"):
        parse_transform({"rows": [[1, 2], [3]]})


def test_transform_roundtrip():
    for T in (TransformMatrix.diagonal([2, -2, -2]),
              TransformMatrix(np.arange(9.0).reshape(3, 3)),
              TransformMatrix(np.diag([1.0, 2.0, 3.0, 4.0]), kind="block", r=2)):
        U = parse_transform(dump_transform(T))
        assert U.kind == T.kind and U.r == T.r
        np.testing.assert_array_equal(U.P, T.P)


# ------------------------------------------------------------- scenarios

def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_scenario_paths_resolve_relative(tmp_path):
    (tmp_path / "g.json").write_text(dump_graph(GRAPH1))
    p = _write(tmp_path / "a.scenario.json", {
        "graph": "g.json", "x0": [10, 20, 50],
        "transform": {"mode": "gauge", "magnitudes": [2, 2, 2]},
        "sim": {"t_end": 5}, "outputs": {"csv": "out.csv"}})
    sc = load_scenario(p)
    assert sc.graph == tmp_path / "g.json"
    assert sc.outputs["csv"] == tmp_path / "out.csv"
    assert sc.t_end == 5 and sc.dt == 1e-3 and sc.mode == "gauge"
    assert sc.name == "a.scenario"


def test_scenario_inline_transform(tmp_path):
    p = _write(tmp_path / "s.json", {
        "graph": "g.json", "x0": [1, 2, 3],
        "transform": {"mode": "p_file", "path": {"kind": "diagonal", "values": [1, 1, 1]}}})
    assert load_scenario(p).p_file == {"kind": "diagonal", "values": [1, 1, 1]}


@pytest.mark.parametrize("transform", [
    {},
    {"gauge": {}, "reverse": {}},
    {"mode": "magic"},
])
def test_scenario_needs_exactly_one_mode(tmp_path, transform):
    p = _write(tmp_path / "s.json", {"graph": "g.json", "x0": [1], "transform": transform})
    with pytest.raises(GraphFileError, match="transform"):
        load_scenario(p)


def test_scenario_missing_field(tmp_path):
    p = _write(tmp_path / "s.json", {"graph": "g.json", "transform": {"mode": "gauge"}})
    with pytest.raises(GraphFileError, match="x0"):
        load_scenario(p)


# ---------------------------------------------------------- trajectories

@pytest.fixture(scope="module")
def traj():
    d = design_laplacian(GRAPH1_A, TransformMatrix(GRAPH1_P_GAUGE))
    return simulate(d.Lx, GRAPH1_X0, dt=1e-3, t_end=20)


def test_csv_shape_and_precision(traj):
    text = trajectory_csv(traj)
    lines = text.splitlines()
    assert lines[0] == "t,x1,x2,x3"
    assert len(lines) - 1 == len(traj.t) <= 10_000
    t, X = read_trajectory_csv(text)
    assert t.tobytes() == traj.t.tobytes()
    assert X.tobytes() == traj.x.tobytes()


def test_csv_deterministic(traj):
    d = design_laplacian(GRAPH1_A, TransformMatrix(GRAPH1_P_GAUGE))
    again = simulate(d.Lx, GRAPH1_X0, dt=1e-3, t_end=20)
    assert trajectory_csv(again) == trajectory_csv(traj)


def test_svg_wellformed(traj):
    svg = trajectory_svg(traj, title="graph <1>")
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    assert root.tag == ns + "svg"
    lines = root.findall(f".//{ns}polyline")
    assert len(lines) == 3
    text = "".join(t.text or "" for t in root.iter(ns + "text"))
    assert "x1" in text and "x3" in text and "graph <1>" in text
    assert "href" not in svg
