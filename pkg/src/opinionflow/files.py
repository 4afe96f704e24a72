"""JSON graph / P-matrix / scenario files, trajectory CSV and SVG output.

Graph file::

    {"n": 3, "edges": [{"i": 1, "j": 2, "w": -1.0}, ...]}

Each edge sets ``A[i, j] = w`` (agent ``j`` influences agent ``i``), 1-based.

P-matrix file::

    {"kind": "diagonal", "values": [2, -2, -2]}
    {"kind": "full", "rows": [[-2, -1, 2], [-2, 1, -2], [2, 1, 2]]}
    {"kind": "block", "r": 3, "values": [...]}      # or "rows"
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .design import TransformMatrix
from .errors import DesignError, GraphError, GraphFileError
from .graphs import SignedDigraph


def _parse_json(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(exc.msg, source, f"line {exc.lineno} column {exc.colno}") from None


def _number(value, source, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFileError(f"expected a number, got {value!r}", source, where)
    value = float(value)
    if not math.isfinite(value):
        raise GraphFileError("number is not finite", source, where)
    return value


def _integer(value, source, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFileError(f"expected an integer, got {value!r}", source, where)
    return value


def _vector(value, source, where):
    if not isinstance(value, list):
        raise GraphFileError("expected a list of numbers", source, where)
    return np.array([_number(v, source, f"{where}[{k}]") for k, v in enumerate(value)])


def _edge_lines(text):
    """1-based line number of each edge object, in order of appearance."""
    lines = []
    depth = 0
    in_edges = False
    for lineno, line in enumerate(text.splitlines(), 1):
        if '"edges"' in line:
            in_edges = True
        if not in_edges:
            continue
        for ch in line:
            if ch == "{":
                if depth == 0:
                    lines.append(lineno)
                depth += 1
            elif ch == "}":
                depth -= 1
    return lines


def parse_graph(text, source=None):
    data = _parse_json(text, source)
    if not isinstance(data, dict):
        raise GraphFileError("top level must be an object", source)
    if "n" not in data:
        raise GraphFileError("missing field", source, "n")
    n = _integer(data["n"], source, "n")
    if n < 1:
        raise GraphFileError(f"n must be positive, got {n}", source, "n")
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise GraphFileError("expected a list", source, "edges")

    lines = _edge_lines(text)
    A = np.zeros((n, n))
    seen = set()
    for k, e in enumerate(edges):
        line = f" (line {lines[k]})" if k < len(lines) else ""
        where = f"edges[{k}]{line}"
        if not isinstance(e, dict):
            raise GraphFileError("edge must be an object", source, where)
        for key in ("i", "j", "w"):
            if key not in e:
                raise GraphFileError(f"missing field {key!r}", source, where)
        i = _integer(e["i"], source, f"edges[{k}].i{line}")
        j = _integer(e["j"], source, f"edges[{k}].j{line}")
        w = _number(e["w"], source, f"edges[{k}].w{line}")
        for name, v in (("i", i), ("j", j)):
            if not 1 <= v <= n:
                raise GraphFileError(f"vertex {v} out of range 1..{n}", source, f"edges[{k}].{name}{line}")
        if i == j:
            raise GraphFileError(f"self-loop at vertex {i}", source, where)
        if (i, j) in seen:
            raise GraphFileError(f"duplicate edge ({i},{j})", source, where)
        seen.add((i, j))
        A[i - 1, j - 1] = w
    return SignedDigraph(A)


def load_graph(path):
    path = Path(path)
    return parse_graph(path.read_text(encoding="utf-8"), source=str(path))


def dump_graph(G):
    edges = [{"i": i + 1, "j": j + 1, "w": w} for i, j, w in G.edges()]
    if not edges:
        return '{\n  "n": %d,\n  "edges": []\n}\n' % G.n
    body = ",\n".join("    " + json.dumps(e) for e in edges)
    return '{\n  "n": %d,\n  "edges": [\n%s\n  ]\n}\n' % (G.n, body)


def save_graph(G, path):
    Path(path).write_text(dump_graph(G), encoding="utf-8")


# ------------------------------------------------------------- transforms

def parse_transform(data, source=None):
    if isinstance(data, str):
        data = _parse_json(data, source)
    if not isinstance(data, dict):
        raise GraphFileError("P file must be an object", source)
    kind = data.get("kind", "full")
    if kind not in ("diagonal", "full", "block"):
        raise GraphFileError(f"unknown kind {kind!r}", source, "kind")
    if "values" in data:
        P = np.diag(_vector(data["values"], source, "values"))
    elif "rows" in data:
        rows = data["rows"]
        if not isinstance(rows, list) or not rows:
            raise GraphFileError("expected a non-empty list of rows", source, "rows")
        vecs = [_vector(row, source, f"rows[{k}]") for k, row in enumerate(rows)]
        if len({v.size for v in vecs}) != 1:
            raise GraphFileError("rows have different lengths", source, "rows")
        P = np.array(vecs)
    else:
        raise GraphFileError("need 'values' or 'rows'", source)
    r = None
    if kind == "block":
        if "r" not in data:
            raise GraphFileError("block kind needs r", source, "r")
        r = _integer(data["r"], source, "r")
    try:
        return TransformMatrix(P, kind=kind, r=r)
    except DesignError as exc:
        raise GraphFileError(str(exc), source) from None


def load_transform(path):
    path = Path(path)
    return parse_transform(path.read_text(encoding="utf-8"), source=str(path))


def dump_transform(T):
    if T.kind == "diagonal":
        data = {"kind": "diagonal", "values": np.diag(T.P).tolist()}
    else:
        data = {"kind": T.kind, "rows": T.P.tolist()}
        if T.kind == "block":
            data["r"] = T.r
    return json.dumps(data)


# -------------------------------------------------------------- scenarios

TRANSFORM_MODES = ("gauge", "p_file", "reverse", "ratio")


@dataclass
class Scenario:
    name: str
    graph: Path
    x0: np.ndarray
    mode: str
    magnitudes: np.ndarray | None = None
    p_file: Path | None = None
    xf: np.ndarray | None = None
    ratios: np.ndarray | None = None
    dt: float = 1e-3
    t_end: float = 20.0
    settle_tol: float = 1e-9
    outputs: dict = field(default_factory=dict)


def load_scenario(path):
    """Read a scenario file; relative paths resolve against its directory.

    ::

        {"graph": "graph1.json", "x0": [10, 20, 50],
         "transform": {"mode": "gauge", "magnitudes": [2, 2, 2]},
         "sim": {"dt": 0.001, "t_end": 20},
         "outputs": {"csv": "out.csv", "report": "out.json", "svg": "out.svg"}}
    """
    path = Path(path)
    src = str(path)
    data = _parse_json(path.read_text(encoding="utf-8"), src)
    if not isinstance(data, dict):
        raise GraphFileError("scenario must be an object", src)
    base = path.parent
    for key in ("graph", "x0", "transform"):
        if key not in data:
            raise GraphFileError("missing field", src, key)
    if not isinstance(data["graph"], str):
        raise GraphFileError("expected a path", src, "graph")
    tr = data["transform"]
    if not isinstance(tr, dict):
        raise GraphFileError("expected an object", src, "transform")
    modes = [m for m in TRANSFORM_MODES if m in tr]
    if "mode" in tr:
        modes = [tr["mode"]]
    if len(modes) != 1 or modes[0] not in TRANSFORM_MODES:
        raise GraphFileError(f"exactly one transform mode of {TRANSFORM_MODES} required", src, "transform")
    mode = modes[0]
    sc = Scenario(name=data.get("name", path.stem), graph=base / data["graph"],
                  x0=_vector(data["x0"], src, "x0"), mode=mode)
    if mode == "gauge":
        if "magnitudes" in tr:
            sc.magnitudes = _vector(tr["magnitudes"], src, "transform.magnitudes")
    elif mode == "p_file":
        target = tr.get("path", tr.get("p_file"))
        if isinstance(target, dict):
            sc.p_file = target          # inline P definition
        elif isinstance(target, str):
            sc.p_file = base / target
        else:
            raise GraphFileError("expected a path or inline P", src, "transform.path")
    elif mode == "reverse":
        sc.xf = _vector(tr.get("xf"), src, "transform.xf")
    else:
        sc.ratios = _vector(tr.get("ratios"), src, "transform.ratios")
    sim = data.get("sim", {})
    if not isinstance(sim, dict):
        raise GraphFileError("expected an object", src, "sim")
    sc.dt = _number(sim.get("dt", sc.dt), src, "sim.dt")
    sc.t_end = _number(sim.get("t_end", sc.t_end), src, "sim.t_end")
    sc.settle_tol = _number(sim.get("settle_tol", sc.settle_tol), src, "sim.settle_tol")
    outs = data.get("outputs", {})
    if not isinstance(outs, dict):
        raise GraphFileError("expected an object", src, "outputs")
    sc.outputs = {k: base / v for k, v in outs.items() if v}
    return sc


def scenario_transform(sc):
    if isinstance(sc.p_file, dict):
        return parse_transform(sc.p_file, source=f"{sc.name}:transform")
    return load_transform(sc.p_file)


# ------------------------------------------------------------ trajectories

def trajectory_csv(traj):
    n = traj.x.shape[1]
    out = ["t," + ",".join(f"x{i + 1}" for i in range(n))]
    for t, row in zip(traj.t, traj.x):
        out.append(",".join(f"{v:.17g}" for v in (t, *row)))
    return "\n".join(out) + "\n"


def read_trajectory_csv(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    if header[0] != "t":
        raise GraphError("trajectory CSV must start with a 't' column")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return data[:, 0], data[:, 1:]


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _ticks(lo, hi, count=5):
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def trajectory_svg(traj, title="", width=640, height=400):
    """Standalone SVG: one polyline per agent, axes with ticks, legend."""
    t, X = traj.t, traj.x
    left, right, top, bottom = 60, 110, 30, 45
    pw, ph = width - left - right, height - top - bottom
    t0, t1 = float(t[0]), float(t[-1])
    if t1 == t0:
        t1 = t0 + 1.0
    y0, y1 = float(np.min(X)), float(np.max(X))
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(tv):
        return left + (tv - t0) / (t1 - t0) * pw

    def py(yv):
        return top + (y1 - yv) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for tv in _ticks(t0, t1):
        x = px(tv)
        parts.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 4}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{top + ph + 16}" text-anchor="middle">{tv:.3g}</text>')
    for yv in _ticks(y0, y1):
        y = py(yv)
        parts.append(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">{yv:.3g}</text>')
    parts.append(f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">t</text>')
    parts.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 14 {top + ph / 2})">opinion</text>')
    if title:
        parts.append(f'<text x="{left + pw / 2}" y="18" text-anchor="middle" font-size="13">{_escape(title)}</text>')

    # at most ~2000 vertices per polyline
    step = max(1, len(t) // 2000)
    idx = np.unique(np.r_[np.arange(0, len(t), step), len(t) - 1])
    for i in range(X.shape[1]):
        colour = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(t[k]):.2f},{py(X[k, i]):.2f}" for k in idx)
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 14 * i + 6
        parts.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 32}" y2="{ly}" '
                     f'stroke="{colour}" stroke-width="2"/>')
        parts.append(f'<text x="{left + pw + 36}" y="{ly + 4}">x{i + 1}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
