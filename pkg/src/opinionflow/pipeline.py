"""End-to-end scenario runs: classify, design, predict, simulate, write outputs."""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import files
from .design import (TransformMatrix, block_design, design_laplacian, gauge_design,
                     ratio_design, reverse_design)
from .dynamics import predict_uniform, verify
from .errors import DesignError, GateError, GraphError
from .graphs import GraphClass, block_decompose, classify

PASS, FAIL, ERROR = 0, 1, 2


def design_for(G, cert, T):
    """Design from an explicit transform; block kind goes through the leader split."""
    if T.kind != "block":
        return design_laplacian(G.A, T)
    dec = block_decompose(G)
    if T.r != dec.r:
        raise DesignError(f"block transform has r={T.r}, leader block has {dec.r} agents")
    order = dec.ordering
    Pb = T.P[np.ix_(order, order)]
    r = dec.r
    if np.any(Pb[:r, r:] != 0) or np.any(Pb[r:, :r] != 0):
        raise DesignError("transform is not block-diagonal in the leader/follower ordering")
    P1 = Pb[:r, :r]
    kind = "diagonal" if np.all(P1 == np.diag(np.diag(P1))) else "full"
    return block_design(dec, TransformMatrix(P1, kind=kind), Pb[r:, r:])


def gauge_for(G, cert, magnitudes=None):
    """Gauge design, falling back to the leader/follower split for unbalanced graphs."""
    m = np.ones(G.n) if magnitudes is None else np.asarray(magnitudes, dtype=float)
    if m.shape != (G.n,):
        raise DesignError(f"need {G.n} magnitudes, got {m.size}")
    if cert.kind in (GraphClass.UNSIGNED, GraphClass.BALANCED):
        return design_laplacian(G.A, gauge_design(cert, m))
    dec = block_decompose(G)
    order, r = dec.ordering, dec.r
    if np.any(m[order[r:]] <= 0):
        raise DesignError("gauge magnitudes must be positive")
    P1 = gauge_design(dec.leader, m[order[:r]])
    return block_design(dec, P1, np.diag(m[order[r:]]))


@dataclass
class RunResult:
    name: str
    classification: str
    report: dict
    trajectory: object
    code: int


def run_scenario(sc, dt=None, t_end=None):
    """Execute a :class:`files.Scenario`; raises package errors on bad input."""
    G = files.load_graph(sc.graph)
    if sc.x0.shape != (G.n,):
        raise GraphError(f"x0 has {sc.x0.size} entries, graph has {G.n} agents")
    cert = classify(G)
    dt = sc.dt if dt is None else dt
    t_end = sc.t_end if t_end is None else t_end

    extra = {}
    if sc.mode == "gauge":
        design = gauge_for(G, cert, sc.magnitudes)
    elif sc.mode == "p_file":
        design = design_for(G, cert, files.scenario_transform(sc))
    elif sc.mode == "ratio":
        P, direction = ratio_design(G, cert, sc.ratios)
        design = design_laplacian(G.A, P)
        extra["ratios"] = direction.tolist()
    else:
        P = reverse_design(sc.x0, sc.xf)
        design = design_laplacian(G.A, P)
        extra["xf_requested"] = sc.xf.tolist()
        try:
            predict_uniform(design, sc.x0)
            extra["weight_balance_gate"] = True
        except GateError as exc:
            extra["weight_balance_gate"] = False
            extra["gate_message"] = str(exc)

    rep = verify(design, sc.x0, dt=dt, t_end=t_end, settle_tol=sc.settle_tol,
                 classification=cert.describe())
    out = rep.to_dict()
    out.update(extra)
    passed = rep.passed
    if sc.mode == "reverse":
        hit = rep.xf_simulated is not None and \
            float(np.max(np.abs(rep.xf_simulated - sc.xf))) < rep.tolerance
        passed = passed and extra["weight_balance_gate"] and hit
        out["pass"] = passed
    return RunResult(name=sc.name, classification=cert.describe(), report=out,
                     trajectory=rep.trajectory, code=PASS if passed else FAIL)


def write_outputs(result, csv=None, report=None, svg=None):
    if result.trajectory is not None:
        if csv:
            Path(csv).write_text(files.trajectory_csv(result.trajectory), encoding="utf-8")
        if svg:
            Path(svg).write_text(files.trajectory_svg(result.trajectory, title=result.name), encoding="utf-8")
    if report:
        Path(report).write_text(json.dumps(result.report, indent=2) + "\n", encoding="utf-8")
