"""Command line: ``opinionflow {classify,spectrum,design,reverse,run,sweep}``.

Exit codes: 0 verification passed (or plain report printed), 1 verification
failed, 2 input or precondition error.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import files
from .design import existence_report
from .dynamics import spectrum
from .errors import OpinionFlowError
from .graphs import classify, connectivity
from .pipeline import ERROR, FAIL, PASS, design_for, gauge_for, run_scenario, write_outputs


def _fmt_matrix(M):
    return "\n".join("  [" + ", ".join(f"{v:10.6g}" for v in row) + "]" for row in np.asarray(M))


def _fmt_vec(x):
    return "(" + ", ".join(f"{v:.6g}" for v in x) + ")"


def _fmt_complex(z):
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def cmd_classify(args):
    G = files.load_graph(args.graph)
    cert = classify(G)
    conn = connectivity(G)
    ex = existence_report(G)
    irr = "irreducible" if conn.irreducible else f"reducible ({len(conn.scc_list)} components)"
    period = f"period {conn.period}" if conn.period else "acyclic"
    print(f"{cert.describe()}; {irr}; {period}; {ex.describe()}")
    if cert.witness:
        print("witness cycle: " + " ".join(f"({i + 1},{j + 1})" for i, j in cert.witness))
    return PASS


def cmd_spectrum(args):
    G = files.load_graph(args.graph)
    s = spectrum(G.A)
    print("eigenvalues: " + ", ".join(_fmt_complex(z) for z in s.eigenvalues))
    print(f"spectral radius: {s.spectral_radius:.6g}")
    print(f"spectral radius in spectrum: {'yes' if s.leading_in_spectrum else 'no'}"
          f"{' (simple)' if s.leading_simple else ''}")
    return PASS


def cmd_design(args):
    G = files.load_graph(args.graph)
    cert = classify(G)
    if args.p:
        design = design_for(G, cert, files.load_transform(args.p))
    else:
        design = gauge_for(G, cert, args.magnitudes)
    print(f"class: {cert.describe()}")
    print(f"method: {design.method}")
    print("P =\n" + _fmt_matrix(design.P.P))
    print("theta_x =\n" + _fmt_matrix(design.theta_x))
    print("L_x =\n" + _fmt_matrix(design.Lx))
    if args.report:
        data = {"classification": cert.describe(), "method": design.method,
                "P": design.P.P.tolist(), "theta_x": design.theta_x.tolist(),
                "L_x": design.Lx.tolist(), "theta_z": design.theta_z.tolist(),
                "A_z": design.Az.tolist()}
        Path(args.report).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return PASS


def cmd_reverse(args):
    sc = files.Scenario(name=Path(args.graph).stem, graph=Path(args.graph),
                        x0=np.asarray(args.x0, dtype=float), mode="reverse",
                        xf=np.asarray(args.xf, dtype=float), dt=args.dt or 1e-3,
                        t_end=args.t_end or 20.0)
    res = run_scenario(sc)
    rep = res.report
    print(f"class: {res.classification}")
    print(f"P = diag{_fmt_vec(1.0 / sc.xf)}")
    if rep["weight_balance_gate"]:
        print("weight-balance gate: holds; requested state is the exact steady state")
    else:
        print("weight-balance gate: FAILS; the requested state will not be reached")
        print("  " + rep["gate_message"])
    if rep["xf_predicted"] is not None:
        print(f"predicted x_f: {_fmt_vec(rep['xf_predicted'])}")
    if rep["xf_simulated"] is not None:
        print(f"simulated x_f: {_fmt_vec(rep['xf_simulated'])}")
    write_outputs(res, csv=args.csv, report=args.report, svg=args.svg)
    return res.code


def cmd_run(args):
    sc = files.load_scenario(args.scenario)
    res = run_scenario(sc, dt=args.dt, t_end=args.t_end)
    write_outputs(res, csv=args.csv or sc.outputs.get("csv"),
                  report=args.report or sc.outputs.get("report"),
                  svg=args.svg or sc.outputs.get("svg"))
    rep = res.report
    print(f"{res.name}: {res.classification}")
    if rep["xf_predicted"] is not None:
        print(f"  predicted x_f: {_fmt_vec(rep['xf_predicted'])}")
    if rep["xf_simulated"] is not None:
        print(f"  simulated x_f: {_fmt_vec(rep['xf_simulated'])}")
    for msg in rep["messages"]:
        print(f"  {msg}")
    if rep.get("weight_balance_gate") is False:
        print(f"  weight-balance gate fails: {rep['gate_message']}")
    err = rep["max_error"]
    print(f"  max error {err:.3g} (tol {rep['tolerance']:g}): {'PASS' if rep['pass'] else 'FAIL'}"
          if err is not None else "  FAIL")
    return res.code


def _sweep_one(path, dt, t_end):
    try:
        sc = files.load_scenario(path)
        res = run_scenario(sc, dt=dt, t_end=t_end)
        write_outputs(res, csv=sc.outputs.get("csv"), report=sc.outputs.get("report"),
                      svg=sc.outputs.get("svg"))
        return (path.name, res.classification, res.report["max_error"],
                "pass" if res.code == PASS else "fail")
    except (OpinionFlowError, OSError) as exc:
        return (path.name, "-", None, f"error: {exc}")


def sweep(directory, pattern="*.scenario.json", jobs=1, dt=None, t_end=None):
    paths = sorted(Path(directory).glob(pattern))
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, paths, [dt] * len(paths), [t_end] * len(paths)))
    else:
        rows = [_sweep_one(p, dt, t_end) for p in paths]
    return rows


def cmd_sweep(args):
    rows = sweep(args.directory, args.pattern, args.jobs, args.dt, args.t_end)
    lines = ["name\tclass\tmax_error\tpass"]
    for name, cls, err, status in rows:
        lines.append(f"{name}\t{cls}\t{'' if err is None else f'{err:.3g}'}\t{status}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return PASS if all(r[3] == "pass" for r in rows) else FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="opinionflow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def sim_flags(sp, outputs=True):
        sp.add_argument("--dt", type=float, default=None, help="RK4 step (default 1e-3)")
        sp.add_argument("--t-end", type=float, default=None, help="final time (default 20)")
        if outputs:
            sp.add_argument("--csv", help="trajectory CSV path")
            sp.add_argument("--svg", help="trajectory SVG path")
            sp.add_argument("--report", help="verification JSON path")

    sp = sub.add_parser("classify", help="balance class, connectivity and P existence")
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("spectrum", help="eigenvalues of the adjacency matrix")
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("design", help="print P, theta_x and L_x")
    sp.add_argument("graph")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--p", help="P-matrix JSON file")
    g.add_argument("--magnitudes", type=float, nargs="+", help="gauge magnitudes (default all 1)")
    sp.add_argument("--report", help="write the design as JSON")
    sp.set_defaults(func=cmd_design)

    sp = sub.add_parser("reverse", help="diagonal P for a requested final state")
    sp.add_argument("graph")
    sp.add_argument("--x0", type=float, nargs="+", required=True)
    sp.add_argument("--xf", type=float, nargs="+", required=True)
    sim_flags(sp)
    sp.set_defaults(func=cmd_reverse)

    sp = sub.add_parser("run", help="run one scenario file")
    sp.add_argument("scenario")
    sim_flags(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("sweep", help="run every scenario in a directory")
    sp.add_argument("directory")
    sp.add_argument("--pattern", default="*.scenario.json")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="also write the summary table here")
    sim_flags(sp, outputs=False)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OpinionFlowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
