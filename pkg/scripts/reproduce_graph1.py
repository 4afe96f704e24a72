"""Both Graph-1 designs: theta_x, predicted and simulated final opinions, CSV/SVG."""

import argparse
from pathlib import Path

import numpy as np

from opinionflow import files
from opinionflow.design import TransformMatrix, design_laplacian
from opinionflow.dynamics import predict, spectrum, verify
from opinionflow.reference import GRAPH1_A, GRAPH1_P_CLUSTER, GRAPH1_P_GAUGE, GRAPH1_X0

CASES = {
    "case1": TransformMatrix(GRAPH1_P_GAUGE, kind="diagonal"),
    "case2": TransformMatrix(GRAPH1_P_CLUSTER),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/graph1", help="output directory")
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--t-end", type=float, default=20.0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    np.set_printoptions(precision=4, suppress=True)
    print("eigenvalues of A:", spectrum(GRAPH1_A).eigenvalues)
    for name, P in CASES.items():
        d = design_laplacian(GRAPH1_A, P)
        rep = verify(d, GRAPH1_X0, dt=args.dt, t_end=args.t_end)
        print(f"\n{name}: theta_x diag = {np.diag(d.theta_x)}")
        print(f"  predicted x_f  = {predict(d, GRAPH1_X0).xf}")
        print(f"  simulated x_f  = {rep.xf_simulated}")
        print(f"  max error {rep.max_error:.2e}, converged at t = {rep.trajectory.t_converged}")
        (out / f"{name}.csv").write_text(files.trajectory_csv(rep.trajectory))
        (out / f"{name}.svg").write_text(files.trajectory_svg(rep.trajectory, title=f"Graph-1 {name}"))
    print(f"\nwrote {out}/")


if __name__ == "__main__":
    main()
