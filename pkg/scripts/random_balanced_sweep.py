"""Gauge design on random structurally balanced digraphs: prediction vs. long integration."""

import argparse
import csv
import time

import numpy as np

from opinionflow.design import design_laplacian, gauge_design
from opinionflow.dynamics import predict, simulate
from opinionflow.graphs import classify
from opinionflow.random_graphs import random_balanced


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--t-end", type=float, default=100.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="per-graph results")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = []
    t0 = time.perf_counter()
    for k in range(args.count):
        n = int(rng.integers(2, args.n_max + 1))
        G, _ = random_balanced(rng, n)
        d = design_laplacian(G.A, gauge_design(classify(G), rng.uniform(0.5, 3.0, n)))
        x0 = rng.uniform(-50, 50, n)
        dt = min(1e-3, 0.5 / np.max(np.diag(d.Lx)))
        traj = simulate(d.Lx, x0, dt=dt, t_end=args.t_end)
        err = float(np.max(np.abs(traj.final - predict(d, x0).xf)))
        rows.append((k, n, dt, err, traj.t_converged))
    errs = np.array([r[3] for r in rows])
    print(f"{args.count} graphs in {time.perf_counter() - t0:.1f}s; "
          f"max error {errs.max():.2e}, median {np.median(errs):.2e}, "
          f"{np.sum(errs < 1e-6)} below 1e-6")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "n", "dt", "max_error", "t_converged"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
