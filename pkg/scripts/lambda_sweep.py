"""Regularisation-weight sweep for either test problem.

Reruns the primary solver over a lambda grid and reports the best value;
the full curve goes to lambda_sweep.csv.  Default grid is logarithmic,
1e-4 .. 1e-1.
"""

import argparse

import numpy as np

from wtv.cli import ExperimentConfig, sweep_lambda
from wtv.forward_backward import SolverConfig


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problem", choices=("deblur", "cs_mri"), default="deblur")
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--noise-variance", type=float, default=0.5e-2)
    ap.add_argument("--lines", type=int, default=10)
    ap.add_argument("--lo", type=float, default=1e-4)
    ap.add_argument("--hi", type=float, default=1e-1)
    ap.add_argument("--points", type=int, default=7)
    ap.add_argument("--max-fb", type=int, default=80)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default="results/sweep")
    return ap.parse_args()


def main():
    args = parse_args()
    weight_mode = "adaptive" if args.problem == "cs_mri" else "fixed"
    noise = 0.0 if args.problem == "cs_mri" else args.noise_variance
    cfg = ExperimentConfig(
        problem=args.problem,
        n=args.n,
        seed=args.seed,
        noise_variance=noise,
        mask_lines=args.lines,
        solvers=("fwsb",),
        outdir=args.outdir,
        solver=SolverConfig(
            lam=args.lo,  # replaced per sweep point
            beta=0.9,
            weight_mode=weight_mode,
            mu_scale=7.5e-5,
            epsilon=1e-4,
            max_fb=args.max_fb,
        ),
    )
    grid = np.geomspace(args.lo, args.hi, args.points)
    sweep_lambda(cfg, grid)


if __name__ == "__main__":
    main()
