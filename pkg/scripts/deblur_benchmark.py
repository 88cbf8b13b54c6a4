"""Gaussian deblurring benchmark on the piecewise-constant test image.

Defaults reproduce the acceptance-scale run: 256x256, sigma 1.5 / size 9
kernel, noise variance 0.5e-2, both inner solvers.  Results (traces,
reconstructions, summary.csv) land in --outdir, resolved against
$WTV_OUTPUT_ROOT when set.
"""

import argparse

from wtv.cli import ExperimentConfig, run_experiment
from wtv.forward_backward import SolverConfig


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--noise-variance", type=float, default=0.5e-2)
    ap.add_argument("--blur-sigma", type=float, default=1.5)
    ap.add_argument("--blur-size", type=int, default=9)
    ap.add_argument("--lam", type=float, default=5e-3)
    ap.add_argument("--max-fb", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--solvers", default="fwsb,gauss_seidel")
    ap.add_argument("--outdir", default="results/deblur")
    return ap.parse_args()


def main():
    args = parse_args()
    cfg = ExperimentConfig(
        problem="deblur",
        n=args.n,
        seed=args.seed,
        noise_variance=args.noise_variance,
        blur_sigma=args.blur_sigma,
        blur_size=args.blur_size,
        solvers=tuple(s for s in args.solvers.split(",") if s),
        outdir=args.outdir,
        solver=SolverConfig(
            lam=args.lam,
            beta=0.9,
            weight_mode="fixed",
            mu_scale=7.5e-5,
            epsilon=1e-4,
            max_fb=args.max_fb,
        ),
    )
    run_experiment(cfg)


if __name__ == "__main__":
    main()
