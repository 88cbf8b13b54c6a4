"""Experiment harness and command line front end.

Configs are flat key = value text files ('#' starts a comment); see README
for the key reference.  Verbs:

    run <config>                 restore with every configured solver
    sweep <config> --lambda ...  repeat the primary solver over a lambda grid
    mask --lines L --n N --out F write a radial sampling mask
    fixtures --out DIR           export the bundled test images

Exit codes: 0 success, 2 bad configuration, 3 every solver diverged,
4 file I/O failure.  Relative output directories are resolved against
$WTV_OUTPUT_ROOT when it is set.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .bregman import INNER_SOLVERS
from .errors import ConfigError, DivergenceError
from .forward_backward import SolverConfig, afb_solve
from .grid import write_grid, write_pgm
from .operators import FourierMaskModel, GaussianBlurModel, radial_mask
from .testdata import NoiseSpec, add_gaussian_noise, piecewise_test_image, shepp_logan

__all__ = ["ExperimentConfig", "run_experiment", "sweep_lambda", "main"]

PROBLEMS = ("deblur", "cs_mri")

ENV_OUTPUT_ROOT = "WTV_OUTPUT_ROOT"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a test problem plus solver settings and outputs."""

    problem: str
    n: int = 256
    seed: int = 0
    noise_variance: float = 0.0
    blur_sigma: float = 1.5
    blur_size: int = 9
    mask_lines: int = 10
    solvers: tuple = ("fwsb", "gauss_seidel")
    outdir: str = "results"
    solver: SolverConfig = SolverConfig(lam=1e-3)

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        if self.n < 16:
            raise ConfigError(f"n must be at least 16, got {self.n}")
        if not self.solvers:
            raise ConfigError("need at least one solver")
        for s in self.solvers:
            if s not in INNER_SOLVERS:
                raise ConfigError(f"unknown solver {s!r}")
        if self.noise_variance < 0:
            raise ConfigError("noise_variance must be >= 0")


# config file key -> (target, attribute, parser)
_BOOL = {"true": True, "false": False}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL[text.lower()]
    except KeyError:
        raise ConfigError(f"expected true/false, got {text!r}") from None


def _parse_solvers(text: str) -> tuple:
    return tuple(s.strip() for s in text.split(",") if s.strip())


_EXPERIMENT_KEYS = {
    "problem": str,
    "n": int,
    "seed": int,
    "noise_variance": float,
    "blur_sigma": float,
    "blur_size": int,
    "mask_lines": int,
    "solvers": _parse_solvers,
    "outdir": str,
}

_SOLVER_KEYS = {
    "lambda": ("lam", float),
    "beta": ("beta", float),
    "a": ("a", float),
    "epsilon": ("epsilon", float),
    "max_fb": ("max_fb", int),
    "weight_mode": ("weight_mode", str),
    "mu_scale": ("mu_scale", float),
    "r0": ("r0", float),
    "no_accel": ("no_accel", _parse_bool),
    "tau": ("tau", float),
    "max_outer": ("max_outer", int),
    "max_inner": ("max_inner", int),
    "theta": ("theta", float),
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat key = value format; unknown keys are errors."""
    exp_kw: dict = {}
    sol_kw: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key in _EXPERIMENT_KEYS:
                exp_kw[key] = _EXPERIMENT_KEYS[key](value)
            elif key in _SOLVER_KEYS:
                attr, conv = _SOLVER_KEYS[key]
                sol_kw[attr] = conv(value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except (ValueError, TypeError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    if "problem" not in exp_kw:
        raise ConfigError("config must set 'problem'")
    if "lam" not in sol_kw and "r0" not in sol_kw:
        sol_kw["lam"] = 1e-3
    return ExperimentConfig(solver=SolverConfig(**sol_kw), **exp_kw)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(value)
    return str(value)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Emit every set key in a stable order; parse(serialize(c)) == c."""
    lines = []
    for key in _EXPERIMENT_KEYS:
        lines.append(f"{key} = {_format_value(getattr(cfg, key))}")
    for key, (attr, _) in _SOLVER_KEYS.items():
        value = getattr(cfg.solver, attr)
        if value is None:
            continue
        lines.append(f"{key} = {_format_value(value)}")
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def resolve_outdir(outdir: str) -> str:
    root = os.environ.get(ENV_OUTPUT_ROOT)
    if root and not os.path.isabs(outdir):
        return os.path.join(root, outdir)
    return outdir


def build_problem(cfg: ExperimentConfig):
    """Ground truth, forward model and noisy data for a config."""
    if cfg.problem == "deblur":
        truth = piecewise_test_image(cfg.n)
        model = GaussianBlurModel(cfg.n, cfg.blur_sigma, cfg.blur_size)
        extras = {}
    else:
        truth = shepp_logan(cfg.n)
        mask, pct = radial_mask(cfg.n, cfg.mask_lines)
        model = FourierMaskModel(mask)
        extras = {"sampling_pct": pct}
    clean = model.apply(truth)
    data = add_gaussian_noise(clean, NoiseSpec(cfg.noise_variance, cfg.seed))
    return truth, model, data, extras


def _fmt_psnr(value: float) -> str:
    return f"{value:.6f}"


def _write_trace(path, trace) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("n,psnr,objective,rel_change,cum_seconds,inner_iters\n")
        for i in range(len(trace)):
            fh.write(
                f"{trace.iterations[i]},{_fmt_psnr(trace.psnr[i])},"
                f"{trace.objective[i]:.10e},{trace.rel_change[i]:.6e},"
                f"{trace.cum_seconds[i]:.3f},{trace.inner_iters[i]}\n"
            )


def run_experiment(cfg: ExperimentConfig, quiet: bool = False):
    """Run every configured solver on the experiment; returns per-solver rows."""
    outdir = resolve_outdir(cfg.outdir)
    os.makedirs(outdir, exist_ok=True)
    truth, model, data, extras = build_problem(cfg)
    rows = []
    for name in cfg.solvers:
        scfg = replace(cfg.solver, inner=name)
        try:
            u, trace = afb_solve(model, data, scfg, reference=truth)
        except DivergenceError as exc:
            rows.append({"solver": name, "status": "diverged", "detail": str(exc)})
            if not quiet:
                print(f"{name}: diverged ({exc})", file=sys.stderr)
            continue
        _write_trace(os.path.join(outdir, f"trace_{name}.csv"), trace)
        write_pgm(os.path.join(outdir, f"recon_{name}.pgm"), u)
        write_grid(os.path.join(outdir, f"recon_{name}.grid"), u)
        rows.append(
            {
                "solver": name,
                "status": "ok",
                "psnr": trace.psnr[-1],
                "seconds": trace.cum_seconds[-1],
                "fb_iters": trace.iterations[-1],
                "converged": trace.rel_change[-1] < scfg.epsilon,
            }
        )
        if not quiet:
            print(
                f"{name}: psnr={_fmt_psnr(trace.psnr[-1])} dB, "
                f"{trace.cum_seconds[-1]:.3f} s, {trace.iterations[-1]} iterations"
            )
    with open(os.path.join(outdir, "summary.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write("solver,status,psnr,seconds,fb_iters,converged\n")
        for row in rows:
            if row["status"] == "ok":
                fh.write(
                    f"{row['solver']},ok,{_fmt_psnr(row['psnr'])},"
                    f"{row['seconds']:.3f},{row['fb_iters']},"
                    f"{int(row['converged'])}\n"
                )
            else:
                fh.write(f"{row['solver']},diverged,,,,\n")
    with open(os.path.join(outdir, "config_resolved.cfg"), "w", encoding="utf-8") as fh:
        fh.write(serialize_config(cfg))
        for key, value in extras.items():
            fh.write(f"# {key} = {value!r}\n")
    if extras and not quiet:
        for key, value in extras.items():
            print(f"{key} = {value}")
    return rows


def sweep_lambda(cfg: ExperimentConfig, lambdas, quiet: bool = False):
    """Rerun the primary (first) solver per lambda; returns the curve rows."""
    values = [float(v) for v in lambdas]
    if not values:
        raise ConfigError("lambda sweep needs at least one value")
    outdir = resolve_outdir(cfg.outdir)
    os.makedirs(outdir, exist_ok=True)
    truth, model, data, _ = build_problem(cfg)
    primary = cfg.solvers[0]
    rows = []
    for lam in values:
        scfg = replace(cfg.solver, inner=primary, lam=lam, r0=None)
        u, trace = afb_solve(model, data, scfg, reference=truth)
        rows.append(
            {
                "lam": lam,
                "psnr": trace.psnr[-1],
                "seconds": trace.cum_seconds[-1],
                "fb_iters": trace.iterations[-1],
            }
        )
        if not quiet:
            print(
                f"lambda={lam!r}: psnr={_fmt_psnr(trace.psnr[-1])} dB, "
                f"{trace.iterations[-1]} iterations"
            )
    with open(os.path.join(outdir, "lambda_sweep.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write("lambda,psnr,seconds,fb_iters\n")
        for row in rows:
            fh.write(
                f"{row['lam']!r},{_fmt_psnr(row['psnr'])},"
                f"{row['seconds']:.3f},{row['fb_iters']}\n"
            )
    best = max(rows, key=lambda r: r["psnr"])
    if not quiet:
        print(f"best: lambda={best['lam']!r} at {_fmt_psnr(best['psnr'])} dB")
    return rows, best


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    rows = run_experiment(cfg)
    if all(row["status"] == "diverged" for row in rows):
        return 3
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    values = []
    for chunk in args.lam:
        values.extend(v for v in chunk.replace(",", " ").split() if v)
    sweep_lambda(cfg, values)
    return 0


def _cmd_mask(args) -> int:
    mask, pct = radial_mask(args.n, args.lines)
    write_grid(args.out, mask)
    if args.pgm:
        write_pgm(args.pgm, mask)
    print(f"{args.lines} lines on {args.n}x{args.n}: sampling_pct = {pct}")
    return 0


def _cmd_fixtures(args) -> int:
    outdir = resolve_outdir(args.out)
    os.makedirs(outdir, exist_ok=True)
    for name, img in (
        ("shepp_logan", shepp_logan(args.n)),
        ("cartoon", piecewise_test_image(args.n)),
    ):
        write_grid(os.path.join(outdir, f"{name}.grid"), img)
        write_pgm(os.path.join(outdir, f"{name}.pgm"), img)
    print(f"wrote fixtures to {outdir}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wtv", description="Weighted-TV image restoration experiments."
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="run every configured solver")
    p_run.add_argument("config", help="path to a key = value config file")
    p_run.set_defaults(fn=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep the regularisation weight")
    p_sweep.add_argument("config")
    p_sweep.add_argument(
        "--lambda",
        dest="lam",
        action="append",
        required=True,
        help="lambda values (comma or space separated; repeatable)",
    )
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_mask = sub.add_parser("mask", help="generate a radial sampling mask")
    p_mask.add_argument("--lines", type=int, required=True)
    p_mask.add_argument("--n", type=int, default=256)
    p_mask.add_argument("--out", required=True, help="output grid file")
    p_mask.add_argument("--pgm", help="also write a PGM preview")
    p_mask.set_defaults(fn=_cmd_mask)

    p_fix = sub.add_parser("fixtures", help="export the bundled test images")
    p_fix.add_argument("--out", required=True)
    p_fix.add_argument("--n", type=int, default=256)
    p_fix.set_defaults(fn=_cmd_fixtures)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
