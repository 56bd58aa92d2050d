"""Command-line front-end: sample patterns, run estimates, print rate tables,
and execute the validation suite.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  The environment
variable GINIBRENET_SEED supplies a fallback seed when --seed is absent.
Every command is deterministic given its seed; --threads 1 (the default and
only supported value) guarantees bit-exact reproduction.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .errors import SamplerStallError
from .estimation import estimate_interference_tail, speed_regression
from .fading import FADING_KINDS, FadingSpec
from .patterns import RngStream, write_pattern_csv
from .rates import (LdpRegime, growth_function, poisson_comparison, rate,
                    speed, tail_asymptote)
from .samplers import (sample_beta_ginibre, sample_ginibre_disk,
                       sample_palm_beta_ginibre, sample_poisson)
from .validate import run_suite

_PROCESS_CHOICES = ("ginibre", "beta-ginibre", "palm", "poisson")


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("GINIBRENET_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(2)
    return 0


def _add_seed(parser):
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (fallback: GINIBRENET_SEED, then 0)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker count; only 1 (bit-exact mode) is supported")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ginibrenet",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser(
        "sample", help="draw one point pattern and write it as CSV",
        description="Draw one pattern (Ginibre / thinned Ginibre / reduced "
                    "Palm / Poisson of intensity 1/pi) on a centered disk.")
    p_sample.add_argument("--process", choices=_PROCESS_CHOICES, required=True)
    p_sample.add_argument("--beta", type=float, default=1.0,
                          help="thinning retention in (0, 1] (default 1)")
    p_sample.add_argument("--radius", type=float, required=True,
                          help="disk radius (positive)")
    p_sample.add_argument("--out", type=Path, default=None,
                          help="output CSV path (default: stdout)")
    _add_seed(p_sample)

    p_est = sub.add_parser(
        "estimate", help="run the configured tail estimator over a grid",
        description="Read an experiment config (INI sections: process, "
                    "receiver, attenuation, fading, noise, threshold, "
                    "estimation, output; defaults are the NetworkModel "
                    "defaults documented in the config module) and write "
                    "estimates.csv plus slope.csv to the output directory.")
    p_est.add_argument("--config", type=Path, required=True)
    _add_seed(p_est)

    p_rates = sub.add_parser(
        "rates", help="print closed-form rate/speed/asymptote tables",
        description="Evaluate the regime's rate function, speed and tail "
                    "asymptote on grids of x and eps.")
    p_rates.add_argument("--fading", choices=FADING_KINDS, required=True)
    p_rates.add_argument("--c", type=float, default=1.0, help="decay constant")
    p_rates.add_argument("--gamma", type=float, default=0.0, help="Weibull shape")
    p_rates.add_argument("--bound", type=float, default=1.0,
                         help="bounded-fading supremum B")
    p_rates.add_argument("--atten-R", type=float, default=1.0)
    p_rates.add_argument("--atten-alpha", type=float, default=4.0)
    p_rates.add_argument("--x", type=float, nargs="+", default=[1.0, 2.0, 4.0])
    p_rates.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.01])
    p_rates.add_argument("--compare-poisson", action="store_true",
                         help="also print the Poisson-network limit constant")
    p_rates.add_argument("--out", type=Path, default=None)

    p_val = sub.add_parser(
        "validate", help="run the acceptance validation suite",
        description="Run every acceptance check with fixed seeds; nonzero "
                    "exit on any failure.")
    p_val.add_argument("--quick", action="store_true",
                       help="reduced Monte Carlo budgets (finishes in minutes)")
    return parser


def cmd_sample(args) -> int:
    seed = _resolve_seed(args)
    stream = RngStream(seed)
    try:
        if args.process == "ginibre":
            pat = sample_ginibre_disk(args.radius, stream)
        elif args.process == "beta-ginibre":
            pat = sample_beta_ginibre(args.beta, args.radius, stream)
        elif args.process == "palm":
            pat = sample_palm_beta_ginibre(args.beta, args.radius, stream)
        else:
            pat = sample_poisson(args.radius, 1.0 / 3.141592653589793, stream)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SamplerStallError as exc:
        print(f"error: {exc} {exc.diagnostics}", file=sys.stderr)
        return 1
    if args.out is None:
        sys.stdout.write(f"# process={pat.process_kind} beta={pat.beta!r} "
                         f"radius={pat.window_radius!r} seed={pat.seed}\nx,y\n")
        for p in pat.points:
            sys.stdout.write(f"{p.real:.17g},{p.imag:.17g}\n")
    else:
        write_pattern_csv(pat, args.out)
        print(f"wrote {len(pat)} points to {args.out}")
    return 0


def cmd_estimate(args) -> int:
    try:
        cfg = load_config(args.config, seed_override=args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if len(cfg.plan.x_grid) < 3:
        print("error: [estimation] x_grid: slope regression needs at least 3 "
              "grid points", file=sys.stderr)
        return 2
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    est_path = cfg.output_dir / "estimates.csv"
    slope_path = cfg.output_dir / "slope.csv"
    stream = RngStream(cfg.plan.seed)
    rows = []
    code = 0
    try:
        for i, x in enumerate(cfg.plan.x_grid):
            est = estimate_interference_tail(
                cfg.model, x, cfg.plan.n_reps, cfg.plan.estimator,
                stream.substream(1000 * (i + 1)), split=cfg.plan.split)
            rows.append({"x": x, "eps": 1.0, "estimator": est.estimator,
                         "p": est.probability, "stderr": est.stderr,
                         "ci_lo": est.ci95[0], "ci_hi": est.ci95[1],
                         "n_reps": est.n_reps, "seed": cfg.plan.seed})
        report = speed_regression(cfg.model, cfg.regime, cfg.plan.x_grid,
                                  cfg.plan.n_reps, cfg.plan.estimator, stream)
    except (ValueError, SamplerStallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        report = None
        code = 1
    # partial outputs are preserved on failure
    with est_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["x", "eps", "estimator", "p",
                                                "stderr", "ci_lo", "ci_hi",
                                                "n_reps", "seed"])
        writer.writeheader()
        writer.writerows(rows)
    if report is not None:
        with slope_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "log_p", "predicted"])
            for x, lp, pred in zip(report.x_grid, report.log_p, report.predicted):
                writer.writerow([x, lp, pred])
            writer.writerow([])
            writer.writerow(["fitted_slope", report.fitted_slope])
            writer.writerow(["target_slope", report.target_slope])
            writer.writerow(["relative_error", report.relative_error])
        print(f"fitted slope {report.fitted_slope:.4f} vs target "
              f"{report.target_slope:.4f} "
              f"(relative error {report.relative_error:.3%})")
    print(f"wrote {est_path}" + ("" if report is None else f" and {slope_path}"))
    return code


def cmd_rates(args) -> int:
    kw = {"kind": args.fading}
    if args.fading == "bounded":
        kw["bound"] = args.bound
    else:
        kw["c"] = args.c
    if args.fading in ("weibull_super", "weibull_sub"):
        kw["gamma"] = args.gamma
    try:
        fading = FadingSpec(**kw)
        regime = LdpRegime.from_fading(fading, args.atten_R, args.atten_alpha)
        lines = [f"regime: {regime.kind}  (R={args.atten_R}, alpha={args.atten_alpha})",
                 f"{'x':>12s} {'rate':>16s} {'asymptote':>16s}"]
        for x in args.x:
            lines.append(f"{x:12.6g} {rate(regime, x):16.8g} "
                         f"{tail_asymptote(regime, x):16.8g}")
        lines.append(f"{'eps':>12s} {'speed':>16s}")
        for eps in args.eps:
            lines.append(f"{eps:12.6g} {speed(regime, eps):16.8g}")
        if args.compare_poisson:
            ginibre_const = tail_asymptote(regime, 2.0) / growth_function(regime, 2.0)
            lines.append(f"Ginibre limit constant:  {ginibre_const:16.8g}")
            lines.append(f"Poisson limit constant:  {poisson_comparison(regime):16.8g}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    ok = run_suite(quick=args.quick)
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) not in (None, 1):
        print("error: only --threads 1 (bit-exact single-stream mode) is "
              "supported", file=sys.stderr)
        return 2
    handler = {"sample": cmd_sample, "estimate": cmd_estimate,
               "rates": cmd_rates, "validate": cmd_validate}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
