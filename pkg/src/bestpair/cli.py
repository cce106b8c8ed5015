"""Command line entry point.

Exit codes: 0 success, 1 input error, 2 numerical or capacity error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config, preset
from .errors import BestPairError, InputError, UnsupportedPlotError
from .harness import export_trace, run_experiment
from .oracle import build_certificate, cheney_goldstein, certify_pair
from .schedule import LambdaSchedule, SweepSchedule, validate_lambda, z_bound_profile
from .svg import plot_trace



def _sources(args) -> list[RunConfig]:
    if not (args.preset or args.config):
        raise InputError("give at least one --preset or --config")
    cfgs = [preset(n) for n in args.preset or []] + [load_config(n) for n in args.config or []]
    if getattr(args, "sweeps", None) is not None:
        cfgs = [c.with_sweeps(args.sweeps) for c in cfgs]
    return cfgs


def _point(text: str, dim: int) -> np.ndarray:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse point {text!r}") from exc
    if len(vals) != dim:
        raise InputError(f"point {text!r} has {len(vals)} coordinates, expected {dim}")
    return np.array(vals)


def _run_one(cfg: RunConfig, out_dir: str | None, formats: list[str] | None) -> dict:
    result = run_experiment(cfg)
    out_dir = out_dir or cfg.output.dir or os.environ.get("BAP_OUT_DIR") or "out"
    formats = formats or list(cfg.output.formats)
    stem = Path(out_dir) / f"{cfg.name}_{cfg.output.prefix}"
    written = []
    for fmt in formats:
        if fmt == "svg":
            written.append(str(plot_trace(result.trace, cfg.A, cfg.B, f"{stem}.svg")))
        else:
            written.append(str(export_trace(result.trace, f"{stem}.{fmt}", fmt, cfg)))
    result.summary["files"] = written
    return result.summary


def cmd_run(args) -> int:
    cfgs = _sources(args)
    formats = None
    if args.format:
        formats = [f.strip() for f in args.format.split(",") if f.strip()]
        bad = set(formats) - {"csv", "json", "svg"}
        if bad:
            raise InputError(f"unknown format(s): {sorted(bad)}")
    for cfg in cfgs:
        if "svg" in (formats or cfg.output.formats) and cfg.dimension != 2:
            raise UnsupportedPlotError(
                f"{cfg.name}: SVG output needs dimension 2, config has {cfg.dimension}")
    out_dir = args.out
    if args.jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            summaries = list(pool.map(_run_one, cfgs, [out_dir] * len(cfgs),
                                      [formats] * len(cfgs)))
    else:
        summaries = [_run_one(cfg, out_dir, formats) for cfg in cfgs]
    json.dump(summaries if len(summaries) > 1 else summaries[0], sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_oracle(args) -> int:
    cfg = _sources(args)[0]
    start = cfg.start if args.start is None else _point(args.start, cfg.dimension)
    cert = cheney_goldstein(cfg.A, cfg.B, start, args.max_iters, args.tol)
    json.dump(cert.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0 if cert.converged else 2


def cmd_certify(args) -> int:
    cfg = _sources(args)[0]
    a = _point(args.a, cfg.dimension)
    b = _point(args.b, cfg.dimension)
    cert = build_certificate(cfg.A, cfg.B, a, b, args.tol)
    out = {"residual": certify_pair(cfg.A, cfg.B, a, b, args.tol), "tol": args.tol,
           "certified": cert.certified, "distance": cert.distance}
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_validate_schedule(args) -> int:
    if args.preset or args.config:
        cfg = _sources(args)[0]
        ls, ss, period = cfg.lam, cfg.sweeps, max(len(cfg.A), len(cfg.B))
    else:
        ls, ss, period = LambdaSchedule(), SweepSchedule(), 4
    if args.lambda_json:
        ls = LambdaSchedule.from_dict(json.loads(args.lambda_json))
    if args.sweeps_json:
        ss = SweepSchedule.from_dict(json.loads(args.sweeps_json))
    if args.period:
        period = args.period
    report = validate_lambda(ls, period, args.horizon)
    profile = z_bound_profile(ls, ss, args.k0_max, args.k_horizon)
    out = {
        "lambda": ls.to_dict(),
        "sweeps": ss.to_dict(),
        "period": period,
        "horizon": args.horizon,
        "checks": report.to_dict(),
        "z_bound": max(profile),
        "z_bound_argmax_k0": int(np.argmax(profile)),
        "z_profile": profile,
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0 if report.passed else 2


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors, so they exit with 1 rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bestpair",
        description="Closest points between two polyhedra by alternating HLWB sweeps.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def sources(p):
        p.add_argument("--preset", action="append", metavar="NAME", help="exp1 or exp2")
        p.add_argument("--config", action="append", metavar="PATH")

    p = sub.add_parser("run", help="run an experiment and write its trace")
    sources(p)
    p.add_argument("--sweeps", type=int, help="override num_sweeps")
    p.add_argument("--out", metavar="DIR", help="output directory (default $BAP_OUT_DIR or ./out)")
    p.add_argument("--format", help="comma list of csv, json, svg (default from config)")
    p.add_argument("--jobs", type=int, default=1, help="run several configs in parallel")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="print the certified best pair (Cheney-Goldstein)")
    sources(p)
    p.add_argument("--start", help="comma-separated start point (default: config start)")
    p.add_argument("--max-iters", type=int, default=100_000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("certify", help="check whether a given pair is a best pair")
    sources(p)
    p.add_argument("--a", required=True, help="comma-separated point in A")
    p.add_argument("--b", required=True, help="comma-separated point in B")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("validate-schedule", help="finite-horizon schedule diagnostics")
    sources(p)
    p.add_argument("--lambda-json", help='e.g. \'{"kind": "constant", "value": 0.5}\'')
    p.add_argument("--sweeps-json", help='e.g. \'{"kind": "linear"}\'')
    p.add_argument("--period", type=int)
    p.add_argument("--horizon", type=int, default=1_000_000)
    p.add_argument("--k0-max", type=int, default=30)
    p.add_argument("--k-horizon", type=int, default=400)
    p.set_defaults(func=cmd_validate_schedule)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BestPairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON argument: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
