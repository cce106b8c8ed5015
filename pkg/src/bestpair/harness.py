"""Experiment execution and trace persistence."""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .ahlwb import IterateTrace, SweepRecord, pair_estimate, run
from .config import RunConfig, parse_config
from .errors import BestPairError, CapacityError, InputError
from .oracle import cheney_goldstein
from .schedule import validate_lambda, z_bound_estimate

TRACE_FORMAT = "bestpair-trace"
TRACE_VERSION = 1


@dataclass
class ExperimentResult:
    config: RunConfig
    trace: IterateTrace
    summary: dict = field(default_factory=dict)


def run_trace(cfg: RunConfig) -> IterateTrace:
    return run(cfg.A, cfg.B, cfg.start, cfg.lam, cfg.sweeps, cfg.aux,
               cfg.control_offset_A, cfg.control_offset_B, cfg.num_sweeps)


def run_experiment(cfg: RunConfig, with_oracle: bool = True,
                   with_diagnostics: bool = True) -> ExperimentResult:
    """Run the alternating sweeps and summarize the outcome.

    The summary carries the final pair, the oracle pair when the
    brute-force oracle can handle the polyhedra, and schedule diagnostics.
    """
    t0 = time.perf_counter()
    trace = run_trace(cfg)
    elapsed = time.perf_counter() - t0
    a, b, dist = pair_estimate(trace)
    summary = {
        "config": cfg.name,
        "backend": kernels.BACKEND,
        "num_sweeps": trace.num_sweeps,
        "inner_iterations": sum(s.length for s in trace.sweeps),
        "elapsed_s": elapsed,
        "final_a": a.tolist(),
        "final_b": b.tolist(),
        "pair_distance": dist,
    }
    if with_oracle:
        try:
            cert = cheney_goldstein(cfg.A, cfg.B, cfg.start)
        except CapacityError as exc:
            summary["oracle"] = {"skipped": str(exc)}
        else:
            summary["oracle"] = cert.to_dict()
            summary["a_error"] = float(np.linalg.norm(a - cert.a_star))
            summary["b_error"] = float(np.linalg.norm(b - cert.b_star))
    if with_diagnostics:
        period = max(len(cfg.A), len(cfg.B))
        report = validate_lambda(cfg.lam, period, 100_000)
        summary["lambda_checks"] = report.to_dict()
        try:
            summary["z_bound"] = z_bound_estimate(cfg.lam, cfg.sweeps, 30, 400)
        except (BestPairError, OverflowError) as exc:
            summary["z_bound"] = f"unavailable: {exc}"
    return ExperimentResult(cfg, trace, summary)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def trace_rows(trace: IterateTrace):
    """Chronological rows: a_0, b_1, a_2, ... with per-role ordinals."""
    events = [(i, "a", j, p) for j, (i, p) in enumerate(trace.a_points)]
    events += [(i, "b", j, p) for j, (i, p) in enumerate(trace.b_points)]
    events.sort(key=lambda e: e[0])
    for idx, role, ordinal, point in events:
        dist = trace.sweeps[idx - 1].distance if idx > 0 else None
        yield idx, role, ordinal, point, dist


def export_trace(trace: IterateTrace, path: str | Path, fmt: str = "csv",
                 cfg: RunConfig | None = None) -> Path:
    """Write the trace as CSV or JSON; parent directories are created.

    CSV columns: sweep_index, role, point_index, coord_0..coord_{d-1},
    pair_distance.  ``sweep_index`` counts completed sweeps when the point
    appeared; ``point_index`` is the ordinal within its role.  JSON also
    embeds the config so the run can be replayed.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["sweep_index", "role", "point_index"]
                           + [f"coord_{i}" for i in range(trace.dim)] + ["pair_distance"])
                for idx, role, ordinal, point, dist in trace_rows(trace):
                    w.writerow([idx, role, ordinal] + [_fmt(v) for v in point]
                               + ["" if dist is None else _fmt(dist)])
        elif fmt == "json":
            doc = {
                "format": TRACE_FORMAT,
                "version": TRACE_VERSION,
                "backend": kernels.BACKEND,
                "config": None if cfg is None else cfg.to_dict(),
                "a_points": [{"index": i, "point": p.tolist()} for i, p in trace.a_points],
                "b_points": [{"index": i, "point": p.tolist()} for i, p in trace.b_points],
                "sweeps": [{"k": s.k, "length": s.length, "target": s.target,
                            "distance": s.distance} for s in trace.sweeps],
            }
            path.write_text(json.dumps(doc, indent=1) + "\n")
        else:
            raise InputError(f"unknown trace format {fmt!r}")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
    return path


def load_trace(path: str | Path) -> tuple[IterateTrace, RunConfig | None]:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != TRACE_FORMAT:
        raise InputError(f"{path} is not a {TRACE_FORMAT} document")
    trace = IterateTrace(
        a_points=[(e["index"], np.array(e["point"], dtype=np.float64)) for e in doc["a_points"]],
        b_points=[(e["index"], np.array(e["point"], dtype=np.float64)) for e in doc["b_points"]],
        sweeps=[SweepRecord(s["k"], s["length"], s["target"], s["distance"]) for s in doc["sweeps"]],
    )
    cfg = parse_config(doc["config"]) if doc.get("config") else None
    return trace, cfg


def replay(path: str | Path) -> tuple[bool, IterateTrace]:
    """Re-run the config stored in a JSON trace; report bitwise agreement."""
    stored, cfg = load_trace(path)
    if cfg is None:
        raise InputError(f"{path} carries no config to replay")
    fresh = run_trace(cfg)
    return stored.identical(fresh), fresh
