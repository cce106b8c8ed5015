"""Compare the compiled and pure-Python sweep kernels.

    python3 benchmarks/bench_kernels.py [--steps N] [--sweeps K] [--repeat R]

Reports the best wall time of R repeats per case and the speed-up, and
checks that both backends agree to within 1e-9 relative.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from bestpair import kernels
from bestpair.config import preset
from bestpair.schedule import LambdaSchedule


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(steps, sweeps):
    cfg = preset("exp1")
    B = cfg.B
    anchor = np.array(cfg.start)
    lams = LambdaSchedule(kind="constant", value=0.01).values_upto(steps)

    def harmonic(mod):
        return lambda: np.asarray(mod.sweep_harmonic(B.normals, B.offsets, B.live,
                                                     anchor, anchor, steps, 0))

    def relaxed(mod):
        return lambda: np.asarray(mod.sweep_relaxed(B.normals, B.offsets, B.live,
                                                    anchor, anchor, lams, 0))

    def full_run(mod):
        def go():
            saved = kernels.sweep_harmonic, kernels.sweep_relaxed
            kernels.sweep_harmonic, kernels.sweep_relaxed = mod.sweep_harmonic, mod.sweep_relaxed
            try:
                from bestpair.harness import run_trace
                tr = run_trace(cfg.with_sweeps(sweeps))
            finally:
                kernels.sweep_harmonic, kernels.sweep_relaxed = saved
            return tr.a_array()[-1]
        return go

    return [(f"harmonic sweep, n={steps}", harmonic),
            (f"relaxed sweep (constant lambda), n={steps}", relaxed),
            (f"exp1 run, {sweeps} sweeps", full_run)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=100_000)
    ap.add_argument("--sweeps", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    names = kernels.available()
    if "compiled" not in names:
        print("compiled kernel not built; only the Python fallback is available")
    mods = {n: kernels.load(n) for n in names}
    print(f"{'case':44s} " + " ".join(f"{n:>12s}" for n in names) + "   speed-up")
    ok = True
    for label, make in cases(args.steps, args.sweeps):
        times, outs = {}, {}
        for n, mod in mods.items():
            times[n], outs[n] = best_of(make(mod), args.repeat)
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:44s} " + " ".join(f"{times[n]:11.4f}s" for n in names) + f"   {speed:8.1f}x")
        if "compiled" in outs:
            ref = outs["python"]
            if not np.allclose(outs["compiled"], ref, rtol=1e-9, atol=1e-9):
                print(f"  MISMATCH: compiled={outs['compiled']} python={ref}")
                ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
