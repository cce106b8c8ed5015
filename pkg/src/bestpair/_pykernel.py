"""Pure-Python sweep kernels.

Same signatures as the compiled ``_kernel`` module.  Both functions run
the literal recursion ``x <- lam*anchor + (1 - lam)*P(x)`` one step at a
time on Python floats.
"""
import numpy as np


def _prepare(normals, offsets, live):
    rows = []
    for c, d, ok in zip(normals.tolist(), offsets.tolist(), live.tolist()):
        if ok:
            q = sum(v * v for v in c)
            rows.append((c, d, q))
        else:
            rows.append(None)
    return rows


def _run(rows, anchor, x, lam_of, n, shift):
    N = len(rows)
    d = len(x)
    rng = range(d)
    for m in range(1, n + 1):
        row = rows[(m + shift) % N]
        if row is not None:
            c, off, q = row
            r = sum(c[i] * x[i] for i in rng) - off
            if r > 0.0:
                t = r / q
                x = [x[i] - t * c[i] for i in rng]
        lam = lam_of(m)
        x = [lam * anchor[i] + (1.0 - lam) * x[i] for i in rng]
    return x


def sweep_harmonic(normals, offsets, live, anchor, start, n, shift):
    rows = _prepare(normals, offsets, live)
    x = _run(rows, anchor.tolist(), start.tolist(), lambda m: 1.0 / (m + 1), int(n), int(shift))
    return np.array(x, dtype=np.float64)


def sweep_relaxed(normals, offsets, live, anchor, start, lambdas, shift):
    rows = _prepare(normals, offsets, live)
    lams = lambdas.tolist()
    x = _run(rows, anchor.tolist(), start.tolist(), lambda m: lams[m - 1], len(lams), int(shift))
    return np.array(x, dtype=np.float64)
