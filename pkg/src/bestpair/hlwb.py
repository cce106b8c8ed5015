"""HLWB sweeps: relaxed cyclic half-space projections pulled toward an anchor.

One sweep of length n starting at x with anchor a is

    q_0 = x,    q_m = lam_m * a + (1 - lam_m) * P_{h(m)}(q_{m-1}),  m = 1..n

where h(m) is the half-space at list position ``(m + offset) mod N``.  The
relaxation index restarts at 1 in every sweep.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InputError
from .geometry import Polyhedron, as_point, project_halfspace
from .schedule import LambdaSchedule, lam

HARMONIC = LambdaSchedule()


@dataclass(frozen=True)
class ControlSequence:
    """Cyclic control: step n uses list position ``(n + offset) % count``.

    With the default offset 0 the first step projects onto the second
    listed half-space; offset -1 gives "step n uses the n-th half-space".
    """

    count: int
    offset: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise InputError("control sequence needs a positive count")

    def position(self, n: int) -> int:
        return (n + self.offset) % self.count


@dataclass
class SweepResult:
    endpoint: np.ndarray
    inner_trace: list[np.ndarray] | None = None
    projections_used: list[int] | None = None


def _control_for(target: Polyhedron, ctrl: ControlSequence | int | None) -> ControlSequence:
    if ctrl is None:
        return ControlSequence(len(target))
    if isinstance(ctrl, int):
        return ControlSequence(len(target), ctrl)
    if ctrl.count != len(target):
        raise InputError(f"control count {ctrl.count} does not match {len(target)} half-spaces")
    return ctrl


def q_step(target: Polyhedron, anchor, current, n: int, ls: LambdaSchedule = HARMONIC,
           ctrl: ControlSequence | int | None = None) -> np.ndarray:
    """One relaxed projection step, the n-th of its sweep."""
    if n < 1:
        raise InputError("steps are numbered from 1")
    ctrl = _control_for(target, ctrl)
    anchor = as_point(anchor, target.dim)
    current = as_point(current, target.dim)
    lam_n = lam(ls, n)
    return lam_n * anchor + (1.0 - lam_n) * project_halfspace(target[ctrl.position(n)], current)


def sweep(target: Polyhedron, anchor, start, n: int, ls: LambdaSchedule = HARMONIC,
          ctrl: ControlSequence | int | None = None, record: bool = False) -> SweepResult:
    """Run ``n`` HLWB steps from ``start``; ``n = 0`` returns ``start``.

    Unrecorded sweeps go through the selected kernel backend.  Recorded
    sweeps step through :func:`q_step` in Python and keep every
    intermediate point; their endpoint can differ from the kernel's in the
    last few bits.
    """
    if n < 0:
        raise InputError("sweep length must be non-negative")
    ctrl = _control_for(target, ctrl)
    anchor = as_point(anchor, target.dim)
    start = as_point(start, target.dim)

    if record:
        trace = [start]
        used = []
        q = start
        for m in range(1, n + 1):
            q = q_step(target, anchor, q, m, ls, ctrl)
            trace.append(q)
            used.append(ctrl.position(m))
        return SweepResult(q, trace, used)

    if n == 0:
        return SweepResult(start)
    if ls.is_harmonic:
        end = kernels.sweep_harmonic(target.normals, target.offsets, target.live,
                                     anchor, start, n, ctrl.offset)
    else:
        end = kernels.sweep_relaxed(target.normals, target.offsets, target.live,
                                    anchor, start, ls.values_upto(n), ctrl.offset)
    return SweepResult(np.asarray(end))


def hlwb_project(target: Polyhedron, anchor, start=None, max_iters: int = 100_000,
                 ls: LambdaSchedule = HARMONIC,
                 ctrl: ControlSequence | int | None = None) -> tuple[np.ndarray, int]:
    """Approximate the projection of ``anchor`` onto ``target``.

    Returns the point after ``max_iters`` steps and the number of steps.
    ``start`` defaults to the anchor itself.
    """
    if max_iters < 1:
        raise InputError("max_iters must be at least 1")
    if start is None:
        start = anchor
    return sweep(target, anchor, start, max_iters, ls, ctrl).endpoint, max_iters
