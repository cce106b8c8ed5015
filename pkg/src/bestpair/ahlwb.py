"""Alternating HLWB driver.

Sweep k (k = 0, 1, ...) has length n_k.  Even sweeps move toward B,
anchored at the latest a; odd sweeps move toward A, anchored at the latest
b.  The auxiliary point each sweep starts from is chosen by the strategy:

    fixed-anchor   every sweep starts at a_0
    warm-start     sweep 0 starts at a_0, later B-sweeps start at the
                   previous b, A-sweeps start at the latest a
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, StateError
from .geometry import Polyhedron, as_point
from .hlwb import HARMONIC, ControlSequence, sweep
from .schedule import LambdaSchedule, SweepSchedule, sweep_length


class AuxStrategy(str, enum.Enum):
    FIXED_ANCHOR = "fixed-anchor"
    WARM_START = "warm-start"


@dataclass
class SweepRecord:
    k: int
    length: int
    target: str
    distance: float


@dataclass
class IterateTrace:
    """Sweep-boundary iterates.

    ``a_points`` holds ``(index, point)`` pairs with index 0, 2, 4, ...
    (a_0 first); ``b_points`` holds indices 1, 3, 5, ...  The index of a
    produced point is the number of sweeps completed when it appeared.
    """

    a_points: list[tuple[int, np.ndarray]] = field(default_factory=list)
    b_points: list[tuple[int, np.ndarray]] = field(default_factory=list)
    sweeps: list[SweepRecord] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.a_points[0][1])

    @property
    def num_sweeps(self) -> int:
        return len(self.sweeps)

    def a_array(self) -> np.ndarray:
        return np.array([p for _, p in self.a_points])

    def b_array(self) -> np.ndarray:
        return np.array([p for _, p in self.b_points])

    def identical(self, other: "IterateTrace") -> bool:
        """Bitwise equality of every recorded point and sweep record."""
        def same(xs, ys):
            return len(xs) == len(ys) and all(
                i == j and np.array_equal(p, q) for (i, p), (j, q) in zip(xs, ys))
        return (same(self.a_points, other.a_points)
                and same(self.b_points, other.b_points)
                and self.sweeps == other.sweeps)


def equalize(A: Polyhedron, B: Polyhedron) -> tuple[Polyhedron, Polyhedron]:
    """Pad the shorter constraint list with whole-space half-spaces."""
    if A.dim != B.dim:
        raise InputError(f"A is {A.dim}-dimensional but B is {B.dim}-dimensional")
    n = max(len(A), len(B))
    return A.padded(n), B.padded(n)


def _ctrl(ctrl, count: int) -> ControlSequence:
    if ctrl is None:
        return ControlSequence(count)
    if isinstance(ctrl, int):
        return ControlSequence(count, ctrl)
    return ControlSequence(count, ctrl.offset)


def run(A: Polyhedron, B: Polyhedron, a0, ls: LambdaSchedule = HARMONIC,
        ss: SweepSchedule = SweepSchedule(), aux: AuxStrategy | str = AuxStrategy.FIXED_ANCHOR,
        ctrlA: ControlSequence | int | None = None, ctrlB: ControlSequence | int | None = None,
        num_sweeps: int = 50, stop_tol: float | None = None) -> IterateTrace:
    """Run ``num_sweeps`` alternating sweeps starting from ``a0``.

    With ``stop_tol`` set, the run also ends once the pair distance changes
    by less than ``stop_tol`` across a B-sweep/A-sweep round.
    """
    if num_sweeps < 1:
        raise InputError("num_sweeps must be at least 1")
    aux = AuxStrategy(aux)
    A, B = equalize(A, B)
    ca, cb = _ctrl(ctrlA, len(A)), _ctrl(ctrlB, len(B))
    a0 = as_point(a0, A.dim)

    trace = IterateTrace(a_points=[(0, a0)])
    a, b = a0, None
    for k in range(num_sweeps):
        n_k = sweep_length(ss, k)
        if k % 2 == 0:
            start = a0 if (aux is AuxStrategy.FIXED_ANCHOR or b is None) else b
            b = sweep(B, a, start, n_k, ls, cb).endpoint
            trace.b_points.append((k + 1, b))
            target = "B"
        else:
            start = a0 if aux is AuxStrategy.FIXED_ANCHOR else a
            a = sweep(A, b, start, n_k, ls, ca).endpoint
            trace.a_points.append((k + 1, a))
            target = "A"
        dist = float(np.linalg.norm(a - b))
        trace.sweeps.append(SweepRecord(k, n_k, target, dist))
        if stop_tol is not None and k >= 2 and k % 2 == 1:
            if abs(dist - trace.sweeps[k - 2].distance) < stop_tol:
                break
    return trace


def pair_estimate(trace: IterateTrace) -> tuple[np.ndarray, np.ndarray, float]:
    """Latest (a, b) and their distance.  The points need not lie in A, B."""
    if not trace.a_points or not trace.b_points:
        raise StateError("trace has no completed B-sweep yet")
    a = trace.a_points[-1][1]
    b = trace.b_points[-1][1]
    return a, b, float(np.linalg.norm(a - b))
