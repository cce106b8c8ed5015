"""Relaxation parameters and sweep lengths, with finite-horizon diagnostics.

The relaxation sequence is indexed from 1 (the first HLWB step consumes
``lambda_1``).  Sweep lengths are indexed from 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InputError

LAMBDA_KINDS = ("harmonic", "constant", "geometric", "table")
SWEEP_KINDS = ("geometric-floor", "linear", "table")

# past this many terms a non-closed-form log-product is refused
_MAX_DIRECT_TERMS = 50_000_000


@dataclass(frozen=True)
class LambdaSchedule:
    """A relaxation sequence lambda_n, n >= 1.

    kinds:
      harmonic   lambda_n = 1/(n+1)
      constant   lambda_n = value
      geometric  lambda_n = ratio**n
      table      lambda_n = values[n-1]; past the table ``tail`` decides:
                 "hold" repeats the last value, "harmonic" switches to 1/(n+1)
    """

    kind: str = "harmonic"
    value: float | None = None
    ratio: float | None = None
    values: tuple[float, ...] = ()
    tail: str = "hold"

    def __post_init__(self):
        if self.kind not in LAMBDA_KINDS:
            raise InputError(f"unknown lambda kind {self.kind!r}; expected one of {LAMBDA_KINDS}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.kind == "constant":
            if self.value is None or not 0.0 < self.value <= 1.0:
                raise InputError("constant lambda needs 0 < value <= 1")
        elif self.kind == "geometric":
            if self.ratio is None or not 0.0 < self.ratio < 1.0:
                raise InputError("geometric lambda needs 0 < ratio < 1")
        elif self.kind == "table":
            if not self.values:
                raise InputError("table lambda needs at least one value")
            if any(not 0.0 < v <= 1.0 for v in self.values):
                raise InputError("table lambda values must lie in (0, 1]")
            if self.tail not in ("hold", "harmonic"):
                raise InputError("table tail must be 'hold' or 'harmonic'")

    @property
    def is_harmonic(self) -> bool:
        return self.kind == "harmonic"

    def __call__(self, n: int) -> float:
        return lam(self, n)

    def values_upto(self, n: int) -> np.ndarray:
        """lambda_1 .. lambda_n as an array."""
        idx = np.arange(1, n + 1, dtype=np.float64)
        if self.kind == "harmonic":
            return 1.0 / (idx + 1.0)
        if self.kind == "constant":
            return np.full(n, float(self.value))
        if self.kind == "geometric":
            return np.power(float(self.ratio), idx)
        head = np.array(self.values[:n], dtype=np.float64)
        if n <= len(self.values):
            return head
        rest = idx[len(self.values):]
        if self.tail == "hold":
            tail = np.full(rest.shape, self.values[-1])
        else:
            tail = 1.0 / (rest + 1.0)
        return np.concatenate([head, tail])

    def survival(self, n0: int, n1: int) -> float:
        """Product of (1 - lambda_n) over n0 < n <= n1 (empty product is 1)."""
        if n1 <= n0:
            return 1.0
        if self.kind == "harmonic":
            return (n0 + 1) / (n1 + 1)
        if self.kind == "constant":
            return (1.0 - self.value) ** (n1 - n0)
        if self.kind == "geometric":
            return math.exp(_geometric_log_survival(self.ratio, n0, n1))
        L = len(self.values)
        logp = 0.0
        if n0 < L:
            head = np.array(self.values[n0:min(n1, L)])
            if np.any(head >= 1.0):
                return 0.0
            logp += float(np.sum(np.log1p(-head)))
        lo = max(n0, L)
        if n1 > lo:
            if self.tail == "harmonic":
                logp += math.log((lo + 1) / (n1 + 1))
            else:
                last = self.values[-1]
                if last >= 1.0:
                    return 0.0
                logp += (n1 - lo) * math.log1p(-last)
        return math.exp(logp)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "constant":
            out["value"] = self.value
        elif self.kind == "geometric":
            out["ratio"] = self.ratio
        elif self.kind == "table":
            out["values"] = list(self.values)
            out["tail"] = self.tail
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "LambdaSchedule":
        allowed = {"kind", "value", "ratio", "values", "tail"}
        _reject_unknown(data, allowed, "lambda")
        return cls(
            kind=data.get("kind", "harmonic"),
            value=data.get("value"),
            ratio=data.get("ratio"),
            values=tuple(data.get("values", ())),
            tail=data.get("tail", "hold"),
        )


def _geometric_log_survival(ratio: float, n0: int, n1: int) -> float:
    # terms vanish below 1e-18 long before n1 for any ratio < 1
    cutoff = n0 + int(math.ceil(math.log(1e-18) / math.log(ratio))) + 1
    hi = min(n1, cutoff)
    if hi - n0 > _MAX_DIRECT_TERMS:
        raise InputError("geometric ratio too close to 1 for direct evaluation")
    n = np.arange(n0 + 1, hi + 1, dtype=np.float64)
    return float(np.sum(np.log1p(-np.power(ratio, n))))


def _reject_unknown(data: dict, allowed: set, what: str) -> None:
    if not isinstance(data, dict):
        raise InputError(f"{what} description must be an object")
    extra = set(data) - allowed
    if extra:
        raise InputError(f"unknown {what} field(s): {sorted(extra)}")


def lam(s: LambdaSchedule, n: int) -> float:
    """lambda_n for n >= 1."""
    if n < 1:
        raise IndexError("relaxation parameters are indexed from n = 1")
    if s.kind == "harmonic":
        return 1.0 / (n + 1)
    if s.kind == "constant":
        return float(s.value)
    if s.kind == "geometric":
        return float(s.ratio) ** n
    if n <= len(s.values):
        return s.values[n - 1]
    if s.tail == "hold":
        return s.values[-1]
    return 1.0 / (n + 1)


@dataclass(frozen=True)
class SweepSchedule:
    """Sweep lengths n_k, k >= 0.

    kinds:
      geometric-floor  n_k = floor(base**k), evaluated exactly
      linear           n_k = max(1, slope*k + intercept)
      table            n_k = values[k], holding the last entry
    """

    kind: str = "geometric-floor"
    base: float = 1.1
    slope: int = 1
    intercept: int = 0
    values: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise InputError(f"unknown sweep kind {self.kind!r}; expected one of {SWEEP_KINDS}")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if self.kind == "geometric-floor" and not self.base >= 1.0:
            raise InputError("geometric-floor base must be >= 1")
        if self.kind == "linear" and self.slope < 0:
            raise InputError("linear sweep slope must be non-negative")
        if self.kind == "table":
            if not self.values or min(self.values) < 1:
                raise InputError("sweep table needs positive entries")
            if any(b < a for a, b in zip(self.values, self.values[1:])):
                raise InputError("sweep table must be non-decreasing")

    def __call__(self, k: int) -> int:
        return sweep_length(self, k)

    def to_dict(self) -> dict:
        if self.kind == "geometric-floor":
            return {"kind": self.kind, "base": self.base}
        if self.kind == "linear":
            return {"kind": self.kind, "slope": self.slope, "intercept": self.intercept}
        return {"kind": self.kind, "values": list(self.values)}

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSchedule":
        _reject_unknown(data, {"kind", "base", "slope", "intercept", "values"}, "sweeps")
        return cls(
            kind=data.get("kind", "geometric-floor"),
            base=float(data.get("base", 1.1)),
            slope=int(data.get("slope", 1)),
            intercept=int(data.get("intercept", 0)),
            values=tuple(data.get("values", ())),
        )


def sweep_length(s: SweepSchedule, k: int) -> int:
    if k < 0:
        raise IndexError("sweep lengths are indexed from k = 0")
    if s.kind == "geometric-floor":
        # the decimal string of the base is taken as exact, so 1.1 means 11/10
        base = Fraction(repr(s.base))
        return max(1, math.floor(base**k))
    if s.kind == "linear":
        return max(1, s.slope * k + s.intercept)
    return s.values[min(k, len(s.values) - 1)]


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""


@dataclass
class ScheduleReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {c.name: {"passed": c.passed, "measured": c.measured,
                         "threshold": c.threshold, "detail": c.detail}
                for c in self.checks}


def validate_lambda(
    s: LambdaSchedule,
    period: int,
    horizon: int,
    vanish_tol: float = 1e-2,
    growth_threshold: float = 5.0,
    flat_tol: float = 1e-3,
) -> ScheduleReport:
    """Finite-horizon surrogates of the three relaxation conditions.

    ``vanishing``  lambda_H < lambda_1 and lambda_H <= vanish_tol
    ``divergent``  sum_{n<=H} lambda_n > growth_threshold
    ``variation``  sum of |lambda_n - lambda_{n+period}| gains at most
                   flat_tol over the last decade (H/10, H]
    """
    if period < 1 or horizon < 10:
        raise InputError("need period >= 1 and horizon >= 10")
    lams = s.values_upto(horizon + period)
    first, last = float(lams[0]), float(lams[horizon - 1])
    partial = float(np.sum(lams[:horizon]))
    diffs = np.abs(lams[:horizon] - lams[period:horizon + period])
    csum = np.cumsum(diffs)
    gain = float(csum[-1] - csum[horizon // 10 - 1])

    report = ScheduleReport()
    report.checks.append(Check(
        "vanishing", last < first and last <= vanish_tol, last, vanish_tol,
        f"lambda_1={first:.6g}, lambda_H={last:.6g}"))
    report.checks.append(Check(
        "divergent", partial > growth_threshold, partial, growth_threshold,
        f"partial sum up to H={horizon}"))
    report.checks.append(Check(
        "variation", gain <= flat_tol, gain, flat_tol,
        f"total variation sum {float(csum[-1]):.6g}"))
    return report


def z_bound_profile(ls: LambdaSchedule, ss: SweepSchedule, k0_max: int, k_horizon: int) -> list[float]:
    """For each k0 <= k0_max: sum over k0 < k <= k_horizon of prod_{n_k0 < n <= n_k} (1 - lambda_n)."""
    if k_horizon <= k0_max:
        raise InputError("k_horizon must exceed k0_max")
    nk = [sweep_length(ss, k) for k in range(k_horizon + 1)]
    out = []
    for k0 in range(k0_max + 1):
        out.append(math.fsum(ls.survival(nk[k0], nk[k]) for k in range(k0 + 1, k_horizon + 1)))
    return out


def z_bound_estimate(ls: LambdaSchedule, ss: SweepSchedule, k0_max: int, k_horizon: int) -> float:
    """Finite-horizon estimate of the sup controlling accumulated sweep contraction."""
    return max(z_bound_profile(ls, ss, k0_max, k_horizon))
