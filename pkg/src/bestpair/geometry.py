"""Half-spaces, polyhedra and closed-form Euclidean projections.

Points are plain 1-D float64 numpy arrays.  Half-spaces keep the normal
exactly as supplied (no rescaling); projections divide by ``||c||**2`` at
call time.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, InvalidConstraintError

FEASIBILITY_TOL = 1e-9


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Convert ``x`` to a finite float64 vector, optionally checking its length."""
    arr = np.array(x, dtype=np.float64, copy=True).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InputError(f"point has non-finite coordinates: {arr.tolist()}")
    if dim is not None and arr.shape[0] != dim:
        raise InputError(f"expected a point of dimension {dim}, got {arr.shape[0]}")
    return arr


@dataclass(frozen=True)
class HalfSpace:
    """The set ``{x : <normal, x> <= offset}``.

    ``trivial=True`` marks the whole space (used to pad constraint lists);
    its normal is all zeros and projection onto it is the identity.
    """

    normal: tuple[float, ...]
    offset: float
    trivial: bool = False

    def __post_init__(self):
        normal = tuple(float(v) for v in self.normal)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))
        if not normal:
            raise InputError("half-space normal must have at least one coordinate")
        if not all(np.isfinite(normal)) or not np.isfinite(self.offset):
            raise InputError("half-space data must be finite")
        if self.trivial:
            if any(normal) or self.offset != 0.0:
                raise InputError("a trivial half-space has a zero normal and offset 0")
        elif not any(normal):
            raise InvalidConstraintError(
                "zero normal on a non-trivial half-space; use HalfSpace.whole_space"
            )

    @classmethod
    def whole_space(cls, dim: int) -> "HalfSpace":
        return cls((0.0,) * dim, 0.0, trivial=True)

    @property
    def dim(self) -> int:
        return len(self.normal)

    @cached_property
    def c(self) -> np.ndarray:
        arr = np.array(self.normal, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def norm_sq(self) -> float:
        return float(self.c @ self.c)

    def to_dict(self) -> dict:
        return {"normal": list(self.normal), "offset": self.offset}


@dataclass(frozen=True)
class Polyhedron:
    """Ordered intersection of half-spaces; the order fixes the cyclic control."""

    halfspaces: tuple[HalfSpace, ...]

    def __post_init__(self):
        hs = tuple(self.halfspaces)
        object.__setattr__(self, "halfspaces", hs)
        if not hs:
            raise InputError("a polyhedron needs at least one half-space")
        dims = {h.dim for h in hs}
        if len(dims) != 1:
            raise InputError(f"half-spaces disagree on dimension: {sorted(dims)}")

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[Sequence[float], float]]) -> "Polyhedron":
        return cls(tuple(HalfSpace(tuple(c), d) for c, d in rows))

    def __len__(self) -> int:
        return len(self.halfspaces)

    def __iter__(self):
        return iter(self.halfspaces)

    def __getitem__(self, i) -> HalfSpace:
        return self.halfspaces[i]

    @property
    def dim(self) -> int:
        return self.halfspaces[0].dim

    @cached_property
    def normals(self) -> np.ndarray:
        arr = np.array([h.normal for h in self.halfspaces], dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def offsets(self) -> np.ndarray:
        arr = np.array([h.offset for h in self.halfspaces], dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def live(self) -> np.ndarray:
        """1 for real constraints, 0 for whole-space padding."""
        arr = np.array([0 if h.trivial else 1 for h in self.halfspaces], dtype=np.uint8)
        arr.flags.writeable = False
        return arr

    def padded(self, count: int) -> "Polyhedron":
        """Append whole-space half-spaces until there are ``count`` members."""
        if count < len(self):
            raise InputError(f"cannot pad {len(self)} half-spaces down to {count}")
        extra = (HalfSpace.whole_space(self.dim),) * (count - len(self))
        return Polyhedron(self.halfspaces + extra)

    def to_list(self) -> list[dict]:
        return [h.to_dict() for h in self.halfspaces if not h.trivial]


def _check_dim(h: HalfSpace, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (h.dim,):
        raise InputError(f"point of shape {x.shape} does not match dimension {h.dim}")
    return x


def residual(h: HalfSpace, x) -> float:
    """Signed violation ``<c, x> - offset``; non-positive exactly when x is in h."""
    x = _check_dim(h, x)
    return float(h.c @ x) - h.offset


def project_halfspace(h: HalfSpace, x) -> np.ndarray:
    x = _check_dim(h, x)
    if h.trivial:
        return x.copy()
    r = float(h.c @ x) - h.offset
    if r <= 0.0:
        return x.copy()
    return x - (r / h.norm_sq) * h.c


def project_hyperplane(h: HalfSpace, x) -> np.ndarray:
    """Projection onto the bounding hyperplane ``<c, x> = offset``."""
    x = _check_dim(h, x)
    if h.trivial:
        raise InvalidConstraintError("the whole space has no bounding hyperplane")
    r = float(h.c @ x) - h.offset
    return x - (r / h.norm_sq) * h.c


def contains(p: Polyhedron, x, tol: float = FEASIBILITY_TOL) -> bool:
    if tol < 0:
        raise InputError("tolerance must be non-negative")
    return max_violation(p, x) <= tol


def max_violation(p: Polyhedron, x) -> float:
    """Largest residual over the members of ``p``, clipped below at zero."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (p.dim,):
        raise InputError(f"point of shape {x.shape} does not match dimension {p.dim}")
    r = p.normals @ x - p.offsets
    r[p.live == 0] = 0.0
    return max(0.0, float(r.max()))
