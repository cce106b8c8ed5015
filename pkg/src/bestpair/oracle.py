"""Desk-scale ground truth for best approximation pairs.

``exact_project`` finds the projection onto a polyhedron by brute force:
every candidate active set gives the nearest point of an affine subspace,
and the nearest candidate that satisfies all constraints is the answer.
Only active sets with at most ``dim`` members are tried; some optimal
active set of that size with independent normals always exists.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import nnls

from .errors import CapacityError, InputError
from .geometry import Polyhedron, as_point, max_violation

log = logging.getLogger(__name__)

MAX_CONSTRAINTS = 20
CERT_TOL = 1e-8
PROJECT_TOL = 1e-12


class _Enumerator:
    """Precomputed pseudo-inverses for every candidate active set of one polyhedron."""

    def __init__(self, p: Polyhedron):
        keep = np.flatnonzero(p.live)
        if len(keep) > MAX_CONSTRAINTS:
            raise CapacityError(
                f"exact projection enumerates active sets; {len(keep)} constraints "
                f"exceeds the limit of {MAX_CONSTRAINTS}")
        self.C = p.normals[keep]
        self.delta = p.offsets[keep]
        self.index = keep
        self.scale = np.linalg.norm(self.C, axis=1)
        d = p.dim
        self.groups = []
        for k in range(1, min(len(keep), d) + 1):
            subsets = np.array(list(itertools.combinations(range(len(keep)), k)), dtype=np.intp)
            pinvs = np.linalg.pinv(self.C[subsets])  # (nS, d, k)
            self.groups.append((subsets, pinvs))

    def project(self, x: np.ndarray, tol: float) -> np.ndarray:
        r = self.C @ x - self.delta
        if np.all(r <= 0.0):
            return x.copy()
        # badly conditioned active sets can miss a tight slack; loosen stepwise
        for t in (tol, tol * 1e3, tol * 1e6):
            best = self._nearest(x, r, t)
            if best is not None:
                return best
        raise InputError("no feasible candidate found; is the polyhedron empty?")

    def _nearest(self, x: np.ndarray, r: np.ndarray, tol: float) -> np.ndarray | None:
        C, delta = self.C, self.delta
        slack = tol * np.maximum(1.0, self.scale * max(1.0, float(np.abs(x).max())))
        best, best_d = None, np.inf
        for subsets, pinvs in self.groups:
            rs = r[subsets]  # (nS, k)
            cand = x - np.einsum("sdk,sk->sd", pinvs, rs)
            resid = cand @ C.T - delta  # (nS, M)
            on_face = np.abs(np.take_along_axis(resid, subsets, axis=1)) <= slack[subsets]
            ok = np.all(on_face, axis=1) & np.all(resid <= slack, axis=1)
            if not ok.any():
                continue
            cand = cand[ok]
            dist = np.linalg.norm(cand - x, axis=1)
            i = _argmin_lex(dist, cand)
            if dist[i] < best_d - 1e-12 * max(1.0, best_d) or (
                    abs(dist[i] - best_d) <= 1e-12 * max(1.0, best_d) and _lex_less(cand[i], best)):
                best, best_d = cand[i], dist[i]
        return None if best is None else best.copy()


def _lex_less(u, v) -> bool:
    if v is None:
        return True
    for a, b in zip(u, v):
        if a != b:
            return a < b
    return False


def _argmin_lex(dist: np.ndarray, cand: np.ndarray) -> int:
    lo = dist.min()
    ties = np.flatnonzero(dist <= lo + 1e-12 * max(1.0, lo))
    if len(ties) == 1:
        return int(ties[0])
    order = np.lexsort(cand[ties].T[::-1])
    return int(ties[order[0]])


@lru_cache(maxsize=64)
def _enumerator(p: Polyhedron) -> _Enumerator:
    return _Enumerator(p)


def exact_project(p: Polyhedron, x, tol: float = PROJECT_TOL) -> np.ndarray:
    """Euclidean projection of ``x`` onto ``p`` (assumed non-empty).

    Candidates may violate a constraint by ``tol`` relative to the data
    scale; if none qualifies the slack is widened by 1e3 twice.
    """
    x = as_point(x, p.dim)
    return _enumerator(p).project(x, tol)


def active_constraints(p: Polyhedron, x, tol: float = 1e-7) -> list[int]:
    x = np.asarray(x, dtype=np.float64)
    r = p.normals @ x - p.offsets
    scale = np.linalg.norm(p.normals, axis=1) * max(1.0, float(np.abs(x).max()))
    return [i for i in range(len(p)) if p.live[i] and abs(r[i]) <= tol * max(scale[i], 1.0)]


def normal_cone_multipliers(p: Polyhedron, x, v) -> tuple[dict[int, float], float]:
    """Non-negative multipliers expressing ``v`` in the normal cone of ``p`` at ``x``.

    Returns the multipliers by constraint index and the residual norm of the
    non-negative least-squares fit (0 means v is in the cone).
    """
    v = np.asarray(v, dtype=np.float64)
    act = active_constraints(p, x)
    if not act:
        return {}, float(np.linalg.norm(v))
    mu, res = nnls(p.normals[act].T, v)
    return {i: float(m) for i, m in zip(act, mu)}, float(res)


@dataclass
class BapCertificate:
    a_star: np.ndarray
    b_star: np.ndarray
    displacement: np.ndarray
    distance: float
    multipliers_a: dict[int, float]
    multipliers_b: dict[int, float]
    cone_residual: float
    residual: float
    certified: bool
    iterations: int = 0
    converged: bool = True
    history: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "a_star": self.a_star.tolist(),
            "b_star": self.b_star.tolist(),
            "displacement": self.displacement.tolist(),
            "distance": self.distance,
            "multipliers_a": {str(k): v for k, v in self.multipliers_a.items()},
            "multipliers_b": {str(k): v for k, v in self.multipliers_b.items()},
            "cone_residual": self.cone_residual,
            "residual": self.residual,
            "certified": self.certified,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def certify_pair(A: Polyhedron, B: Polyhedron, a, b, tol: float = CERT_TOL) -> float:
    """Fixed-point defect of the pair; at most ``tol`` certifies a best pair.

    The defect is the largest of |a - P_A(b)|, |b - P_B(a)| and the
    constraint violations of a in A and of b in B.
    """
    a = as_point(a, A.dim)
    b = as_point(b, B.dim)
    return max(
        float(np.linalg.norm(a - exact_project(A, b))),
        float(np.linalg.norm(b - exact_project(B, a))),
        max_violation(A, a),
        max_violation(B, b),
    )


def build_certificate(A: Polyhedron, B: Polyhedron, a, b, tol: float = CERT_TOL,
                      iterations: int = 0, converged: bool = True,
                      history: list[float] | None = None) -> BapCertificate:
    a = as_point(a, A.dim)
    b = as_point(b, B.dim)
    v = a - b
    mu_a, res_a = normal_cone_multipliers(A, a, b - a)
    mu_b, res_b = normal_cone_multipliers(B, b, a - b)
    cone_res = max(res_a, res_b)
    resid = certify_pair(A, B, a, b, tol)
    return BapCertificate(
        a_star=a, b_star=b, displacement=v, distance=float(np.linalg.norm(v)),
        multipliers_a=mu_a, multipliers_b=mu_b, cone_residual=cone_res,
        residual=resid,
        certified=converged and resid <= tol and cone_res <= tol * max(1.0, float(np.linalg.norm(v))),
        iterations=iterations, converged=converged, history=list(history or []),
    )


def cheney_goldstein(A: Polyhedron, B: Polyhedron, start, max_iters: int = 100_000,
                     tol: float = 1e-10, cert_tol: float = CERT_TOL) -> BapCertificate:
    """Alternating exact projections a <- P_A(P_B(a)) until the step is below ``tol``.

    If ``max_iters`` runs out first the best point so far is returned with
    ``converged=False`` and ``certified=False``.
    """
    if A.dim != B.dim:
        raise InputError("A and B differ in dimension")
    a = exact_project(A, as_point(start, A.dim))
    history = []
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        b = exact_project(B, a)
        history.append(float(np.linalg.norm(a - b)))
        a_next = exact_project(A, b)
        step = float(np.linalg.norm(a_next - a))
        a = a_next
        if step < tol:
            converged = True
            break
    if not converged:
        log.warning("Cheney-Goldstein stopped after %d iterations without converging", it)
    b = exact_project(B, a)
    return build_certificate(A, B, a, b, cert_tol, it, converged, history)
