"""Abstract saddle-point problems and their pressure Schur complement
``S = B A^{-1} B^T``, with seeded power-iteration estimates of its extreme
Rayleigh quotients."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InnerSolverError, InvalidArgumentError
from .numcore import Operator, PrngState, as_vec, cg_solve, dot, prng_vector, project_zero_mean


@dataclass(frozen=True)
class SaddleProblem:
    """Block system ``[[A, B^T], [B, 0]] (u, p) = (f, 0)`` given by its actions.

    ``A`` must be SPD and ``apply_Bt`` the adjoint of ``apply_B``. Pressures
    live in the zero-mean subspace; every Schur application projects.
    """

    apply_A: Operator
    apply_B: Operator
    apply_Bt: Operator
    f: np.ndarray
    n_u: int
    n_p: int
    h: float = 1.0
    inner_tol: float = 1e-12
    inner_max: int = 10_000

    def __post_init__(self):
        f = as_vec(self.f)
        if f.size != self.n_u:
            raise InvalidArgumentError(f"f has length {f.size}, expected n_u={self.n_u}")
        object.__setattr__(self, "f", f)
        if not self.h > 0 or not self.inner_tol > 0:
            raise InvalidArgumentError("h and inner_tol must be positive")

    def replace(self, **changes) -> "SaddleProblem":
        return dataclasses.replace(self, **changes)

    def solve_A(self, rhs, x0=None) -> np.ndarray:
        """``A^{-1} rhs`` by CG at the problem's inner tolerance."""
        res = cg_solve(self.apply_A, rhs, x0, self.inner_tol, self.inner_max)
        if not res.converged:
            raise InnerSolverError(
                f"inner CG stalled at relative residual {res.rel_residual:.3e} after {res.iters} iterations",
                residual=res.rel_residual,
                iterations=res.iters,
            )
        return res.x


def schur_apply(prob: SaddleProblem, q) -> np.ndarray:
    q = project_zero_mean(as_vec(q))
    if q.size != prob.n_p:
        raise InvalidArgumentError(f"pressure has length {q.size}, expected {prob.n_p}")
    w = prob.solve_A(prob.apply_Bt(q))
    return project_zero_mean(prob.apply_B(w))


def schur_operator(prob: SaddleProblem) -> Operator:
    return lambda q: schur_apply(prob, q)


def rayleigh(prob: SaddleProblem, q) -> float:
    """``(S q, q) / (q, q)``; the mesh weight cancels in the ratio."""
    q = project_zero_mean(as_vec(q))
    qq = dot(q, q)
    if qq == 0.0:
        raise InvalidArgumentError("Rayleigh quotient of a zero (or constant) vector")
    return dot(schur_apply(prob, q), q) / qq


class Which(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class SpectralEstimate:
    value: float
    which: Which
    iterations: int
    residual: float
    converged: bool
    vector: np.ndarray | None = dataclasses.field(default=None, repr=False, compare=False)


def _power_iteration(apply, q, value_of, tol, max_iter):
    # value_of maps (q, Sq) to the Schur eigenvalue estimate and its residual
    q = q / np.sqrt(dot(q, q))
    value, resid = np.nan, np.inf
    for k in range(1, max_iter + 1):
        w = apply(q)
        value, resid = value_of(q, w)
        if value > 0 and resid <= tol * value:
            return value, resid, k, True, q
        nw = np.sqrt(dot(w, w))
        if nw == 0.0:
            return value, resid, k, False, q
        q = project_zero_mean(w / nw)
        q = q / np.sqrt(dot(q, q))
    return value, resid, max_iter, False, q


def _start_vector(n: int, seed: int) -> np.ndarray:
    vals, _ = prng_vector(PrngState(seed), n)
    q = project_zero_mean(vals - 0.5)
    if dot(q, q) == 0.0:
        q = project_zero_mean(np.arange(n, dtype=np.float64))
    return q


def estimate_extreme_eigen(
    prob: SaddleProblem,
    which: Which | str = Which.MAX,
    tol: float = 1e-6,
    max_iter: int = 2000,
    seed: int = 1,
    M_est: float | None = None,
) -> SpectralEstimate:
    """Power iteration for the largest (``max``) or smallest (``min``) Schur
    eigenvalue on the zero-mean subspace.

    ``min`` runs power iteration on ``s I - S`` with ``s = 1.01 M``; ``M`` is
    estimated first unless supplied. Convergence means the eigen-residual
    ``||S q - value q|| / ||q||`` is at most ``tol * value``.
    """
    which = Which(which)
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    q0 = _start_vector(prob.n_p, seed)

    def rq(q, sq):
        value = dot(sq, q) / dot(q, q)
        r = sq - value * q
        return value, float(np.sqrt(dot(r, r) / dot(q, q)))

    if which is Which.MAX:
        value, resid, k, ok, q = _power_iteration(schur_operator(prob), q0, rq, tol, max_iter)
        return SpectralEstimate(value, which, k, resid, ok, q)

    if M_est is None:
        top = estimate_extreme_eigen(prob, Which.MAX, tol, max_iter, seed)
        M_est = top.value
    shift = 1.01 * M_est

    cache = {}

    def shifted(q):
        sq = schur_apply(prob, q)
        cache["sq"] = sq
        return project_zero_mean(shift * q - sq)

    def rq_min(q, _):
        return rq(q, cache["sq"])

    value, resid, k, ok, q = _power_iteration(shifted, q0, rq_min, tol, max_iter)
    return SpectralEstimate(value, which, k, resid, ok, q)
