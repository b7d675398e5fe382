"""Uzawa iteration with a two-parameter relaxed pressure update.

One sweep, starting from ``u = 0, p = 0``::

    A u_new = f - B^T p                                  (exact step)
    u_new   = u + omega (f - A u - B^T p)                (Richardson step)
    p_new   = P0[p + beta B (u_new - u) + alpha2 B u_new]

with ``B = -div`` and ``P0`` the zero-mean projection. ``beta = 0`` is plain
Uzawa. The loop stops once both increments fall below ``tol`` in the
mesh-weighted L2 norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import InnerSolverError, InvalidArgumentError
from .numcore import Operator, dot, norm_h, project_zero_mean
from .saddle import SaddleProblem, schur_operator

DIVERGENCE_THRESHOLD = 1e12


class Step1(str, Enum):
    EXACT = "exact"
    RICHARDSON = "richardson"


@dataclass(frozen=True)
class IterationConfig:
    alpha2: float
    beta: float = 0.0
    tol: float = 1e-6
    max_outer: int = 500
    step1: Step1 = Step1.EXACT
    richardson_omega: float | None = None  # None: 1 / lambda_max(A)
    inner_tol: float = 1e-12
    inner_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "step1", Step1(self.step1))
        if not self.alpha2 > 0:
            raise InvalidArgumentError(f"alpha2 must be positive, got {self.alpha2}")
        if not self.beta >= 0:
            raise InvalidArgumentError(f"beta must be nonnegative, got {self.beta}")
        if not self.tol > 0:
            raise InvalidArgumentError(f"tol must be positive, got {self.tol}")
        if self.max_outer < 1:
            raise InvalidArgumentError("max_outer must be at least 1")
        if self.richardson_omega is not None and not self.richardson_omega > 0:
            raise InvalidArgumentError("richardson_omega must be positive")


@dataclass
class IterationRecord:
    u_inc: float
    p_inc: float
    div_norm: float
    div_inc: float
    energy: float | None = None


@dataclass
class IterationHistory:
    records: list[IterationRecord] = field(default_factory=list)
    converged: bool = False
    diverged: bool = False
    u: np.ndarray | None = None
    p: np.ndarray | None = None
    omega: float | None = None

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def energies(self) -> list[float]:
        return [r.energy for r in self.records if r.energy is not None]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def step1_exact(prob: SaddleProblem, p_n, u_guess=None) -> np.ndarray:
    """Velocity solve ``A u = f - B^T p_n``; ``u_guess`` only warm-starts CG."""
    return prob.solve_A(prob.f - prob.apply_Bt(p_n), u_guess)


def step1_richardson(prob: SaddleProblem, u_n, p_n, omega: float) -> np.ndarray:
    if not omega > 0:
        raise InvalidArgumentError(f"Richardson step needs omega > 0, got {omega}")
    return u_n + omega * (prob.f - prob.apply_A(u_n) - prob.apply_Bt(p_n))


def step2_pressure_update(prob: SaddleProblem, p_n, u_np1, u_n, alpha2: float, beta: float) -> np.ndarray:
    p = p_n
    if beta:
        p = p + beta * prob.apply_B(u_np1 - u_n)
    return project_zero_mean(p + alpha2 * prob.apply_B(u_np1))


def check_sufficient_condition(alpha2: float, beta: float, M: float) -> bool:
    """Convergence guarantee ``beta >= 0`` and ``beta + alpha2 < 1/M``."""
    if not M > 0:
        raise InvalidArgumentError(f"M must be positive, got {M}")
    return bool(beta >= 0 and beta + alpha2 < 1.0 / M)


def energy_functional(e_n, e_nm1, schur: Operator, alpha2: float, beta: float) -> float:
    """Energy ``|e_n|^2 + beta|e_{n-1}|_S^2 + alpha2|e_n|_S^2 + {|d|^2 - (beta+alpha2)|d|_S^2}``
    with ``d = e_n - e_{n-1}`` and ``|q|_S^2 = (S q, q)``."""
    e_n = np.asarray(e_n, dtype=np.float64)
    e_nm1 = np.asarray(e_nm1, dtype=np.float64)
    s_n = schur(e_n)
    s_m = schur(e_nm1)
    d = e_n - e_nm1
    s_d = s_n - s_m
    return (
        dot(e_n, e_n)
        + beta * dot(s_m, e_nm1)
        + alpha2 * dot(s_n, e_n)
        + (dot(d, d) - (beta + alpha2) * dot(s_d, d))
    )


def dissipation(e_np1, e_n, e_nm1, schur: Operator, alpha2: float, beta: float) -> float:
    """Per-step dissipation; ``E(n+1) - E(n) + P(n) = 0`` along exact iterates."""
    d = e_n - e_nm1
    w = e_np1 - e_nm1
    return (
        dot(d, d)
        - (beta + alpha2) * dot(schur(d), d)
        + 2.0 * alpha2 * dot(schur(e_n), e_n)
        + beta * dot(schur(w), w)
    )


def estimate_lambda_max_A(prob: SaddleProblem, steps: int = 50) -> float:
    """Largest eigenvalue of ``A`` from a fixed number of power steps."""
    x = np.cos(np.arange(prob.n_u) * 0.7) + 1.5
    x /= math.sqrt(dot(x, x))
    lam = 0.0
    for _ in range(steps):
        y = prob.apply_A(x)
        lam = dot(x, y)
        x = y / math.sqrt(dot(y, y))
    # Rayleigh quotients approach from below; a small margin keeps omega stable
    return lam * 1.05


def run(
    prob: SaddleProblem,
    cfg: IterationConfig,
    track_energy: bool = False,
    exact_p=None,
    schur: Operator | None = None,
    callback: Callable[[int, np.ndarray, np.ndarray], None] | None = None,
) -> IterationHistory:
    """Iterate from ``u = 0, p = 0`` until the increment test or ``max_outer``.

    With ``track_energy`` each record from the first on carries the energy of
    the pressure error ``exact_p - p``. Increment norms above 1e12 stop the
    run with ``diverged`` set. An inner-solver failure re-raises with the
    partial history attached.
    """
    if track_energy and exact_p is None:
        raise InvalidArgumentError("track_energy needs exact_p")
    prob = prob.replace(
        inner_tol=cfg.inner_tol,
        inner_max=cfg.inner_max if cfg.inner_max is not None else prob.inner_max,
    )
    if track_energy:
        exact_p = project_zero_mean(exact_p)
        schur = schur or schur_operator(prob)

    omega = None
    if cfg.step1 is Step1.RICHARDSON:
        omega = cfg.richardson_omega or 1.0 / estimate_lambda_max_A(prob)

    hist = IterationHistory(omega=omega)
    u = np.zeros(prob.n_u)
    p = np.zeros(prob.n_p)
    for n in range(cfg.max_outer):
        try:
            if cfg.step1 is Step1.EXACT:
                u_new = step1_exact(prob, p, u)
            else:
                u_new = step1_richardson(prob, u, p, omega)
        except InnerSolverError as exc:
            hist.u, hist.p = u, p
            exc.history = hist
            raise
        p_new = step2_pressure_update(prob, p, u_new, u, cfg.alpha2, cfg.beta)

        rec = IterationRecord(
            u_inc=norm_h(u_new - u, prob.h),
            p_inc=norm_h(p_new - p, prob.h),
            div_norm=norm_h(prob.apply_B(u_new), prob.h),
            div_inc=norm_h(prob.apply_B(u_new - u), prob.h),
        )
        if track_energy:
            rec.energy = energy_functional(exact_p - p_new, exact_p - p, schur, cfg.alpha2, cfg.beta)
        hist.records.append(rec)
        u, p = u_new, p_new
        if callback is not None:
            callback(n + 1, u, p)

        worst = max(rec.u_inc, rec.p_inc)
        if not math.isfinite(worst) or worst > DIVERGENCE_THRESHOLD:
            hist.diverged = True
            break
        if worst <= cfg.tol:
            hist.converged = True
            break

    hist.u, hist.p = u, p
    return hist
