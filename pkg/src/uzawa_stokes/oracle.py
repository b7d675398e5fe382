"""Dense brute-force references for desk-scale problems.

Everything here densifies by applying operators to unit vectors and then
works with its own Gaussian elimination and Jacobi eigensolver, so it shares
no solver code with the iterative path it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ProblemTooLargeError, SingularSystemError
from .numcore import project_zero_mean
from .saddle import SaddleProblem, schur_apply

MAX_SCHUR_DIM = 400
MAX_DIRECT_DIM = 2000


@dataclass(frozen=True)
class DenseSchur:
    matrix: np.ndarray
    asymmetry: float


def densify(apply, n_in: int) -> np.ndarray:
    cols = []
    for j in range(n_in):
        e = np.zeros(n_in)
        e[j] = 1.0
        cols.append(np.asarray(apply(e), dtype=np.float64))
    return np.column_stack(cols)


def assemble_dense_schur(prob: SaddleProblem, inner_tol: float = 1e-13) -> DenseSchur:
    """Column-by-column Schur matrix on the zero-mean subspace, symmetrized."""
    if prob.n_p > MAX_SCHUR_DIM:
        raise ProblemTooLargeError(f"n_p={prob.n_p} exceeds the dense cap {MAX_SCHUR_DIM}")
    tight = prob.replace(inner_tol=inner_tol)
    n = prob.n_p
    S = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        S[:, j] = schur_apply(tight, project_zero_mean(e))
    asym = float(np.max(np.abs(S - S.T)))
    return DenseSchur(0.5 * (S + S.T), asym)


def jacobi_eigh(S, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations; returns ascending eigenvalues and eigenvectors (columns)."""
    a = np.array(S, dtype=np.float64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise InvalidArgumentError("matrix must be square")
    scale = float(np.linalg.norm(a))
    if scale > 0 and float(np.max(np.abs(a - a.T))) > 1e-8 * scale:
        raise InvalidArgumentError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a[offdiag]))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff  # theta would overflow; small-angle limit
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def dense_sym_eigs(S) -> np.ndarray:
    return jacobi_eigh(S)[0]


def zero_mean_spectrum(S) -> np.ndarray:
    """Eigenvalues of a projected Schur matrix with the constant mode removed."""
    w, V = jacobi_eigh(S)
    n = V.shape[0]
    const = np.abs(V.sum(axis=0)) / math.sqrt(n)
    drop = int(np.argmax(const))
    return np.delete(w, drop)


def companion_spectral_radius(eigs, alpha2: float, beta: float) -> float:
    """Worst spectral radius of the per-eigenvalue pressure-error recursion
    ``e_next = (1 - (beta + alpha2) lam) e + beta lam e_prev``.

    For each ``lam`` the radius is the largest root modulus of
    ``z^2 - (1 - (beta + alpha2) lam) z - beta lam``. Below 1 the exact
    iteration converges; above 1 it diverges.
    """
    lams = np.asarray(eigs, dtype=np.float64).ravel()
    if lams.size == 0 or np.any(lams <= 0):
        raise InvalidArgumentError("companion analysis needs positive eigenvalues")
    rho = 0.0
    for lam in lams:
        b = 1.0 - (beta + alpha2) * lam
        c = beta * lam
        disc = b * b + 4.0 * c
        if disc >= 0:
            r = math.sqrt(disc)
            mod = max(abs(0.5 * (b + r)), abs(0.5 * (b - r)))
        else:
            # complex pair: |z|^2 = product of roots = -c
            mod = math.sqrt(-c)
        rho = max(rho, mod)
    return rho


def gauss_solve(K, rhs, pivot_tol: float = 1e-13) -> np.ndarray:
    """Gaussian elimination with partial pivoting."""
    a = np.array(K, dtype=np.float64)
    b = np.array(rhs, dtype=np.float64)
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) or 1.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) <= pivot_tol * scale:
            raise SingularSystemError(f"pivot {a[piv, k]:.3e} below tolerance at column {k}")
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            b[[k, piv]] = b[[piv, k]]
        m = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(m, a[k, k:])
        b[k + 1 :] -= m * b[k]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x


def direct_solve(prob: SaddleProblem) -> tuple[np.ndarray, np.ndarray]:
    """Dense solve of the bordered system ``[[A, B^T, 0], [B, 0, 1], [0, 1^T, 0]]``.

    The last row pins the pressure mean to zero; its multiplier vanishes for
    compatible data.
    """
    nu, npr = prob.n_u, prob.n_p
    total = nu + npr + 1
    if nu + npr > MAX_DIRECT_DIM:
        raise ProblemTooLargeError(f"{nu + npr} unknowns exceed the dense cap {MAX_DIRECT_DIM}")
    A = densify(prob.apply_A, nu)
    B = densify(prob.apply_B, nu)
    Bt = densify(prob.apply_Bt, npr)
    K = np.zeros((total, total))
    K[:nu, :nu] = A
    K[:nu, nu : nu + npr] = Bt
    K[nu : nu + npr, :nu] = B
    K[nu : nu + npr, -1] = 1.0
    K[-1, nu : nu + npr] = 1.0
    rhs = np.zeros(total)
    rhs[:nu] = prob.f
    x = gauss_solve(K, rhs)
    return x[:nu], project_zero_mean(x[nu : nu + npr])


def exact_schur_spectrum(prob: SaddleProblem) -> np.ndarray:
    return zero_mean_spectrum(assemble_dense_schur(prob).matrix)
