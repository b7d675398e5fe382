"""Vector and sparse-matrix kernels, conjugate gradients, zero-mean projection
and a splitmix64 stream.

Vectors are plain 1-D ``float64`` numpy arrays. Sparse matrices are canonical
``scipy.sparse.csr_array`` objects (sorted column indices, no duplicates).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sps

from .errors import InvalidArgumentError, OperatorNotSPDError

MASK64 = (1 << 64) - 1

Operator = Callable[[np.ndarray], np.ndarray]


def as_vec(x) -> np.ndarray:
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise InvalidArgumentError(f"expected a 1-D vector, got shape {v.shape}")
    return v


def dot(x, y) -> float:
    x = as_vec(x)
    y = as_vec(y)
    if x.shape != y.shape:
        raise InvalidArgumentError(f"length mismatch: {x.size} vs {y.size}")
    return float(np.dot(x, y))


def norm_h(x, h: float) -> float:
    """Mesh-weighted discrete L2 norm ``sqrt(h^2 * sum x_i^2)`` for 2-D grids."""
    if not h > 0:
        raise InvalidArgumentError(f"mesh size must be positive, got {h}")
    x = as_vec(x)
    return float(h * np.sqrt(np.dot(x, x)))


def sparse_from_triplets(rows, cols, vals, shape) -> sps.csr_array:
    """Assemble a canonical CSR matrix, summing duplicate entries."""
    m = sps.coo_array(
        (np.asarray(vals, dtype=np.float64), (np.asarray(rows), np.asarray(cols))),
        shape=shape,
    ).tocsr()
    m.sum_duplicates()
    m.sort_indices()
    return m


def check_csr(a: sps.csr_array) -> None:
    """Validate the CSR structural invariants."""
    nrows, ncols = a.shape
    indptr, indices = a.indptr, a.indices
    if indptr.size != nrows + 1 or indptr[0] != 0 or np.any(np.diff(indptr) < 0):
        raise InvalidArgumentError("row offsets must be nondecreasing from 0")
    if indices.size and (indices.min() < 0 or indices.max() >= ncols):
        raise InvalidArgumentError("column index out of range")
    for r in range(nrows):
        seg = indices[indptr[r]:indptr[r + 1]]
        if seg.size > 1 and np.any(np.diff(seg) <= 0):
            raise InvalidArgumentError(f"column indices not strictly increasing in row {r}")
    if not np.all(np.isfinite(a.data)):
        raise InvalidArgumentError("non-finite matrix entry")


def spmv(a: sps.csr_array, x) -> np.ndarray:
    x = as_vec(x)
    if a.shape[1] != x.size:
        raise InvalidArgumentError(f"dimension mismatch: matrix has {a.shape[1]} cols, vector {x.size}")
    return np.asarray(a @ x, dtype=np.float64)


@dataclass(frozen=True)
class CGResult:
    x: np.ndarray
    iters: int
    rel_residual: float
    converged: bool


def cg_solve(apply: Operator, b, x0=None, rel_tol: float = 1e-12, max_iter: int = 1000) -> CGResult:
    """Unpreconditioned conjugate gradients for an SPD operator.

    Stops once the recursive residual meets ``rel_tol * ||b||`` and the true
    residual confirms it; otherwise restarts from the true residual. When
    ``max_iter`` is exhausted the result carries the last relative residual and
    ``converged`` is false.
    """
    if not rel_tol > 0:
        raise InvalidArgumentError("rel_tol must be positive")
    b = as_vec(b)
    x = np.zeros_like(b) if x0 is None else as_vec(x0).copy()
    if x.shape != b.shape:
        raise InvalidArgumentError("x0 and b differ in length")
    bnorm = float(np.sqrt(np.dot(b, b)))
    if bnorm == 0.0:
        return CGResult(np.zeros_like(b), 0, 0.0, True)
    target = rel_tol * bnorm

    r = b - apply(x)
    rr = float(np.dot(r, r))
    rnorm = np.sqrt(rr)
    if rnorm <= target:
        return CGResult(x, 0, rnorm / bnorm, True)
    p = r.copy()
    k = 0
    while k < max_iter:
        ap = apply(p)
        pap = float(np.dot(p, ap))
        if not pap > 0.0:
            raise OperatorNotSPDError(f"CG breakdown: p^T A p = {pap:.3e} at iteration {k}")
        step = rr / pap
        x += step * p
        r -= step * ap
        k += 1
        rr_new = float(np.dot(r, r))
        if np.sqrt(rr_new) <= target:
            r = b - apply(x)
            rr_new = float(np.dot(r, r))
            if np.sqrt(rr_new) <= target:
                return CGResult(x, k, float(np.sqrt(rr_new)) / bnorm, True)
            # recursive residual drifted; restart from the true one
            p = r.copy()
            rr = rr_new
            continue
        p = r + (rr_new / rr) * p
        rr = rr_new
    return CGResult(x, k, float(np.sqrt(rr)) / bnorm, False)


def project_zero_mean(p) -> np.ndarray:
    """Remove the mean; bitwise idempotent.

    A vector whose mean is already below ``1e-14 * ||p||`` is returned as a
    copy, so projecting a projected vector changes nothing.
    """
    q = as_vec(p).copy()
    if q.size == 0:
        raise InvalidArgumentError("empty vector")
    for _ in range(4):
        m = float(np.mean(q))
        if abs(m) <= 1e-14 * float(np.sqrt(np.dot(q, q))):
            break
        q = q - m
    return q


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns ``(output, new_state)`` as 64-bit ints."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31), state


@dataclass(frozen=True)
class PrngState:
    state: int = 0

    def __post_init__(self):
        object.__setattr__(self, "state", int(self.state) & MASK64)


def prng_next(s: PrngState) -> tuple[float, PrngState]:
    """Next uniform double in [0, 1) from the top 53 bits of splitmix64."""
    out, new = splitmix64(s.state)
    return (out >> 11) * 2.0**-53, PrngState(new)


def prng_vector(s: PrngState, n: int) -> tuple[np.ndarray, PrngState]:
    vals = np.empty(n)
    for i in range(n):
        vals[i], s = prng_next(s)
    return vals, s
