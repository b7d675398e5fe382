"""Staggered (MAC) finite differences for -lap u + grad p = 0 on the unit
square, driven by a sliding lid on y = 1.

Unknown layout for ``N`` cells per side, ``h = 1/N``:

* x-velocity on vertical faces ``(i h, (j + 1/2) h)``, ``i = 1..N-1``,
  ``j = 0..N-1``; index ``j (N-1) + i - 1``
* y-velocity on horizontal faces ``((i + 1/2) h, j h)``, ``i = 0..N-1``,
  ``j = 1..N-1``; index ``nx + (j - 1) N + i``
* pressure at cell centres; index ``j N + i``

Normal velocities on the walls are zero and drop out. Tangential wall data
enter through the ghost value ``2 g - u_interior``, which leaves ``A``
symmetric and moves ``g`` into the right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sps

from .errors import InvalidArgumentError
from .numcore import norm_h, sparse_from_triplets, spmv
from .saddle import SaddleProblem


class LidProfile(str, Enum):
    REGULARIZED = "regularized"
    UNIT = "unit"


def lid_profile_eval(profile: LidProfile | str, x: float) -> float:
    """Tangential lid velocity at ``x``: ``4x(1-x)`` or the constant 1."""
    profile = LidProfile(profile)
    if not 0.0 <= x <= 1.0:
        raise InvalidArgumentError(f"x={x} outside [0, 1]")
    if profile is LidProfile.REGULARIZED:
        return 4.0 * x * (1.0 - x)
    return 1.0


@dataclass(frozen=True)
class StokesSystem:
    n_cells: int
    h: float
    lid: LidProfile
    A: sps.csr_array
    B: sps.csr_array
    Bt: sps.csr_array
    f_lifted: np.ndarray

    @property
    def n_ux(self) -> int:
        return (self.n_cells - 1) * self.n_cells

    @property
    def n_u(self) -> int:
        return 2 * self.n_ux

    @property
    def n_p(self) -> int:
        return self.n_cells**2

    def problem(self, inner_tol: float = 1e-12, inner_max: int | None = None) -> SaddleProblem:
        A, B, Bt = self.A, self.B, self.Bt
        return SaddleProblem(
            apply_A=lambda u: spmv(A, u),
            apply_B=lambda u: spmv(B, u),
            apply_Bt=lambda p: spmv(Bt, p),
            f=self.f_lifted,
            n_u=self.n_u,
            n_p=self.n_p,
            h=self.h,
            inner_tol=inner_tol,
            inner_max=inner_max if inner_max is not None else 10 * self.n_u,
        )

    def split_velocity(self, u) -> tuple[np.ndarray, np.ndarray]:
        """Reshape a velocity vector into ``(ux[j, i], uy[j, i])`` grids."""
        N = self.n_cells
        u = np.asarray(u)
        return u[: self.n_ux].reshape(N, N - 1), u[self.n_ux :].reshape(N - 1, N)


def build_mac_stokes(n_cells: int, lid: LidProfile | str = LidProfile.REGULARIZED) -> StokesSystem:
    N = int(n_cells)
    if N < 3:
        raise InvalidArgumentError(f"need at least 3 cells per side, got {n_cells}")
    lid = LidProfile(lid)
    h = 1.0 / N
    ih2 = 1.0 / (h * h)
    nx = (N - 1) * N
    nu = 2 * nx
    npr = N * N

    def ux(i, j):
        return j * (N - 1) + i - 1

    def uy(i, j):
        return nx + (j - 1) * N + i

    rows, cols, vals = [], [], []
    f = np.zeros(nu)

    for j in range(N):
        for i in range(1, N):
            r = ux(i, j)
            diag = 4.0
            for ii in (i - 1, i + 1):
                if 1 <= ii <= N - 1:
                    rows.append(r); cols.append(ux(ii, j)); vals.append(-ih2)
            for jj in (j - 1, j + 1):
                if 0 <= jj <= N - 1:
                    rows.append(r); cols.append(ux(i, jj)); vals.append(-ih2)
                else:
                    diag += 1.0
                    if jj == N:
                        f[r] += 2.0 * lid_profile_eval(lid, i * h) * ih2
            rows.append(r); cols.append(r); vals.append(diag * ih2)

    for j in range(1, N):
        for i in range(N):
            r = uy(i, j)
            diag = 4.0
            for jj in (j - 1, j + 1):
                if 1 <= jj <= N - 1:
                    rows.append(r); cols.append(uy(i, jj)); vals.append(-ih2)
            for ii in (i - 1, i + 1):
                if 0 <= ii <= N - 1:
                    rows.append(r); cols.append(uy(ii, j)); vals.append(-ih2)
                else:
                    diag += 1.0
            rows.append(r); cols.append(r); vals.append(diag * ih2)

    A = sparse_from_triplets(rows, cols, vals, (nu, nu))

    # B = -div at cell centres
    brows, bcols, bvals = [], [], []
    ih = 1.0 / h
    for j in range(N):
        for i in range(N):
            c = j * N + i
            if i >= 1:
                brows.append(c); bcols.append(ux(i, j)); bvals.append(ih)
            if i + 1 <= N - 1:
                brows.append(c); bcols.append(ux(i + 1, j)); bvals.append(-ih)
            if j >= 1:
                brows.append(c); bcols.append(uy(i, j)); bvals.append(ih)
            if j + 1 <= N - 1:
                brows.append(c); bcols.append(uy(i, j + 1)); bvals.append(-ih)
    B = sparse_from_triplets(brows, bcols, bvals, (npr, nu))
    # both spaces carry the same h^2 weight, so the weighted adjoint is the transpose
    Bt = sps.csr_array(B.T)
    Bt.sort_indices()

    return StokesSystem(N, h, lid, A, B, Bt, f)


def divergence_norm(sys: StokesSystem, u) -> float:
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (sys.n_u,):
        raise InvalidArgumentError(f"velocity has length {u.size}, expected {sys.n_u}")
    return norm_h(spmv(sys.B, u), sys.h)


def stream_function_velocity(sys: StokesSystem, psi) -> np.ndarray:
    """Discrete curl of a node-based stream function vanishing on the boundary.

    ``psi`` has shape ``(N+1, N+1)`` indexed ``[j, i]`` at nodes ``(i h, j h)``;
    boundary values are ignored (treated as zero). The result is exactly
    divergence free on the MAC grid.
    """
    N = sys.n_cells
    h = sys.h
    psi = np.array(psi, dtype=np.float64)
    psi[0, :] = psi[-1, :] = psi[:, 0] = psi[:, -1] = 0.0
    # u = d psi / dy on vertical faces, v = -d psi / dx on horizontal faces
    ux = (psi[1:, 1:N] - psi[:-1, 1:N]) / h
    uy = -(psi[1:N, 1:] - psi[1:N, :-1]) / h
    return np.concatenate([ux.ravel(), uy.ravel()])

