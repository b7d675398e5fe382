import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uzawa_stokes.errors import InvalidArgumentError, ProblemTooLargeError, SingularSystemError
from uzawa_stokes.iterate import IterationConfig, check_sufficient_condition, run
from uzawa_stokes.numcore import norm_h, project_zero_mean
from uzawa_stokes.oracle import (
    assemble_dense_schur,
    companion_spectral_radius,
    dense_sym_eigs,
    direct_solve,
    gauss_solve,
    jacobi_eigh,
    zero_mean_spectrum,
)
from uzawa_stokes.saddle import SaddleProblem, schur_apply
from uzawa_stokes.stokes import build_mac_stokes

# computed once by the Jacobi oracle on the 4x4 regularized cavity
LAMBDA_MAX_4 = 1.0
LAMBDA_MIN_4 = 0.3914353635223341


def test_dense_schur_identity_case():
    n = 5
    prob = SaddleProblem(lambda u: u, lambda u: u, lambda p: p, np.zeros(n), n, n)
    S = assemble_dense_schur(prob).matrix
    assert np.allclose(S, np.eye(n) - 1.0 / n, atol=1e-15)


def test_dense_schur_asymmetry(schur4):
    assert schur4.asymmetry <= 1e-9


def test_dense_schur_consistent_with_apply(cavity4, schur4, rng):
    prob = cavity4.problem()
    for _ in range(10):
        q = project_zero_mean(rng.standard_normal(cavity4.n_p))
        assert np.max(np.abs(schur4.matrix @ q - schur_apply(prob, q))) <= 1e-8


def test_dense_schur_refuses_large():
    prob = build_mac_stokes(21).problem()
    with pytest.raises(ProblemTooLargeError):
        assemble_dense_schur(prob)


def test_eigs_examples():
    assert np.allclose(dense_sym_eigs(np.diag([3.0, 1.0, 2.0])), [1.0, 2.0, 3.0], atol=1e-15)
    assert np.allclose(dense_sym_eigs([[2.0, 1.0], [1.0, 2.0]]), [1.0, 3.0], atol=1e-14)


def test_eigs_rejects_nonsymmetric():
    with pytest.raises(InvalidArgumentError):
        dense_sym_eigs([[1.0, 2.0], [0.0, 1.0]])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_jacobi_eigen_residuals(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    S = M + M.T
    w, V = jacobi_eigh(S)
    scale = np.linalg.norm(S)
    for k in range(n):
        assert np.linalg.norm(S @ V[:, k] - w[k] * V[:, k]) <= 1e-10 * scale
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(w, np.linalg.eigvalsh(S), atol=1e-10 * scale)


def test_frozen_schur_extremes(spectrum4):
    assert spectrum4.size == 15
    assert np.all(spectrum4 > 0)
    assert spectrum4[-1] == pytest.approx(LAMBDA_MAX_4, abs=1e-10)
    assert spectrum4[0] == pytest.approx(LAMBDA_MIN_4, abs=1e-10)


def test_zero_mean_spectrum_drops_constant_mode(schur4):
    full = dense_sym_eigs(schur4.matrix)
    assert abs(full[0]) <= 1e-12
    assert zero_mean_spectrum(schur4.matrix).size == full.size - 1


@pytest.mark.parametrize(
    "eigs,alpha2,beta,expected",
    [([1.0], 1.0, 0.0, 0.0), ([1.0], 2.2, 0.0, 1.2), ([1.0], 0.5, 0.0, 0.5), ([0.5, 1.0], 1.0, 0.0, 0.5)],
)
def test_companion_examples(eigs, alpha2, beta, expected):
    assert companion_spectral_radius(eigs, alpha2, beta) == pytest.approx(expected, abs=1e-14)


def test_companion_matches_matrix_eigenvalues(rng):
    for _ in range(50):
        lam, a2, b = rng.uniform(0.05, 2), rng.uniform(0, 3), rng.uniform(0, 1)
        C = np.array([[1 - (b + a2) * lam, b * lam], [1.0, 0.0]])
        ref = np.max(np.abs(np.linalg.eigvals(C)))
        assert companion_spectral_radius([lam], a2, b) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_companion_rejects_nonpositive():
    with pytest.raises(InvalidArgumentError):
        companion_spectral_radius([0.0, 1.0], 1.0, 0.0)


def test_sufficient_condition_on_random_samples(spectrum4, rng):
    M = spectrum4[-1]
    for _ in range(100):
        beta = rng.uniform(0, 1 / M)
        alpha2 = rng.uniform(0, 1 / M - beta)
        assert check_sufficient_condition(alpha2, beta, M)
        assert companion_spectral_radius(spectrum4, alpha2, beta) < 1.0


@settings(max_examples=100)
@given(
    st.lists(st.floats(0.01, 10.0), min_size=1, max_size=8),
    st.floats(0.0, 1.0),
    st.floats(0.001, 0.999),
)
def test_sufficient_condition_on_arbitrary_spectra(eigs, beta_frac, alpha_frac):
    M = max(eigs)
    beta = beta_frac * 0.999 / M
    alpha2 = alpha_frac * (1 / M - beta)
    assert companion_spectral_radius(eigs, alpha2, beta) < 1.0


def test_gauss_solve_matches_numpy(rng):
    K = rng.standard_normal((30, 30))
    b = rng.standard_normal(30)
    assert np.allclose(gauss_solve(K, b), np.linalg.solve(K, b), rtol=1e-10, atol=1e-12)


def test_gauss_solve_singular():
    with pytest.raises(SingularSystemError):
        gauss_solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])


def test_direct_solve_homogeneous(cavity4):
    prob = cavity4.problem().replace(f=np.zeros(cavity4.n_u))
    u, p = direct_solve(prob)
    assert np.all(np.abs(u) <= 1e-14) and np.all(np.abs(p) <= 1e-14)


def test_direct_solve_residuals(cavity4, exact4):
    u, p = exact4
    h = cavity4.h
    assert norm_h(cavity4.A @ u + cavity4.Bt @ p - cavity4.f_lifted, h) <= 1e-9
    assert norm_h(cavity4.B @ u, h) <= 1e-9
    assert abs(np.mean(p)) <= 1e-13


def test_direct_solve_refuses_large():
    with pytest.raises(ProblemTooLargeError):
        direct_solve(build_mac_stokes(30).problem())


def test_iteration_converges_to_direct_solution(cavity4, exact4):
    u_star, p_star = exact4
    hist = run(cavity4.problem(), IterationConfig(alpha2=1.5, beta=0.05, tol=1e-10))
    assert hist.converged
    assert norm_h(hist.u - u_star, cavity4.h) <= 1e-8
    assert norm_h(hist.p - p_star, cavity4.h) <= 1e-8
