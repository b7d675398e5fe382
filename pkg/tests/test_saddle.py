import numpy as np
import pytest

from uzawa_stokes.errors import InvalidArgumentError
from uzawa_stokes.numcore import dot, project_zero_mean
from uzawa_stokes.saddle import SaddleProblem, estimate_extreme_eigen, rayleigh, schur_apply
from uzawa_stokes.stokes import build_mac_stokes

from conftest import numpy_schur


def zero_mean(rng, n):
    return project_zero_mean(rng.standard_normal(n))


def identity_problem(n=6):
    return SaddleProblem(lambda u: u, lambda u: u, lambda p: p, np.zeros(n), n, n)


def test_schur_of_zero_is_zero(cavity4):
    assert np.all(schur_apply(cavity4.problem(), np.zeros(cavity4.n_p)) == 0)


def test_schur_matches_independent_dense(cavity4, rng):
    prob = cavity4.problem()
    S = numpy_schur(cavity4)
    for _ in range(10):
        q = zero_mean(rng, cavity4.n_p)
        assert np.max(np.abs(schur_apply(prob, q) - project_zero_mean(S @ q))) <= 1e-8


def test_schur_matches_oracle_dense(cavity4, schur4, rng):
    prob = cavity4.problem()
    for _ in range(10):
        q = zero_mean(rng, cavity4.n_p)
        assert np.max(np.abs(schur_apply(prob, q) - schur4.matrix @ q)) <= 1e-8


def test_schur_linearity(cavity5, rng):
    prob = cavity5.problem()
    for a in (-3.7, 0.25, 11.0):
        q = zero_mean(rng, cavity5.n_p)
        lhs = schur_apply(prob, a * q)
        rhs = a * schur_apply(prob, q)
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(rhs)


def test_schur_rejects_wrong_length(cavity4):
    with pytest.raises(InvalidArgumentError):
        schur_apply(cavity4.problem(), np.ones(cavity4.n_p + 1))


def test_rayleigh_on_eigenvectors(cavity4):
    S = numpy_schur(cavity4)
    w, V = np.linalg.eigh(S)
    prob = cavity4.problem()
    for k in range(1, cavity4.n_p):  # skip the constant mode
        assert rayleigh(prob, V[:, k]) == pytest.approx(w[k], abs=1e-8)


def test_rayleigh_within_exact_bounds(cavity4, spectrum4, rng):
    prob = cavity4.problem()
    m, M = spectrum4[0], spectrum4[-1]
    for _ in range(20):
        r = rayleigh(prob, zero_mean(rng, cavity4.n_p))
        assert m - 1e-8 <= r <= M + 1e-8


def test_rayleigh_scale_invariant(cavity4, rng):
    prob = cavity4.problem()
    q = zero_mean(rng, cavity4.n_p)
    assert rayleigh(prob, 10 * q) == pytest.approx(rayleigh(prob, q), rel=1e-12)


def test_rayleigh_rejects_zero(cavity4):
    with pytest.raises(InvalidArgumentError):
        rayleigh(cavity4.problem(), np.zeros(cavity4.n_p))
    with pytest.raises(InvalidArgumentError):
        rayleigh(cavity4.problem(), np.ones(cavity4.n_p))


@pytest.mark.parametrize("fixture", ["cavity4", "cavity5"])
def test_estimates_bracket_dense_spectrum(fixture, request):
    system = request.getfixturevalue(fixture)
    prob = system.problem()
    w = np.linalg.eigvalsh(numpy_schur(system))[1:]
    top = estimate_extreme_eigen(prob, "max", tol=1e-6, max_iter=2000, seed=1)
    low = estimate_extreme_eigen(prob, "min", tol=1e-6, max_iter=5000, seed=1, M_est=top.value)
    assert top.converged and low.converged
    assert abs(top.value - w[-1]) <= 0.01 * w[-1]
    assert abs(low.value - w[0]) <= 0.05 * w[0]
    assert top.residual >= 0 and low.residual >= 0


def test_estimate_identity_schur():
    est = estimate_extreme_eigen(identity_problem(), "max", tol=1e-8)
    assert est.converged and abs(est.value - 1.0) <= 1e-8


def test_estimate_is_seed_deterministic(cavity4):
    prob = cavity4.problem()
    a = estimate_extreme_eigen(prob, "max", 1e-6, 2000, seed=7)
    b = estimate_extreme_eigen(prob, "max", 1e-6, 2000, seed=7)
    assert a.value == b.value and a.iterations == b.iterations


def test_estimate_reports_nonconvergence(cavity5):
    est = estimate_extreme_eigen(cavity5.problem(), "min", tol=1e-10, max_iter=3, M_est=1.0)
    assert not est.converged and est.iterations == 3


def test_self_adjoint(cavity5, rng):
    prob = cavity5.problem(inner_tol=1e-12)
    for _ in range(20):
        p = zero_mean(rng, cavity5.n_p)
        q = zero_mean(rng, cavity5.n_p)
        gap = abs(dot(schur_apply(prob, p), q) - dot(p, schur_apply(prob, q)))
        assert gap <= 1e-8 * np.linalg.norm(p) * np.linalg.norm(q)


@pytest.mark.parametrize("n", [4, 8])
def test_positive_and_sandwiched(n, rng):
    prob = build_mac_stokes(n).problem()
    top = estimate_extreme_eigen(prob, "max", 1e-6, 2000)
    low = estimate_extreme_eigen(prob, "min", 1e-6, 20000, M_est=top.value)
    assert top.converged and low.converged
    eps = 0.05 * (top.value - low.value)
    for _ in range(50):
        r = rayleigh(prob, zero_mean(rng, prob.n_p))
        assert r > 0
        assert low.value - eps <= r <= top.value + eps
