import numpy as np
import pytest

from uzawa_stokes.oracle import assemble_dense_schur, direct_solve, zero_mean_spectrum
from uzawa_stokes.stokes import build_mac_stokes


@pytest.fixture(scope="session")
def cavity4():
    return build_mac_stokes(4, "regularized")


@pytest.fixture(scope="session")
def cavity5():
    return build_mac_stokes(5, "regularized")


@pytest.fixture(scope="session")
def schur4(cavity4):
    return assemble_dense_schur(cavity4.problem())


@pytest.fixture(scope="session")
def spectrum4(schur4):
    return zero_mean_spectrum(schur4.matrix)


@pytest.fixture(scope="session")
def exact4(cavity4):
    return direct_solve(cavity4.problem())


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def dense(mat):
    return np.asarray(mat.toarray())


def numpy_schur(system):
    """Independent dense Schur complement via numpy's LAPACK solve."""
    A, B = dense(system.A), dense(system.B)
    return B @ np.linalg.solve(A, B.T)
