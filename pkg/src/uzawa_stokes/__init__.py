"""Uzawa iteration with a two-parameter relaxed pressure update for Stokes-type
saddle-point problems, plus dense oracles for checking its convergence
theory on small grids."""

from .errors import (
    InnerSolverError,
    InvalidArgumentError,
    OperatorNotSPDError,
    ProblemTooLargeError,
    SingularSystemError,
)
from .iterate import (
    IterationConfig,
    IterationHistory,
    Step1,
    check_sufficient_condition,
    energy_functional,
    run,
    step1_exact,
    step1_richardson,
    step2_pressure_update,
)
from .saddle import SaddleProblem, SpectralEstimate, estimate_extreme_eigen, rayleigh, schur_apply
from .stokes import LidProfile, StokesSystem, build_mac_stokes, divergence_norm, lid_profile_eval

__version__ = "0.1.0"
