"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    pass


class OperatorNotSPDError(ArithmeticError):
    """Conjugate gradients hit a non-positive curvature direction."""


class InnerSolverError(RuntimeError):
    """An inner CG solve did not reach its tolerance.

    ``history`` is filled in by the outer iteration when the failure aborts a
    run, so callers can inspect the partial trace.
    """

    def __init__(self, message, residual=float("nan"), iterations=0, history=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.history = history


class SingularSystemError(ArithmeticError):
    pass


class ProblemTooLargeError(ValueError):
    """Dense oracle refused an instance above its desk-scale cap."""
