class MeanIneqError(Exception):
    """Base class for all errors raised by this package."""


class DecompositionError(MeanIneqError):
    """A LAPACK decomposition failed to converge."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DomainError(MeanIneqError, ValueError):
    """An input lies outside the domain where the quantity is defined."""


class SingularMatrixError(DomainError):
    pass


class OrientationError(DomainError):
    """Real matrix with negative determinant cannot be scaled into SL(n)."""


class OutOfRegimeError(DomainError):
    """Parameters are outside the regime in which a bound is meaningful."""


class DegenerateEigenvalueError(DomainError):
    """Eigenvalue is not simple enough for first-order perturbation theory."""


class ConfigurationError(MeanIneqError, ValueError):
    pass
