"""Numerical checks of mean log-norm and log-spectral-radius inequalities over O(n), U(n) and the sphere."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigurationError,
    DecompositionError,
    DegenerateEigenvalueError,
    DomainError,
    MeanIneqError,
    OrientationError,
    OutOfRegimeError,
    SingularMatrixError,
)
from .linalg import (  # noqa: F401
    DiagonalSpec,
    normalize_to_sl,
    operator_norm,
    singular_values,
    spectral_radius,
    svd_factors,
)
from .montecarlo import MonteCarloEstimate  # noqa: F401
from .sampling import (  # noqa: F401
    InvariantMeasureSpec,
    SeededStream,
    sample_haar_orthogonal,
    sample_haar_unitary,
    sample_invariant_sl,
    sample_sphere,
)
