"""Average log spectral radius over a coset of O(n) or U(n).

``avg(A) = E_X log rho(A X)`` for Haar ``X``. For ``A`` in SL(n) every
integrand value is nonnegative (``|det(A X)| = 1`` forces ``rho >= 1``), and
for ``n >= 3`` the ratio ``avg(A) / log sigma_1(A)`` is bounded below by a
positive constant. In dimension 2 over SO(2) that ratio tends to 0 at the
identity.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import montecarlo
from .errors import ConfigurationError, DomainError
from .linalg import DiagonalSpec, as_square, singular_values, spectral_radii
from .montecarlo import MonteCarloEstimate
from .sampling import (
    GROUPS,
    InvariantMeasureSpec,
    SeededStream,
    haar_batch,
    invariant_sl_batch,
)
from .tolerances import TOL


@dataclass(frozen=True)
class AverageSpectralResult:
    estimate: MonteCarloEstimate
    matrix_spectrum: np.ndarray
    log_sigma1: float
    ratio: float | None
    min_integrand: float
    group: str = "O"

    def ratio_lower(self, z: float = 3.0) -> float | None:
        if self.ratio is None:
            return None
        return (self.estimate.mean - z * self.estimate.std_error) / self.log_sigma1


def _check_group(A, group):
    if group not in GROUPS:
        raise ConfigurationError(f"unknown group {group!r}")
    if np.iscomplexobj(A) and group != "U":
        raise DomainError("complex matrices need group U")


def log_spectral_radius_samples(A, group: str, n_samples: int, stream: SeededStream,
                                threads: int | None = 1) -> np.ndarray:
    """Raw integrand values ``log rho(A X_i)`` for Haar samples ``X_i``."""
    A = as_square(A)
    _check_group(A, group)
    n = A.shape[0]

    def integrand(offset, count):
        X = haar_batch(n, stream.at(offset), count, group)
        return np.log(spectral_radii(np.matmul(A, X)))

    return montecarlo.sample_values(integrand, n_samples, threads)


def _result(A, values, stream, group, ratio_floor):
    sigma = singular_values(A)
    log_sigma1 = float(np.log(sigma[0]))
    est = MonteCarloEstimate.from_samples(values, stream.seed)
    ratio = est.mean / log_sigma1 if log_sigma1 >= ratio_floor else None
    return AverageSpectralResult(est, sigma, log_sigma1, ratio, float(np.min(values)), group)


def average_log_spectral_radius(A, group: str = "O", n_samples: int = 100_000,
                                stream: SeededStream | None = None, threads: int | None = 1,
                                det_tol: float = TOL.det_tol,
                                ratio_floor: float = TOL.ratio_floor) -> AverageSpectralResult:
    """Monte Carlo estimate of ``E_X log rho(A X)``; ``A`` must be in SL(n)."""
    if stream is None:
        raise ConfigurationError("an explicit SeededStream is required")
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    A = as_square(A)
    if abs(np.linalg.det(A) - 1) > det_tol:
        raise DomainError("A must be special linear; use normalize_to_sl first")
    values = log_spectral_radius_samples(A, group, n_samples, stream, threads)
    return _result(A, values, stream, group, ratio_floor)


def svd_invariance_check(A, n_samples: int, stream: SeededStream, group: str = "O",
                         threads: int | None = 1):
    """Estimates for ``A`` and for ``diag(sigma(A))`` on independent child streams."""
    A = as_square(A)
    D = np.diag(singular_values(A))
    return (average_log_spectral_radius(A, group, n_samples, stream.child(0), threads),
            average_log_spectral_radius(D, group, n_samples, stream.child(1), threads))


def restricted_average(A, group: str, n_samples: int, stream: SeededStream,
                       radius: float, threads: int | None = 1):
    """Compare the full average with the contribution of ``{X : |X - I|_inf < radius}``.

    Returns ``(full_mean, fraction_in_ball, mean_over_ball)``; since the
    integrand is nonnegative, ``full_mean >= fraction_in_ball * mean_over_ball``.
    """
    A = as_square(A)
    _check_group(A, group)
    n = A.shape[0]
    X = haar_batch(n, stream, n_samples, group)
    vals = np.log(spectral_radii(np.matmul(A, X)))
    dist = np.max(np.sum(np.abs(X - np.eye(n)), axis=2), axis=1)
    inside = dist < radius
    frac = float(np.mean(inside))
    inner = float(np.mean(vals[inside])) if inside.any() else 0.0
    return float(np.mean(vals)), frac, inner


def near_identity_floor(d1: float, n: int, radius: float) -> float:
    """Pointwise lower bound on ``log rho(diag(d) X)`` for ``|X - I|_inf <= radius < 1/(2n)``."""
    if not 0 <= radius < 1 / (2 * n):
        raise DomainError("radius must lie in [0, 1/(2n))")
    return float(np.log(d1) + np.log1p(-2 * n * radius))


@dataclass(frozen=True)
class DiagonalGrid:
    directions: tuple
    scales: tuple

    def __post_init__(self):
        dirs = tuple(d if isinstance(d, DiagonalSpec) else DiagonalSpec(tuple(d)) for d in self.directions)
        if not dirs or not self.scales:
            raise ConfigurationError("grid must be non-empty")
        if len({d.dim for d in dirs}) != 1:
            raise ConfigurationError("all directions must share one dimension")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "scales", tuple(float(t) for t in self.scales))

    def points(self):
        for d in self.directions:
            for t in self.scales:
                yield d.with_scale(t)

    def to_dict(self) -> dict:
        return {"directions": [list(d.exponents) for d in self.directions],
                "scales": list(self.scales)}


@dataclass(frozen=True)
class ConstantEstimate:
    dim: int
    group: str
    family: dict
    c_lower: float
    argmin_spec: DiagonalSpec | None
    confidence: bool  # every grid point has mean - 3 SE > 0
    rows: list = field(default_factory=list)
    skipped: int = 0

    def to_dict(self) -> dict:
        return {"dim": self.dim, "group": self.group, "family": self.family,
                "c_lower": self.c_lower,
                "argmin": None if self.argmin_spec is None else {
                    "d_vector": list(self.argmin_spec.exponents), "t": self.argmin_spec.scale},
                "confidence": self.confidence, "skipped": self.skipped, "rows": self.rows}


def spectral_row(spec: DiagonalSpec, res: AverageSpectralResult, z: float = 3.0) -> dict:
    return {"dim": spec.dim, "group": res.group, "d_vector": list(spec.exponents),
            "t": spec.scale, "mean": res.estimate.mean, "std_error": res.estimate.std_error,
            "n_samples": res.estimate.n_samples, "log_sigma1": res.log_sigma1,
            "ratio": res.ratio, "ratio_lower": res.ratio_lower(z),
            "min_integrand": res.min_integrand, "seed": res.estimate.seed}


def estimate_dimensional_constant(n: int, family: DiagonalGrid, group: str = "O",
                                  samples_per_point: int = 100_000,
                                  stream: SeededStream | None = None,
                                  threads: int | None = 1, z: float = 3.0,
                                  ratio_floor: float = TOL.ratio_floor) -> ConstantEstimate:
    """Minimum over the grid of ``(mean - z SE) / log sigma_1``.

    Grid point ``k`` (directions outer, scales inner) uses ``stream.child(k)``.
    """
    if stream is None:
        raise ConfigurationError("an explicit SeededStream is required")
    if n < 2:
        raise DomainError("n must be at least 2")
    if family.directions[0].dim != n:
        raise ConfigurationError("grid dimension does not match n")
    rows, best, best_spec, skipped = [], np.inf, None, 0
    for k, spec in enumerate(family.points()):
        if spec.log_sigma1() < ratio_floor:
            warnings.warn(f"skipping grid point {spec}: log sigma_1 below ratio floor", stacklevel=2)
            skipped += 1
            continue
        res = average_log_spectral_radius(spec.matrix(), group, samples_per_point,
                                          stream.child(k), threads, ratio_floor=ratio_floor)
        row = spectral_row(spec, res, z)
        rows.append(row)
        if row["ratio_lower"] < best:
            best, best_spec = row["ratio_lower"], spec
    confidence = bool(rows) and all(r["ratio_lower"] > 0 for r in rows)
    return ConstantEstimate(n, group, family.to_dict(), float(best), best_spec, confidence,
                            rows, skipped)


@dataclass(frozen=True)
class GenmuResult:
    dim: int
    group: str
    lhs: MonteCarloEstimate  # E_mu log rho
    rhs_mean: float  # E_mu log |Y|
    rhs_std_error: float
    ratio: float | None
    c_lower: float | None
    inequality_holds: bool | None
    min_integrand: float
    exploratory: bool  # dimension 2: no inequality is claimed

    def to_dict(self) -> dict:
        return {"dim": self.dim, "group": self.group, "lhs": self.lhs.to_dict(),
                "rhs_mean": self.rhs_mean, "rhs_std_error": self.rhs_std_error,
                "ratio": self.ratio, "c_lower": self.c_lower,
                "inequality_holds": self.inequality_holds,
                "min_integrand": self.min_integrand, "exploratory": self.exploratory}


def genmu_experiment(spec: InvariantMeasureSpec, group: str, n_matrices: int,
                     samples_per_matrix: int, stream: SeededStream,
                     c_lower: float | None = None, threads: int | None = 1) -> GenmuResult:
    """Both sides of ``E_mu log rho(Y) >= C_n E_mu log |Y|`` for a bi-invariant law ``mu``.

    For each of ``n_matrices`` draws ``Y_k`` from ``mu`` the coset average
    ``E_X log rho(Y_k X)`` is estimated; invariance of ``mu`` makes the mean
    of these an unbiased estimate of ``E_mu log rho``. The right-hand side
    uses the drawn singular values directly.
    """
    if (group == "U") != (spec.field == "complex"):
        raise ConfigurationError("group U needs a complex measure and vice versa")
    if n_matrices < 1 or samples_per_matrix < 2:
        raise ConfigurationError("need n_matrices >= 1 and samples_per_matrix >= 2")
    Y, sigma = invariant_sl_batch(spec, stream.child(0), n_matrices, return_spectrum=True)
    haar = stream.child(1)
    means, inner_se, mins = [], [], []
    for k in range(n_matrices):
        vals = log_spectral_radius_samples(Y[k], group, samples_per_matrix, haar.child(k), threads)
        est = MonteCarloEstimate.from_samples(vals, stream.seed)
        means.append(est.mean)
        inner_se.append(est.std_error)
        mins.append(float(np.min(vals)))
    means = np.asarray(means)
    if n_matrices > 1:
        lhs_se = float(np.std(means, ddof=1) / np.sqrt(n_matrices))
    else:
        lhs_se = inner_se[0]
    lhs = MonteCarloEstimate(float(np.mean(means)), lhs_se, n_matrices * samples_per_matrix,
                             stream.seed)
    log_norms = np.log(sigma[:, 0])
    rhs_mean = float(np.mean(log_norms))
    rhs_se = float(np.std(log_norms, ddof=1) / np.sqrt(n_matrices)) if n_matrices > 1 else 0.0
    ratio = lhs.mean / rhs_mean if rhs_mean >= TOL.ratio_floor else None
    holds = None if c_lower is None else bool(lhs.mean + 3 * lhs.std_error >= c_lower * rhs_mean)
    return GenmuResult(spec.dim, group, lhs, rhs_mean, rhs_se, ratio, c_lower, holds,
                       float(min(mins)), spec.dim < 3)
