"""Log-norm integrals over the unit sphere and over orthogonal cosets.

The central quantity is

    I(a) = E_u log(sum_i a_i u_i^2),   u uniform on the unit sphere of R^n,

which is nonnegative whenever ``prod(a) = 1`` and vanishes only at
``a = (1, ..., 1)``. Averaging ``log |A X u|`` over Haar ``X`` and ``u``
reduces to ``I(sigma(A)**2) / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import montecarlo
from .errors import DomainError
from .linalg import as_square, singular_values
from .montecarlo import MonteCarloEstimate
from .sampling import SeededStream, haar_batch, sphere_batch
from .tolerances import TOL


@dataclass(frozen=True)
class WeightVector:
    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in np.ravel(self.weights))
        if not w:
            raise DomainError("weight vector must be non-empty")
        if not all(np.isfinite(x) and x > 0 for x in w):
            raise DomainError(f"weights must be finite and strictly positive, got {w}")
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def sl_normalized(self) -> bool:
        return abs(float(np.sum(np.log(self.weights)))) <= TOL.weight_product

    @property
    def is_identity(self) -> bool:
        return all(x == 1.0 for x in self.weights)

    def array(self) -> np.ndarray:
        return np.asarray(self.weights)


def _as_weights(a) -> WeightVector:
    return a if isinstance(a, WeightVector) else WeightVector(tuple(np.ravel(a)))


def _log_quadratic_form(u2: np.ndarray, a: np.ndarray) -> np.ndarray:
    # dividing by |u|^2 (computed the same way) keeps the all-ones case exactly 0
    return np.log((u2 @ a) / (u2 @ np.ones_like(a)))


def sphere_log_integral(a, n_samples: int, stream: SeededStream,
                        threads: int | None = 1) -> MonteCarloEstimate:
    """Monte Carlo estimate of ``E_u log(sum a_i u_i^2)``."""
    a = _as_weights(a)
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    w = a.array()
    n = a.dim

    def integrand(offset, count):
        u = sphere_batch(n, stream.at(offset), count)
        return _log_quadratic_form(u * u, w)

    return montecarlo.estimate(integrand, n_samples, stream, threads)


def sphere_log_integral_quad(a, nodes: tuple | None = None) -> float:
    """Deterministic quadrature for ``n = 2`` and ``n = 3``.

    ``n = 2`` uses the periodic trapezoid rule (default 4096 nodes); ``n = 3``
    uses Gauss-Legendre in ``z = cos(polar angle)`` times a trapezoid rule in
    azimuth (default 256 x 512). The integrand is smooth for positive
    weights, so both rules converge spectrally.
    """
    a = _as_weights(a)
    w = a.array()
    if a.dim == 2:
        (m,) = nodes or (4096,)
        theta = 2 * np.pi * np.arange(m) / m
        u2 = np.stack([np.cos(theta) ** 2, np.sin(theta) ** 2], axis=1)
        return float(np.mean(_log_quadratic_form(u2, w)))
    if a.dim == 3:
        nz, nphi = nodes or (256, 512)
        z, wz = np.polynomial.legendre.leggauss(nz)
        phi = 2 * np.pi * np.arange(nphi) / nphi
        r2 = 1 - z**2
        u2 = np.stack([
            np.outer(r2, np.cos(phi) ** 2),
            np.outer(r2, np.sin(phi) ** 2),
            np.outer(z**2, np.ones(nphi)),
        ], axis=-1)
        vals = _log_quadratic_form(u2.reshape(-1, 3), w).reshape(nz, nphi)
        return float(np.sum(wz[:, None] * vals) / 2 / nphi)
    raise DomainError(f"quadrature is only provided for n = 2 and n = 3, got n = {a.dim}")


def amgm_lower_bound(a, u) -> float:
    """Pointwise lower bound ``sum u_i^2 log a_i <= log(sum a_i u_i^2)``."""
    a = _as_weights(a)
    u = np.asarray(u, dtype=float)
    return float(np.sum(u * u * np.log(a.array())))


def _check_invertible(A):
    A = as_square(A)
    if np.iscomplexobj(A):
        raise DomainError("coset integrals are defined for real matrices")
    if abs(np.linalg.det(A)) < TOL.singular_tol:
        raise DomainError("matrix is singular")
    return A


def coset_log_norm_integral(A, n_samples: int, stream: SeededStream,
                            threads: int | None = 1) -> MonteCarloEstimate:
    """Two-level estimate of ``E_X E_u log |A X u|`` with Haar ``X`` in O(n).

    Haar matrices come from ``stream.child(0)`` and sphere points from
    ``stream.child(1)``, paired by index.
    """
    A = _check_invertible(A)
    n = A.shape[0]
    haar, sphere = stream.child(0), stream.child(1)

    def integrand(offset, count):
        X = haar_batch(n, haar.at(offset), count, "O")
        u = sphere_batch(n, sphere.at(offset), count)
        Bu = np.einsum("mjk,mk->mj", X, u) @ A.T
        return 0.5 * np.log(np.einsum("mj,mj->m", Bu, Bu))

    return montecarlo.estimate(integrand, n_samples, stream, threads)


def reduced_coset_integral(A, n_samples: int, stream: SeededStream,
                           threads: int | None = 1) -> MonteCarloEstimate:
    """One-level estimate ``I(sigma(A)**2) / 2`` of the coset integral."""
    A = _check_invertible(A)
    sigma = singular_values(A)
    return sphere_log_integral(sigma**2, n_samples, stream, threads).scaled(0.5)


@dataclass(frozen=True)
class SignCertificate:
    sign: str  # "positive", "negative", "zero" or "indeterminate"
    estimate: MonteCarloEstimate
    method: str  # "mc" or "quad"
    quad_value: float | None = None


def certify_sign(a, stream: SeededStream, z: float = 5.0, start: int = 10_000,
                 cap: int = 10_000_000, threads: int | None = 1) -> SignCertificate:
    """Resolve the sign of ``I(a)``, doubling the sample size up to ``cap``.

    Falls back to quadrature (n <= 3) if Monte Carlo cannot separate the
    mean from zero at ``z`` standard errors.
    """
    a = _as_weights(a)
    n_samples = max(2, start)
    while True:
        est = sphere_log_integral(a, n_samples, stream, threads)
        if a.is_identity:
            return SignCertificate("zero", est, "mc")
        if abs(est.mean) > z * est.std_error:
            return SignCertificate("positive" if est.mean > 0 else "negative", est, "mc")
        if n_samples >= cap:
            break
        n_samples = min(2 * n_samples, cap)
    if a.dim in (2, 3):
        q = sphere_log_integral_quad(a)
        if abs(q) > 1e-12:
            return SignCertificate("positive" if q > 0 else "negative", est, "quad", q)
    return SignCertificate("indeterminate", est, "mc")


def report_row(quantity: str, dim: int, ident: str, est: MonteCarloEstimate | float,
               method: str = "mc", seed: int | None = None) -> dict:
    if isinstance(est, MonteCarloEstimate):
        return {"quantity": quantity, "dim": dim, "weights_or_matrix_id": ident,
                "mean": est.mean, "std_error": est.std_error, "n_samples": est.n_samples,
                "seed": est.seed, "method": method}
    return {"quantity": quantity, "dim": dim, "weights_or_matrix_id": ident,
            "mean": float(est), "std_error": 0.0, "n_samples": 0, "seed": seed,
            "method": method}
