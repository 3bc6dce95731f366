"""Exact computations in dimension 2.

For ``A = diag(a, 1/a)`` and the rotation ``R_theta``,
``tr(A R_theta) = 2 t cos(theta)`` with ``t = (a + 1/a) / 2``; the product
is elliptic (spectral radius exactly 1) whenever ``|cos(theta)| < 1/t``.
Averages of ``log rho`` over SO(2) are one-dimensional integrals with
square-root kinks at the elliptic/hyperbolic transitions; they are
integrated piecewise with an endpoint-flattening substitution.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, OutOfRegimeError
from .linalg import as_square, rotation
from .tolerances import TOL

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class Dim2Config:
    a: float
    theta: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("a must be positive")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @property
    def trace_half(self) -> float:
        return (self.a + 1 / self.a) / 2

    def matrix(self) -> np.ndarray:
        return np.diag([self.a, 1 / self.a]) @ rotation(self.theta)


def rho_rotation(cfg: Dim2Config) -> float:
    """Closed-form spectral radius of ``diag(a, 1/a) R_theta``."""
    x = abs(cfg.trace_half * np.cos(cfg.theta))
    if x < 1:
        return 1.0
    return float(x + np.sqrt((x - 1) * (x + 1)))


def is_elliptic(cfg: Dim2Config) -> bool:
    return bool(abs(np.cos(cfg.theta)) < 1 / cfg.trace_half)


def log_rho_sl2(trace):
    """``log rho`` of an SL(2, R) matrix as a function of its trace; exactly 0 if elliptic."""
    x = np.abs(np.asarray(trace, dtype=float)) / 2
    return np.where(x <= 1, 0.0, np.arccosh(np.maximum(x, 1.0)))


def rho_2x2(M) -> float:
    """Spectral radius of a real 2x2 matrix from its trace and determinant."""
    M = np.asarray(M, dtype=float)
    tau = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tau * tau / 4 - det
    if disc < 0:
        return float(np.sqrt(det))
    return float(abs(tau) / 2 + np.sqrt(disc))


def _trace_coefficients(A):
    # tr(A R_theta) = p cos(theta) + q sin(theta)
    return A[0, 0] + A[1, 1], A[1, 0] - A[0, 1]


def _log_rho_along(A, theta, det):
    p, q = _trace_coefficients(A)
    tau = p * np.cos(theta) + q * np.sin(theta)
    if det > 0:
        return log_rho_sl2(tau)
    return np.arcsinh(np.abs(tau) / 2)


def _breakpoints(A, det, lo, hi):
    p, q = _trace_coefficients(A)
    r, phi = np.hypot(p, q), np.arctan2(q, p)
    if det > 0:
        if r <= 2:
            return []
        w = np.arccos(2 / r)
        base = [phi - w, phi + w]
    else:
        base = [phi + np.pi / 2]
    pts = []
    for b in base:
        k0 = int(np.floor((lo - b) / np.pi))
        for k in range(k0, k0 + int((hi - lo) / np.pi) + 3):
            x = b + k * np.pi
            if lo < x < hi:
                pts.append(x)
    return sorted(pts)


def integrate_log_rho(A, lo: float, hi: float, n_nodes: int = 1024) -> float:
    """``int_lo^hi log rho(A R_theta) d theta`` for real 2x2 ``A`` with ``det = +-1``.

    The interval is split at every kink of the integrand; on each piece the
    substitution ``theta = m + h (3u - u^3) / 2`` flattens the square-root
    endpoint behaviour before Gauss-Legendre.
    """
    A = as_square(A)
    det = np.linalg.det(A)
    if A.shape != (2, 2) or abs(abs(det) - 1) > TOL.det_tol:
        raise DomainError("expected a 2x2 matrix with determinant +-1")
    u, wu = np.polynomial.legendre.leggauss(n_nodes)
    edges = [lo, *_breakpoints(A, det, lo, hi), hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        m, h = (a + b) / 2, (b - a) / 2
        theta = m + h * (3 * u - u**3) / 2
        jac = h * 1.5 * (1 - u**2)
        total += float(np.sum(wu * jac * _log_rho_along(A, theta, det)))
    return total


def exact_average_2d(a: float, n_nodes: int = 1024) -> float:
    """Average of ``log rho(diag(a, 1/a) R_theta)`` over SO(2), by quadrature."""
    if not a > 0:
        raise DomainError("a must be positive")
    if n_nodes < 1024:
        raise DomainError("use at least 1024 nodes")
    return integrate_log_rho(np.diag([a, 1 / a]), 0.0, TWO_PI, n_nodes) / TWO_PI


def exact_average_o2(a: float, n_nodes: int = 1024) -> float:
    """Average over all of O(2): rotations and reflections weighted 1/2 each."""
    A = np.diag([a, 1 / a])
    refl = A @ np.diag([1.0, -1.0])
    return 0.5 * exact_average_2d(a, n_nodes) + 0.5 * integrate_log_rho(refl, 0.0, TWO_PI, n_nodes) / TWO_PI


def closed_form_average_2d(a: float) -> float:
    return float(np.log((a + 1 / a) / 2))


@dataclass(frozen=True)
class ArcGapMeasure:
    """Probability measure on SO(2) whose support avoids an arc.

    ``gap = (lo, hi)`` is the open arc from ``lo`` to ``hi`` (counter-clockwise,
    may wrap) together with its antipode: ``rho(A R_theta)`` is pi-periodic in
    ``theta``, so a support restriction is only meaningful modulo pi.
    ``gap=None`` means no restriction. Mass is given either by ``atoms``
    (angles with ``weights``) or by piecewise-constant ``cells``
    ``(lo, hi, mass)``.
    """

    gap: tuple | None = None
    atoms: tuple = ()
    weights: tuple = ()
    cells: tuple = ()
    mass_tol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        if self.gap is not None:
            lo, hi = self.gap
            length = (hi - lo) % TWO_PI
            if not 0 < length < np.pi:
                raise DomainError("gap length must lie in (0, pi)")
        if bool(self.atoms) == bool(self.cells):
            raise DomainError("give exactly one of atoms or cells")
        if self.atoms and len(self.atoms) != len(self.weights):
            raise DomainError("atoms and weights differ in length")
        masses = self.weights if self.atoms else [c[2] for c in self.cells]
        if any(m < 0 for m in masses):
            raise DomainError("negative mass")
        if abs(sum(masses) - 1) > self.mass_tol:
            raise DomainError(f"total mass {sum(masses)!r} differs from 1")
        for theta in self.atoms:
            if self.in_gap(theta):
                raise DomainError(f"atom {theta} lies in the gap")
        for lo, hi, _ in self.cells:
            if not hi > lo:
                raise DomainError("cells must have positive length")
            probe = np.linspace(lo, hi, 257)[1:-1]
            if any(self.in_gap(x) for x in probe):
                raise DomainError(f"cell [{lo}, {hi}] meets the gap")

    def in_gap(self, theta: float) -> bool:
        if self.gap is None:
            return False
        lo, hi = self.gap
        length = (hi - lo) % TWO_PI
        x = (theta - lo) % np.pi
        return 0 < x < length


def measure_average_2d(A, mu: ArcGapMeasure, n_nodes: int = 1024) -> float:
    """``int log rho(A R_theta) d mu(theta)`` for ``A`` in SL(2, R)."""
    A = as_square(A)
    if A.shape != (2, 2) or np.iscomplexobj(A):
        raise DomainError("expected a real 2x2 matrix")
    if abs(np.linalg.det(A) - 1) > TOL.det_tol:
        raise DomainError("A must be special linear")
    if mu.atoms:
        theta = np.asarray(mu.atoms, dtype=float)
        p, q = _trace_coefficients(A)
        vals = log_rho_sl2(p * np.cos(theta) + q * np.sin(theta))
        return float(np.dot(mu.weights, vals))
    total = 0.0
    for lo, hi, mass in mu.cells:
        if mass:
            total += mass * integrate_log_rho(A, lo, hi, n_nodes) / (hi - lo)
    return total


@dataclass(frozen=True)
class Counterexample:
    A: np.ndarray
    beta: float
    c: float
    s: float
    alpha: float
    certificate_max_deviation: float
    eigensolver_max_deviation: float
    n_probes: int

    def certificate(self, theta) -> np.ndarray:
        """``rho(A R_theta)`` from the trace; identically 1 off the gap."""
        p, q = _trace_coefficients(self.A)
        tau = p * np.cos(theta) + q * np.sin(theta)
        return np.exp(log_rho_sl2(tau))

    def to_dict(self) -> dict:
        return {"A": self.A.tolist(), "beta": self.beta, "c": self.c, "s": self.s,
                "alpha": self.alpha,
                "certificate_max_deviation": self.certificate_max_deviation,
                "eigensolver_max_deviation": self.eigensolver_max_deviation,
                "n_probes": self.n_probes}


def probe_angles(c: float, s: float, n_probes: int) -> np.ndarray:
    """``n_probes`` angles covering the closed complement of the gap (and its antipode)."""
    half = n_probes // 2
    base = np.linspace(c + s, c + np.pi - s, half)
    rest = np.linspace(c + np.pi + s, c + TWO_PI - s, n_probes - half)
    return np.concatenate([base, rest]) % TWO_PI


def build_counterexample(gap_lo: float, gap_hi: float, beta: float | None = None,
                         n_probes: int = 10_000) -> Counterexample:
    """``A = diag(beta, 1/beta) R_{-c}`` with ``rho(A R_theta) = 1`` off the gap."""
    length = (gap_hi - gap_lo) % TWO_PI
    if not length > 0:
        raise DomainError("gap must have positive length")
    s = length / 2
    if s >= np.pi / 2:
        raise OutOfRegimeError("gap half-length must be below pi/2")
    c = (gap_lo + s) % TWO_PI
    alpha = 1 / np.cos(s)
    if beta is None:
        beta = float(np.exp(np.arccosh(alpha) / 2))
    # beta = 1 gives a pure rotation, which is elliptic everywhere
    if not beta > 0 or (beta != 1 and not beta + 1 / beta < 2 * alpha):
        raise DomainError(f"beta = {beta} violates beta + 1/beta < 2 alpha = {2 * alpha}")
    A = np.diag([beta, 1 / beta]) @ rotation(-c)
    theta = probe_angles(c, s, n_probes)
    p, q = _trace_coefficients(A)
    cert = np.exp(log_rho_sl2(p * np.cos(theta) + q * np.sin(theta)))
    products = A[None] @ np.stack([rotation(t) for t in theta])
    eig = np.max(np.abs(np.linalg.eigvals(products)), axis=1)
    return Counterexample(A, float(beta), float(c), float(s), float(alpha),
                          float(np.max(np.abs(cert - 1))), float(np.max(np.abs(eig - 1))),
                          int(n_probes))
