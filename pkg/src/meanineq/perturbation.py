"""Eigenvalue localization and first-order perturbation.

Gershgorin disks, the spectral-radius bracket for ``diag(d) (I + t M)``,
first-order derivatives of simple eigenvalues through the spectral
projection, and the rotations ``X0`` used to show that the average log
spectral radius grows linearly away from the identity when ``n >= 3``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateEigenvalueError, DomainError, OutOfRegimeError
from .linalg import DiagonalSpec, as_square, eigenvalues, operator_norm, spectral_radius
from .tolerances import TOL


@dataclass(frozen=True)
class GershgorinDisk:
    center: complex
    radius: float
    index: int
    variant: str  # "row" or "column"

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return abs(z - self.center) <= self.radius + tol

    def to_dict(self) -> dict:
        return {"center": [self.center.real, self.center.imag], "radius": self.radius,
                "index": self.index, "variant": self.variant}


def gershgorin_disks(A) -> list:
    """The ``n`` row disks followed by the ``n`` column disks of ``A``."""
    A = as_square(A)
    absA = np.abs(A)
    diag = np.diagonal(A)
    off = absA - np.diag(np.abs(diag))
    rows = off.sum(axis=1)
    cols = off.sum(axis=0)
    disks = [GershgorinDisk(complex(diag[i]), float(rows[i]), i, "row") for i in range(len(diag))]
    disks += [GershgorinDisk(complex(diag[i]), float(cols[i]), i, "column") for i in range(len(diag))]
    return disks


@dataclass(frozen=True)
class ContainmentWitness:
    eigenvalue: complex
    row: int | None
    column: int | None

    def to_dict(self) -> dict:
        return {"eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
                "row": self.row, "column": self.column}


@dataclass(frozen=True)
class ContainmentResult:
    contained: bool
    witnesses: list
    disks: list

    def __bool__(self):
        return self.contained

    def to_dict(self) -> dict:
        return {"contained": self.contained,
                "witnesses": [w.to_dict() for w in self.witnesses],
                "disks": [d.to_dict() for d in self.disks]}


def _witness(z, disks, tol):
    # prefer the disk with the most slack so witnesses are stable under roundoff
    best, best_slack = None, -np.inf
    for d in disks:
        slack = d.radius + tol - abs(z - d.center)
        if slack >= 0 and slack > best_slack:
            best, best_slack = d.index, slack
    return best


def check_eigenvalue_containment(A, tol: float | None = None) -> ContainmentResult:
    """Check that every eigenvalue lies in a row disk and in a column disk."""
    A = as_square(A)
    if tol is None:
        tol = TOL.containment * (1 + operator_norm(A))
    disks = gershgorin_disks(A)
    rows = [d for d in disks if d.variant == "row"]
    cols = [d for d in disks if d.variant == "column"]
    witnesses = []
    for lam in eigenvalues(A):
        lam = complex(lam)
        witnesses.append(ContainmentWitness(lam, _witness(lam, rows, tol), _witness(lam, cols, tol)))
    ok = all(w.row is not None and w.column is not None for w in witnesses)
    return ContainmentResult(ok, witnesses, disks)


@dataclass(frozen=True)
class RadiusBracket:
    lower: float
    upper: float
    actual: float

    @property
    def holds(self) -> bool:
        return self.lower - 1e-9 <= self.actual <= self.upper + 1e-9


def perturbed_radius_bounds(d, M, t: float) -> RadiusBracket:
    """Bracket ``d_1 (1 - 2 n t) <= rho(diag(d) (I + t M)) <= d_1 (1 + 2 t)``.

    ``M`` must have every absolute row sum at most 1 (induced infinity
    norm), which bounds each Gershgorin radius of row ``i`` by ``d_i t``.
    """
    d = np.asarray(d, dtype=float)
    M = as_square(M)
    n = d.size
    if M.shape[0] != n:
        raise DomainError("M and d have different dimensions")
    if np.any(d <= 0) or np.any(np.diff(d) > 0):
        raise DomainError("d must be positive and nonincreasing")
    if np.max(np.sum(np.abs(M), axis=1)) > 1 + 1e-12:
        raise DomainError("M must have absolute row sums at most 1")
    if not 0 <= t < 1 / (2 * n):
        raise OutOfRegimeError(f"t = {t} outside [0, 1/(2n)) = [0, {1 / (2 * n):.4g})")
    At = d[:, None] * (np.eye(n) + t * M)
    return RadiusBracket(d[0] * (1 - 2 * n * t), d[0] * (1 + 2 * t), spectral_radius(At))


@dataclass(frozen=True)
class EigenPair:
    """A simple eigenvalue with unit right eigenvector and, optionally, unit left eigenvector."""

    value: complex
    vector: np.ndarray
    gap: float
    left: np.ndarray | None = None

    def projection(self) -> np.ndarray:
        """Spectral projection ``v w^H / (w^H v)``; ``v v^H`` when no left vector is stored."""
        v = self.vector
        w = v if self.left is None else self.left
        return np.outer(v, w.conj()) / np.vdot(w, v)


def _unit(v):
    return v / np.linalg.norm(v)


def eigenpair(T, target: complex | None = None) -> EigenPair:
    """Eigenpair of ``T`` nearest ``target`` (largest modulus when omitted)."""
    T = as_square(T)
    vals, vl, vr = scipy.linalg.eig(T, left=True, right=True)
    k = int(np.argmax(np.abs(vals))) if target is None else int(np.argmin(np.abs(vals - target)))
    others = np.delete(vals, k)
    gap = float(np.min(np.abs(others - vals[k]))) if others.size else np.inf
    return EigenPair(complex(vals[k]), _unit(vr[:, k].astype(complex)), gap,
                     _unit(vl[:, k].astype(complex)))


def tracked_eigenvalue(T, target: complex) -> complex:
    vals = eigenvalues(T)
    return complex(vals[np.argmin(np.abs(vals - target))])


def _left_vector(T0, pair):
    if pair.left is not None:
        return pair.left
    return eigenpair(T0.conj().T, np.conj(pair.value)).vector


def _require_simple(T0, pair, gap_tol):
    if gap_tol is None:
        gap_tol = TOL.gap_rel * max(operator_norm(T0), 1e-300)
    if not pair.gap > gap_tol:
        raise DegenerateEigenvalueError(f"eigenvalue gap {pair.gap:.3e} <= {gap_tol:.3e}")


def kato_derivative(T0, direction, pair: EigenPair, gap_tol: float | None = None) -> complex:
    """``d lambda / dx`` at 0 along ``T0 + x * direction``, i.e. ``tr(direction P)``."""
    T0 = as_square(T0)
    direction = as_square(direction)
    _require_simple(T0, pair, gap_tol)
    v = pair.vector
    w = _left_vector(T0, pair)
    return complex(np.vdot(w, direction @ v) / np.vdot(w, v))


def exp_family_log_derivative(d, T, pair: EigenPair, gap_tol: float | None = None) -> complex:
    """``(d lambda / dx) / lambda`` for ``T(x) = diag(exp(d x)) T`` at ``x = 0``.

    Equals ``sum d_i |v_i|^2`` when ``T`` is normal; real in that case.
    """
    T = as_square(T)
    d = np.asarray(d, dtype=float)
    _require_simple(T, pair, gap_tol)
    v = pair.vector
    w = _left_vector(T, pair)
    return complex(np.vdot(w, d * v) / np.vdot(w, v))


def exp_family_derivative(d, T, pair: EigenPair, gap_tol: float | None = None) -> complex:
    return pair.value * exp_family_log_derivative(d, T, pair, gap_tol)


def central_difference(f, h: float = TOL.fd_step) -> complex:
    return (f(h) - f(-h)) / (2 * h)


def fd_eigen_derivative(T_of_x, lam0: complex, h: float = TOL.fd_step) -> complex:
    """Central difference of the eigenvalue of ``T_of_x(x)`` tracked from ``lam0``."""
    return central_difference(lambda x: tracked_eigenvalue(T_of_x(x), lam0), h)


def construct_x0(n: int):
    """Orthogonal ``X0`` with a designated simple unit-modulus eigenvalue.

    Odd ``n``: ``diag(1, -1, ..., -1)`` (half-turn about ``e_1``), eigenvalue 1
    with eigenvector ``e_1``. Even ``n``: quarter-turn of the ``(e_1, e_2)``
    plane, eigenvalue ``i`` with eigenvector ``(1, i, 0, ..., 0) / sqrt(2)``.
    """
    if n < 3:
        raise DomainError("the X0 construction needs n >= 3")
    if n % 2:
        X0 = -np.eye(n)
        X0[0, 0] = 1.0
        v = np.zeros(n, dtype=complex)
        v[0] = 1.0
        return X0, EigenPair(1.0 + 0j, v, 2.0, v)
    X0 = np.eye(n)
    X0[:2, :2] = [[0.0, 1.0], [-1.0, 0.0]]
    v = np.zeros(n, dtype=complex)
    v[:2] = [1.0, 1j]
    v /= np.sqrt(2)
    return X0, EigenPair(1j, v, float(np.sqrt(2)), v)


@dataclass(frozen=True)
class LocalDerivative:
    derivative: float  # d/dt log|lambda_0| at t = 0
    floor: float  # (n - 2) / (2 (n - 1)) * d_1
    exact: float  # d_1 (odd n) or (d_1 + d_2) / 2 (even n)
    imag: float

    @property
    def holds(self) -> bool:
        return self.derivative >= self.floor - 1e-10


def local_derivative_inequality(n: int, d: DiagonalSpec | tuple) -> LocalDerivative:
    if not isinstance(d, DiagonalSpec):
        d = DiagonalSpec(tuple(d), traceless=True, normalized=True)
    if not (d.traceless and d.normalized):
        raise DomainError("d must be traceless and normalized")
    if d.dim != n:
        raise DomainError(f"d has dimension {d.dim}, expected {n}")
    X0, pair = construct_x0(n)
    ex = np.asarray(d.exponents)
    logd = exp_family_log_derivative(ex, X0, pair)
    exact = ex[0] if n % 2 else (ex[0] + ex[1]) / 2
    floor = (n - 2) / (2 * (n - 1)) * float(ex[0])
    return LocalDerivative(logd.real, floor, float(exact), logd.imag)


@dataclass(frozen=True)
class DerivativeCheck:
    value: complex
    kato: complex
    expvar: complex
    finite_difference: complex
    log_derivative_imag: float

    @property
    def fd_error(self) -> float:
        return abs(self.kato - self.finite_difference) / (1 + abs(self.value))

    @property
    def consistency_error(self) -> float:
        return abs(self.kato - self.expvar) / (1 + abs(self.value))


def derivative_check(d, T, pair: EigenPair, h: float = TOL.fd_step) -> DerivativeCheck:
    """Kato formula, the exponential-family formula and central differences side by side."""
    T = as_square(T)
    d = np.asarray(d, dtype=float)
    kato = kato_derivative(T, d[:, None] * T, pair)
    logd = exp_family_log_derivative(d, T, pair)
    fd = fd_eigen_derivative(lambda x: np.exp(d * x)[:, None] * T, pair.value, h)
    return DerivativeCheck(pair.value, kato, pair.value * logd, fd, abs(logd.imag))


def random_simple_instances(n: int, stream, count: int, min_gap: float = 0.1,
                            group: str = "O"):
    """Yield ``(d, T, pair)`` with Haar ``T`` and an eigenvalue whose gap is at least ``min_gap``.

    Candidates are drawn in index order from ``stream``; matrices with no
    sufficiently isolated eigenvalue are skipped.
    """
    from .sampling import draw_indexed, haar_batch

    found, offset = 0, 0
    while found < count:
        T = haar_batch(n, stream.child(0).at(offset), 1, group)[0]
        d = draw_indexed(stream.child(1).at(offset), 1, "direction",
                         lambda rng, m: rng.uniform(-1, 1, (m, n)))[0]
        offset += 1
        vals = eigenvalues(T)
        gaps = np.array([np.min(np.abs(np.delete(vals, k) - vals[k])) for k in range(n)])
        ok = np.flatnonzero(gaps >= min_gap)
        if ok.size == 0:
            continue
        k = ok[offset % ok.size]
        found += 1
        yield d, T, eigenpair(T, vals[k])
