"""Dense linear algebra primitives.

Matrices are plain ``numpy`` arrays of shape ``(n, n)``, real (float64) or
complex (complex128). A singular spectrum is a 1-D array sorted
nonincreasing.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DecompositionError,
    DomainError,
    OrientationError,
    SingularMatrixError,
)
from .tolerances import TOL


def as_square(A, dtype=None) -> np.ndarray:
    """Return ``A`` as an ``(n, n)`` array, raising ``DomainError`` otherwise."""
    A = np.asarray(A, dtype=dtype)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DomainError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.issubdtype(A.dtype, np.complexfloating):
        A = A.astype(np.float64, copy=False)
    return A


def is_complex(A) -> bool:
    return np.iscomplexobj(A)


def _diagnostics(A):
    finite = bool(np.all(np.isfinite(A)))
    return {
        "finite": finite,
        "max_abs": float(np.max(np.abs(A))) if finite else float("nan"),
        "shape": tuple(A.shape),
    }


def singular_values(A) -> np.ndarray:
    """Singular values of ``A`` in nonincreasing order."""
    A = as_square(A)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD failed: {exc}", _diagnostics(A)) from exc


def svd_factors(A):
    """Factor ``A = P1 @ diag(sigma) @ P2`` with ``P1``, ``P2`` orthogonal/unitary."""
    A = as_square(A)
    try:
        P1, sigma, P2 = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD failed: {exc}", _diagnostics(A)) from exc
    return P1, sigma, P2


def eigenvalues(A) -> np.ndarray:
    A = as_square(A)
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"eigensolver failed: {exc}", _diagnostics(A)) from exc


def spectral_radius(A) -> float:
    """Largest eigenvalue modulus, via a full (Hessenberg/Schur) eigensolve."""
    return float(np.max(np.abs(eigenvalues(A))))


def spectral_radii(stack) -> np.ndarray:
    """Spectral radius of each matrix in a ``(m, n, n)`` stack."""
    stack = np.asarray(stack)
    try:
        return np.max(np.abs(np.linalg.eigvals(stack)), axis=-1)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"batched eigensolver failed: {exc}") from exc


def operator_norm(A) -> float:
    return float(singular_values(A)[0])


def determinant(A):
    d = np.linalg.det(as_square(A))
    return complex(d) if np.iscomplexobj(d) else float(d)


def normalize_to_sl(A, singular_tol: float = TOL.singular_tol) -> np.ndarray:
    """Scale ``A`` by ``det(A)**(-1/n)`` so that the result has determinant 1.

    Real matrices must have positive determinant; for complex matrices the
    principal ``n``-th root of the determinant is used.
    """
    A = as_square(A)
    n = A.shape[0]
    det = np.linalg.det(A)
    if abs(det) < singular_tol:
        raise SingularMatrixError(f"|det A| = {abs(det):.3e} below {singular_tol:.1e}")
    if np.iscomplexobj(A):
        return A / complex(det) ** (1.0 / n)
    if det < 0:
        raise OrientationError("det A < 0; flip the sign of one row before normalizing")
    return A / det ** (1.0 / n)


def is_special_linear(A, det_tol: float = TOL.det_tol) -> bool:
    return abs(np.linalg.det(as_square(A)) - 1.0) <= det_tol


def orthogonality_residual(X) -> float:
    """``max |X^H X - I|`` entrywise."""
    X = as_square(X)
    G = X.conj().T @ X
    return float(np.max(np.abs(G - np.eye(X.shape[0]))))


def is_orthogonal(X, ortho_tol: float = TOL.ortho_tol) -> bool:
    return orthogonality_residual(X) <= ortho_tol


def distance_from_identity(A) -> float:
    """``max_i |log sigma_i(A)|``; zero exactly on the orthogonal group."""
    return float(np.max(np.abs(np.log(singular_values(A)))))


def rotation(theta: float) -> np.ndarray:
    """The SO(2) element ``[[cos, sin], [-sin, cos]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class DiagonalSpec:
    """Exponent vector for the diagonal family ``diag(exp(d_1 t), ..., exp(d_n t))``.

    ``exponents`` must be nonincreasing. ``traceless`` and ``normalized``
    flag the constraints ``sum(d) = 0`` and ``max(|d_1|, |d_n|) = 1``; they
    are checked on construction.
    """

    exponents: tuple
    scale: float = 1.0
    traceless: bool = False
    normalized: bool = False
    tol: float = field(default=TOL.exponent_tol, repr=False, compare=False)

    def __post_init__(self):
        d = tuple(float(x) for x in self.exponents)
        object.__setattr__(self, "exponents", d)
        if len(d) < 1:
            raise DomainError("exponent vector must be non-empty")
        if any(d[i] < d[i + 1] for i in range(len(d) - 1)):
            raise DomainError(f"exponents must be nonincreasing, got {d}")
        if self.scale < 0:
            raise DomainError("scale must be nonnegative")
        if self.traceless and abs(sum(d)) > self.tol:
            raise DomainError(f"exponents not traceless: sum = {sum(d):.3e}")
        if self.normalized and abs(max(abs(d[0]), abs(d[-1])) - 1.0) > self.tol:
            raise DomainError("exponents not normalized to max(|d_1|, |d_n|) = 1")

    @classmethod
    def traceless_normalized(cls, raw: Sequence[float], scale: float = 1.0) -> "DiagonalSpec":
        """Project ``raw`` onto the trace-zero plane, sort and rescale."""
        d = np.sort(np.asarray(raw, dtype=float))[::-1]
        d = d - d.mean()
        m = max(abs(d[0]), abs(d[-1]))
        if m == 0:
            raise DomainError("cannot normalize the zero exponent vector")
        d = d / m
        # sorted order survives the affine map; pin the extreme to exactly +-1
        if abs(d[0]) >= abs(d[-1]):
            d[0] = 1.0
        else:
            d[-1] = -1.0
        return cls(tuple(d), scale=scale, traceless=True, normalized=True, tol=1e-12)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def with_scale(self, scale: float) -> "DiagonalSpec":
        return DiagonalSpec(self.exponents, scale, self.traceless, self.normalized, self.tol)

    def diagonal(self) -> np.ndarray:
        return np.exp(self.scale * np.asarray(self.exponents))

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal())

    def log_sigma1(self) -> float:
        """``log`` of the operator norm of ``matrix()``."""
        return self.scale * self.exponents[0]


def matrix_to_json(A) -> dict:
    A = as_square(A)
    if np.iscomplexobj(A):
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in A]
        field_ = "complex"
    else:
        rows = [[float(x) for x in row] for row in A]
        field_ = "real"
    return {"dim": int(A.shape[0]), "field": field_, "rows": rows}


def matrix_from_json(obj) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`; accepts a dict or a JSON string."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        n = int(obj["dim"])
        field_ = obj.get("field", "real")
        rows = obj["rows"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed matrix literal: {exc}") from exc
    if field_ == "complex":
        A = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
    elif field_ == "real":
        A = np.array(rows, dtype=float)
    else:
        raise DomainError(f"unknown field {field_!r}")
    if A.shape != (n, n):
        raise DomainError(f"matrix literal declares dim {n} but rows have shape {A.shape}")
    return A
