"""Seeded, index-addressable random sampling.

Samples are produced in fixed-size blocks. Block ``b`` of a stream is drawn
from a generator seeded by ``(seed, sampler tag, key, b)``, so sample ``i``
depends only on the stream identity and ``i``. Any partition of an index
range across workers therefore reproduces the same samples bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError
from .linalg import DiagonalSpec

BLOCK_SIZE = 1024

_TAGS = {
    "O": 1,
    "SO": 2,
    "U": 3,
    "sphere": 4,
    "invariant": 5,
    "direction": 6,
    "sl": 7,
    "weights": 8,
}

GROUPS = ("O", "SO", "U")


@dataclass(frozen=True)
class SeededStream:
    """A reproducible stream of samples.

    ``stream_index`` is the index of the next sample; ``key`` distinguishes
    independent child streams derived from one seed.
    """

    seed: int
    stream_index: int = 0
    key: tuple = field(default=())

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream_index < 0:
            raise ConfigurationError("stream_index must be nonnegative")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "key", tuple(int(k) for k in self.key))

    def child(self, k: int) -> "SeededStream":
        """Independent stream, starting at index 0."""
        return SeededStream(self.seed, 0, self.key + (k,))

    def at(self, offset: int) -> "SeededStream":
        """The same stream advanced by ``offset`` samples."""
        return replace(self, stream_index=self.stream_index + offset)


def _block_rng(stream: SeededStream, tag: str, block: int) -> np.random.Generator:
    entropy = [stream.seed, _TAGS[tag], len(stream.key), *stream.key, block]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def draw_indexed(stream: SeededStream, count: int, tag: str,
                 draw: Callable[[np.random.Generator, int], np.ndarray]) -> np.ndarray:
    """Samples ``stream_index .. stream_index + count - 1`` of a blocked sampler.

    ``draw(rng, BLOCK_SIZE)`` must return one full block with the sample
    axis first.
    """
    if count < 0:
        raise DomainError("count must be nonnegative")
    start = stream.stream_index
    stop = start + count
    parts = []
    for b in range(start // BLOCK_SIZE, (stop - 1) // BLOCK_SIZE + 1 if count else 0):
        block = draw(_block_rng(stream, tag, b), BLOCK_SIZE)
        lo = max(start, b * BLOCK_SIZE) - b * BLOCK_SIZE
        hi = min(stop, (b + 1) * BLOCK_SIZE) - b * BLOCK_SIZE
        parts.append(block[lo:hi])
    if not parts:
        empty = draw(np.random.default_rng(0), 1)
        return empty[:0]
    return np.concatenate(parts)


def _haar_from_rng(rng, m, n, group):
    if group == "U":
        G = (rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n))) / np.sqrt(2)
    else:
        G = rng.standard_normal((m, n, n))
    Q, R = np.linalg.qr(G)
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    # the phase correction is what makes Q Haar-distributed rather than
    # biased by the QR sign convention
    if group == "U":
        mod = np.abs(diag)
        phase = np.where(mod > 0, diag / np.where(mod > 0, mod, 1), 1)
    else:
        phase = np.where(diag < 0, -1.0, 1.0)
    Q = Q * phase[:, None, :]
    if group == "SO":
        flip = np.linalg.det(Q) < 0
        Q[flip, :, 0] *= -1
    return Q


def haar_batch(n: int, stream: SeededStream, count: int, group: str = "O") -> np.ndarray:
    """``count`` consecutive Haar samples from O(n), SO(n) or U(n), shape ``(count, n, n)``."""
    if n < 1:
        raise DomainError("dimension must be positive")
    if group not in GROUPS:
        raise ConfigurationError(f"unknown group {group!r}; expected one of {GROUPS}")
    return draw_indexed(stream, count, group, lambda rng, m: _haar_from_rng(rng, m, n, group))


def sample_haar_orthogonal(n: int, stream: SeededStream, special: bool = False) -> np.ndarray:
    """Haar-random element of O(n) (or SO(n) with ``special=True``)."""
    return haar_batch(n, stream, 1, "SO" if special else "O")[0]


def sample_haar_unitary(n: int, stream: SeededStream) -> np.ndarray:
    return haar_batch(n, stream, 1, "U")[0]


def _sphere_from_rng(rng, m, n):
    G = rng.standard_normal((m, n))
    norms = np.linalg.norm(G, axis=1)
    bad = norms == 0
    while np.any(bad):
        G[bad] = rng.standard_normal((int(bad.sum()), n))
        norms = np.linalg.norm(G, axis=1)
        bad = norms == 0
    return G / norms[:, None]


def sphere_batch(n: int, stream: SeededStream, count: int) -> np.ndarray:
    """Uniform points on the unit sphere of R^n, shape ``(count, n)``."""
    if n < 1:
        raise DomainError("dimension must be positive")
    return draw_indexed(stream, count, "sphere", lambda rng, m: _sphere_from_rng(rng, m, n))


def sample_sphere(n: int, stream: SeededStream) -> np.ndarray:
    return sphere_batch(n, stream, 1)[0]


@dataclass(frozen=True)
class InvariantMeasureSpec:
    """A bi-invariant probability law on SL(n), described by its singular-value law.

    ``law="fixed"`` uses ``spectrum`` for every sample. ``law="loguniform"``
    draws exponents uniformly from ``[-half_width, half_width]``, removes
    their mean and exponentiates.
    """

    dim: int
    law: str = "fixed"
    spectrum: tuple | None = None
    half_width: float | None = None
    field: str = "real"

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigurationError("dim must be positive")
        if self.field not in ("real", "complex"):
            raise ConfigurationError(f"unknown field {self.field!r}")
        if self.law == "fixed":
            if self.spectrum is None or len(self.spectrum) != self.dim:
                raise ConfigurationError("fixed law needs a spectrum of length dim")
            s = np.sort(np.asarray(self.spectrum, dtype=float))[::-1]
            if np.any(s <= 0):
                raise ConfigurationError("singular values must be positive")
            if abs(np.sum(np.log(s))) > 1e-10:
                raise ConfigurationError("fixed spectrum must have product 1")
            object.__setattr__(self, "spectrum", tuple(float(x) for x in s))
        elif self.law == "loguniform":
            if self.half_width is None or not self.half_width > 0:
                raise ConfigurationError("loguniform law needs half_width > 0")
        else:
            raise ConfigurationError(f"unknown singular law {self.law!r}")

    @property
    def group(self) -> str:
        return "U" if self.field == "complex" else "O"


def _invariant_from_rng(rng, m, spec):
    n = spec.dim
    X1 = _haar_from_rng(rng, m, n, spec.group)
    X2 = _haar_from_rng(rng, m, n, spec.group)
    # put X2 in the determinant component that makes det(X1 X2) = 1; the law
    # stays invariant under left and right multiplication by SO(n) (SU(n))
    det = np.linalg.det(X1) * np.linalg.det(X2)
    if spec.group == "U":
        X2 = X2 * (np.conj(det) ** (1.0 / n))[:, None, None]
    else:
        X2[det < 0, 0, :] *= -1
    if spec.law == "fixed":
        sigma = np.broadcast_to(np.asarray(spec.spectrum), (m, n)).copy()
    else:
        e = rng.uniform(-spec.half_width, spec.half_width, (m, n))
        e -= e.mean(axis=1, keepdims=True)
        sigma = np.sort(np.exp(e), axis=1)[:, ::-1]
    Y = (X1 * sigma[:, None, :]) @ X2
    # pack sigma alongside so one draw call yields both
    packed = np.concatenate([Y.reshape(m, -1), sigma.astype(Y.dtype)], axis=1)
    return packed


def invariant_sl_batch(spec: InvariantMeasureSpec, stream: SeededStream, count: int,
                       return_spectrum: bool = False):
    """Samples ``X1 @ diag(sigma) @ X2`` with ``sigma`` from the law.

    ``X1`` is Haar on O(n) (or U(n)); ``X2`` is Haar on the component of the
    group for which ``det(X1 X2) = 1``, so every sample lies in SL(n).
    """
    n = spec.dim
    packed = draw_indexed(stream, count, "invariant",
                          lambda rng, m: _invariant_from_rng(rng, m, spec))
    Y = packed[:, : n * n].reshape(count, n, n)
    if return_spectrum:
        return Y, packed[:, n * n:].real.copy()
    return Y


def sample_invariant_sl(spec: InvariantMeasureSpec, stream: SeededStream) -> np.ndarray:
    return invariant_sl_batch(spec, stream, 1)[0]


def random_traceless_directions(n: int, stream: SeededStream, count: int) -> list:
    """Random traceless exponent vectors normalized to ``max(|d_1|, |d_n|) = 1``."""
    raw = draw_indexed(stream, count, "direction", lambda rng, m: rng.standard_normal((m, n)))
    return [DiagonalSpec.traceless_normalized(r) for r in raw]


def random_sl_matrices(n: int, stream: SeededStream, count: int, field: str = "real") -> np.ndarray:
    """Gaussian matrices rescaled into SL(n); real ones get a row flipped if det < 0."""
    def draw(rng, m):
        G = rng.standard_normal((m, n, n))
        if field == "complex":
            G = G + 1j * rng.standard_normal((m, n, n))
        return G

    G = draw_indexed(stream, count, "sl", draw)
    det = np.linalg.det(G)
    if field == "complex":
        return G / (det ** (1.0 / n))[:, None, None]
    G[det < 0, 0, :] *= -1
    return G / (np.abs(det) ** (1.0 / n))[:, None, None]


def random_sl_weights(n: int, stream: SeededStream, count: int,
                      min_distance: float = 0.5, max_distance: float = 2.0) -> np.ndarray:
    """Positive weight vectors with unit product and ``max |log a_i|`` in the given range."""
    if n < 2:
        raise DomainError("nontrivial unit-product weights need n >= 2")
    if not 0 < min_distance <= max_distance:
        raise ConfigurationError("need 0 < min_distance <= max_distance")

    def draw(rng, m):
        e = rng.standard_normal((m, n))
        e -= e.mean(axis=1, keepdims=True)
        scale = rng.uniform(min_distance, max_distance, m)
        return e, scale

    out = draw_indexed(stream, count, "weights",
                       lambda rng, m: np.concatenate([x.reshape(m, -1) for x in draw(rng, m)], axis=1))
    e, scale = out[:, :n], out[:, n]
    e = e / np.max(np.abs(e), axis=1, keepdims=True) * scale[:, None]
    return np.exp(e)
