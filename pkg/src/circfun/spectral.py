"""Spectral decomposition of circulants.

All circulants of one order share the same eigenvectors, the columns of the
symmetric Vandermonde matrix S built from the d-th roots of unity.  The
eigenvalues u_1..u_d (the "spectrum", indexed by channel) are the conjugate
discrete Fourier transform of the first row, so the transform pair is exactly
the standard DFT/inverse-DFT.  Every ring operation acts channel-wise on the
spectrum, which is what the rest of the package exploits.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .core import Circulant, get_fft_threshold
from .errors import DimensionError


@dataclass(frozen=True)
class FourierContext:
    """Cached root-of-unity tables for one order d."""

    d: int
    omega: complex

    @functools.cached_property
    def power_table(self) -> np.ndarray:
        """omega^k for k = 0..d-1, with exact values on the quadrant axes."""
        k = np.arange(self.d)
        table = np.exp(2j * np.pi * k / self.d)
        on_axis = (4 * k) % self.d == 0
        quadrant = np.array([1.0, 1j, -1.0, -1j])
        table[on_axis] = quadrant[(4 * k[on_axis] // self.d) % 4]
        return table

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        """The full d x d matrix S with entries omega^(i*j), 0-based."""
        d = self.d
        exponents = np.outer(np.arange(d), np.arange(d)) % d
        return self.power_table[exponents]

    @functools.cached_property
    def inverse_matrix(self) -> np.ndarray:
        """S^-1, whose entries are the conjugated entries of S divided by d."""
        return np.conj(self.matrix) / self.d


@functools.lru_cache(maxsize=64)
def fourier_context(d: int) -> FourierContext:
    if d < 2:
        raise DimensionError(f"order must be >= 2, got {d}")
    return FourierContext(d=d, omega=complex(np.exp(2j * np.pi / d)))


def fourier_matrix(d: int) -> np.ndarray:
    """The symmetric Vandermonde matrix S; (sqrt(d)/d) * S is unitary."""
    return fourier_context(d).matrix.copy()


def spectrum(x: Circulant) -> np.ndarray:
    """Eigenvalues u_i = sum_j row_j * conj(omega)^((i-1)(j-1)), channel order i = 1..d.

    This is the forward DFT of the first row: the FFT kernel is used at or
    above the multiplication threshold, the exact summation below it.
    """
    if x.d >= get_fft_threshold():
        return np.fft.fft(x.row)
    ctx = fourier_context(x.d)
    return np.conj(ctx.matrix) @ x.row


def from_spectrum(values: np.ndarray) -> Circulant:
    """Inverse of :func:`spectrum`: rebuild the circulant whose eigenvalues are given."""
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim != 1 or values.size < 2:
        raise DimensionError(f"spectrum must be a vector of length >= 2, got shape {values.shape}")
    if values.size >= get_fft_threshold():
        return Circulant(np.fft.ifft(values))
    ctx = fourier_context(values.size)
    return Circulant((ctx.matrix @ values) / values.size)


def pseudoinverse(x: Circulant, rel_tol: float | None = None) -> Circulant:
    """Moore-Penrose pseudoinverse, computed spectrally.

    Channels whose eigenvalue modulus is at most ``rel_tol * max_j |u_j|``
    are treated as rank-deficient and zeroed; the rest are inverted.  The
    default tolerance is ``1e-12 * d``.  The zero matrix maps to itself.
    """
    if rel_tol is None:
        rel_tol = 1e-12 * x.d
    if rel_tol < 0:
        raise ValueError(f"rel_tol must be >= 0, got {rel_tol}")
    u = spectrum(x)
    largest = np.max(np.abs(u))
    if largest == 0.0:
        return from_spectrum(np.zeros_like(u))
    keep = np.abs(u) > rel_tol * largest
    inverted = np.zeros_like(u)
    inverted[keep] = 1.0 / u[keep]
    return from_spectrum(inverted)


def is_invertible(x: Circulant, rel_tol: float | None = None) -> bool:
    """True when every eigenvalue clears the relative rank threshold."""
    if rel_tol is None:
        rel_tol = 1e-12 * x.d
    u = np.abs(spectrum(x))
    largest = np.max(u)
    return bool(largest > 0.0 and np.min(u) > rel_tol * largest)
