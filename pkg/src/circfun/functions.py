"""Polynomial, rational, and exponential-polynomial functions of a circulant
variable, together with their evaluation and differentiation.

Because every circulant of order d diagonalizes in the common Fourier basis,
a function with circulant coefficients splits into d independent scalar
"channel" functions of one complex variable each.  Evaluation works either in
the ring directly (Horner) or channel-wise on the spectrum; differentiation
uses the channel rule: the derivative's i-th eigenvalue is the ordinary
scalar derivative of the i-th channel function at the i-th eigenvalue of the
argument.  A finite-difference variant is provided for cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import core
from .core import Circulant
from .errors import (
    ChannelSingularityError,
    DimensionError,
    InvalidIncrementError,
)
from .spectral import from_spectrum, is_invertible, pseudoinverse, spectrum

#: Relative tolerance for deciding that a spectral coefficient vanishes,
#: measured against the largest spectral magnitude over all coefficients.
COEFFICIENT_REL_TOL = 1e-10

#: Relative tolerance below which a channel denominator counts as a pole.
SINGULARITY_REL_TOL = 1e-12

#: Spectral coefficients this far below the largest one are rounding junk
#: from the transform of structured coefficients; they are snapped to zero
#: so that degree drops stay exact.
SPECTRAL_SNAP_REL_TOL = 1e-14


class CircPoly:
    """A polynomial with circulant coefficients, leading coefficient first.

    ``CircPoly([a0, a1, a2])`` represents a0*Z^2 + a1*Z + a2.
    """

    def __init__(self, coeffs: Sequence[Circulant]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        d = coeffs[0].d
        for c in coeffs:
            if c.d != d:
                raise DimensionError(f"coefficient order mismatch: {c.d} vs {d}")
        self.coeffs = coeffs
        self.d = d
        self._channel_matrix: np.ndarray | None = None

    @classmethod
    def from_scalars(cls, scalars: Sequence[complex], d: int) -> "CircPoly":
        """Polynomial whose coefficients are scalar multiples of the identity."""
        return cls([core.scale(s, core.identity(d)) for s in scalars])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, z: Circulant) -> Circulant:
        """Horner evaluation in the circulant ring."""
        if z.d != self.d:
            raise DimensionError(f"order mismatch: point has {z.d}, coefficients have {self.d}")
        acc = self.coeffs[0]
        for c in self.coeffs[1:]:
            acc = core.add(core.mul(acc, z), c)
        return acc

    def channel_matrix(self) -> np.ndarray:
        """Spectral coefficients, shape (degree + 1, d); column i is channel i.

        Entries below ``SPECTRAL_SNAP_REL_TOL`` times the largest magnitude
        are zeroed: they are transform round-off, and keeping them would turn
        exact channel degree drops into huge spurious terms at large
        arguments.  Computed once and cached; the returned array is read-only.
        """
        if self._channel_matrix is None:
            cm = np.stack([spectrum(c) for c in self.coeffs])
            top = np.max(np.abs(cm))
            if top > 0.0:
                cm[np.abs(cm) <= SPECTRAL_SNAP_REL_TOL * top] = 0.0
            cm.flags.writeable = False
            self._channel_matrix = cm
        return self._channel_matrix

    def derivative_poly(self) -> "CircPoly":
        """Formal derivative; the zero polynomial for constants."""
        n = self.degree
        if n == 0:
            return CircPoly([core.zero(self.d)])
        return CircPoly([core.scale(n - k, self.coeffs[k]) for k in range(n)])

    def __mul__(self, other: "CircPoly") -> "CircPoly":
        if not isinstance(other, CircPoly):
            return NotImplemented
        out = [core.zero(self.d) for _ in range(self.degree + other.degree + 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = core.add(out[i + j], core.mul(a, b))
        return CircPoly(out)

    def __repr__(self) -> str:
        return f"CircPoly(d={self.d}, degree={self.degree})"


def poly_eval(p: CircPoly, z: Circulant) -> Circulant:
    return p.evaluate(z)


@dataclass(frozen=True)
class ScalarPoly:
    """One channel of a circulant polynomial: plain complex coefficients,
    leading first.  ``channel`` is the 0-based channel index."""

    channel: int
    coeffs: np.ndarray

    def __call__(self, u: complex) -> complex:
        return complex(np.polyval(self.coeffs, u))


def channel_polys(p: CircPoly) -> list[ScalarPoly]:
    """Decompose into the d scalar channel polynomials."""
    cm = p.channel_matrix()
    return [ScalarPoly(channel=i, coeffs=cm[:, i].copy()) for i in range(p.d)]


@dataclass(frozen=True)
class Classification:
    """Regular/singular verdict for a circulant polynomial."""

    regular: bool
    vanishing_channels: tuple[int, ...]  # 1-based
    coefficient_scale: float


def classify(p: CircPoly, rel_tol: float = COEFFICIENT_REL_TOL) -> Classification:
    """Regular iff the leading coefficient is invertible.

    The per-channel test compares the leading spectral coefficient against
    the largest spectral magnitude over all coefficients.
    """
    cm = p.channel_matrix()
    scale = float(np.max(np.abs(cm)))
    if scale == 0.0:
        vanishing = tuple(range(1, p.d + 1))
        return Classification(False, vanishing, 0.0)
    leading = np.abs(cm[0])
    vanishing = tuple(int(i) + 1 for i in np.nonzero(leading <= rel_tol * scale)[0])
    return Classification(not vanishing, vanishing, scale)


def polyval_with_scale(coeffs: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Horner value of a scalar polynomial together with a running magnitude
    scale, vectorized over evaluation points.

    ``coeffs`` may be 1-D (one polynomial) or 2-D with one column per point
    (channel matrix against a spectrum).  The scale sum |c_k| |u|^(n-k) gives
    a condition-aware yardstick for deciding whether a value is "zero".
    """
    u = np.asarray(u, dtype=np.complex128)
    absu = np.abs(u)
    value = np.zeros_like(u)
    scl = np.zeros(u.shape, dtype=np.float64)
    for row in coeffs:
        value = value * u + row
        scl = scl * absu + np.abs(row)
    return value, scl


def _derivative_rows(coeffs: np.ndarray) -> np.ndarray:
    """Coefficient rows of the formal derivative (leading first)."""
    n = coeffs.shape[0] - 1
    if n == 0:
        return np.zeros_like(coeffs[:1])
    powers = np.arange(n, 0, -1).reshape(-1, *([1] * (coeffs.ndim - 1)))
    return coeffs[:-1] * powers


class CircFunction:
    """Base class of the supported function kinds (tagged union).

    Subclasses provide the channel-wise scalar value, derivative, and
    logarithmic derivative; ring-level evaluation and differentiation are
    derived from those here.
    """

    kind: str
    d: int

    def channel_values(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def channel_derivatives(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def channel_logderiv(self, u: np.ndarray) -> np.ndarray:
        """F'_i(u_i) / F_i(u_i), computed in ratio form so that it stays
        finite even where F itself would overflow."""
        raise NotImplementedError

    def evaluate(self, z: Circulant) -> Circulant:
        value, _ = self.evaluate_with_report(z)
        return value

    def evaluate_with_report(self, z: Circulant) -> tuple[Circulant, tuple[int, ...]]:
        """Evaluate and report 1-based channels zeroed by rank thresholding
        (only rational functions ever flag any)."""
        self._check_order(z)
        return from_spectrum(self.channel_values(spectrum(z))), ()

    def derivative(self, z: Circulant) -> Circulant:
        """Derivative via the channel rule: eigenvalue i of the result is
        dF_i/du at u = eigenvalue i of z."""
        self._check_order(z)
        return from_spectrum(self.channel_derivatives(spectrum(z)))

    def _check_order(self, z: Circulant) -> None:
        if z.d != self.d:
            raise DimensionError(f"order mismatch: point has {z.d}, function has {self.d}")


@dataclass(frozen=True)
class PolyFunction(CircFunction):
    poly: CircPoly
    kind: str = field(default="poly", init=False)

    @property
    def d(self) -> int:
        return self.poly.d

    def channel_values(self, u: np.ndarray) -> np.ndarray:
        value, _ = polyval_with_scale(self.poly.channel_matrix(), u)
        return value

    def channel_derivatives(self, u: np.ndarray) -> np.ndarray:
        value, _ = polyval_with_scale(_derivative_rows(self.poly.channel_matrix()), u)
        return value

    def channel_logderiv(self, u: np.ndarray) -> np.ndarray:
        cm = self.poly.channel_matrix()
        p, p_scale = polyval_with_scale(cm, u)
        _raise_on_zero(p, p_scale, "polynomial value")
        dp, _ = polyval_with_scale(_derivative_rows(cm), u)
        return dp / p

    def evaluate_with_report(self, z: Circulant) -> tuple[Circulant, tuple[int, ...]]:
        self._check_order(z)
        return self.poly.evaluate(z), ()


@dataclass(frozen=True)
class RationalFunction(CircFunction):
    """P(Z) * pseudoinverse(Q(Z)).

    The denominator must have at least one invertible coefficient, which
    bounds its root set and keeps the quotient well-defined at infinity.
    """

    numerator: CircPoly
    denominator: CircPoly
    kind: str = field(default="rational", init=False)

    def __post_init__(self):
        if self.numerator.d != self.denominator.d:
            raise DimensionError(
                f"order mismatch: numerator has {self.numerator.d}, denominator has {self.denominator.d}"
            )
        if not any(is_invertible(b) for b in self.denominator.coeffs):
            raise ValueError("denominator needs at least one invertible coefficient")

    @property
    def d(self) -> int:
        return self.numerator.d

    def channel_values(self, u: np.ndarray) -> np.ndarray:
        p, _ = polyval_with_scale(self.numerator.channel_matrix(), u)
        q, _ = polyval_with_scale(self.denominator.channel_matrix(), u)
        out = np.zeros_like(p)
        largest = np.max(np.abs(q))
        keep = np.abs(q) > SINGULARITY_REL_TOL * self.d * largest if largest > 0 else np.zeros(q.shape, bool)
        out[keep] = p[keep] / q[keep]
        return out

    def channel_derivatives(self, u: np.ndarray) -> np.ndarray:
        pm = self.numerator.channel_matrix()
        qm = self.denominator.channel_matrix()
        p, _ = polyval_with_scale(pm, u)
        q, q_scale = polyval_with_scale(qm, u)
        _raise_on_zero(q, q_scale, "denominator")
        dp, _ = polyval_with_scale(_derivative_rows(pm), u)
        dq, _ = polyval_with_scale(_derivative_rows(qm), u)
        return (dp * q - dq * p) / (q * q)

    def channel_logderiv(self, u: np.ndarray) -> np.ndarray:
        pm = self.numerator.channel_matrix()
        qm = self.denominator.channel_matrix()
        p, p_scale = polyval_with_scale(pm, u)
        _raise_on_zero(p, p_scale, "numerator")
        q, q_scale = polyval_with_scale(qm, u)
        _raise_on_zero(q, q_scale, "denominator")
        dp, _ = polyval_with_scale(_derivative_rows(pm), u)
        dq, _ = polyval_with_scale(_derivative_rows(qm), u)
        return dp / p - dq / q

    def evaluate_with_report(self, z: Circulant) -> tuple[Circulant, tuple[int, ...]]:
        self._check_order(z)
        qz = self.denominator.evaluate(z)
        value = core.mul(self.numerator.evaluate(z), pseudoinverse(qz))
        q_spec = np.abs(spectrum(qz))
        largest = np.max(q_spec)
        if largest == 0.0:
            zeroed = tuple(range(1, self.d + 1))
        else:
            zeroed = tuple(int(i) + 1 for i in np.nonzero(q_spec <= 1e-12 * self.d * largest)[0])
        return value, zeroed


@dataclass(frozen=True)
class ExpPolyFunction(CircFunction):
    """Z -> P(Z) * exp(G(Z)) with the exponential applied channel-wise."""

    poly: CircPoly
    exponent: CircPoly
    kind: str = field(default="exppoly", init=False)

    def __post_init__(self):
        if self.poly.d != self.exponent.d:
            raise DimensionError(
                f"order mismatch: factor has {self.poly.d}, exponent has {self.exponent.d}"
            )

    @property
    def d(self) -> int:
        return self.poly.d

    def channel_values(self, u: np.ndarray) -> np.ndarray:
        p, _ = polyval_with_scale(self.poly.channel_matrix(), u)
        g, _ = polyval_with_scale(self.exponent.channel_matrix(), u)
        return p * np.exp(g)

    def channel_derivatives(self, u: np.ndarray) -> np.ndarray:
        pm = self.poly.channel_matrix()
        gm = self.exponent.channel_matrix()
        p, _ = polyval_with_scale(pm, u)
        g, _ = polyval_with_scale(gm, u)
        dp, _ = polyval_with_scale(_derivative_rows(pm), u)
        dg, _ = polyval_with_scale(_derivative_rows(gm), u)
        return (dp + p * dg) * np.exp(g)

    def channel_logderiv(self, u: np.ndarray) -> np.ndarray:
        pm = self.poly.channel_matrix()
        p, p_scale = polyval_with_scale(pm, u)
        _raise_on_zero(p, p_scale, "polynomial factor")
        dp, _ = polyval_with_scale(_derivative_rows(pm), u)
        dg, _ = polyval_with_scale(_derivative_rows(self.exponent.channel_matrix()), u)
        return dp / p + dg


def _raise_on_zero(values: np.ndarray, scales: np.ndarray, what: str) -> None:
    bad = np.abs(values) <= SINGULARITY_REL_TOL * np.maximum(scales, 1e-300)
    if np.any(bad):
        channels = [int(i) + 1 for i in np.nonzero(bad)[0]]
        raise ChannelSingularityError(channels, f"{what} vanishes at channel(s) {channels}")


def func_eval(f: CircFunction, z: Circulant) -> Circulant:
    return f.evaluate(z)


def derivative(f: CircFunction, z: Circulant) -> Circulant:
    return f.derivative(z)


@dataclass(frozen=True)
class IncrementSpec:
    """Finite-difference increment: step ``delta`` along an invertible direction."""

    direction: Circulant
    delta: float

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidIncrementError(f"delta must be positive, got {self.delta}")
        if not is_invertible(self.direction):
            raise InvalidIncrementError("increment direction must be invertible")


def numeric_derivative(f: CircFunction, z: Circulant, inc: IncrementSpec) -> Circulant:
    """First-order difference quotient (F(Z + dZ) - F(Z)) * dZ^-1.

    Converges linearly in ``inc.delta`` to :func:`derivative` at smooth
    points; kept as an independent cross-check of the channel rule.
    """
    if inc.direction.d != z.d:
        raise DimensionError(f"order mismatch: direction has {inc.direction.d}, point has {z.d}")
    dz = core.scale(inc.delta, inc.direction)
    diff = core.add(f.evaluate(core.add(z, dz)), core.neg(f.evaluate(z)))
    return core.mul(diff, pseudoinverse(dz))
