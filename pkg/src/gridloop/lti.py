"""Rational transfer-function arithmetic, frequency response and stability.

Everything downstream (filter synthesis, loop composition, cost analysis,
simulation) is built on the two value types defined here: ``Polynomial``
(real coefficients, ascending powers of the Laplace variable s) and
``RationalTF`` (a ratio of two polynomials, stored with a monic
denominator). Composed transfer functions are never minimalized: common
factors introduced by loop algebra are kept, and every analysis is either
evaluation-based or works on the full root set.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConvergenceFailure, DegenerateLoop, PoleOnAxis

# Pole real parts within +/- STABILITY_TOL of zero are "marginal"; comfortably
# separates the slowest modeled dynamics (7.27e-5 rad/s) from numerical noise.
STABILITY_TOL = 1e-7
# |den(jw)| below this means we are evaluating on top of an imaginary-axis pole.
AXIS_TOL = 1e-12
# Backward-error budget for reported polynomial roots.
ROOT_TOL = 1e-8


class StabilityVerdict(enum.Enum):
    STABLE = "stable"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"

    def __str__(self) -> str:
        return self.value


def _trim(coeffs) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial in s; ``coeffs[k]`` multiplies s**k."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0.0

    def __call__(self, s):
        return npoly.polyval(s, self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polysub(self.coeffs, other.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polymul(self.coeffs, other.coeffs))

    def scaled(self, k: float) -> "Polynomial":
        return Polynomial(tuple(k * c for c in self.coeffs))

    def origin_multiplicity(self) -> int:
        """Number of exact roots at s = 0 (leading zero coefficients)."""
        m = 0
        while m < len(self.coeffs) - 1 and self.coeffs[m] == 0.0:
            m += 1
        return m if not self.is_zero else 0

    def shifted_down(self, m: int) -> "Polynomial":
        """Divide by s**m; caller guarantees the first m coefficients are zero."""
        return Polynomial(self.coeffs[m:])


@dataclass(frozen=True)
class RationalTF:
    """Ratio num/den of real polynomials in s, with den stored monic.

    Construction does not cancel common roots; near-cancellation is
    numerically dangerous and nothing downstream relies on minimal
    realizations.
    """

    num: Polynomial
    den: Polynomial

    def __init__(self, num, den):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        if den.is_zero:
            raise ValueError("transfer function denominator is identically zero")
        lead = den.coeffs[-1]
        object.__setattr__(self, "num", num.scaled(1.0 / lead))
        object.__setattr__(self, "den", den.scaled(1.0 / lead))

    @staticmethod
    def constant(value: float) -> "RationalTF":
        return RationalTF([float(value)], [1.0])

    def __call__(self, s):
        return self.num(s) / self.den(s)

    def __add__(self, other: "RationalTF") -> "RationalTF":
        return RationalTF(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other: "RationalTF") -> "RationalTF":
        return self + other.scaled(-1.0)

    def __mul__(self, other: "RationalTF") -> "RationalTF":
        return RationalTF(self.num * other.num, self.den * other.den)

    def scaled(self, k: float) -> "RationalTF":
        return RationalTF(self.num.scaled(k), self.den)

    @property
    def relative_degree(self) -> int:
        return self.den.degree - self.num.degree

    @property
    def is_proper(self) -> bool:
        return self.num.degree <= self.den.degree or self.num.is_zero


ONE = RationalTF.constant(1.0)
ZERO = RationalTF([0.0], [1.0])


def tf_add(a: RationalTF, b: RationalTF) -> RationalTF:
    return a + b


def tf_mul(a: RationalTF, b: RationalTF) -> RationalTF:
    return a * b


def tf_scale(a: RationalTF, k: float) -> RationalTF:
    return a.scaled(k)


def tf_feedback(forward: RationalTF) -> RationalTF:
    """Close a unity negative-feedback loop: forward / (1 + forward)."""
    closed_den = forward.den + forward.num
    if closed_den.is_zero:
        raise DegenerateLoop("1 + L is identically zero")
    return RationalTF(forward.num, closed_den)


@dataclass(frozen=True)
class PoleSet:
    """Roots of a denominator polynomial, multiplicity by repetition."""

    roots: tuple[complex, ...]

    @property
    def max_real(self) -> float:
        return max(r.real for r in self.roots)


@dataclass(frozen=True)
class FreqPoint:
    omega: float
    value: complex
    magnitude_db: float
    phase_deg: float


def polynomial_roots(p: Polynomial) -> tuple[complex, ...]:
    """All complex roots of ``p`` via balanced companion-matrix eigenvalues.

    Coefficients are rescaled (s = gamma*z with gamma the geometric mean of
    the root magnitudes) before the eigenvalue solve, which keeps the
    companion matrix well graded for the wide coefficient ranges produced by
    composing slow-load and fast-grid blocks.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has no defined root set")
    coeffs = list(p.coeffs)
    # Exact roots at the origin come out, well, exactly.
    zeros_at_origin = p.origin_multiplicity()
    coeffs = coeffs[zeros_at_origin:]
    roots = [0j] * zeros_at_origin
    n = len(coeffs) - 1
    if n > 0:
        gamma = (abs(coeffs[0]) / abs(coeffs[-1])) ** (1.0 / n)
        if not (math.isfinite(gamma) and gamma > 0.0):
            gamma = 1.0
        scaled = np.array([c * gamma**k for k, c in enumerate(coeffs)])
        scaled /= np.max(np.abs(scaled))
        try:
            z = np.roots(scaled[::-1])
        except np.linalg.LinAlgError as exc:
            raise ConvergenceFailure(f"companion eigenvalue solve failed: {exc}") from exc
        roots.extend(complex(r) * gamma for r in z)
    return tuple(roots)


def poles(tf: RationalTF) -> PoleSet:
    """All denominator roots (closed under conjugation for real coefficients)."""
    if tf.den.degree < 1:
        raise ValueError("denominator must have degree >= 1")
    return PoleSet(polynomial_roots(tf.den))


def is_stable(tf: RationalTF) -> StabilityVerdict:
    if tf.den.degree < 1:
        return StabilityVerdict.STABLE
    worst = poles(tf).max_real
    if worst < -STABILITY_TOL:
        return StabilityVerdict.STABLE
    if worst <= STABILITY_TOL:
        return StabilityVerdict.MARGINAL
    return StabilityVerdict.UNSTABLE


def eval_response(tf: RationalTF, omegas) -> np.ndarray:
    """Complex response num(jw)/den(jw) on an array of frequencies."""
    s = 1j * np.asarray(omegas, dtype=float)
    den_vals = tf.den(s)
    bad = np.abs(den_vals) < AXIS_TOL
    if np.any(bad):
        w = float(np.asarray(omegas, dtype=float)[bad][0])
        raise PoleOnAxis(f"|den(j*{w:g})| below {AXIS_TOL:g}")
    return tf.num(s) / den_vals


def eval_freq(tf: RationalTF, omegas) -> list[FreqPoint]:
    """Frequency response with dB magnitude and phase unwrapped along the list."""
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim != 1 or len(omegas) == 0:
        raise ValueError("omegas must be a non-empty 1-D sequence")
    if np.any(omegas <= 0.0) or np.any(np.diff(omegas) <= 0.0):
        raise ValueError("omegas must be strictly positive and increasing")
    values = eval_response(tf, omegas)
    with np.errstate(divide="ignore"):
        mags_db = 20.0 * np.log10(np.abs(values))
    phases = np.degrees(np.unwrap(np.angle(values)))
    return [FreqPoint(float(w), complex(v), float(m), float(p))
            for w, v, m, p in zip(omegas, values, mags_db, phases)]


def dc_gain(tf: RationalTF) -> float:
    """Limit of tf(s) as s -> 0, after cancelling exact s-factors.

    Returns signed infinity for a pole at the origin that survives
    cancellation.
    """
    if tf.num.is_zero:
        return 0.0
    m = min(tf.num.origin_multiplicity(), tf.den.origin_multiplicity())
    num = tf.num.shifted_down(m)
    den = tf.den.shifted_down(m)
    n0, d0 = num.coeffs[0], den.coeffs[0]
    if d0 == 0.0:
        return math.copysign(math.inf, n0) if n0 != 0.0 else math.nan
    return n0 / d0


def backward_error_bound(p: Polynomial, root: complex) -> float:
    """Tolerated |p(root)| for an acceptably accurate root."""
    max_coeff = max(abs(c) for c in p.coeffs)
    return ROOT_TOL * (1.0 + abs(root)) ** p.degree * max_coeff
