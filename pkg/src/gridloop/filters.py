"""Filter synthesis: Butterworth biquads, squared lead, inverse pre-filter,
and zero-phase (non-causal) filtering of sampled signals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.signal

from .errors import ImproperResult, UnstableFilter, UnstableInverse
from .lti import (STABILITY_TOL, Polynomial, RationalTF, StabilityVerdict,
                  is_stable, polynomial_roots)
from .signals import Signal

BUTTERWORTH_ZETA = math.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class ButterworthParams:
    omega_co: float
    zeta: float = BUTTERWORTH_ZETA

    def __post_init__(self):
        if self.omega_co <= 0.0:
            raise ValueError("cut-off frequency must be positive")
        if self.zeta <= 0.0:
            raise ValueError("damping ratio must be positive")


@dataclass(frozen=True)
class LeadParams:
    tau: float
    alpha: float

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValueError("lead time constant must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1) for phase lead")


def _biquad_denominator(p: ButterworthParams) -> Polynomial:
    return Polynomial([p.omega_co**2, 2.0 * p.zeta * p.omega_co, 1.0])


def butterworth2_lowpass(p: ButterworthParams) -> RationalTF:
    """wco^2 / (s^2 + 2*zeta*wco*s + wco^2); unit DC gain."""
    return RationalTF([p.omega_co**2], _biquad_denominator(p))


def butterworth2_highpass(p: ButterworthParams) -> RationalTF:
    """s^2 over the same biquad denominator; unit gain as w -> inf."""
    return RationalTF([0.0, 0.0, 1.0], _biquad_denominator(p))


def lead2(p: LeadParams) -> RationalTF:
    """Two identical lead stages in series: ((tau*s + 1)/(alpha*tau*s + 1))^2.

    DC gain 1, high-frequency gain 1/alpha^2; used to counter the
    -40 dB/decade roll-off past a load aggregate's resonance.
    """
    single_num = Polynomial([1.0, p.tau])
    single_den = Polynomial([1.0, p.alpha * p.tau])
    return RationalTF(single_num * single_num, single_den * single_den)


def inverse_prefilter(alpha: float, g_load: RationalTF) -> RationalTF:
    """Approximate-inverse pre-filter 1 / (alpha + G_load).

    The result must itself be a stable, causal system: construction fails if
    alpha*den + num has a root in the closed right half-plane, or if the
    inversion would be improper (numerator degree above denominator degree).
    alpha = 0 requests exact inversion and is accepted only when it passes
    the same two checks.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    new_den = g_load.den.scaled(alpha) + g_load.num
    if new_den.is_zero:
        raise UnstableInverse("alpha + G is identically zero")
    if g_load.den.degree > new_den.degree:
        raise ImproperResult(
            "inverse pre-filter would be improper (relative degree "
            f"{g_load.den.degree - new_den.degree} short)")
    if new_den.degree >= 1:
        worst = max(r.real for r in polynomial_roots(new_den))
        if worst >= -STABILITY_TOL:
            raise UnstableInverse(
                f"alpha + G has a zero with real part {worst:.3e}")
    return RationalTF(g_load.den, new_den)


def discretize_biquad(f: RationalTF, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Bilinear-transform filter coefficients (b, a) at sample period dt."""
    b = np.asarray(f.num.coeffs[::-1], dtype=float)
    a = np.asarray(f.den.coeffs[::-1], dtype=float)
    return scipy.signal.bilinear(b, a, fs=1.0 / dt)


def _slowest_time_constant(f: RationalTF) -> float:
    decay = min(-r.real for r in polynomial_roots(f.den))
    return 1.0 / decay


def zero_phase_filter(x: Signal, f: RationalTF) -> Signal:
    """Forward-backward filtering: squared magnitude response, zero phase.

    The filter is discretized with the bilinear transform at the signal's
    own sample period. The signal is reflect-padded by three filter time
    constants at each end (capped by the signal length) to suppress startup
    transients, then trimmed back to the input length.
    """
    if is_stable(f) is not StabilityVerdict.STABLE:
        raise UnstableFilter("zero-phase filtering requires a stable filter")
    b, a = discretize_biquad(f, dt=x.dt)
    pad = int(math.ceil(3.0 * _slowest_time_constant(f) / x.dt))
    pad = min(pad, len(x) - 1)
    return x.with_values(scipy.signal.filtfilt(b, a, x.values,
                                               padtype="even", padlen=pad))
