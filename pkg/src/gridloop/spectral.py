"""Disturbance spectrum estimation and mean-square cost by spectral integration.

The one-sided density convention used throughout: integrating ``density``
over the frequency grid (rad/s) recovers the signal variance, so a unit
mean-square cost weight gives J = RMS of the disturbance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.signal

from .errors import DomainMismatch, IllConditioned, TooShort, UnstableSystem
from .lti import RationalTF, StabilityVerdict, eval_response, is_stable
from .models import SystemConfig
from .signals import Signal

AR_GRID_POINTS = 8192
# The J integrand is refined with extra log-spaced points so narrow
# closed-loop resonances cannot slip between PSD grid nodes.
COST_POINTS_PER_DECADE = 200
COST_GRID_FLOOR = 1e-5


@dataclass(frozen=True)
class ArMethod:
    """Autoregressive fit (Yule-Walker) of the stated order."""
    order: int = 24


@dataclass(frozen=True)
class WelchMethod:
    """Averaged windowed periodograms; lengths in samples."""
    segment_len: int
    overlap: int


@dataclass(frozen=True)
class PsdEstimate:
    """One-sided power spectral density (MW^2 * s/rad) on a rad/s grid."""

    omegas: np.ndarray
    density: np.ndarray
    method: ArMethod | WelchMethod

    def __post_init__(self):
        object.__setattr__(self, "omegas", np.asarray(self.omegas, dtype=float))
        object.__setattr__(self, "density", np.asarray(self.density, dtype=float))

    def variance(self) -> float:
        """Trapezoidal integral of the density over its grid."""
        return float(np.trapezoid(self.density, self.omegas))


def yule_walker_fit(x: np.ndarray, order: int) -> tuple[np.ndarray, float]:
    """AR coefficients a (x_k = sum a_i x_{k-i} + w_k) and innovation variance."""
    n = len(x)
    r = np.array([np.dot(x[: n - k], x[k:]) / n for k in range(order + 1)])
    try:
        a = scipy.linalg.solve_toeplitz(r[:order], r[1 : order + 1])
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise IllConditioned(f"Yule-Walker system is singular: {exc}") from exc
    if not np.all(np.isfinite(a)):
        raise IllConditioned("Yule-Walker solve produced non-finite coefficients")
    sigma2 = float(r[0] - np.dot(a, r[1 : order + 1]))
    if not (math.isfinite(sigma2) and sigma2 > 0.0):
        raise IllConditioned(f"non-positive innovation variance {sigma2}")
    return a, sigma2


def _ar_density(a: np.ndarray, sigma2: float, dt: float,
                omegas: np.ndarray) -> np.ndarray:
    # A(e^{-jw dt}) with A(z) = 1 - sum a_i z^-i
    z = np.exp(-1j * omegas * dt)
    acc = np.ones(len(omegas), dtype=complex)
    zk = np.ones(len(omegas), dtype=complex)
    for coeff in a:
        zk = zk * z
        acc -= coeff * zk
    return (dt / math.pi) * sigma2 / np.abs(acc) ** 2


def estimate_psd(x: Signal, method: ArMethod | WelchMethod) -> PsdEstimate:
    """One-sided PSD of a detrended signal, by AR fit or Welch averaging."""
    values = x.values - np.mean(x.values)
    nyquist = math.pi / x.dt
    if isinstance(method, ArMethod):
        if method.order < 1:
            raise ValueError("AR order must be >= 1")
        if len(values) < 32 * method.order:
            raise TooShort(
                f"AR({method.order}) fit needs >= {32 * method.order} samples, "
                f"got {len(values)}")
        a, sigma2 = yule_walker_fit(values, method.order)
        # Hybrid grid: linear coverage to Nyquist for Parseval, log points so
        # the near-DC mass of strongly red spectra is resolved.
        linear = np.linspace(0.0, nyquist, AR_GRID_POINTS + 1)[1:]
        logpart = np.geomspace(min(1e-6, linear[0]), nyquist, 600)
        omegas = np.unique(np.concatenate([logpart, linear]))
        density = _ar_density(a, sigma2, x.dt, omegas)
        return PsdEstimate(omegas, density, method)

    if isinstance(method, WelchMethod):
        seg, overlap = method.segment_len, method.overlap
        if not 0 <= overlap < seg:
            raise ValueError("overlap must lie in [0, segment_len)")
        if len(values) < seg + 3 * (seg - overlap):
            raise TooShort(
                f"Welch needs >= 4 segments of {seg} samples "
                f"(overlap {overlap}), got {len(values)}")
        freqs, pxx = scipy.signal.welch(
            values, fs=1.0 / x.dt, window="hann", nperseg=seg,
            noverlap=overlap, detrend="constant")
        return PsdEstimate(2.0 * math.pi * freqs, pxx / (2.0 * math.pi), method)

    raise TypeError(f"unknown PSD method {method!r}")


def mean_square_cost(p_d: PsdEstimate, ua_over_d: RationalTF) -> float:
    """RMS effort J of the accurate actuators under the disturbance spectrum.

    J^2 integrates P_D(w)*|U_a/D(jw)|^2 over the one-sided grid; undefined
    (``UnstableSystem``) when the transfer function is unstable.
    """
    if is_stable(ua_over_d) is StabilityVerdict.UNSTABLE:
        raise UnstableSystem("mean-square cost requires a stable U_a/D")
    omegas = p_d.omegas
    positive = omegas > 0.0
    lo = float(omegas[positive][0])
    if lo > COST_GRID_FLOOR:
        raise DomainMismatch(
            f"PSD grid starts at {lo:g} rad/s; needs coverage down to "
            f"{COST_GRID_FLOOR:g}")
    hi = float(omegas[-1])
    n_extra = int(COST_POINTS_PER_DECADE * math.log10(hi / lo)) + 1
    extra = np.geomspace(lo, hi, n_extra)
    union = np.unique(np.concatenate([omegas[positive], extra]))
    density = np.interp(union, omegas, p_d.density)
    weight = np.abs(eval_response(ua_over_d, union)) ** 2
    return float(math.sqrt(np.trapezoid(density * weight, union)))


@dataclass(frozen=True)
class SweepCell:
    rho: float
    omega_co: float
    J: float
    stable: bool


def cost_sweep(cfg_base: SystemConfig, rho_grid, omega_co_grid,
               p_d: PsdEstimate) -> list[SweepCell]:
    """J(rho, omega_co) over a scenario grid; unstable cells marked non-finite."""
    from .analysis import analyze_loop

    cells = []
    for omega_co in omega_co_grid:
        for rho in rho_grid:
            cfg = replace(cfg_base, rho=float(rho), omega_co=float(omega_co))
            la = analyze_loop(cfg)
            if la.verdict is StabilityVerdict.UNSTABLE:
                cells.append(SweepCell(float(rho), float(omega_co), math.nan, False))
            else:
                j = mean_square_cost(p_d, la.UaOverD)
                cells.append(SweepCell(float(rho), float(omega_co), j,
                                       la.verdict is StabilityVerdict.STABLE))
    return cells
