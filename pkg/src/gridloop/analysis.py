"""Frequency-domain risk and cost analytics for a composed loop.

Produces the sensitivity function and its peak, the disturbance transfer
functions, the vector stability margin, the single-frequency heterogeneity
cost, and Bode-grid data for export.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NoCrossover
from .lti import (RationalTF, FreqPoint, StabilityVerdict, eval_freq,
                  eval_response, polynomial_roots, STABILITY_TOL)
from .models import LoopModel, SystemConfig, compose_loop

# Dense scan used for sup-norms: resonant peaks from the load dynamics are
# narrow, so the base grid is refined around its maximum.
NORM_GRID_RANGE = (1e-6, 10.0)
NORM_GRID_PER_DECADE = 200
NORM_REFINE_ROUNDS = 3

# |1 + L| below this at a heterogeneity grid point marks the cost as
# non-finite rather than plotting a meaningless spike.
SINGULAR_LOOP_TOL = 1e-9

CROSSOVER_RANGE = (1e-6, 10.0)


class MultipleCrossoverWarning(UserWarning):
    """|L| crosses unity more than once; the design envelope was left."""


@dataclass(frozen=True)
class LoopAnalysis:
    """Derived frequency-domain artifacts of one scenario."""

    model: LoopModel
    L: RationalTF
    S: RationalTF
    YoverD: RationalTF
    UaOverD: RationalTF
    M_S: float
    M_a: float
    vector_margin: float
    verdict: StabilityVerdict

    @property
    def closed_loop_poles(self) -> tuple[complex, ...]:
        return polynomial_roots(self.L.den + self.L.num)


def _refined_sup(tf: RationalTF) -> float:
    """sup |tf(jw)| over the norm grid with local refinement at the peak."""
    lo, hi = NORM_GRID_RANGE
    n = int(NORM_GRID_PER_DECADE * math.log10(hi / lo)) + 1
    omegas = np.geomspace(lo, hi, n)
    best = 0.0
    for _ in range(NORM_REFINE_ROUNDS + 1):
        mags = np.abs(eval_response(tf, omegas))
        i = int(np.argmax(mags))
        best = max(best, float(mags[i]))
        lo_i = omegas[max(i - 1, 0)]
        hi_i = omegas[min(i + 1, len(omegas) - 1)]
        omegas = np.geomspace(lo_i, hi_i, 50)
    return best


def closed_loop_verdict(L: RationalTF) -> StabilityVerdict:
    """Stability of the unity feedback closure from the roots of den(L)+num(L)."""
    worst = max(r.real for r in polynomial_roots(L.den + L.num))
    if worst < -STABILITY_TOL:
        return StabilityVerdict.STABLE
    if worst <= STABILITY_TOL:
        return StabilityVerdict.MARGINAL
    return StabilityVerdict.UNSTABLE


def analyze_loop(cfg: SystemConfig) -> LoopAnalysis:
    """Compose the loop and derive S, Y/D, U_a/D, sup-norms and the verdict.

    For an unstable closure the transfer functions are still returned (their
    frequency responses are plottable data) but the sup-norms are reported
    non-finite and the vector margin zero.
    """
    lm = compose_loop(cfg)
    closed_den = lm.L.den + lm.L.num
    sens = RationalTF(lm.L.den, closed_den)
    y_over_d = lm.G_p * sens
    ua_over_d = (lm.actuators.P_a * lm.L_a * sens).scaled(-1.0)

    verdict = closed_loop_verdict(lm.L)
    if verdict is StabilityVerdict.UNSTABLE:
        m_s = math.inf
        m_a = math.inf
    else:
        m_s = _refined_sup(sens)
        m_a = _refined_sup(ua_over_d)
    margin = 0.0 if math.isinf(m_s) else 1.0 / m_s
    return LoopAnalysis(model=lm, L=lm.L, S=sens, YoverD=y_over_d,
                        UaOverD=ua_over_d, M_S=m_s, M_a=m_a,
                        vector_margin=margin, verdict=verdict)


@dataclass(frozen=True)
class HeterogeneityCurve:
    """Single-frequency cost of mixing accurate with phase-lagged resources."""

    rho_grid: tuple[float, ...]
    k0_values: tuple[float, ...]
    omega0: float
    phi_B: float
    slope_at_1: float


# Heterogeneity analyses need |L_a(j*omega0)| >> 1 for the classic cost
# shapes; at 0.001 rad/s the PI loop gain is ~50.
DEFAULT_OMEGA0 = 0.001


def heterogeneity_cost(L_a: RationalTF, omega0: float, phi_B: float,
                       rho_grid) -> HeterogeneityCurve:
    """Cost k0(rho) = (1-rho)*|L_a/(1+L)| at a single frequency.

    The actuator mix is H = (1-rho) + rho*e^{j*phi_B} with both resources
    normalized to unit gain at omega0, so L(j*omega0) = L_a(j*omega0)*H.
    Grid points where |1+L| < 1e-9 are marked non-finite instead of being
    reported as a spurious spike. ``phi_B`` is in degrees.
    """
    if omega0 <= 0.0:
        raise ValueError("omega0 must be positive")
    la0 = complex(L_a(1j * omega0))
    phase = cmath.exp(1j * math.radians(phi_B))
    rhos = [float(r) for r in rho_grid]
    k0s = []
    for rho in rhos:
        if not 0.0 <= rho <= 1.0:
            raise ValueError(f"rho grid point {rho} outside [0, 1]")
        if rho == 1.0:
            k0s.append(0.0)
            continue
        mix = (1.0 - rho) + rho * phase
        denom = 1.0 + la0 * mix
        if abs(denom) < SINGULAR_LOOP_TOL:
            k0s.append(math.inf)
        else:
            k0s.append((1.0 - rho) * abs(la0 / denom))
    slope = -abs(la0 / (1.0 + la0 * phase))
    return HeterogeneityCurve(rho_grid=tuple(rhos), k0_values=tuple(k0s),
                              omega0=omega0, phi_B=phi_B, slope_at_1=slope)


def bode_data(tf: RationalTF, omega_min: float, omega_max: float,
              points_per_decade: int) -> list[FreqPoint]:
    """Log-spaced frequency response with unwrapped phase."""
    if not 0.0 < omega_min < omega_max:
        raise ValueError("need 0 < omega_min < omega_max")
    n = max(2, int(round(points_per_decade * math.log10(omega_max / omega_min))) + 1)
    return eval_freq(tf, np.geomspace(omega_min, omega_max, n))


def find_crossover(L: RationalTF) -> float:
    """Lowest frequency where |L(jw)| = 1, bisection-refined to 1e-9.

    Warns (``MultipleCrossoverWarning``) when the gain crosses unity more
    than once in the search range; raises ``NoCrossover`` when it never
    does.
    """
    lo, hi = CROSSOVER_RANGE
    n = int(NORM_GRID_PER_DECADE * math.log10(hi / lo)) + 1
    omegas = np.geomspace(lo, hi, n)
    gain = np.abs(eval_response(L, omegas)) - 1.0
    signs = np.sign(gain)
    crossings = np.nonzero(np.diff(signs) != 0)[0]
    if len(crossings) == 0:
        exact = np.nonzero(gain == 0.0)[0]
        if len(exact):
            return float(omegas[exact[0]])
        raise NoCrossover(f"|L| does not cross 1 in [{lo:g}, {hi:g}] rad/s")
    if len(crossings) > 1:
        warnings.warn(
            f"|L| crosses unity {len(crossings)} times; reporting the lowest",
            MultipleCrossoverWarning, stacklevel=2)
    a, b = float(omegas[crossings[0]]), float(omegas[crossings[0] + 1])
    fa = float(gain[crossings[0]])
    for _ in range(200):
        mid = math.sqrt(a * b)
        fm = abs(complex(L(1j * mid))) - 1.0
        if abs(fm) <= 1e-9:
            return mid
        if (fa < 0.0) == (fm < 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return math.sqrt(a * b)
