"""Named transfer functions of the regulation architecture.

Builds every block of the feedback loop from a declarative ``SystemConfig``:
the grid model, the PI compensator with crossover-calibrated gain, the two
filtered load aggregates (pools, TCLs), the band-splitting filters and the
composite actuator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, SingularCalibration
from .filters import (ButterworthParams, LeadParams, butterworth2_highpass,
                      butterworth2_lowpass, inverse_prefilter, lead2)
from .lti import ONE, RationalTF

# Hard cap on the low-pass cut-off: load response must stay attenuated near
# the loop crossover (0.05 rad/s). Overridable only with an explicit flag.
OMEGA_CO_CAP = 0.013

POOL_OMEGA_N = 7.27e-5   # rad/s, 24-hour pool-pump cycling
POOL_ZETA = 0.5
TCL_OMEGA_N = 0.003      # rad/s, ~30-minute TCL cycling
TCL_ZETA = 0.5

POOL_LEAD = LeadParams(tau=15_000.0, alpha=1.0 / 15.0)
TCL_LEAD = LeadParams(tau=350.0, alpha=1.0 / 5.0)

# The inverse pre-filter's flatness knob. 1/(alpha + G) trades a new
# resonance at omega_n*sqrt((1+alpha)/alpha) for the load's own; alpha must
# be small enough to push that resonance above the regulated band, or the
# closed loop goes unstable at the 0.013 rad/s cut-off (it does for
# alpha >= 0.02 with the TCL parameters used here).
DEFAULT_INVERSE_ALPHA = 0.01


@dataclass(frozen=True)
class InversePrefilter:
    alpha: float = DEFAULT_INVERSE_ALPHA


@dataclass(frozen=True)
class GridParams:
    num_coeffs: tuple[float, ...]
    den_coeffs: tuple[float, ...]

    def tf(self) -> RationalTF:
        return RationalTF(self.num_coeffs, self.den_coeffs)


# Second-order ERCOT model at 25 GW net load; coefficients ascending in s.
ERCOT_GRID = GridParams(num_coeffs=(0.147, 0.644),
                        den_coeffs=(0.147, 0.4797, 1.0))


def ercot_grid() -> RationalTF:
    """(0.644 s + 0.147) / (s^2 + 0.4797 s + 0.147)."""
    return ERCOT_GRID.tf()


@dataclass(frozen=True)
class LoadClassParams:
    omega_n: float
    zeta: float
    prefilter: LeadParams | InversePrefilter | None = None

    def __post_init__(self):
        if self.omega_n <= 0.0 or self.zeta <= 0.0:
            raise ConfigError("load natural frequency and damping must be positive")


def load_model(p: LoadClassParams) -> RationalTF:
    """Second-order resonant aggregate: wn^2 / (s^2 + 2*zeta*wn*s + wn^2)."""
    return RationalTF([p.omega_n**2],
                      [p.omega_n**2, 2.0 * p.zeta * p.omega_n, 1.0])


def second_order_characteristics(tf: RationalTF) -> tuple[float, float]:
    """(natural frequency, damping ratio) of a quadratic denominator."""
    if tf.den.degree != 2:
        raise ValueError("denominator is not second order")
    c0, c1, c2 = tf.den.coeffs
    omega_n = math.sqrt(c0 / c2)
    zeta = c1 / (2.0 * math.sqrt(c0 * c2))
    return omega_n, zeta


@dataclass(frozen=True)
class SystemConfig:
    """Complete scenario: grid, compensator targets, loads and band split."""

    grid: GridParams = ERCOT_GRID
    pools: LoadClassParams = LoadClassParams(POOL_OMEGA_N, POOL_ZETA, POOL_LEAD)
    tcls: LoadClassParams = LoadClassParams(TCL_OMEGA_N, TCL_ZETA, TCL_LEAD)
    rho: float = 1.0
    omega_co: float = 0.003
    hp_cutoff: float = 0.0004
    compensator_beta: float = 0.5
    crossover_target: float = 0.05
    # Freeze the compensator gain at its H = 1 calibration instead of
    # recalibrating for the configured actuator mix.
    fixed_K: bool = False
    allow_high_cutoff: bool = False
    # Replace the TCL aggregate with a perfect unit response (no dynamics,
    # no pre-filter); reference case for cost comparisons.
    ideal_tcl: bool = False

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError(f"rho must lie in [0, 1], got {self.rho}")
        if self.omega_co <= 0.0:
            raise ConfigError("omega_co must be positive")
        if self.omega_co > OMEGA_CO_CAP * (1.0 + 1e-12) and not self.allow_high_cutoff:
            raise ConfigError(
                f"omega_co = {self.omega_co} exceeds the {OMEGA_CO_CAP} rad/s cap; "
                "set allow_high_cutoff to override")
        if self.hp_cutoff <= 0.0:
            raise ConfigError("hp_cutoff must be positive")
        if self.compensator_beta <= 0.0 or self.crossover_target <= 0.0:
            raise ConfigError("compensator parameters must be positive")


@dataclass(frozen=True)
class ActuatorSet:
    """All actuator-side blocks, plus their composition H."""

    G_a: RationalTF
    H_pl: RationalTF
    H_tcl: RationalTF
    H_LP: RationalTF
    H_HP: RationalTF
    H_B: RationalTF
    P_a: RationalTF
    H: RationalTF


def _prefilter_tf(p, g_load: RationalTF) -> RationalTF:
    if p is None:
        return ONE
    if isinstance(p, LeadParams):
        return lead2(p)
    if isinstance(p, InversePrefilter):
        return inverse_prefilter(p.alpha, g_load)
    raise ConfigError(f"unknown pre-filter spec {p!r}")


def build_actuators(cfg: SystemConfig, g_a: RationalTF = ONE) -> ActuatorSet:
    """Assemble the composite actuator H = P_a*G_a + H_LP*H_B.

    H_B = H_pl + rho*H_HP*H_tcl bundles the filtered loads and
    P_a = 1 - H_LP*(1 - H_HP*(1 - rho)) is the share left to the perfect
    actuator. ``g_a`` defaults to the constant 1 and is a hook for
    robustness experiments with an imperfect reference actuator.
    """
    g_pl = load_model(cfg.pools)
    h_pl = _prefilter_tf(cfg.pools.prefilter, g_pl) * g_pl
    if cfg.ideal_tcl:
        h_tcl = ONE
    else:
        g_tcl = load_model(cfg.tcls)
        h_tcl = _prefilter_tf(cfg.tcls.prefilter, g_tcl) * g_tcl

    h_lp = butterworth2_lowpass(ButterworthParams(cfg.omega_co))
    h_hp = butterworth2_highpass(ButterworthParams(cfg.hp_cutoff))

    h_b = h_pl + (h_hp * h_tcl).scaled(cfg.rho)
    p_a = ONE - h_lp * (ONE - h_hp.scaled(1.0 - cfg.rho))
    h = p_a * g_a + h_lp * h_b
    return ActuatorSet(G_a=g_a, H_pl=h_pl, H_tcl=h_tcl, H_LP=h_lp,
                       H_HP=h_hp, H_B=h_b, P_a=p_a, H=h)


def pi_compensator(gain: float, beta: float) -> RationalTF:
    """K (s + beta) / s."""
    return RationalTF([gain * beta, gain], [0.0, 1.0])


def pi_gain(beta: float, target_wc: float, H: RationalTF, G_p: RationalTF) -> float:
    """Gain K making |G_c * H * G_p| exactly 1 at the target crossover."""
    s = 1j * target_wc
    pi_shape = (s + beta) / s
    magnitude = abs(pi_shape * complex(H(s)) * complex(G_p(s)))
    if not (math.isfinite(magnitude) and magnitude > 0.0):
        raise SingularCalibration(
            f"|(s+beta)/s * H * G_p| = {magnitude} at w = {target_wc}")
    return 1.0 / magnitude


@dataclass(frozen=True)
class LoopModel:
    """A fully composed scenario: loop, compensator and constituent blocks."""

    config: SystemConfig
    actuators: ActuatorSet
    G_p: RationalTF
    G_c: RationalTF
    K: float
    L: RationalTF
    # Loop through the perfect actuator alone (G_c * G_a * G_p).
    L_a: RationalTF


def compose_loop(cfg: SystemConfig, g_a: RationalTF = ONE) -> LoopModel:
    """Build G_p, calibrated G_c, actuators, and L = G_c * H * G_p."""
    g_p = cfg.grid.tf()
    acts = build_actuators(cfg, g_a)
    h_for_calibration = ONE if cfg.fixed_K else acts.H
    gain = pi_gain(cfg.compensator_beta, cfg.crossover_target,
                   h_for_calibration, g_p)
    g_c = pi_compensator(gain, cfg.compensator_beta)
    loop = g_c * acts.H * g_p
    loop_a = g_c * g_a * g_p
    return LoopModel(config=cfg, actuators=acts, G_p=g_p, G_c=g_c, K=gain,
                     L=loop, L_a=loop_a)


def loop_tf(cfg: SystemConfig) -> RationalTF:
    return compose_loop(cfg).L


# ---------------------------------------------------------------------------
# Scenario presets

def lead_design(rho: float = 1.0, omega_co: float = 0.003, **kwargs) -> SystemConfig:
    """Lead pre-filters on both load classes."""
    return SystemConfig(
        pools=LoadClassParams(POOL_OMEGA_N, POOL_ZETA, POOL_LEAD),
        tcls=LoadClassParams(TCL_OMEGA_N, TCL_ZETA, TCL_LEAD),
        rho=rho, omega_co=omega_co, **kwargs)


def inverse_design(rho: float = 1.0, omega_co: float = 0.013,
                   alpha: float = DEFAULT_INVERSE_ALPHA, **kwargs) -> SystemConfig:
    """Inverse pre-filter on the TCLs; pools keep the lead design."""
    return SystemConfig(
        pools=LoadClassParams(POOL_OMEGA_N, POOL_ZETA, POOL_LEAD),
        tcls=LoadClassParams(TCL_OMEGA_N, TCL_ZETA, InversePrefilter(alpha)),
        rho=rho, omega_co=omega_co, **kwargs)


def unfiltered_design(rho: float = 1.0, omega_co: float = 0.002, **kwargs) -> SystemConfig:
    """No local control at the TCLs (M_tcl = 1); pools keep the lead design.

    Without the pool pre-filter the loop is unstable at any cut-off worth
    studying, so "no pre-filter" scenarios vary only the TCL side.
    """
    return SystemConfig(
        pools=LoadClassParams(POOL_OMEGA_N, POOL_ZETA, POOL_LEAD),
        tcls=LoadClassParams(TCL_OMEGA_N, TCL_ZETA, None),
        rho=rho, omega_co=omega_co, **kwargs)


DESIGNS = {
    "lead": lead_design,
    "inverse": inverse_design,
    "none": unfiltered_design,
}


def design_config(design: str, rho: float, omega_co: float, **kwargs) -> SystemConfig:
    try:
        builder = DESIGNS[design]
    except KeyError:
        raise ConfigError(f"unknown design {design!r}; expected one of {sorted(DESIGNS)}")
    return builder(rho=rho, omega_co=omega_co, **kwargs)


def shipped_presets() -> dict[str, SystemConfig]:
    """The scenario presets exercised by the acceptance suite."""
    return {
        "lead-0.003-rho0": lead_design(rho=0.0, omega_co=0.003),
        "lead-0.003-rho1": lead_design(rho=1.0, omega_co=0.003),
        "lead-0.007-rho1": lead_design(rho=1.0, omega_co=0.007),
        "inverse-0.013-rho1": inverse_design(rho=1.0, omega_co=0.013),
        "none-0.002-rho1": unfiltered_design(rho=1.0, omega_co=0.002),
    }
