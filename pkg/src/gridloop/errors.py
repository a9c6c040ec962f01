"""Exception types shared across the toolkit."""


class GridLoopError(Exception):
    """Base class for all toolkit errors."""


class DegenerateLoop(GridLoopError):
    """Unity-feedback closure 1 + L is identically zero."""


class ConvergenceFailure(GridLoopError):
    """Polynomial root finder failed to converge."""


class PoleOnAxis(GridLoopError):
    """Frequency-response evaluation hit an imaginary-axis pole."""


class UnstableInverse(GridLoopError):
    """Inverse pre-filter would be an unstable system."""


class ImproperResult(GridLoopError):
    """Composed transfer function would have numerator degree > denominator degree."""


class UnstableFilter(GridLoopError):
    """Zero-phase filtering requires a stable filter."""


class SingularCalibration(GridLoopError):
    """Loop gain calibration target has zero or non-finite magnitude."""


class NoCrossover(GridLoopError):
    """|L(jw)| never crosses unity in the search range."""


class IllConditioned(GridLoopError):
    """Autocorrelation system for the AR fit is numerically singular."""


class TooShort(GridLoopError):
    """Signal is too short for the requested spectral estimate."""


class UnstableSystem(GridLoopError):
    """Mean-square cost is undefined for an unstable transfer function."""


class DomainMismatch(GridLoopError):
    """PSD frequency grid does not cover the required integration band."""


class ImproperTF(GridLoopError):
    """Discretization requires a proper transfer function."""


class BilinearSingularity(GridLoopError):
    """Continuous pole sits at the bilinear map's singular point 2/dt."""


class ParseError(GridLoopError):
    """Input file could not be parsed."""


class GapTooLarge(GridLoopError):
    """Time series has a gap too wide to interpolate."""


class NonMonotoneTime(GridLoopError):
    """Timestamps are not strictly increasing."""


class ConfigError(GridLoopError):
    """Invalid scenario / system configuration."""
