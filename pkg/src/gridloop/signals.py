"""Uniformly sampled real time series (MW), shared by filtering and simulation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Signal:
    """Uniform samples with period ``dt`` seconds starting at epoch ``t0``."""

    values: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or len(v) == 0:
            raise ValueError("signal needs a non-empty 1-D sample array")
        if not np.all(np.isfinite(v)):
            raise ValueError("signal samples must be finite")
        if self.dt <= 0.0:
            raise ValueError("sample period must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def duration(self) -> float:
        return (len(self.values) - 1) * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))

    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.values**2)))

    def with_values(self, values) -> "Signal":
        return Signal(np.asarray(values, dtype=float), self.dt, self.t0)

    def resampled(self, dt: float) -> "Signal":
        """Linear interpolation onto a grid with the new period."""
        if dt == self.dt:
            return self
        t_old = self.dt * np.arange(len(self.values))
        n_new = int(np.floor(t_old[-1] / dt)) + 1
        t_new = dt * np.arange(n_new)
        return Signal(np.interp(t_new, t_old, self.values), dt, self.t0)
