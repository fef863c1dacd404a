"""Separable forcing nu(t, X) = amplitude * tau(t) * f(X).

In log variables Q(t, xi) = nu(t, exp(xi)).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .spectral import Field

__all__ = ["ForcingSpec"]

_FAMILIES = {"indicator_window": 2, "power_decay": 2, "log_gaussian": 2, "zero": 0}
_PROFILES = {"constant": 0, "ramp": 1, "oscillatory": 1, "switch_off": 1}


@dataclass(frozen=True)
class ForcingSpec:
    """Parametric forcing.

    Parameters
    ----------
    family : str
        ``indicator_window`` (a, b): 1 on [a, b];
        ``power_decay`` (theta, rho): X^-theta (1+X)^-rho;
        ``log_gaussian`` (center, width): exp(-(log X - center)^2 / (2 width^2));
        ``zero``.
    params : tuple
    time_profile : str
        ``constant``; ``ramp`` (t0): min(t/t0, 1); ``oscillatory`` (omega):
        cos(omega t); ``switch_off`` (t1): 1 before t1, 0 after.
    time_param : float
    amplitude : float
    """

    family: str
    params: tuple = ()
    time_profile: str = "constant"
    time_param: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigError(f"unknown forcing family {self.family!r}")
        if len(self.params) != _FAMILIES[self.family]:
            raise ConfigError(f"{self.family} takes {_FAMILIES[self.family]} parameters")
        if self.time_profile not in _PROFILES:
            raise ConfigError(f"unknown time profile {self.time_profile!r}")
        if self.family == "indicator_window" and not 0 < self.params[0] < self.params[1]:
            raise ConfigError("indicator window needs 0 < a < b")
        if self.family == "log_gaussian" and not self.params[1] > 0:
            raise ConfigError("log_gaussian width must be positive")
        if self.time_profile in ("ramp", "switch_off") and not self.time_param > 0:
            raise ConfigError(f"{self.time_profile} needs a positive time parameter")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    def spatial(self, X):
        """f(X) without amplitude or time factor."""
        X = np.asarray(X, dtype=float)
        if self.family == "indicator_window":
            # compared in log scale so that dilated windows hit the same nodes;
            # a node on an endpoint gets 1/2
            a, b = np.log(self.params)
            lx = np.log(X)
            tol = 1e-9
            out = ((lx > a + tol) & (lx < b - tol)).astype(float)
            out[(np.abs(lx - a) <= tol) | (np.abs(lx - b) <= tol)] = 0.5
            return out
        if self.family == "power_decay":
            th, rh = self.params
            return X**-th * (1 + X) ** -rh
        if self.family == "log_gaussian":
            c, w = self.params
            return np.exp(-0.5 * ((np.log(X) - c) / w) ** 2)
        return np.zeros_like(X)

    def time_factor(self, t):
        """amplitude * tau(t)."""
        p = self.time_profile
        if p == "constant":
            tau = 1.0
        elif p == "ramp":
            tau = min(t / self.time_param, 1.0)
        elif p == "oscillatory":
            tau = np.cos(self.time_param * t)
        else:
            edge = t - self.time_param
            tol = 1e-12 * max(1.0, self.time_param)
            tau = 1.0 if edge < -tol else (0.5 if edge <= tol else 0.0)
        return self.amplitude * tau

    def breakpoints(self):
        """Times where tau is not smooth."""
        if self.time_profile in ("ramp", "switch_off"):
            return (self.time_param,)
        return ()

    def profile_field(self, grid):
        """amplitude * f(exp(xi)) on the grid (the time factor excluded)."""
        return Field(grid, self.amplitude * self.spatial(grid.X))

    def field(self, grid, t):
        """Q(t, xi) on the grid."""
        return Field(grid, self.time_factor(t) * self.spatial(grid.X))

    def scaled(self, amplitude):
        return ForcingSpec(self.family, self.params, self.time_profile, self.time_param, amplitude)

    def dilated(self, R):
        """Forcing of the R-scaled problem, R^{-1/2} nu(t/sqrt R, X/R)."""
        s = np.sqrt(R)
        if self.family == "indicator_window":
            params = (self.params[0] * R, self.params[1] * R)
        elif self.family == "log_gaussian":
            params = (self.params[0] + np.log(R), self.params[1])
        elif self.family == "zero":
            params = ()
        else:
            raise ConfigError("power_decay forcing has no closed-form dilation")
        if self.time_profile == "oscillatory":
            tp = self.time_param / s
        elif self.time_profile == "constant":
            tp = self.time_param
        else:
            tp = self.time_param * s
        return ForcingSpec(self.family, params, self.time_profile, tp, self.amplitude / s)

    def weighted_sup(self, theta, rho):
        """sup_{X>0} X^theta (1+X)^rho |f(X)|, times |amplitude| (time factor excluded).

        Evaluated on a dense log lattice over X in [e^-40, e^40]; returns
        inf when the maximum sits at an end of that range.
        """
        if self.family == "zero" or self.amplitude == 0:
            return 0.0
        if self.family == "indicator_window":
            X = np.geomspace(*self.params, 4001)
        else:
            X = np.exp(np.linspace(-40, 40, 16001))
        # the indicator is 1 on the closed window; its endpoint value 1/2 is a sampling rule
        f = np.ones_like(X) if self.family == "indicator_window" else np.abs(self.spatial(X))
        v = X**theta * (1 + X) ** rho * f
        j = int(np.argmax(v))
        if self.family != "indicator_window" and j in (0, len(X) - 1) and v[j] > 1e-300:
            return float("inf")
        return float(abs(self.amplitude) * v[j])
