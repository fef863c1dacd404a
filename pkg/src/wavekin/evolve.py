"""Time integration of dw/dt = P(w) + Q from zero data, and the experiments built on it.

P(w) = -e^{-xi/2} F^{-1}[rho0 w_hat] is applied spectrally at every stage.
Two integrators are available:

* ``rk4``: classical Runge-Kutta with dt <= 0.5 / (kappa_max Re rho0(k_max)),
  kappa_max = e^{-xi_min/2};
* ``imex_frozen``: ETDRK4 (exponential time differencing) with the
  constant-coefficient part -kappa_bar rho0(k) treated exactly and the
  remainder -(kappa(xi) - kappa_bar) P0-part explicitly. In frozen mode
  the remainder vanishes and the scheme is exact for forcing constant
  in time.
"""

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field, asdict

import numpy as np
from scipy import integrate

from ._quad import interpolate
from .errors import ConfigError, DomainError, NumericalAbort
from .forcing import ForcingSpec
from .kinetic_ops import CutoffSpec
from .norms import (
    WeightSpec,
    Window,
    gagliardo_log_seminorm,
    m_sigma_norm,
    n_r_sigma,
    weighted_sup_norm,
)
from .spectral import (
    Field,
    RadialFunction,
    Trajectory,
    UniformLogGrid,
    exp_convolution,
    forward,
    sobolev_norm_from_spectrum,
)
from .specfun import rho0

__all__ = [
    "ExperimentConfig",
    "stability_dt",
    "evolve",
    "solve_v_X",
    "weighted_decay_check",
    "forcing_time_integral",
    "smoothing_sweep",
    "spectral_tail_slope",
    "smoothing_footprint",
    "scaling_reproduction",
    "appendix_inequality_suite",
]

_MODES = ("none", "decay", "smoothing", "remark")


def _default_R():
    return tuple(2.0**j for j in range(-4, 5))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that defines one evolution and its sweep.

    Parameters
    ----------
    grid : UniformLogGrid
    forcing : ForcingSpec
    weight : WeightSpec
    sigmas : tuple of float
    R_lattice : tuple of float
        Dyadic scales, each a whole number of grid nodes in log scale.
    t0_lattice : tuple of float or None
        Window starts in (0, T_star); default: T_star * (1/64, 1/8, ..., 7/8).
    T_star : float
    dt : float or None
        None picks the largest step allowed by `stability_dt`, shrunk so
        that the sample spacing is a whole number of steps.
    integrator : {"rk4", "imex_frozen"}
    frozen_xi0 : float or None
        Replace e^{-xi/2} by the constant e^{-xi0/2}.
    n_samples : int
        Stored states, uniformly spaced on [0, T_star].
    theorem_mode : {"none", "decay", "smoothing", "remark"}
        Which hypotheses `weight` must satisfy.
    wrap_tol : float
        Abort when the sup over the right buffer exceeds this fraction of
        the global sup.
    left_closure : bool
        Variable coefficient only. The solution tends to a time-dependent
        constant as xi -> -inf (P maps e^{xi/2} to a nonzero constant),
        so it cannot be periodic. With the closure the left end is
        continued by the fit c + A e^{xi/2} + B e^{xi}, P0 of that
        continuation is applied exactly, and the FFT only sees the
        decaying remainder.
    seed : int
    """

    grid: UniformLogGrid = dc_field(default_factory=lambda: UniformLogGrid.dyadic(4096, 128))
    forcing: ForcingSpec = dc_field(default_factory=lambda: ForcingSpec("indicator_window", (1.0, 2.0)))
    weight: WeightSpec = dc_field(default_factory=lambda: WeightSpec(0.15, 0.5))
    sigmas: tuple = (0.0,)
    R_lattice: tuple = dc_field(default_factory=_default_R)
    t0_lattice: tuple = None
    T_star: float = 1.0
    dt: float = None
    integrator: str = "rk4"
    frozen_xi0: float = None
    n_samples: int = 32
    theorem_mode: str = "smoothing"
    wrap_tol: float = 1e-3
    left_closure: bool = True
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sigmas", tuple(float(s) for s in self.sigmas))
        object.__setattr__(self, "R_lattice", tuple(float(r) for r in self.R_lattice))
        if self.t0_lattice is None:
            t0 = (1 / 64,) + tuple(j / 8 for j in range(1, 8))
            object.__setattr__(self, "t0_lattice", tuple(self.T_star * x for x in t0))
        else:
            object.__setattr__(self, "t0_lattice", tuple(float(t) for t in self.t0_lattice))

    def validate(self):
        """Raise `ConfigError` naming the first violated requirement."""
        if self.integrator not in ("rk4", "imex_frozen"):
            raise ConfigError(f"unknown integrator {self.integrator!r}")
        if self.theorem_mode not in _MODES:
            raise ConfigError(f"unknown theorem mode {self.theorem_mode!r}")
        if not self.T_star > 0:
            raise ConfigError("T* must be positive")
        if self.n_samples < 2:
            raise ConfigError("need at least 2 samples")
        if self.theorem_mode != "none":
            self.weight.validate(self.theorem_mode)
            sup = self.forcing.weighted_sup(self.weight.theta, self.weight.rho)
            if not np.isfinite(sup):
                raise ConfigError("‖ν(t)‖_{θ,ρ} is infinite for this forcing")
        for R in self.R_lattice:
            j = np.log2(R)
            if abs(j - round(j)) > 1e-12 or not -6 <= j <= 6:
                raise ConfigError(f"R = {R:g} is not dyadic in [2^-6, 2^6]")
            try:
                self.grid.node_shift(R)
            except DomainError as err:
                raise ConfigError(str(err)) from None
        for t0 in self.t0_lattice:
            if not 0 < t0 < self.T_star:
                raise ConfigError(f"t0 = {t0:g} not in (0, T*)")
        for s in self.sigmas:
            if not 0 <= s <= 2:
                raise ConfigError(f"σ = {s:g} outside [0, 2]")
        limit = stability_dt(self)
        if self.dt is not None:
            if not self.dt > 0:
                raise ConfigError("dt must be positive")
            if self.dt > limit * (1 + 1e-12):
                raise ConfigError(f"dt = {self.dt:g} exceeds the stability bound {limit:g}")
        return self

    def kappa(self):
        xi = self.grid.xi
        if self.frozen_xi0 is not None:
            return np.full_like(xi, np.exp(-self.frozen_xi0 / 2))
        return np.exp(-xi / 2)

    def steps(self):
        """(dt, steps per sample) with the sample spacing a whole number of steps."""
        spacing = self.T_star / (self.n_samples - 1)
        target = self.dt if self.dt is not None else stability_dt(self)
        per = max(1, int(np.ceil(spacing / target - 1e-9)))
        return spacing / per, per

    def with_(self, **changes):
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(changes)
        if "T_star" in changes and "t0_lattice" not in changes:
            d["t0_lattice"] = None
        return ExperimentConfig(**d)

    def to_dict(self):
        g = self.grid
        return {
            "grid": {"xi_min": g.xi_min, "xi_max": g.xi_max, "n": g.n},
            "forcing": asdict(self.forcing),
            "weight": asdict(self.weight),
            "sigmas": list(self.sigmas),
            "R_lattice": list(self.R_lattice),
            "t0_lattice": list(self.t0_lattice),
            "T_star": self.T_star,
            "dt": self.dt,
            "integrator": self.integrator,
            "frozen_xi0": self.frozen_xi0,
            "n_samples": self.n_samples,
            "theorem_mode": self.theorem_mode,
            "wrap_tol": self.wrap_tol,
            "left_closure": self.left_closure,
            "seed": self.seed,
        }

    def digest(self):
        text = json.dumps(self.to_dict(), sort_keys=True, default=float)
        return hashlib.sha256(text.encode()).hexdigest()


def stability_dt(config):
    """Largest step allowed for the configured integrator."""
    g = config.grid
    top = rho0(g.k_max).real
    kappa = config.kappa()
    if config.integrator == "rk4":
        return 0.5 / (kappa.max() * top)
    spread = np.max(np.abs(kappa - _kappa_bar(config)))
    if spread == 0:
        return config.T_star / (config.n_samples - 1)
    return 0.5 / (spread * top)


def _kappa_bar(config):
    if config.frozen_xi0 is not None:
        return float(np.exp(-config.frozen_xi0 / 2))
    return float(np.mean(config.kappa()))


class _LeftClosure:
    """Exact P0 of the left continuation c + A e^{xi/2} + B e^{xi}.

    The continuation is cut off by a smooth step psi (1 on the fit window,
    0 from a few units further right). P0 of psi * e^{j xi/2} is computed
    once on a grid four times as long with the same spacing, where these
    profiles decay before the seam; for j = 0 via psi' and the multiplier
    -rho0(k) / (ik), which is analytic at k = 0.
    """

    fit_width = 2.0
    ramp = (3.0, 6.0)

    def __init__(self, grid):
        g = grid
        self.n = g.n
        off = g.xi - g.xi_min
        win = off <= self.fit_width
        self.win = win
        self.psi = _step(off, *self.ramp)
        basis = np.exp(np.outer(off, [0.0, 0.5, 1.0]))
        self.basis = basis * self.psi[:, None]
        self.pinv = np.linalg.pinv(basis[win])
        self.p0_basis = self._p0_basis(g)

    def _p0_basis(self, g):
        pad = 2 * g.n
        n = 4 * g.n
        off = (np.arange(n) - pad) * g.dxi
        k = 2 * np.pi * np.fft.fftfreq(n, d=g.dxi)
        sym = rho0(k)
        sym[n // 2] = sym[n // 2].real
        psi = _step(off, *self.ramp)
        out = np.empty((g.n, 3))
        dpsi = _step_derivative(off, *self.ramp)
        m = np.empty(n, dtype=complex)
        nz = k != 0
        m[nz] = -sym[nz] / (1j * k[nz])
        m[~nz] = np.pi**2 / 12
        m[n // 2] = m[n // 2].real
        out[:, 0] = np.fft.ifft(m * np.fft.fft(dpsi)).real[pad:pad + g.n]
        for j, a in ((1, 0.5), (2, 1.0)):
            f = psi * np.exp(a * off)
            out[:, j] = -np.fft.ifft(sym * np.fft.fft(f)).real[pad:pad + g.n]
        return out

    def split(self, w):
        """Continuation coefficients and the remainder left for the FFT."""
        coef = self.pinv @ w[self.win]
        return coef, w - self.basis @ coef


def _bump_exp(x):
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, np.exp(-1.0 / np.maximum(x, 1e-300)), 0.0)


def _step(x, a, b):
    """C-infinity step: 1 for x <= a, 0 for x >= b."""
    u = np.clip((b - x) / (b - a), 0.0, 1.0)
    f, g = _bump_exp(u), _bump_exp(1 - u)
    return f / (f + g)


def _step_derivative(x, a, b):
    u = np.clip((b - x) / (b - a), 0.0, 1.0)
    f, g = _bump_exp(u), _bump_exp(1 - u)
    with np.errstate(divide="ignore", invalid="ignore"):
        df = np.where(u > 0, f / np.maximum(u, 1e-300) ** 2, 0.0)
        dg = np.where(u < 1, g / np.maximum(1 - u, 1e-300) ** 2, 0.0)
    ds = (df * g + f * dg) / (f + g) ** 2
    return -ds / (b - a)


class _Operator:
    """P applied with real FFTs; the multiplier commutes with the transform's phase."""

    def __init__(self, config):
        g = config.grid
        self.n = g.n
        kr = 2 * np.pi * np.fft.rfftfreq(g.n, d=g.dxi)
        sym = rho0(kr)
        sym[-1] = sym[-1].real
        self.sym = sym
        self.kr = kr
        self.kappa = config.kappa()
        use = config.left_closure and config.frozen_xi0 is None
        self.closure = _LeftClosure(g) if use else None

    def periodic_p0(self, w):
        return -np.fft.irfft(self.sym * np.fft.rfft(w), self.n)

    def p0(self, w):
        if self.closure is None:
            return self.periodic_p0(w)
        coef, rest = self.closure.split(w)
        return self.periodic_p0(rest) + self.closure.p0_basis @ coef

    def __call__(self, w):
        return self.kappa * self.p0(w)


def _etd_coefficients(Lh, M=32):
    # Kassam-Trefethen contour averages for ETDRK4; the full circle, since
    # Lh is complex
    r = np.exp(2j * np.pi * (np.arange(1, M + 1) - 0.5) / M)
    LR = Lh[:, None] + r[None, :]
    E = np.exp(Lh)
    E2 = np.exp(Lh / 2)
    Q = np.mean((np.exp(LR / 2) - 1) / LR, axis=1)
    f1 = np.mean((-4 - LR + np.exp(LR) * (4 - 3 * LR + LR**2)) / LR**3, axis=1)
    f2 = np.mean((2 + LR + np.exp(LR) * (-2 + LR)) / LR**3, axis=1)
    f3 = np.mean((-4 - 3 * LR - LR**2 + np.exp(LR) * (4 - LR)) / LR**3, axis=1)
    return E, E2, Q, f1, f2, f3


def _energy(w, kappa, dxi):
    # sum |w|^2 / kappa dxi: non-increasing for the homogeneous flow
    return float(np.sqrt(dxi * np.sum(w**2 / kappa)))


def evolve(config):
    """Integrate dw/dt = P(w) + Q(t) from w(0) = 0 and return the sampled `Trajectory`.

    Raises
    ------
    NumericalAbort
        If the weighted energy exceeds its Duhamel bound (instability)
        or the solution reaches the grid buffers (wrap-around).
    """
    config.validate()
    g = config.grid
    op = _Operator(config)
    dt, per = config.steps()
    f = config.forcing
    prof = f.spatial(g.X)
    tau = f.time_factor
    kappa = op.kappa
    # the left buffer is an outflow layer; only the right one should stay empty
    buffer = g.buffer_mask() & (g.xi > 0.5 * (g.xi_min + g.xi_max))
    prof_energy = _energy(prof, kappa, g.dxi)

    w = np.zeros(g.n)
    times = [0.0]
    states = [RadialFunction(g, w)]
    energies = [0.0]
    bound = 0.0
    worst_wrap = 0.0

    if config.integrator == "imex_frozen":
        kbar = _kappa_bar(config)
        Lr = -kbar * op.sym
        E, E2, Qc, f1, f2, f3 = _etd_coefficients(dt * Lr)
        resid = kappa - kbar
        closure = op.closure is not None

        def N(v, t):
            if closure:
                extra = kappa * op.p0(v) - kbar * op.periodic_p0(v)
            else:
                extra = resid * op.p0(v) if np.any(resid) else 0.0
            return np.fft.rfft(extra + tau(t) * prof)

    t = 0.0
    n_steps = per * (config.n_samples - 1)
    for step in range(1, n_steps + 1):
        if config.integrator == "rk4":
            k1 = op(w) + tau(t) * prof
            k2 = op(w + 0.5 * dt * k1) + tau(t + dt / 2) * prof
            k3 = op(w + 0.5 * dt * k2) + tau(t + dt / 2) * prof
            k4 = op(w + dt * k3) + tau(t + dt) * prof
            w = w + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        else:
            v = np.fft.rfft(w)
            Nv = N(w, t)
            a = E2 * v + dt * Qc * Nv
            Na = N(np.fft.irfft(a, g.n), t + dt / 2)
            b = E2 * v + dt * Qc * Na
            Nb = N(np.fft.irfft(b, g.n), t + dt / 2)
            c = E2 * a + dt * Qc * (2 * Nb - Nv)
            Nc = N(np.fft.irfft(c, g.n), t + dt)
            v = E * v + dt * (f1 * Nv + 2 * f2 * (Na + Nb) + f3 * Nc)
            w = np.fft.irfft(v, g.n)
        # Simpson for int |tau| ||Q|| over the step, the Duhamel bound on the energy
        bound += dt / 6 * (abs(tau(t)) + 4 * abs(tau(t + dt / 2)) + abs(tau(t + dt))) * prof_energy
        t = step * dt
        if step % per == 0:
            if not np.all(np.isfinite(w)):
                raise NumericalAbort(f"non-finite state at t = {t:g}")
            e = _energy(w, kappa, g.dxi)
            if e > 1.5 * bound + 1e-12:
                raise NumericalAbort(
                    f"energy {e:.4g} exceeds its forcing bound {bound:.4g} at t = {t:g}"
                )
            top = np.abs(w).max()
            if top > 0:
                wrap = np.abs(w[buffer]).max() / top
                worst_wrap = max(worst_wrap, wrap)
                if wrap > config.wrap_tol:
                    raise NumericalAbort(
                        f"solution reached the grid buffer ({wrap:.3g} of its sup) at t = {t:g}"
                    )
            times.append(t)
            states.append(RadialFunction(g, w.copy()))
            energies.append(e)
    info = {"dt": dt, "steps": n_steps, "energy": energies, "worst_wrap": worst_wrap,
            "forcing": config.forcing, "config": config}
    return Trajectory(times, states, provenance=config.digest(), info=info)


def solve_v_X(config):
    """`evolve` read on the X side; v(t, X_j) = w(t, xi_j) node by node."""
    return evolve(config)


def weighted_decay_check(traj, w):
    """Ratios of the solution's weighted size to the forcing's.

    r1(t) = ||v(t)||_{theta,rho} / (t sup_{s<=t} ||nu(s)||_{theta,rho}),
    r2(t) = sup_{X > t^2} |v(t,X)| X^{3/2} / (t^{4-2 theta} (1+t)^{-2 rho} sup_s ||nu(s)||_{theta,rho}).

    Suprema in X are over grid nodes; in s over the sample times.
    Ratios at t = 0 and where the forcing vanishes are left out.
    """
    f = traj.info["forcing"]
    base = f.weighted_sup(w.theta, w.rho)
    r1, r2 = [], []
    sup_tau = 0.0
    ts = []
    for t, s in zip(traj.times, traj.states):
        sup_tau = max(sup_tau, abs(f.time_factor(t)) / max(abs(f.amplitude), 1e-300))
        if t == 0:
            continue
        denom = base * sup_tau
        if denom == 0:
            r1.append(0.0)
            r2.append(0.0)
            ts.append(float(t))
            continue
        r1.append(weighted_sup_norm(s, w) / (t * denom))
        X = s.grid.X
        far = X > t**2
        r2.append(float(np.max(np.abs(s.values[far]) * X[far] ** 1.5))
                  / (t ** (4 - 2 * w.theta) * (1 + t) ** (-2 * w.rho) * denom))
        ts.append(float(t))
    return {"t": ts, "r1": r1, "r2": r2,
            "max_r1": float(max(r1)) if r1 else 0.0,
            "max_r2": float(max(r2)) if r2 else 0.0,
            "bounded": bool(np.all(np.isfinite(r1)) and np.all(np.isfinite(r2)))}


def forcing_time_integral(forcing, theta, T, J=4000):
    """int_0^T (1 + t^{-4 theta}) |tau(t)|^2 dt on the graded mesh t_j = T (j/J)^2.

    The first cell uses the exact integral of (1 + t^{-4 theta}) with tau
    frozen at t_1; the rest is trapezoidal.
    """
    if not 0 <= theta < 0.5:
        raise DomainError("theta must lie in [0, 1/2)")
    t = T * (np.arange(J + 1) / J) ** 2
    amp = max(abs(forcing.amplitude), 1e-300)
    tau2 = np.array([(forcing.time_factor(x) / amp) ** 2 for x in t])
    g = (1 + t[1:] ** (-4 * theta)) * tau2[1:]
    first = tau2[1] * (t[1] + t[1] ** (1 - 4 * theta) / (1 - 4 * theta))
    rest = np.sum(0.5 * (g[1:] + g[:-1]) * np.diff(t[1:]))
    return float(first + rest)


def _cumulative(times, values):
    return np.concatenate([[0.0], np.cumsum(0.5 * (values[1:] + values[:-1]) * np.diff(times))])


def _window_integral(times, cum, a, b):
    return float(np.interp(b, times, cum) - np.interp(a, times, cum))


def _tau2_integral(forcing, a, b):
    amp = max(abs(forcing.amplitude), 1e-300)
    pts = [p for p in forcing.breakpoints() if a < p < b]
    val = integrate.quad(lambda t: (forcing.time_factor(t) / amp) ** 2, a, b,
                         points=pts or None, limit=200)[0]
    return val


def smoothing_sweep(config, traj=None):
    """Both sides of the smoothing estimates on the (sigma, R, t0) lattice.

    Left-hand sides (per cell):
      ``a_i``: (int_{t0}^{min(t0+sqrt R, T*)} ||v||^2_{M_sigma(R J3)} dt)^{1/2}, R < 1;
      ``a_ii``: (int_0^{T*} ||v||^2_{M_sigma(R J3)} dt)^{1/2}, R >= 1 (t0 = 0);
      ``b``: (int_{t0}^{...} N_{R,sigma}[v]^2 dt)^{1/2}, R < 1;
      ``sgfrd`` (sigma = 0): (int_{t0}^{...} R^{-1} ||v||^2_{L^2(R I3)} + R^{-2} [[v]]^2_{R I3} dt)^{1/2}, R < 1.
    Right-hand sides are lattice suprema of the forcing functionals, one
    number per estimate; ``ratio`` = lhs / rhs and ``C_hat`` is its max.

    Returns
    -------
    dict with ``rows`` (list of dicts with keys sigma, R, t0, lhs_name,
    lhs, rhs_name, rhs, ratio), ``C_hat``, ``rhs`` and ``finite``.
    """
    config.validate()
    if config.theorem_mode not in ("smoothing", "remark"):
        raise ConfigError("smoothing sweeps need theorem_mode 'smoothing' or 'remark'")
    if traj is None:
        traj = evolve(config)
    g = config.grid
    f = config.forcing
    th, rh = config.weight.theta, config.weight.rho
    T = config.T_star
    times = traj.times
    states = traj.states
    small = [R for R in config.R_lattice if R < 1]
    large = [R for R in config.R_lattice if R >= 1]

    F1 = abs(f.amplitude) * f.weighted_sup(th, rh) * np.sqrt(forcing_time_integral(f, th, T))
    c_a = 1 + T ** (2 * (1 - th))
    c_b = 1 + T ** (2 * (1 - 2 * th))
    prof = f.profile_field(g)

    def eta_R(R):
        return CutoffSpec("eta0_R", (R,))(g.xi)

    def forcing_local(R, sigma, log_power):
        h = Field(g, eta_R(R) * prof.values)
        return sobolev_norm_from_spectrum(forward(h), sigma, log_power) ** 2

    def ends(t0, R):
        return t0, min(t0 + np.sqrt(R), T)

    rows = []
    rhs = {}
    for sigma in config.sigmas:
        # forcing functionals
        sup_small = 0.0
        sup_small_I2 = 0.0
        sup_small_L2 = 0.0
        for R in small:
            loc = forcing_local(R, sigma, -1)
            win2 = Window(R, "I2")
            locI2 = m_sigma_norm(Field(g, eta_R(R) * prof.values), sigma, win2) ** 2 if sigma <= 2 else 0.0
            A, B = win2.X_interval()
            l2I2 = _x_side_l2_sq(prof, A, B)
            for t0 in config.t0_lattice:
                a, b = ends(t0, R)
                ti = _tau2_integral(f, a, b)
                sup_small = max(sup_small, np.sqrt(R * loc * ti))
                sup_small_I2 = max(sup_small_I2, np.sqrt(R * locI2 * ti))
                sup_small_L2 = max(sup_small_L2, np.sqrt(l2I2 * ti))
        sup_large = 0.0
        for R in large:
            sup_large = max(sup_large, np.sqrt(R * forcing_local(R, sigma, -1) * _tau2_integral(f, 0, T)))
        rhs_a_i = c_a * F1 + sup_small
        rhs_a_ii = c_b * F1 + sup_large
        rhs_b = c_a * F1 + sup_small_I2
        rhs_s = c_b * F1 + sup_small_L2
        rhs[sigma] = {"a_i": rhs_a_i, "a_ii": rhs_a_ii, "b": rhs_b, "sgfrd": rhs_s, "F1": F1}

        def cell(R, sigma=sigma, rhs_a_i=rhs_a_i, rhs_a_ii=rhs_a_ii, rhs_b=rhs_b, rhs_s=rhs_s):
            out = []
            win = Window(R, "I3")
            msig = np.array([m_sigma_norm(s, sigma, win) ** 2 for s in states])
            cum = _cumulative(times, msig)
            if R >= 1:
                lhs = np.sqrt(_window_integral(times, cum, 0.0, T))
                return [_row(sigma, R, 0.0, "a_ii", lhs, rhs_a_ii)]
            nrs = np.array([n_r_sigma(s, R, sigma) ** 2 for s in states])
            cum_n = _cumulative(times, nrs)
            if sigma == 0:
                A, B = win.X_interval()
                comb = np.array([_x_side_l2_sq(s, A, B) / R + gagliardo_log_seminorm(s, win) / R**2
                                 for s in states])
                cum_s = _cumulative(times, comb)
            for t0 in config.t0_lattice:
                a, b = ends(t0, R)
                out.append(_row(sigma, R, t0, "a_i", np.sqrt(_window_integral(times, cum, a, b)), rhs_a_i))
                out.append(_row(sigma, R, t0, "b", np.sqrt(_window_integral(times, cum_n, a, b)), rhs_b))
                if sigma == 0:
                    out.append(_row(sigma, R, t0, "sgfrd",
                                    np.sqrt(_window_integral(times, cum_s, a, b)), rhs_s))
            return out

        # cells share the immutable trajectory; map keeps the lattice order
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            for chunk in pool.map(cell, config.R_lattice):
                rows.extend(chunk)
    ratios = [r["ratio"] for r in rows]
    finite = bool(np.all(np.isfinite([r["lhs"] for r in rows])) and np.all(np.isfinite(ratios)))
    if not finite:
        raise NumericalAbort("non-finite entry in the smoothing table")
    return {"rows": rows, "C_hat": float(max(ratios)) if ratios else 0.0, "rhs": rhs,
            "finite": finite, "lattice_supremum": True, "provenance": traj.provenance}


def _threads():
    try:
        return max(1, int(os.environ.get("WAVEKIN_THREADS", "1")))
    except ValueError:
        return 1


def _row(sigma, R, t0, name, lhs, rhs):
    return {"sigma": float(sigma), "R": float(R), "t0": float(t0), "lhs_name": name,
            "lhs": float(lhs), "rhs_name": "forcing_" + name, "rhs": float(rhs),
            "ratio": float(lhs / rhs) if rhs > 0 else (0.0 if lhs == 0 else float("inf"))}


def _x_side_l2_sq(v, A, B, panels=16, order=16):
    g = v.grid
    x, wq = np.polynomial.legendre.leggauss(order)
    edges = np.geomspace(A, B, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        X = lo + half * (x + 1)
        vals = interpolate(v.values, g.xi_min, g.dxi, np.log(X))
        total += half * np.sum(wq * vals**2)
    return float(total)


def spectral_tail_slope(f, band=(1 / 8, 1 / 2), bins=12):
    """Least-squares slope of log10 |w_hat| against log10 k over a band of k_max.

    |w_hat|^2 is averaged in log-spaced bins first, so oscillating
    spectra of piecewise-smooth data give a stable exponent.
    """
    g = f.grid
    k = np.abs(g.k)
    p = np.abs(forward(f).coefficients) ** 2
    edges = np.geomspace(band[0] * g.k_max, band[1] * g.k_max, bins + 1)
    xs, ys = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (k >= lo) & (k < hi)
        if np.any(sel) and p[sel].mean() > 0:
            xs.append(np.log10(np.sqrt(lo * hi)))
            ys.append(0.5 * np.log10(p[sel].mean()))
    return float(np.polyfit(xs, ys, 1)[0])


def smoothing_footprint(traj, band=(1 / 8, 1 / 2)):
    """Spectral slopes of the sampled states next to the forcing profile's slope.

    ``improvement`` is forcing slope minus solution slope (positive when
    the solution's tail falls off faster).
    """
    g = traj.grid
    base = spectral_tail_slope(traj.info["forcing"].profile_field(g), band)
    slopes = [spectral_tail_slope(s, band) for t, s in zip(traj.times, traj.states) if t > 0]
    imp = [base - s for s in slopes]
    return {"forcing_slope": base, "solution_slopes": slopes, "improvement": imp,
            "min_improvement": float(min(imp))}


def scaling_reproduction(config, R):
    """Run the base problem and its R-scaled twin and compare them.

    The twin has forcing R^{-1/2} nu(t/sqrt R, X/R), horizon sqrt(R) T*
    and step sqrt(R) dt, so its solution should be v(t/sqrt R, X/R). The
    comparison is the relative L^2 gap over the inner nodes common to
    both runs, maximized over sample times.
    """
    g = config.grid
    m = g.node_shift(R)
    s = np.sqrt(R)
    dt, per = config.steps()
    base = evolve(config.with_(dt=dt))
    # same steps per sample when stable, otherwise a whole multiple of them
    twin_cfg = config.with_(forcing=config.forcing.dilated(R), T_star=config.T_star * s,
                            dt=None, theorem_mode="none")
    limit = stability_dt(twin_cfg)
    q = max(1, int(np.ceil(dt * s / limit - 1e-9)))
    twin_cfg = twin_cfg.with_(dt=dt * s / q)
    twin = evolve(twin_cfg)
    inner = g.inner_mask() & np.roll(g.inner_mask(), -m)
    gaps = []
    for sb, st in zip(base.states[1:], twin.states[1:]):
        shifted = np.roll(st.values, -m)
        ref = np.linalg.norm(sb.values[inner])
        gaps.append(float(np.linalg.norm((shifted - sb.values)[inner]) / ref))
    return {"R": float(R), "max_rel_gap": max(gaps), "gaps": gaps}


# ---------------------------------------------------------------------------
# appendix inequalities


def _random_family(grid, rng, size=10, terms=3):
    """Seeded family of forcings h(s, xi) = sum_i c_i(s) phi_i(xi)."""
    xi = grid.xi
    fam = []
    for _ in range(size):
        members = []
        for _ in range(terms):
            c = rng.uniform(-2, 2)
            w = rng.uniform(0.3, 0.8)
            kk = rng.uniform(0, 6)
            ph = rng.uniform(0, 2 * np.pi)
            phi = np.exp(-0.5 * ((xi - c) / w) ** 2) * np.cos(kk * xi + ph)
            a0, a1, om, ps = rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 8), rng.uniform(0, 6)
            members.append((phi, (a0, a1, om, ps)))
        fam.append(members)
    return fam


def _time_coeff(p):
    a0, a1, om, ps = p
    return lambda t: a0 + a1 * np.cos(om * t + ps)


def _duhamel_gain_ratios(grid, family, sigma, kappa0, t_grid):
    k = grid.k
    b = np.where(np.abs(k) > 1, rho0(k).real, 0.0)
    rate = kappa0 * b
    w_s = (1 + k**2) ** sigma
    w_log = w_s / (1 + np.log1p(np.abs(k)))
    r0, r1 = [], []
    for members in family:
        inner = np.zeros((len(t_grid), grid.n), dtype=complex)
        src = np.zeros((len(t_grid), grid.n), dtype=complex)
        for phi, p in members:
            ph = forward(Field(grid, phi)).coefficients
            c = _time_coeff(p)
            E = exp_convolution(rate, c, t_grid, tol=1e-11)
            inner += E * ph
            src += np.array([c(t) for t in t_grid])[:, None] * ph
        lhs0 = grid.dk * np.sum(w_s * np.abs(b * inner) ** 2, axis=1)
        lhs1 = grid.dk * np.sum(w_s * np.abs(inner) ** 2, axis=1)
        den0 = grid.dk * np.sum(w_s * np.abs(src) ** 2, axis=1)
        den1 = grid.dk * np.sum(w_log * np.abs(src) ** 2, axis=1)
        I = lambda y: integrate.simpson(y, x=t_grid)
        r0.append(I(lhs0) / I(den0) if I(den0) > 0 else 0.0)
        r1.append(I(lhs1) / I(den1) if I(den1) > 0 else 0.0)
    return r0, r1


def _commutator_B(grid, chi, h, tail=40.0):
    """B(h)(xi) = int (chi(xi) - chi(xi - z)) h(xi - z) K(z) dz, K(z) = 1/|e^z - 1| - 1/(e^z + 1).

    Whole-node shifts z = j dxi paired with -z; the paired integrand is
    continuous at z = 0 with value 0, so the trapezoid rule applies.
    """
    J = int(tail / grid.dxi)
    out = np.zeros(grid.n)
    for j in range(1, J + 1):
        z = j * grid.dxi
        kp = 1.0 / np.expm1(z) - 1.0 / (np.exp(z) + 1.0)
        km = 1.0 / -np.expm1(-z) - 1.0 / (np.exp(-z) + 1.0)
        out += grid.dxi * ((chi - np.roll(chi, j)) * np.roll(h, j) * kp
                           + (chi - np.roll(chi, -j)) * np.roll(h, -j) * km)
    return out


def appendix_inequality_suite(grid, sigmas=(0.0, 0.5, 1.0), xi0=0.0, seed=7, n_time=65):
    """Evaluate the three appendix inequalities on a seeded random family.

    * T1-Duhamel bound: int_0^1 ||int_0^t T1 e^{kappa0 T1 (t-s)} h(s) ds||^2_{H^sigma} dt
      against int_0^1 ||h||^2_{H^sigma} dt;
    * log-gain bound: the same without the leading T1, target H^sigma,
      source H^sigma_{log^-1};
    * commutator bound: ||B(h)||_{H^sigma} / ||h||_{H^{sigma-1}} for sigma > 1
      (sigma + 1 is used for entries <= 1).

    Returns
    -------
    dict of max ratios per sigma, the per-mode closed-form check and a
    locality probe for the commutator.
    """
    rng = np.random.default_rng(seed)
    family = _random_family(grid, rng)
    kappa0 = np.exp(-xi0 / 2)
    t_grid = np.linspace(0.0, 1.0, n_time)
    out = {"sigma": [float(s) for s in sigmas], "t1_duhamel": [], "log_gain": [], "commutator": []}
    for s in sigmas:
        r0, r1 = _duhamel_gain_ratios(grid, family, s, kappa0, t_grid)
        out["t1_duhamel"].append(float(max(r0)))
        out["log_gain"].append(float(max(r1)))

    # per-mode closed form, one lattice mode above |k| = 1
    m = int(np.ceil(3.0 / grid.dk))
    k1 = m * grid.dk
    b1 = rho0(k1).real
    E = exp_convolution(np.array([kappa0 * b1]), lambda t: 1.0, t_grid, tol=1e-13)[:, 0]
    closed = -np.expm1(-kappa0 * b1 * t_grid) / (kappa0 * b1)
    out["closed_form_error"] = float(np.max(np.abs(E - closed)))

    chi = CutoffSpec("smooth_bump", (0.0, 1.0, 2.5))(grid.xi)
    rngc = np.random.default_rng(seed + 1)
    for s in sigmas:
        s_eff = s if s > 1 else s + 1.0
        ratios = []
        for _ in range(10):
            c, w, kk = rngc.uniform(-2, 2), rngc.uniform(0.3, 0.8), rngc.uniform(0, 6)
            h = np.exp(-0.5 * ((grid.xi - c) / w) ** 2) * np.cos(kk * grid.xi)
            B = _commutator_B(grid, chi, h)
            num = sobolev_norm_from_spectrum(forward(Field(grid, B)), s_eff)
            den = sobolev_norm_from_spectrum(forward(Field(grid, h)), s_eff - 1)
            ratios.append(num / den)
        out["commutator"].append(float(max(ratios)))
    # h deep inside the plateau of a wide cutoff: B(h) is exponentially small
    wide = CutoffSpec("smooth_bump", (0.0, 6.0, 7.0))(grid.xi)
    h = np.exp(-0.5 * (grid.xi / 0.3) ** 2)
    Bl = _commutator_B(grid, wide, h)
    out["commutator_locality"] = float(np.sqrt(grid.dxi * np.sum(Bl**2)) / np.sqrt(grid.dxi * np.sum(h**2)))
    out["finite"] = bool(all(np.isfinite(v) for key in ("t1_duhamel", "log_gain", "commutator")
                             for v in out[key]))
    return out
