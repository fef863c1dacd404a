"""Periodic log-variable grid, unitary discrete Fourier transform and multipliers.

Conventions
-----------
Nodes are xi_j = xi_min + j * dxi, j = 0..n-1, periodic with length
L = xi_max - xi_min. The transform is the Riemann sum of the unitary
continuum transform,

    w_hat(k_m) = dxi / sqrt(2 pi) * sum_j exp(-i k_m xi_j) w(xi_j),

with k_m = 2 pi m / L stored in FFT order. Norms weight every mode by
dk = 2 pi / L, so sum |w_hat|^2 dk = sum |w|^2 dxi exactly and refined
grids converge to the continuum integrals. The Nyquist mode carries the
real part of any multiplier so real fields stay real.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ContractError, DomainError, QuadratureError
from .specfun import rho0

__all__ = [
    "UniformLogGrid",
    "Field",
    "RadialFunction",
    "Spectrum",
    "Trajectory",
    "Multiplier",
    "forward",
    "inverse",
    "apply_multiplier",
    "sobolev_norm",
    "sobolev_norm_from_spectrum",
    "frozen_semigroup_apply",
    "exp_convolution",
    "duhamel_solve",
    "duhamel_constant_closed_form",
    "regularization_gain",
    "field_with_spectrum",
]


@dataclass(frozen=True)
class UniformLogGrid:
    """Uniform periodic grid in xi = log X.

    Parameters
    ----------
    xi_min, xi_max : float
        Endpoints; the node at xi_max is identified with xi_min.
    n : int
        Number of nodes, a power of two.
    """

    xi_min: float
    xi_max: float
    n: int

    def __post_init__(self):
        if not self.xi_max > self.xi_min:
            raise ContractError("xi_max must exceed xi_min")
        if self.n < 2 or self.n & (self.n - 1):
            raise ContractError(f"n must be a power of two, got {self.n}")

    @classmethod
    def dyadic(cls, n, per_octave, center=0.0):
        """Grid with dxi = log(2)/per_octave, so dilations by 2^j are node shifts."""
        dxi = np.log(2.0) / per_octave
        lo = center - 0.5 * n * dxi
        return cls(lo, lo + n * dxi, n)

    @property
    def length(self):
        return self.xi_max - self.xi_min

    @property
    def dxi(self):
        return self.length / self.n

    @property
    def dk(self):
        return 2 * np.pi / self.length

    @property
    def xi(self):
        return self.xi_min + self.dxi * np.arange(self.n)

    @property
    def X(self):
        return np.exp(self.xi)

    @property
    def k(self):
        """Wavenumbers in FFT order; index n/2 is the Nyquist mode -pi/dxi."""
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.dxi)

    @property
    def k_max(self):
        return np.pi / self.dxi

    def inner_mask(self, fraction=0.7):
        """Nodes in the central ``fraction`` of the domain."""
        mid = 0.5 * (self.xi_min + self.xi_max)
        return np.abs(self.xi - mid) <= 0.5 * fraction * self.length

    def buffer_mask(self, fraction=0.15):
        """Nodes within ``fraction`` of the domain from either end."""
        d = self.xi - self.xi_min
        return (d < fraction * self.length) | (d > (1 - fraction) * self.length)

    def node_shift(self, R):
        """Integer node offset for the dilation X -> R X, or raise if off-grid."""
        m = np.log(R) / self.dxi
        mi = int(np.rint(m))
        if abs(m - mi) > 1e-9:
            raise DomainError(f"dilation by {R:g} is not a whole number of nodes")
        return mi


@dataclass(frozen=True, eq=False)
class Field:
    """Samples of a function of xi on a grid (real, or complex on test paths)."""

    grid: UniformLogGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(float)
        if v.shape != (self.grid.n,):
            raise ContractError(f"expected {self.grid.n} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ContractError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func(xi)`` on the nodes."""
        return cls(grid, func(grid.xi))

    def l2(self):
        return float(np.sqrt(self.grid.dxi * np.sum(np.abs(self.values) ** 2)))

    def __add__(self, other):
        return type(self)(self.grid, self.values + other.values)

    def __sub__(self, other):
        return type(self)(self.grid, self.values - other.values)

    def __mul__(self, c):
        return type(self)(self.grid, c * self.values)

    __rmul__ = __mul__


class RadialFunction(Field):
    """A function of X > 0 stored by its values at X_j = exp(xi_j).

    The identification v(X_j) = w(xi_j) is exact, so this is a `Field`
    with an X-side view.
    """

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func(X)`` at X_j = exp(xi_j)."""
        return cls(grid, func(grid.X))

    @property
    def X(self):
        return self.grid.X


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Unitary Fourier coefficients, FFT order, paired with a grid."""

    grid: UniformLogGrid
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.shape != (self.grid.n,):
            raise ContractError(f"expected {self.grid.n} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coefficients", c)

    @property
    def wavenumbers(self):
        return self.grid.k

    def hermitian_defect(self):
        """max |c(-m) - conj c(m)| over the lattice."""
        c = self.coefficients
        mirror = np.roll(c[::-1], 1)
        return float(np.max(np.abs(mirror - np.conj(c))))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled states of one evolution sharing one grid."""

    times: np.ndarray
    states: tuple
    provenance: str = ""
    info: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if len(t) != len(self.states):
            raise ContractError("times and states differ in length")
        if np.any(np.diff(t) <= 0):
            raise ContractError("times must increase")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def grid(self):
        return self.states[0].grid

    def array(self):
        """States stacked as an (n_times, n) array."""
        return np.array([s.values for s in self.states])


def _phase(grid):
    return np.exp(-1j * grid.k * grid.xi_min)


def forward(f):
    """Unitary discrete Fourier transform of a `Field`."""
    g = f.grid
    c = g.dxi / np.sqrt(2 * np.pi) * _phase(g) * np.fft.fft(f.values)
    return Spectrum(g, c)


def inverse(s, real=True):
    """Inverse of `forward`; ``real=False`` keeps the complex samples."""
    g = s.grid
    v = np.fft.ifft(s.coefficients / _phase(g)) * (np.sqrt(2 * np.pi) / g.dxi)
    return Field(g, v.real if real else v)


@dataclass(frozen=True)
class Multiplier:
    """A Fourier multiplier k -> m(k).

    Use the factory class methods. T1 and T2 carry the signs for which
    exp(kappa0 * T1 * t) is the damped high-frequency flow: T1 has symbol
    -Re rho0(k) 1_{|k|>1} and T2 has symbol -1_{|k|<=1}.
    """

    tag: str
    params: tuple = ()
    func: object = None

    @classmethod
    def T1(cls):
        return cls("T1")

    @classmethod
    def T2(cls):
        return cls("T2")

    @classmethod
    def sobolev(cls, sigma):
        return cls("sobolev", (float(sigma),))

    @classmethod
    def sobolev_log(cls, sigma, p):
        if p not in (1, -1):
            raise DomainError("log power must be +1 or -1")
        return cls("sobolev_log", (float(sigma), int(p)))

    @classmethod
    def semigroup(cls, t, kappa0):
        if t < 0:
            raise DomainError("semigroup time must be non-negative")
        return cls("semigroup", (float(t), float(kappa0)))

    @classmethod
    def custom(cls, func):
        return cls("custom", (), func)

    def values(self, k):
        k = np.asarray(k, dtype=float)
        a = np.abs(k)
        if self.tag == "T1":
            return np.where(a > 1, -rho0(k).real, 0.0)
        if self.tag == "T2":
            return np.where(a <= 1, -1.0, 0.0)
        if self.tag == "sobolev":
            return (1 + k**2) ** (self.params[0] / 2)
        if self.tag == "sobolev_log":
            sigma, p = self.params
            return (1 + k**2) ** (sigma / 2) * (1 + np.log1p(a)) ** (p / 2)
        if self.tag == "semigroup":
            t, kappa0 = self.params
            if t == 0:
                return np.ones_like(k, dtype=complex)
            return np.exp(-kappa0 * t * rho0(k))
        if self.tag == "custom":
            return np.asarray(self.func(k))
        raise DomainError(f"unknown multiplier {self.tag!r}")


def _grid_multiplier(mult, grid):
    m = np.array(mult.values(grid.k), dtype=complex)
    if grid.n % 2 == 0:
        m[grid.n // 2] = m[grid.n // 2].real
    return m


def apply_multiplier(s, mult):
    """Coefficient-wise product of a `Spectrum` with a `Multiplier`."""
    return Spectrum(s.grid, s.coefficients * _grid_multiplier(mult, s.grid))


def sobolev_norm_from_spectrum(s, sigma, log_power=0):
    """Lattice quadrature of int |w_hat|^2 (1+k^2)^sigma (1+log(1+|k|))^p dk."""
    k = s.grid.k
    weight = (1 + k**2) ** sigma * (1 + np.log1p(np.abs(k))) ** log_power
    return float(np.sqrt(s.grid.dk * np.sum(weight * np.abs(s.coefficients) ** 2)))


def sobolev_norm(f, sigma, log_power=0):
    """H^sigma norm of a field, optionally with the (1+log(1+|k|))^{+-1} weight.

    Parameters
    ----------
    f : Field
    sigma : float
        In [-4, 4].
    log_power : {-1, 0, 1}
    """
    if not -4 <= sigma <= 4:
        raise DomainError(f"sigma must lie in [-4, 4], got {sigma}")
    if log_power not in (-1, 0, 1):
        raise DomainError("log_power must be -1, 0 or 1")
    return sobolev_norm_from_spectrum(forward(f), sigma, log_power)


def frozen_semigroup_apply(h0, t, xi0):
    """exp(t kappa0 P0) h0 with kappa0 = exp(-xi0/2); t = 0 returns h0 itself."""
    if t < 0:
        raise DomainError("t must be non-negative")
    if t == 0:
        return Field(h0.grid, h0.values)
    kappa0 = np.exp(-xi0 / 2)
    return inverse(apply_multiplier(forward(h0), Multiplier.semigroup(t, kappa0)))


_GL_X, _GL_W = np.polynomial.legendre.leggauss(4)


def _panel_integral(a, tau, t0, t1, m):
    # int_t0^t1 exp(-a (t1 - s)) tau(s) ds with m Gauss-Legendre panels
    edges = np.linspace(t0, t1, m + 1)
    total = np.zeros_like(a, dtype=complex)
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        s = lo + half * (_GL_X + 1)
        tv = np.array([tau(si) for si in s])
        total += half * (np.exp(-np.multiply.outer(a, t1 - s)) @ (_GL_W * tv))
    return total


def exp_convolution(a, tau, t_grid, breakpoints=(), tol=1e-12, max_panels=1024):
    """E(t_j) = int_0^{t_j} exp(-a (t_j - s)) tau(s) ds for every rate in ``a``.

    Stepped interval by interval with E(t_{j+1}) = exp(-a dt) E(t_j) plus a
    Gauss-Legendre panel sum on [t_j, t_{j+1}] (4 points per panel). Each
    interval is split at ``breakpoints`` and the panel count doubled until
    two successive sums agree to ``tol``.

    Returns
    -------
    ndarray of complex, shape (len(t_grid), len(a))

    Raises
    ------
    QuadratureError
        Carrying the per-rate residual when ``max_panels`` is not enough.
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0 or np.any(np.diff(t_grid) <= 0):
        raise DomainError("t_grid must start at 0 and increase")
    out = np.zeros((len(t_grid), len(a)), dtype=complex)
    e = np.zeros_like(a)
    for j in range(1, len(t_grid)):
        t0, t1 = t_grid[j - 1], t_grid[j]
        cuts = [t0] + [b for b in breakpoints if t0 < b < t1] + [t1]
        step = np.zeros_like(a)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            m = 1
            prev = _panel_integral(a, tau, lo, hi, m)
            while True:
                m *= 2
                cur = _panel_integral(a, tau, lo, hi, m)
                resid = np.abs(cur - prev)
                if np.all(resid <= tol * (1 + np.abs(cur))):
                    break
                if m >= max_panels:
                    raise QuadratureError(
                        f"time quadrature on [{lo:g}, {hi:g}] did not settle",
                        estimate=resid,
                    )
                prev = cur
            step = step * np.exp(-a * (hi - lo)) + cur
        e = e * np.exp(-a * (t1 - t0)) + step
        out[j] = e
    return out


def duhamel_constant_closed_form(a, t):
    """int_0^t exp(-a (t - s)) ds = (1 - exp(-a t)) / a, equal to t where a = 0."""
    a = np.asarray(a, dtype=complex)
    safe = np.where(a == 0, 1.0, a)
    return np.where(a == 0, t, -np.expm1(-safe * t) / safe)


def duhamel_solve(h0, forcing, t_grid, xi0, tol=1e-12):
    """Frozen-coefficient solution of dh/dt = kappa0 P0 h + Q, h(0) = h0.

    Each mode evolves as

        h_hat(t,k) = exp(-kappa0 rho0(k) t) h0_hat(k)
                     + int_0^t exp(-kappa0 rho0(k)(t-s)) Q_hat(s,k) ds.

    ``forcing`` is a separable `ForcingSpec` (profile times time factor).
    For a constant time profile the integral is taken in closed form,
    with limit t Q_hat(0) at k = 0; otherwise by `exp_convolution`.

    Returns
    -------
    Trajectory
    """
    grid = h0.grid
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0 or np.any(np.diff(t_grid) <= 0):
        raise DomainError("t_grid must start at 0 and increase")
    kappa0 = np.exp(-xi0 / 2)
    a = kappa0 * rho0(grid.k)
    # keep the Nyquist rate real, as every multiplier does
    a[grid.n // 2] = a[grid.n // 2].real
    h0_hat = forward(h0).coefficients
    q_hat = forward(forcing.profile_field(grid)).coefficients

    if forcing.time_profile == "constant":
        conv = np.array([duhamel_constant_closed_form(a, t) for t in t_grid])
    else:
        conv = exp_convolution(a, forcing.time_factor, t_grid, forcing.breakpoints(), tol=tol)

    states = []
    for j, t in enumerate(t_grid):
        c = np.exp(-a * t) * h0_hat + conv[j] * q_hat
        if t == 0:
            states.append(Field(grid, h0.values))
        else:
            states.append(inverse(Spectrum(grid, c)))
    return Trajectory(t_grid, states, info={"xi0": float(xi0), "kappa0": float(kappa0)})


def field_with_spectrum(grid, amplitude, center=0.0):
    """Real field whose coefficients have modulus ``amplitude(k)`` and a peak at ``center``."""
    k = grid.k
    c = amplitude(np.abs(k)) * np.exp(-1j * k * center)
    c = np.asarray(c, dtype=complex)
    c[grid.n // 2] = c[grid.n // 2].real
    return inverse(Spectrum(grid, c))


def regularization_gain(h0, t_list, sigma, xi0, floor=1e-300):
    """Ratios ||S(t) h0||_{H^{sigma + t kappa0}} / ||h0||_{H^sigma}.

    Requires |h0_hat(k)| > ``floor`` for all |k| <= k_max/4 so that the
    gain is actually probed at high frequency.

    Returns
    -------
    dict with ``t``, ``ratio`` (lists) and ``max_ratio``.
    """
    grid = h0.grid
    s0 = forward(h0)
    probe = np.abs(grid.k) <= grid.k_max / 4
    if np.any(np.abs(s0.coefficients[probe]) <= floor):
        raise DomainError("initial spectrum vanishes below k_max/4")
    kappa0 = np.exp(-xi0 / 2)
    base = sobolev_norm_from_spectrum(s0, sigma)
    ratios = []
    for t in t_list:
        st = apply_multiplier(s0, Multiplier.semigroup(t, kappa0))
        ratios.append(sobolev_norm_from_spectrum(st, sigma + t * kappa0) / base)
    return {"t": [float(t) for t in t_list], "ratio": ratios, "max_ratio": float(max(ratios)),
            "sigma": float(sigma), "kappa0": float(kappa0)}
