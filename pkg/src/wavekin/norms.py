"""Weighted sup norms, Mellin-side Sobolev norms and double-integral seminorms.

Fourier/Mellin conventions follow `wavekin.spectral`: for w(xi) = v(e^xi),
M(v)(-ik) = int X^{-1-ik} v(X) dX = sqrt(2 pi) w_hat(k). The M_sigma
norms drop that 2 pi so that ||v||_{M_sigma} = ||w||_{H^sigma} and the
global and local (window) versions agree on functions supported inside
the window.
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._quad import gagliardo_double_integral, interpolate, interval_integral
from .errors import ConfigError, DomainError, UnsupportedOrderError
from .kinetic_ops import INTERVALS, CutoffSpec
from .spectral import Field, Spectrum, forward, inverse, sobolev_norm_from_spectrum
from .specfun import rho0

__all__ = [
    "WeightSpec",
    "Window",
    "weighted_sup_norm",
    "truncation_convergence",
    "mellin",
    "mellin_quadrature",
    "m_sigma_norm",
    "local_sobolev_norm",
    "norm_equivalence_report",
    "x_side_sobolev_combination",
    "gagliardo_log_seminorm",
    "h0log_double_integral_norm",
    "n_r_sigma",
    "local_log_bound_check",
    "spectral_derivative",
]


@dataclass(frozen=True)
class WeightSpec:
    """Exponents of ||g||_{theta,rho} = sup_{X>0} X^theta (1+X)^rho |g(X)|."""

    theta: float
    rho: float

    def weight(self, X):
        return X**self.theta * (1 + X) ** self.rho

    def validate(self, mode="decay"):
        """Check the weight hypotheses of an estimate family; raise `ConfigError` naming the violated one.

        Modes: ``decay`` (theta >= 0, theta+rho in (0, 3/2)), ``smoothing``
        (theta in (0, 1/4), theta+rho in (1/2, 3/2)), ``remark`` (theta in
        (0, 1/2), theta+rho in (1/2, 3/2)).
        """
        th, s = self.theta, self.theta + self.rho
        if mode == "decay":
            if th < 0:
                raise ConfigError("θ < 0")
            if not 0 < s < 1.5:
                raise ConfigError("θ+ρ ∉ (0, 3/2)")
        elif mode in ("smoothing", "remark"):
            top = 0.25 if mode == "smoothing" else 0.5
            if not 0 < th < top:
                raise ConfigError(f"θ ∉ (0, {'1/4' if top == 0.25 else '1/2'})")
            if not 0.5 < s < 1.5:
                raise ConfigError("θ+ρ ∉ (1/2, 3/2)")
        else:
            raise ConfigError(f"unknown validation mode {mode!r}")
        return self


@dataclass(frozen=True)
class Window:
    """The dilated interval R * base on the X side.

    ``base`` is one of "I1".."I4" or an explicit (a, b) with 0 < a < b.
    """

    R: float = 1.0
    base: object = "I3"

    def __post_init__(self):
        if not self.R > 0:
            raise ConfigError("window scale R must be positive")
        a, b = self._base()
        if not 0 < a < b:
            raise ConfigError("window needs 0 < a < b")

    def _base(self):
        if isinstance(self.base, str):
            if self.base not in INTERVALS:
                raise ConfigError(f"unknown interval {self.base!r}")
            return INTERVALS[self.base]
        return tuple(float(x) for x in self.base)

    def X_interval(self):
        a, b = self._base()
        return self.R * a, self.R * b

    def xi_interval(self):
        a, b = self.X_interval()
        return np.log(a), np.log(b)

    def contains(self, other):
        a, b = self.X_interval()
        c, d = other.X_interval()
        return a <= c and d <= b


def _require_inside(grid, lo, hi):
    if lo < grid.xi_min or hi > grid.xi_max:
        raise DomainError("window leaves the grid")


def weighted_sup_norm(v, w):
    """max over nodes of X^theta (1+X)^rho |v(X)|."""
    return float(np.max(w.weight(v.grid.X) * np.abs(v.values)))


def truncation_convergence(g, w, w_prime, n_list):
    """||g - g_n||_{theta',rho'} for g_n = g 1_{[1/n, n]}.

    Requires theta' > theta and rho' < rho + theta - theta'. Cut-offs n
    with log n beyond the grid are dropped; the supremum is taken over the
    grid nodes.

    Returns
    -------
    dict with ``n``, ``tail`` (lists), ``monotone``, ``reference`` (the
    theta, rho norm of g) and ``converged`` (last tail below 1e-3 of it).
    """
    th, rh = w.theta, w.rho
    tp, rp = w_prime.theta, w_prime.rho
    if not tp > th:
        raise ConfigError("θ' must exceed θ")
    if not rp < rh + th - tp:
        raise ConfigError("ρ' must be below ρ + θ - θ'")
    X = g.grid.X
    ns = [n for n in sorted(n_list) if np.log(n) < g.grid.xi_max and -np.log(n) > g.grid.xi_min]
    tails = []
    for n in ns:
        outside = (X < 1.0 / n) | (X > n)
        vals = np.where(outside, w_prime.weight(X) * np.abs(g.values), 0.0)
        tails.append(float(vals.max()))
    ref = weighted_sup_norm(g, w)
    mono = bool(np.all(np.diff(tails) <= 1e-15 * max(ref, 1.0)))
    return {"n": ns, "tail": tails, "monotone": mono, "reference": ref,
            "converged": bool(tails and tails[-1] <= 1e-3 * ref)}


def mellin(v, k_lattice=None):
    """M(v)(-ik) from the xi-side transform of w(xi) = v(e^xi).

    On the grid's own lattice (``k_lattice=None``) this is sqrt(2 pi)
    times `forward`; for other wavenumbers the Riemann sum
    sum_j e^{-ik xi_j} w_j dxi is evaluated directly.
    """
    g = v.grid
    if k_lattice is None:
        return np.sqrt(2 * np.pi) * forward(v).coefficients
    k = np.atleast_1d(np.asarray(k_lattice, dtype=float))
    return g.dxi * np.exp(-1j * np.outer(k, g.xi)) @ v.values


def mellin_quadrature(func, k, a, b, tol=1e-12):
    """int_a^b X^{-1-ik} v(X) dX by adaptive quadrature in X (a callable ``func``)."""
    out = []
    for kk in np.atleast_1d(k):
        re = integrate.quad(lambda X: np.cos(kk * np.log(X)) * func(X) / X, a, b,
                            epsabs=tol, epsrel=1e-12, limit=1000)[0]
        im = integrate.quad(lambda X: -np.sin(kk * np.log(X)) * func(X) / X, a, b,
                            epsabs=tol, epsrel=1e-12, limit=1000)[0]
        out.append(re + 1j * im)
    return np.array(out)


def spectral_derivative(f, order=1):
    """d^order w / d xi by the multiplier (ik)^order (Nyquist mode dropped)."""
    g = f.grid
    s = forward(f)
    m = (1j * g.k) ** order
    m[g.n // 2] = 0.0
    return inverse(Spectrum(g, s.coefficients * m), real=not np.iscomplexobj(f.values))


def _local_l2_sq(vals_fn, a, b, panels=16, order=16):
    edges = np.linspace(a, b, panels + 1)
    return sum(interval_integral(lambda x: np.abs(vals_fn(x)) ** 2, lo, hi, order)
               for lo, hi in zip(edges[:-1], edges[1:]))


def local_sobolev_norm(f, sigma, a, b, gauss_order=64):
    """H^sigma((a, b)) norm of a field for sigma in [0, 2].

    sigma = 0: L^2; (0, 1): L^2 plus the Gagliardo seminorm
    int int |w(x) - w(y)|^2 / |x - y|^{1+2 sigma}; 1: L^2 plus ||w'||^2;
    (1, 2): adds the Gagliardo seminorm of w' of order sigma - 1; 2: adds
    ||w''||^2. Off-grid values use local Lagrange interpolation.
    """
    if not 0 <= sigma <= 2:
        raise UnsupportedOrderError(f"local norms cover sigma in [0, 2], got {sigma}")
    g = f.grid
    _require_inside(g, a, b)

    def interp_of(values):
        return lambda x: interpolate(values, g.xi_min, g.dxi, x)

    w = interp_of(f.values)
    total = _local_l2_sq(w, a, b)
    if sigma == 0:
        return float(np.sqrt(total))
    if sigma < 1:
        total += gagliardo_double_integral(w, a, b, 1 + 2 * sigma, gauss_order)
        return float(np.sqrt(total))
    d1 = interp_of(spectral_derivative(f).values)
    total += _local_l2_sq(d1, a, b)
    if 1 < sigma < 2:
        total += gagliardo_double_integral(d1, a, b, 2 * sigma - 1, gauss_order)
    elif sigma == 2:
        total += _local_l2_sq(interp_of(spectral_derivative(f, 2).values), a, b)
    return float(np.sqrt(total))


def m_sigma_norm(v, sigma, window=None):
    """||v||_{M_sigma}, globally or on a window.

    Global: sqrt(int (1+k^2)^sigma |w_hat|^2 dk) on the lattice. With a
    `Window`: the H^sigma norm of w on log(R * base) (sigma in [0, 2]).
    """
    if window is None:
        return sobolev_norm_from_spectrum(forward(v), sigma)
    a, b = window.xi_interval()
    return local_sobolev_norm(v, sigma, a, b)


def x_side_sobolev_combination(v, sigma, window, gauss_order=64):
    """The X-side quantity bounded above and below by ||v||^2_{M_sigma(RJ)}.

    sigma in (0, 1):
        R^{-1} int_{RJ} |v|^2 dX + R^{2 sigma - 1} int int |v(X)-v(Y)|^2 / |X-Y|^{2 sigma + 1};
    sigma in (1, 2):
        R^{-1} ||v||^2 + R ||v'||^2 + R^{2 sigma - 1} int int |v'(X)-v'(Y)|^2 / |X-Y|^{2 sigma - 1}.
    """
    if not (0 < sigma < 1 or 1 < sigma < 2):
        raise UnsupportedOrderError("the X-side combination covers sigma in (0,1) or (1,2)")
    g = v.grid
    A, B = window.X_interval()
    _require_inside(g, np.log(A), np.log(B))
    R = window.R

    def vx(X):
        return interpolate(v.values, g.xi_min, g.dxi, np.log(X))

    total = _local_l2_sq(vx, A, B) / R
    if sigma < 1:
        total += R ** (2 * sigma - 1) * gagliardo_double_integral(vx, A, B, 2 * sigma + 1, gauss_order)
        return float(total)
    dw = spectral_derivative(v).values

    def dvx(X):
        return interpolate(dw, g.xi_min, g.dxi, np.log(X)) / X

    total += R * _local_l2_sq(dvx, A, B)
    total += R ** (2 * sigma - 1) * gagliardo_double_integral(dvx, A, B, 2 * sigma - 1, gauss_order)
    return float(total)


def norm_equivalence_report(family, sigma, R_list, base="I3"):
    """Ratios of the X-side combination to ||v||^2_{M_sigma(RJ)}.

    ``family`` is a list of callables phi(X); for each R the member is
    dilated to v(X) = phi(X / R) on the grid of ``family_grid`` so that
    the ratio probes the R-dependence of the equivalence constants.

    Parameters
    ----------
    family : tuple (grid, list of callables)

    Returns
    -------
    dict with the ratio table, its min/max, the spread max/min and the
    drift: max over members of (max over R / min over R) - 1.
    """
    grid, funcs = family
    table = []
    for phi in funcs:
        row = []
        for R in R_list:
            v = Field(grid, phi(grid.X / R))
            win = Window(R, base)
            lhs = x_side_sobolev_combination(v, sigma, win)
            rhs = m_sigma_norm(v, sigma, win) ** 2
            row.append(lhs / rhs if rhs > 0 else 0.0)
        table.append(row)
    t = np.array(table)
    pos = t[t > 0]
    drift = float(np.max(t.max(axis=1) / np.where(t.min(axis=1) > 0, t.min(axis=1), 1.0)) - 1)
    return {
        "sigma": float(sigma),
        "R": [float(r) for r in R_list],
        "ratios": t.tolist(),
        "min_ratio": float(pos.min()) if pos.size else 0.0,
        "max_ratio": float(pos.max()) if pos.size else 0.0,
        "spread": float(pos.max() / pos.min()) if pos.size else 1.0,
        "drift": drift,
    }


def gagliardo_log_seminorm(v, window, gauss_order=64):
    """[[v]]^2 = int int_{(RJ)^2} |v(X) - v(Y)|^2 / |X - Y| dX dY (squared seminorm)."""
    g = v.grid
    A, B = window.X_interval()
    _require_inside(g, np.log(A), np.log(B))

    def vx(X):
        return interpolate(v.values, g.xi_min, g.dxi, np.log(X))

    return float(gagliardo_double_integral(vx, A, B, 1.0, gauss_order))


def h0log_double_integral_norm(w, radius=1.0 / 3.0):
    """sqrt(||w||^2 + int_{|h|<radius} int |w(xi+h) - w(xi)|^2 / |h| dxi dh).

    Uses whole-node shifts h = j dxi, the trapezoid rule in h (the
    integrand vanishes linearly at h = 0) and a quadratic end correction
    on the last partial cell.
    """
    g = w.grid
    v = w.values
    J = int(np.floor(radius / g.dxi))
    if J < 3:
        raise DomainError("grid too coarse for the h window")
    h = g.dxi * np.arange(J + 1)
    F = np.zeros(J + 1)
    for j in range(1, J + 1):
        F[j] = g.dxi * np.sum(np.abs(np.roll(v, -j) - v) ** 2) / h[j]
    trap = g.dxi * (F.sum() - 0.5 * F[0] - 0.5 * F[-1])
    rest = radius - h[-1]
    if rest > 0:
        c = np.polyfit(h[-3:], F[-3:], 2)
        trap += np.polyval(np.polyint(c), radius) - np.polyval(np.polyint(c), h[-1])
    l2 = g.dxi * np.sum(np.abs(v) ** 2)
    return float(np.sqrt(l2 + 2 * trap))


def n_r_sigma(v, R, sigma):
    """N_{R,sigma}[v] with the Mellin transform taken literally.

    N^2 = (1/R) int |M(eta0 v_R)(-ik)|^2 (1+k^2)^sigma (1_{|k|<1} + 1_{|k|>1} Re rho0(k)) dk,
    v_R(X) = v(R X), and eta0 the smooth cutoff between I3 and I2.
    """
    g = v.grid
    m = g.node_shift(R)
    vR = np.roll(v.values, -m)
    eta = CutoffSpec("eta0")(g.xi)
    M = mellin(Field(g, eta * vR))
    k = g.k
    weight = (1 + k**2) ** sigma * np.where(np.abs(k) < 1, 1.0, rho0(k).real)
    return float(np.sqrt(g.dk * np.sum(weight * np.abs(M) ** 2) / R))


def local_log_bound_check(w, cutoff, interval):
    """Compare int_I int_I |w(x) - w(y)|^2 / |x - y| with ||chi w||^2_{H^0_log}.

    ``interval`` is (a, b) in xi; the cutoff must equal 1 on it.
    """
    a, b = interval
    lo, inner_lo, inner_hi, hi = cutoff.intervals()
    if a < inner_lo or b > inner_hi:
        raise DomainError("cutoff is not identically 1 on the interval")
    g = w.grid
    _require_inside(g, a, b)
    lhs = gagliardo_double_integral(lambda x: interpolate(w.values, g.xi_min, g.dxi, x), a, b, 1.0, 64)
    chi = Field(g, cutoff(g.xi) * w.values)
    rhs = sobolev_norm_from_spectrum(forward(chi), 0.0, 1) ** 2
    ratio = lhs / rhs if rhs > 0 else 0.0
    return {"lhs": float(lhs), "rhs": float(rhs), "ratio": float(ratio), "finite": bool(np.isfinite(ratio))}
