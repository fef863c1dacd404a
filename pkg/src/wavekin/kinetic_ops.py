"""Direct quadrature of the collision operators and their spectral counterpart.

Three physical-side realizations are provided:

* ``apply_L_X``: Lcal(v)(X) = int (v(Y) - v(X)) M(X, Y) dY,
  M(X, Y) = X^{-1/2} (1/|X - Y| - 1/(X + Y));
* ``apply_L_sqrt``: L(u)(x) = int (u(y) - u(x)) K(x, y) dy,
  K(x, y) = (1/|x^2 - y^2| - 1/(x^2 + y^2)) y / x;
* ``apply_P0_direct``: P0 w(xi) = 1/2 int (w(xi - s) - w(xi)) G(s) ds,
  G(s) = (1/|1 - e^-s| - 1/(1 + e^-s)) e^-s.

All three substitute Y = X e^h (or y = x e^h) and pair h with -h, so the
integrand over h > 0 is

    E(h) (w(xi+h) + w(xi-h) - 2 w(xi)) + O(h) (w(xi+h) - w(xi-h)),

with E, O the even and odd parts of the kernel. E ~ 1/h meets a second
difference of order h^2 and O is bounded, so Gauss panels converge at
high order. Off-grid samples come from periodic Lagrange interpolation.

With these definitions Lcal(v)(X) = 2 P(w)(log X) where
P = e^{-xi/2} P0 has symbol -e^{-xi/2} rho0(k), and
Lcal(v)(x^2) = 2 L(u)(x) for v(X) = u(sqrt X).
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._quad import gauss_panels, shifted
from .errors import ConfigError, DomainError, QuadratureError
from .spectral import Field, RadialFunction, Spectrum, forward, inverse
from .specfun import rho0

__all__ = [
    "QuadratureSpec",
    "CutoffSpec",
    "INTERVALS",
    "kernel_M",
    "kernel_K",
    "kernel_G",
    "apply_L_X",
    "apply_L_sqrt",
    "apply_P0_direct",
    "apply_P0_adaptive",
    "apply_P0_spectral",
    "apply_P_spectral",
    "commutator_apply",
    "homogeneity_residual",
]

INTERVALS = {
    "I1": (1 / 8, 4.0),
    "I2": (1 / 2, 2.0),
    "I3": (5 / 8, 11 / 8),
    "I4": (3 / 4, 5 / 4),
}


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout for the direct operators.

    Parameters
    ----------
    split_radius : float
        Half-width of the window around h = 0 that gets panels of half
        the regular width; in (0, 1].
    panel_order : int
        Gauss-Legendre points per panel.
    tail_cut : float
        Truncation of the h integral; the kernels are below e^-tail_cut.
    tolerance : float
        Bound on the estimated error relative to the output's sup norm;
        checked only when ``estimate_error`` is set.
    panel_width : float
    interp_order : int
        Stencil size of the Lagrange interpolation for off-grid samples.
    estimate_error : bool
        Repeat the quadrature with halved panels and raise on disagreement.
    """

    split_radius: float = 1.0
    panel_order: int = 8
    tail_cut: float = 40.0
    tolerance: float = 1e-8
    panel_width: float = 0.5
    interp_order: int = 6
    estimate_error: bool = True

    def __post_init__(self):
        if not 0 < self.split_radius <= 1:
            raise ConfigError("split_radius must lie in (0, 1]")
        if self.tolerance < 1e-12:
            raise ConfigError("tolerance must be at least 1e-12")
        if self.panel_order < 1 or self.panel_width <= 0 or self.tail_cut <= self.split_radius:
            raise ConfigError("invalid panel layout")
        if self.interp_order < 2 or self.interp_order % 2:
            raise ConfigError("interp_order must be even and >= 2")

    def refined(self, factor=2):
        return QuadratureSpec(self.split_radius, self.panel_order, self.tail_cut,
                              self.tolerance, self.panel_width / factor,
                              self.interp_order, self.estimate_error)

    def nodes(self):
        inner = max(1, int(np.ceil(2 * self.split_radius / self.panel_width)))
        outer = max(1, int(np.ceil((self.tail_cut - self.split_radius) / self.panel_width)))
        edges = np.concatenate([
            np.linspace(0.0, self.split_radius, inner + 1),
            np.linspace(self.split_radius, self.tail_cut, outer + 1)[1:],
        ])
        return gauss_panels(edges, self.panel_order)


def _smooth_step(u):
    u = np.clip(u, 0.0, 1.0)
    return u**3 * (10 - 15 * u + 6 * u**2)


@dataclass(frozen=True)
class CutoffSpec:
    """Smooth cutoff in xi, 1 on an inner interval and 0 off an outer one.

    Kinds
    -----
    ``chi0``: 1 on J3 = log I3, 0 off J2 = log I2.
    ``eta0``: the same function read in X, eta0(X) = chi0(log X).
    ``eta0_R`` (R,): eta0(X / R).
    ``smooth_bump`` (center, inner, outer): 1 for |xi - center| <= inner,
    0 for |xi - center| >= outer.

    The transition across each gap is the C^2 quintic smoothstep, spanning
    the whole gap between the inner and outer sets.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in ("chi0", "eta0", "eta0_R", "smooth_bump"):
            raise ConfigError(f"unknown cutoff kind {self.kind!r}")
        if self.kind == "eta0_R" and not (len(self.params) == 1 and self.params[0] > 0):
            raise ConfigError("eta0_R takes one positive parameter R")
        if self.kind == "smooth_bump":
            if len(self.params) != 3 or not 0 <= self.params[1] < self.params[2]:
                raise ConfigError("smooth_bump takes (center, inner, outer) with inner < outer")

    def intervals(self):
        """(outer_lo, inner_lo, inner_hi, outer_hi) in xi."""
        if self.kind == "smooth_bump":
            c, i, o = self.params
            return c - o, c - i, c + i, c + o
        shift = np.log(self.params[0]) if self.kind == "eta0_R" else 0.0
        lo2, hi2 = np.log(INTERVALS["I2"])
        lo3, hi3 = np.log(INTERVALS["I3"])
        return lo2 + shift, lo3 + shift, hi3 + shift, hi2 + shift

    def __call__(self, xi):
        a, b, c, d = self.intervals()
        xi = np.asarray(xi, dtype=float)
        return _smooth_step((xi - a) / (b - a)) * _smooth_step((d - xi) / (d - c))

    def of_X(self, X):
        return self(np.log(X))

    def on_grid(self, grid):
        return Field(grid, self(grid.xi))


def kernel_M(X, Y):
    """M(X, Y) = X^{-1/2} (1/|X - Y| - 1/(X + Y))."""
    return X**-0.5 * (1.0 / np.abs(X - Y) - 1.0 / (X + Y))


def kernel_K(x, y):
    """K(x, y) = (1/|x^2 - y^2| - 1/(x^2 + y^2)) y / x."""
    return (1.0 / np.abs(x**2 - y**2) - 1.0 / (x**2 + y**2)) * y / x


def kernel_G(s):
    """G(s) = (1/|1 - e^-s| - 1/(1 + e^-s)) e^-s."""
    s = np.asarray(s, dtype=float)
    return (1.0 / np.abs(np.expm1(-s)) - 1.0 / (1.0 + np.exp(-s))) * np.exp(-s)


def _check_buffers(f, tol):
    g = f.grid
    v = np.abs(f.values)
    scale = max(v.max(), 1e-300)
    if v[g.buffer_mask()].max() > tol * scale + 1e-300 and v[g.buffer_mask()].max() > 1e-10 * scale:
        raise DomainError("input does not decay inside the grid buffers")


def _direct(values, dxi, kernel_pair, q):
    """Paired-h quadrature; ``kernel_pair(h)`` gives the weights of the +h and -h samples."""
    h, wq = q.nodes()
    out = np.zeros_like(values, dtype=float if not np.iscomplexobj(values) else complex)
    for hi, wi in zip(h, wq):
        kp, km = kernel_pair(hi)
        even = 0.5 * (kp + km)
        odd = 0.5 * (kp - km)
        up = shifted(values, hi / dxi, q.interp_order)
        dn = shifted(values, -hi / dxi, q.interp_order)
        out = out + wi * (even * (up + dn - 2 * values) + odd * (up - dn))
    return out


def _direct_checked(values, dxi, kernel_pair, q):
    out = _direct(values, dxi, kernel_pair, q)
    if q.estimate_error:
        fine = _direct(values, dxi, kernel_pair, q.refined())
        est = np.abs(fine - out)
        scale = max(np.abs(fine).max(), 1e-300)
        if est.max() > q.tolerance * scale:
            raise QuadratureError(
                f"direct quadrature error estimate {est.max() / scale:.3g} exceeds {q.tolerance:g}",
                estimate=est,
            )
        out = fine
    return out


def apply_L_X(v, q=QuadratureSpec()):
    """Lcal(v) at the nodes X_j, with the kernel M evaluated as written.

    For h > 0 the +h and -h samples carry the weights M(X, X e^{+-h}) X e^{+-h};
    X - Y is formed as -X expm1(h) to avoid cancellation.
    """
    X = v.grid.X

    def pair(h):
        out = []
        for s in (h, -h):
            Y = X * np.exp(s)
            core = 1.0 / np.abs(X * np.expm1(s)) - 1.0 / (X + Y)
            out.append(X**-0.5 * core * Y)
        return out

    return RadialFunction(v.grid, _direct_checked(v.values, v.grid.dxi, pair, q))


def apply_L_sqrt(u, q=QuadratureSpec()):
    """L(u) at the nodes x_j of a log-x grid, with the kernel K as written."""
    x = u.grid.X

    def pair(h):
        out = []
        for s in (h, -h):
            y = x * np.exp(s)
            diff = np.abs(x**2 * np.expm1(2 * s))
            core = 1.0 / diff - 1.0 / (x**2 + y**2)
            out.append(core * y / x * y)
        return out

    return RadialFunction(u.grid, _direct_checked(u.values, u.grid.dxi, pair, q))


def apply_P0_direct(w, q=QuadratureSpec()):
    """P0 w by paired-h quadrature of its kernel G; symbol -rho0(k)."""

    def pair(h):
        # w(xi - s) with s = h carries G(h); s = -h puts weight G(-h) on w(xi + h)
        return 0.5 * kernel_G(-h), 0.5 * kernel_G(h)

    return Field(w.grid, _direct_checked(w.values, w.grid.dxi, pair, q))


def apply_P0_adaptive(func, xi, tail_cut=40.0, tol=1e-10):
    """P0 of a callable at the points ``xi`` by plain adaptive quadrature.

    No pairing of h with -h: the two half-lines are integrated separately
    with the bounded one-sided integrand (w(xi - s) - w(xi)) G(s) / 2.
    Independent of the panel scheme; used as a cross-check.
    """
    out = []
    for x0 in np.atleast_1d(xi):
        f0 = func(x0)

        def integrand(s):
            return 0.5 * (func(x0 - s) - f0) * kernel_G(s)

        right, e1 = integrate.quad(integrand, 0.0, tail_cut, epsabs=tol, epsrel=1e-12, limit=500)
        left, e2 = integrate.quad(integrand, -tail_cut, 0.0, epsabs=tol, epsrel=1e-12, limit=500)
        if e1 + e2 > 10 * tol:
            raise QuadratureError(f"adaptive P0 at xi = {x0:g} stalled", estimate=e1 + e2)
        out.append(right + left)
    return np.array(out)


def apply_P0_spectral(w):
    """P0 w as the Fourier multiplier -rho0(k)."""
    s = forward(w)
    c = -rho0(w.grid.k) * s.coefficients
    return inverse(Spectrum(w.grid, c), real=not np.iscomplexobj(w.values))


def apply_P_spectral(w):
    """P(w) = -e^{-xi/2} F^{-1}[rho0 w_hat]."""
    p0 = apply_P0_spectral(w)
    return Field(w.grid, np.exp(-w.grid.xi / 2) * p0.values)


def commutator_apply(eta, w):
    """[eta, P0] w = eta P0(w) - P0(eta w), both through the multiplier -rho0."""
    e = eta(w.grid.xi) if callable(eta) else np.asarray(eta)
    a = e * apply_P0_spectral(w).values
    b = apply_P0_spectral(Field(w.grid, e * w.values)).values
    return Field(w.grid, a - b)


def homogeneity_residual(v, R, q=QuadratureSpec()):
    """Relative inner-domain L^2 gap between Lcal(v(R .)) and R^{1/2} (Lcal v)(R .).

    R must be a whole number of grid nodes in log scale, and both v and
    v(R .) must decay inside the buffers.
    """
    g = v.grid
    if R == 1:
        return 0.0
    m = g.node_shift(R)
    vR = RadialFunction(g, np.roll(v.values, -m))
    _check_buffers(v, 1e-10)
    _check_buffers(vR, 1e-10)
    lhs = apply_L_X(vR, q).values
    rhs = np.sqrt(R) * np.roll(apply_L_X(v, q).values, -m)
    inner = g.inner_mask() & np.roll(g.inner_mask(), -m)
    return float(np.linalg.norm((lhs - rhs)[inner]) / np.linalg.norm(rhs[inner]))
