"""Quadrature and interpolation helpers shared by the direct operators and norms."""

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "gauss_panels",
    "lagrange_weights",
    "shifted",
    "interpolate",
    "gagliardo_double_integral",
    "interval_integral",
]


def gauss_panels(edges, order):
    """Gauss-Legendre nodes and weights on consecutive panels between ``edges``."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1)
    weights = half * w
    return nodes.ravel(), weights.ravel()


def lagrange_weights(frac, order):
    """Weights on stencil offsets ``-(order//2 - 1) .. order//2`` for a point at ``frac`` in [0, 1)."""
    offs = np.arange(order) - (order // 2 - 1)
    frac = np.atleast_1d(frac)[:, None]
    w = np.ones((frac.shape[0], order))
    for j, oj in enumerate(offs):
        for m, om in enumerate(offs):
            if m != j:
                w[:, j] *= (frac[:, 0] - om) / (oj - om)
    return offs, w


def shifted(values, shift, order=6):
    """Periodic samples of values(xi + shift * dxi) by local Lagrange interpolation.

    ``shift`` is in units of the grid spacing and may be fractional; the
    fractional offset is the same for every node, so this is a handful
    of cyclic rolls.
    """
    base = int(np.floor(shift))
    frac = shift - base
    if frac == 0.0:
        return np.roll(values, -base)
    offs, w = lagrange_weights(frac, order)
    out = np.zeros_like(values)
    for o, c in zip(offs, w[0]):
        out = out + c * np.roll(values, -(base + o))
    return out


def interpolate(values, xi_min, dxi, points, order=6):
    """Periodic local Lagrange interpolation of grid samples at arbitrary ``points``."""
    n = len(values)
    pos = (np.asarray(points, dtype=float) - xi_min) / dxi
    base = np.floor(pos).astype(int)
    offs, w = lagrange_weights(pos - base, order)
    idx = (base[:, None] + offs[None, :]) % n
    return np.sum(w * values[idx], axis=1)


def interval_integral(func, a, b, order=64):
    """Gauss-Legendre integral of a vectorized ``func`` over (a, b)."""
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return half * np.sum(w * func(a + half * (x + 1)))


def gagliardo_double_integral(func, a, b, alpha, order=48):
    """int_a^b int_a^b |f(x) - f(y)|^2 / |x - y|^alpha dx dy for 1 <= alpha < 3.

    By symmetry this is twice the integral over y < x. With y = x - (x-a) tau
    the inner integrand is tau^{2-alpha} times a smooth function of tau for
    smooth f, and the outer one is (x-a)^{3-alpha} times a smooth function
    of x, so Gauss-Jacobi rules with those weights converge spectrally.

    Parameters
    ----------
    func : callable
        Vectorized f (real or complex).
    alpha : float
        Singularity exponent 1 + 2s.
    """
    if not 1 <= alpha < 3:
        raise ValueError("alpha must lie in [1, 3)")
    L = b - a
    bi = 2.0 - alpha
    bo = 3.0 - alpha
    ti, wi = roots_jacobi(order, 0.0, bi)
    xo, wo = roots_jacobi(order, 0.0, bo)
    # map [-1, 1] weights (1+z)^beta to [0, 1] weights u^beta
    tau = 0.5 * (ti + 1)
    wi = wi / 2 ** (bi + 1)
    u = 0.5 * (xo + 1)
    wo = wo / 2 ** (bo + 1)

    x = a + L * u
    span = x - a
    y = x[:, None] - span[:, None] * tau[None, :]
    fx = func(x)
    fy = func(y.ravel()).reshape(y.shape)
    diff2 = np.abs(fx[:, None] - fy) ** 2
    d = span[:, None] * tau[None, :]
    # |diff|^2 / d^alpha * span dtau = tau^{2-alpha} * [|diff|^2/d^2] * span^{3-alpha}
    smooth = diff2 / d**2
    inner = np.sum(wi[None, :] * smooth, axis=1)
    # outer: dx = L du, (x - a)^{3-alpha} = L^{3-alpha} u^{3-alpha}
    return 2.0 * L ** (4.0 - alpha) * np.sum(wo * inner)
