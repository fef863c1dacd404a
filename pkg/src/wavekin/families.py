"""Seeded families of test fields used by the checks, the CLI and the tests."""

import numpy as np

from .spectral import RadialFunction, field_with_spectrum

__all__ = ["bump_family", "bump", "compact_bump", "spectrum_family"]


def bump(grid, center=0.0, width=0.5, wavenumber=0.0, phase=0.0):
    """exp(-(xi - c)^2 / (2 width^2)) cos(k xi + phase) as a `RadialFunction`."""
    xi = grid.xi
    return RadialFunction(grid, np.exp(-0.5 * ((xi - center) / width) ** 2)
                          * np.cos(wavenumber * xi + phase))


def bump_family(grid, size=10, seed=0):
    """``size`` smooth bumps, all below 1e-10 of their peak inside the buffers.

    Centers in [-1.5, 1.5], widths in [0.4, 0.8], carrier wavenumbers
    in [0, 4]; the first member is a plain Gaussian.
    """
    rng = np.random.default_rng(seed)
    out = [bump(grid, 0.0, 0.5)]
    while len(out) < size:
        out.append(bump(grid, rng.uniform(-1.5, 1.5), rng.uniform(0.4, 0.8),
                        rng.uniform(0.0, 4.0), rng.uniform(0, 2 * np.pi)))
    return out


def compact_bump(grid, a, b):
    """C-infinity bump supported on (a, b) in xi."""
    c, hw = 0.5 * (a + b), 0.5 * (b - a)
    u = (grid.xi - c) / hw
    vals = np.where(np.abs(u) < 1, np.exp(-1.0 / np.maximum(1 - u**2, 1e-300)), 0.0)
    return RadialFunction(grid, vals)


def spectrum_family(grid, sigma, centers=(0.0, -1.0, 1.0)):
    """Fields with |w_hat(k)| = (1 + k^2)^(-(sigma + 1)/2), peaked at each center.

    Such fields sit just inside H^sigma and have no vanishing coefficient,
    which is what the regularization-gain check needs.
    """
    amp = lambda k: (1 + k**2) ** (-(sigma + 1) / 2)
    return [field_with_spectrum(grid, amp, c) for c in centers]
