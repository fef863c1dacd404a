"""Complex digamma and the log-order symbol rho0.

The symbol of the log-variable collision operator is

    rho0(k) = 1/2 (log 4 + Psi(1/2 - ik/2) + Psi(1 + ik/2) + 2 gamma_E),

the Fourier multiplier of minus the integral operator

    P0 h(xi) = 1/2 int (h(xi - s) - h(xi)) G(s) ds,
    G(s) = (1/|1 - e^-s| - 1/(1 + e^-s)) e^-s.

``rho0_via_integral`` evaluates the defining integral by quadrature and is
kept free of any digamma call so it can serve as an oracle.
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError

__all__ = [
    "EULER_GAMMA",
    "digamma",
    "rho0",
    "rho0_as_printed",
    "rho0_via_integral",
    "SymbolTable",
    "symbol_table",
    "rho0_bounds_report",
    "small_k_constants",
    "large_k_fit",
]

EULER_GAMMA = 0.57721566490153286061

# B_{2n} / (2n) for n = 1..8
_BERNOULLI_OVER_2N = np.array([
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
])

_SHIFT_TO = 10.0
_TAIL_CUT = 40.0


def digamma(z):
    """Complex digamma function Psi(z) = Gamma'(z) / Gamma(z).

    Arguments with Re z < 1/2 are reflected, the rest are shifted by the
    recurrence Psi(z) = Psi(z + 1) - 1/z until Re z >= 10, where the
    asymptotic series with Bernoulli coefficients is summed.

    Parameters
    ----------
    z : complex or array_like of complex

    Returns
    -------
    complex or ndarray of complex

    Raises
    ------
    DomainError
        If any argument is a non-positive integer.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()

    poles = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(poles):
        bad = z[poles][0].real
        raise DomainError(f"digamma has a pole at z = {bad:g}")

    out = np.zeros_like(z)
    reflect = z.real < 0.5
    if np.any(reflect):
        zr = z[reflect]
        # Psi(z) = Psi(1 - z) - pi cot(pi z)
        out[reflect] = -np.pi / np.tan(np.pi * zr)
        z[reflect] = 1.0 - zr

    while True:
        low = z.real < _SHIFT_TO
        if not np.any(low):
            break
        out[low] -= 1.0 / z[low]
        z[low] += 1.0

    inv2 = 1.0 / (z * z)
    series = np.zeros_like(z)
    for coeff in _BERNOULLI_OVER_2N[::-1]:
        series = (series + coeff) * inv2
    out += np.log(z) - 0.5 / z - series
    return out[0] if scalar else out


def _rho0_nonneg(k):
    # k >= 0; the k = 0 value is exactly zero by construction
    half = 0.5j * k
    val = 0.5 * (np.log(4.0) + digamma(0.5 - half) + digamma(1.0 + half) + 2 * EULER_GAMMA)
    return np.where(k == 0, 0.0 + 0.0j, val)


def rho0(k):
    """The symbol rho0(k) on real wavenumbers.

    Evaluated for |k| and conjugated for k < 0, so Hermitian symmetry
    rho0(-k) = conj(rho0(k)) holds bit-for-bit and rho0(0) == 0 exactly.

    Parameters
    ----------
    k : float or array_like of float

    Returns
    -------
    complex or ndarray of complex
    """
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise DomainError("rho0 needs finite wavenumbers")
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    val = _rho0_nonneg(np.abs(k))
    val = np.where(k < 0, np.conj(val), val)
    return val[0] if scalar else val


def rho0_as_printed(k):
    """The closed form with Psi(1/2 + ik/2), kept for comparison only.

    Its real part equals ``rho0``; its imaginary part differs by
    (pi/2) tanh(pi k / 2) and does not match the kernel integral.
    """
    k = np.asarray(k, dtype=float)
    half = 0.5j * k
    return 0.5 * (np.log(4.0) + digamma(0.5 + half) + digamma(1.0 + half) + 2 * EULER_GAMMA)


def rho0_via_integral(k, tol=1e-10):
    """Evaluate rho0(k) from its defining kernel integral.

    Splitting the integral at s = 0 and pairing s with -s gives

        Re rho0(k) = int_0^inf (1 - cos ks) / (e^s - 1) ds,
        Im rho0(k) = -int_0^inf sin(ks) / (e^s + 1) ds,

    both with bounded integrands. The first is written with
    2 sin^2(ks/2) near the origin and uses the QAWO cosine rule on
    [1, 40]; the second uses the QAWO sine rule on [0, 40]. The kernel
    is below e^-40 past the cut.

    Parameters
    ----------
    k : float
    tol : float
        Absolute error target, in (1e-12, 1e-4).

    Returns
    -------
    complex

    Raises
    ------
    QuadratureError
        If the summed error estimates exceed ``tol``.
    """
    k = float(k)
    if not 1e-12 < tol < 1e-4:
        raise DomainError(f"tol must lie in (1e-12, 1e-4), got {tol:g}")
    if k == 0.0:
        return 0.0 + 0.0j

    eps = tol / 10.0
    opts = dict(epsabs=eps, epsrel=1e-14, limit=400, full_output=1)
    split = 1.0

    def near(s):
        return 2.0 * np.sin(0.5 * k * s) ** 2 / np.expm1(s)

    re_near, err1 = integrate.quad(near, 0.0, split, **opts)[:2]
    # int_split^cut ds / (e^s - 1) in closed form
    re_flat = np.log(-np.expm1(-_TAIL_CUT)) - np.log(-np.expm1(-split))
    re_cos, err2 = integrate.quad(
        lambda s: 1.0 / np.expm1(s), split, _TAIL_CUT, weight="cos", wvar=k, **opts
    )[:2]
    im_sin, err3 = integrate.quad(
        lambda s: 1.0 / (np.exp(s) + 1.0), 0.0, _TAIL_CUT, weight="sin", wvar=k, **opts
    )[:2]

    err = err1 + err2 + err3
    if not err <= tol:
        raise QuadratureError(
            f"symbol quadrature at k = {k:g} reached error estimate {err:.3g} > tol {tol:.3g}",
            estimate=err,
        )
    return complex(re_near + re_flat - re_cos, -im_sin)


@dataclass(frozen=True)
class SymbolTable:
    """rho0 sampled on a wavenumber lattice.

    Attributes
    ----------
    wavenumbers : ndarray of float
    values : ndarray of complex
    """

    wavenumbers: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.wavenumbers.shape != self.values.shape:
            raise ValueError("wavenumbers and values must have the same shape")
        self.wavenumbers.setflags(write=False)
        self.values.setflags(write=False)

    def check(self):
        """Verify the table invariants; returns a dict of booleans."""
        k, v = self.wavenumbers, self.values
        order = np.argsort(k)
        ks, vs = k[order], v[order]
        mirror = np.searchsorted(ks, -ks)
        paired = (mirror < len(ks)) & (ks[np.minimum(mirror, len(ks) - 1)] == -ks)
        herm = np.all(vs[paired] == np.conj(vs[mirror[paired]]))
        zero = np.all(v[k == 0] == 0)
        positive = np.all(v.real[k != 0] > 0)
        big = np.abs(ks) >= 1
        pos = ks[big] > 0
        neg = ks[big] < 0
        mono = np.all(np.diff(vs.real[big][pos]) >= 0) and np.all(np.diff(vs.real[big][neg]) <= 0)
        return {"hermitian": bool(herm), "zero_at_origin": bool(zero),
                "positive_real_part": bool(positive), "monotone_for_abs_k_ge_1": bool(mono)}


def symbol_table(wavenumbers):
    """Build a `SymbolTable` for the given lattice."""
    k = np.array(wavenumbers, dtype=float)
    return SymbolTable(k, np.asarray(rho0(k)).reshape(k.shape))


def rho0_bounds_report(k_max, n, k_min=1e-2, gap=0.05):
    """Two-sided comparison of Re rho0 with k^2 (|k|<1) and log|k| (|k|>1).

    The ratio Re rho0(k) / log k diverges like 1/(k - 1) as k -> 1+, since
    Re rho0(1) > 0, so the upper comparison cannot hold uniformly next to
    k = 1. The lattice is geometric on [k_min, k_max] with the two nodes
    e^{-gap}, e^{gap} inserted; ratios are reported outside the open
    window (e^{-gap}, e^{gap}), whose extrema then sit on fixed nodes.

    Returns
    -------
    dict
        ``min_ratio``, ``max_ratio`` over the lattice outside the window,
        the same split into ``low`` (k < 1) and ``high`` (k > 1) parts,
        and ``ratio_at_gap_edge_above`` which grows like 1/gap.
    """
    if not k_max > 1:
        raise DomainError("k_max must exceed 1")
    if n < 100:
        raise DomainError("need at least 100 lattice points")
    lo, hi = np.exp(-gap), np.exp(gap)
    k = np.union1d(np.geomspace(k_min, k_max, n), [lo, hi])
    k = k[(k <= lo) | (k >= hi)]
    re = rho0(k).real
    weight = np.where(k < 1, k**2, np.log(k))
    ratio = re / weight
    low = ratio[k < 1]
    high = ratio[k > 1]
    return {
        "k_max": float(k_max),
        "n": int(k.size),
        "gap": float(gap),
        "min_ratio": float(ratio.min()),
        "max_ratio": float(ratio.max()),
        "low_min": float(low.min()),
        "low_max": float(low.max()),
        "high_min": float(high.min()),
        "high_max": float(high.max()),
        "ratio_at_gap_edge_above": float(rho0(hi).real / np.log(hi)),
    }


def small_k_constants(k_lo=1e-3, k_hi=1e-2, n=64):
    """Measure the leading small-k coefficients of rho0.

    Returns the means and relative fluctuations of Re rho0 / k^2 and
    Im rho0 / k on a geometric lattice, next to the values zeta(3) and
    -pi^2/12 that the quadratic/linear terms take.
    """
    k = np.geomspace(k_lo, k_hi, n)
    r = rho0(k)
    a = r.real / k**2
    b = r.imag / k
    return {
        "re_over_k2": float(a.mean()),
        "re_over_k2_fluctuation": float(np.ptp(a) / abs(a.mean())),
        "im_over_k": float(b.mean()),
        "im_over_k_fluctuation": float(np.ptp(b) / abs(b.mean())),
        "zeta3": 1.2020569031595942,
        "minus_pi2_over_12": -np.pi**2 / 12,
    }


def large_k_fit(k_lo=100.0, k_hi=1000.0, n=200):
    """Fit the remainder of rho0 against (gamma_E + log k) - i/(2k).

    Returns the fitted c in |remainder| <= c/k^2 on each dyadic half of
    [k_lo, k_hi], the measured coefficient of i/k in Im rho0, and the
    worst |Re rho0 - gamma_E - log k| * k.
    """
    k = np.geomspace(k_lo, k_hi, n)
    r = rho0(k)
    rem = np.abs(r - (EULER_GAMMA + np.log(k)) + 0.5j / k) * k**2
    mid = np.sqrt(k_lo * k_hi)
    return {
        "c_lower_half": float(rem[k <= mid].max()),
        "c_upper_half": float(rem[k > mid].max()),
        "imag_coefficient": float(np.median(r.imag * k)),
        "max_real_remainder_times_k": float(np.max(np.abs(r.real - EULER_GAMMA - np.log(k)) * k)),
    }
