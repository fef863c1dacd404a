"""The property suite behind ``wavekin verify``.

Each check returns a `Check` with the measured value and the limit it was
held to. ``quick=True`` shrinks families and grids for smoke runs; the
limits stay the same.
"""

from dataclasses import dataclass

import numpy as np

from .evolve import ExperimentConfig, appendix_inequality_suite, evolve
from .families import bump_family, spectrum_family
from .forcing import ForcingSpec
from .kinetic_ops import (
    QuadratureSpec,
    apply_L_X,
    apply_P0_direct,
    apply_P_spectral,
    homogeneity_residual,
)
from .norms import h0log_double_integral_norm
from .spectral import (
    RadialFunction,
    UniformLogGrid,
    duhamel_solve,
    forward,
    frozen_semigroup_apply,
    regularization_gain,
    sobolev_norm,
)
from ._quad import gagliardo_double_integral
from .specfun import EULER_GAMMA, rho0, rho0_via_integral, small_k_constants

__all__ = ["Check", "run_checks", "CHECKS"]


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""


def _rel_inner(a, b, grid):
    m = grid.inner_mask()
    return float(np.linalg.norm((a - b)[m]) / np.linalg.norm(b[m]))


def symbol_oracle(quick=False):
    k = np.linspace(-50, 50, 101 if quick else 401)
    a = rho0(k)
    b = np.array([rho0_via_integral(x) for x in k])
    err = float(np.max(np.abs(a - b)))
    return Check("symbol_oracle", err <= 1e-8, err, 1e-8, "digamma route vs defining integral")


def symbol_zero_hermitian(quick=False):
    k = np.linspace(0.01, 50, 400)
    herm = float(np.max(np.abs(rho0(-k) - np.conj(rho0(k)))))
    zero = float(abs(rho0(0.0)))
    worst = max(herm, zero)
    return Check("symbol_zero_and_hermitian", worst <= 1e-13, worst, 1e-13)


def symbol_large_k(quick=False):
    k = np.geomspace(100, 1000, 200)
    worst = float(np.max(np.abs(rho0(k).real - EULER_GAMMA - np.log(k)) * k))
    return Check("symbol_large_k_remainder", worst <= 1.0, worst, 1.0, "max |Re rho0 - gamma - log k| * k")


def symbol_small_k(quick=False):
    r = small_k_constants()
    worst = max(r["re_over_k2_fluctuation"], r["im_over_k_fluctuation"])
    return Check("symbol_small_k_constants", worst <= 1e-3, worst, 1e-3,
                 f"Re/k^2 = {r['re_over_k2']:.10f}, Im/k = {r['im_over_k']:.10f}")


def operator_equivalence(quick=False):
    g = UniformLogGrid.dyadic(4096, 128)
    fam = bump_family(g, 3 if quick else 10)
    worst = 0.0
    kappa = np.exp(-g.xi / 2)
    for f in fam:
        direct = kappa * apply_P0_direct(f).values
        worst = max(worst, _rel_inner(direct, apply_P_spectral(f).values, g))
    return Check("operator_equivalence", worst <= 1e-4, worst, 1e-4, "spectral P vs direct quadrature")


def operator_order(quick=False):
    g = UniformLogGrid.dyadic(2048 if quick else 4096, 64 if quick else 128)
    f = bump_family(g, 2)[1]
    ref = apply_P_spectral(f).values
    kappa = np.exp(-g.xi / 2)
    widths = (2.0, 1.0, 0.5)
    errs = []
    for pw in widths:
        q = QuadratureSpec(panel_order=4, panel_width=pw, estimate_error=False)
        errs.append(_rel_inner(kappa * apply_P0_direct(f, q).values, ref, g))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    order = float(orders.min())
    ok = order >= 2 and all(np.diff(errs) < 0)
    return Check("operator_refinement_order", ok, order, 2.0, f"errors {errs}")


def lcal_vs_p(quick=False):
    g = UniformLogGrid.dyadic(4096, 128)
    f = bump_family(g, 1)[0]
    err = _rel_inner(apply_L_X(f).values, 2 * apply_P_spectral(f).values, g)
    return Check("lcal_equals_2P", err <= 1e-4, err, 1e-4)


def homogeneity(quick=False):
    g = UniformLogGrid.dyadic(4096, 128)
    v = bump_family(g, 1)[0]
    Rs = (0.5, 2.0) if quick else (0.25, 0.5, 2.0, 4.0)
    worst = max(homogeneity_residual(v, R) for R in Rs)
    return Check("homogeneity", worst <= 1e-5, worst, 1e-5)


def semigroup_identity(quick=False):
    g = UniformLogGrid.dyadic(1024, 64)
    h = bump_family(g, 2)[1]
    same = np.array_equal(frozen_semigroup_apply(h, 0.0, 0.3).values, h.values)
    return Check("semigroup_identity", same, 0.0 if same else 1.0, 0.0)


def semigroup_composition(quick=False):
    g = UniformLogGrid.dyadic(1024, 64)
    worst = 0.0
    for h in bump_family(g, 4):
        a = frozen_semigroup_apply(h, 0.7, 0.3).values
        b = frozen_semigroup_apply(frozen_semigroup_apply(h, 0.4, 0.3), 0.3, 0.3).values
        worst = max(worst, float(np.max(np.abs(a - b))))
    return Check("semigroup_composition", worst <= 1e-12, worst, 1e-12)


def semigroup_contraction(quick=False):
    g = UniformLogGrid.dyadic(1024, 64)
    worst = -np.inf
    for h in bump_family(g, 4):
        for s in (0.0, 0.5, 1.0):
            base = sobolev_norm(h, s)
            for t in (0.1, 0.5, 1.0, 2.0):
                worst = max(worst, sobolev_norm(frozen_semigroup_apply(h, t, 0.0), s) / base - 1)
    return Check("semigroup_contraction", worst <= 1e-12, float(worst), 1e-12, "max ||S(t)h||/||h|| - 1")


def gain_bounded(quick=False):
    """Ratios over t in [0, 2] stay below the bound and stop growing in t."""
    t = np.linspace(0, 2, 21)
    worst = 0.0
    growth = 0.0
    for n, per in ((1024, 32), (2048, 64)):
        g = UniformLogGrid.dyadic(n, per)
        for s in (0.0, 0.5, 1.0):
            for h in spectrum_family(g, s):
                r = regularization_gain(h, t, s, 0.0)["ratio"]
                worst = max(worst, max(r))
                growth = max(growth, r[-1] / max(r[: len(r) // 2]))
    ok = worst <= 10.0 and growth <= 1.25
    return Check("regularization_gain_bounded", ok, worst, 10.0,
                 f"late/early ratio {growth:.3f} (limit 1.25)")


def duhamel_frozen(quick=False):
    f = ForcingSpec("log_gaussian", (0.0, 0.7))
    cfg = ExperimentConfig(forcing=f, frozen_xi0=0.0, integrator="imex_frozen",
                           theorem_mode="none", wrap_tol=1.0)
    tr = evolve(cfg)
    g = cfg.grid
    ref = duhamel_solve(RadialFunction(g, np.zeros(g.n)), f, tr.times, 0.0)
    err = max(float(np.max(np.abs(a.values - b.values))) for a, b in zip(tr.states, ref.states))
    c0 = np.array([forward(s).coefficients[0] for s in tr.states])
    lin = float(np.max(np.abs(c0 - np.array(tr.times) * forward(f.profile_field(g)).coefficients[0])))
    ok = err <= 1e-8 and lin <= 1e-10
    return Check("duhamel_frozen", ok, err, 1e-8, f"k = 0 linearity defect {lin:.2e} (limit 1e-10)")


def dissipativity_sign(quick=False):
    g = UniformLogGrid.dyadic(4096, 128)
    worst = -np.inf
    for f in bump_family(g, 3 if quick else 10):
        pairing = g.dxi * np.sum(apply_P0_direct(f).values * f.values)
        worst = max(worst, pairing / (g.dxi * np.sum(f.values**2)))
    return Check("dissipativity_sign", worst <= 1e-10, float(worst), 1e-10, "max <P0 w, w> / ||w||^2")


def norm_ordering(quick=False):
    g = UniformLogGrid.dyadic(2048, 64)
    worst = -np.inf
    for f in bump_family(g, 10):
        lo = sobolev_norm(f, 0, -1)
        mid = sobolev_norm(f, 0)
        hi = sobolev_norm(f, 0, 1)
        worst = max(worst, lo - mid, mid - hi)
    ok = worst <= 0
    return Check("norm_ordering", ok, float(worst), 0.0, "H0_log^-1 <= L2 <= H0_log")


def gagliardo_example(quick=False):
    val = gagliardo_double_integral(lambda x: x, 1.0, 2.0, 1.0)
    err = abs(val - 1 / 3)
    return Check("gagliardo_example", err <= 1e-6, float(err), 1e-6, "int int_{(1,2)^2} |X-Y| = 1/3")


def h0log_routes(quick=False):
    g = UniformLogGrid.dyadic(2048, 64)
    r = []
    for f in bump_family(g, 10):
        r.append(h0log_double_integral_norm(f) / sobolev_norm(f, 0, 1))
    spread = max(r) / min(r)
    return Check("h0log_route_spread", spread < 4, float(spread), 4.0,
                 f"ratio interval [{min(r):.4f}, {max(r):.4f}]")


def appendix(quick=False):
    g = UniformLogGrid.dyadic(1024 if quick else 2048, 32 if quick else 64)
    r = appendix_inequality_suite(g, n_time=33 if quick else 65)
    ok = r["closed_form_error"] <= 1e-8 and r["finite"]
    return Check("appendix_closed_form", ok, r["closed_form_error"], 1e-8, "and all ratios finite")


CHECKS = [
    symbol_oracle,
    symbol_zero_hermitian,
    symbol_large_k,
    symbol_small_k,
    operator_equivalence,
    operator_order,
    lcal_vs_p,
    homogeneity,
    semigroup_identity,
    semigroup_composition,
    semigroup_contraction,
    gain_bounded,
    duhamel_frozen,
    dissipativity_sign,
    norm_ordering,
    gagliardo_example,
    h0log_routes,
    appendix,
]


def run_checks(quick=False, progress=None):
    """Run every check in order; ``progress(check)`` is called after each."""
    out = []
    for fn in CHECKS:
        c = fn(quick)
        out.append(c)
        if progress is not None:
            progress(c)
    return out
