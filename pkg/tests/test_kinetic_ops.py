import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavekin.errors import ConfigError, DomainError, QuadratureError
from wavekin.families import bump, bump_family
from wavekin.kinetic_ops import (
    CutoffSpec,
    QuadratureSpec,
    apply_L_sqrt,
    apply_L_X,
    apply_P0_adaptive,
    apply_P0_direct,
    apply_P0_spectral,
    apply_P_spectral,
    commutator_apply,
    homogeneity_residual,
    kernel_G,
    kernel_K,
    kernel_M,
)
from wavekin.spectral import Field, RadialFunction, UniformLogGrid

# P0 of exp(-x^2/(2*0.25)) at x0, mpmath quad of the defining integral
P0_GAUSS = {0.0: -0.92784624888143242045, 0.7: -0.14931977264760020343, -1.2: 0.43151147384188432285}
# Lcal of v(X) = exp(-(log X)^2/(2*0.25)), mpmath quad in Y with the diagonal split off
LCAL_GAUSS = {1.3: -1.411229422474882724, 0.6: -0.3741457365937271182}


def _gauss(x):
    return np.exp(-x**2 / 0.5)


@pytest.mark.parametrize("x0, expected", sorted(P0_GAUSS.items()))
def test_p0_frozen_values(x0, expected):
    g = UniformLogGrid.dyadic(4096, 128, center=x0)
    f = Field.from_function(g, _gauss)
    assert g.xi[2048] == pytest.approx(x0, abs=1e-12)
    assert apply_P0_spectral(f).values[2048] == pytest.approx(expected, abs=1e-9)
    assert apply_P0_direct(f).values[2048] == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("x0, expected", sorted(P0_GAUSS.items()))
def test_p0_adaptive_route(x0, expected):
    assert apply_P0_adaptive(_gauss, [x0])[0] == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("X0, expected", sorted(LCAL_GAUSS.items()))
def test_lcal_frozen_values(X0, expected):
    g = UniformLogGrid.dyadic(4096, 128, center=np.log(X0))
    v = RadialFunction.from_function(g, lambda X: _gauss(np.log(X)))
    assert apply_L_X(v).values[2048] == pytest.approx(expected, abs=1e-8)


def test_kernels_agree():
    # G(s) = M(1, e^-s) e^-s: the kernel of P0 is M read in log variables
    s = np.array([-3.0, -0.4, 0.2, 1.7])
    assert np.allclose(kernel_G(s), kernel_M(1.0, np.exp(-s)) * np.exp(-s), rtol=1e-13)
    # K(x, y) = y M(x^2, y^2)
    x, y = 1.3, np.array([0.4, 0.9, 2.2])
    assert np.allclose(kernel_K(x, y), y * kernel_M(x**2, y**2), rtol=1e-13)


def test_kernel_g_positive_and_singular():
    s = np.array([1e-6, -1e-6, 1.0, -1.0, 10.0, -10.0])
    G = kernel_G(s)
    assert np.all(G > 0)
    assert G[0] > 1e5 and G[1] > 1e5


def test_spectral_equals_direct(grid4096):
    kappa = np.exp(-grid4096.xi / 2)
    m = grid4096.inner_mask()
    for f in bump_family(grid4096, 4):
        a = kappa * apply_P0_direct(f).values
        b = apply_P_spectral(f).values
        assert np.linalg.norm((a - b)[m]) / np.linalg.norm(b[m]) < 1e-4


def test_lcal_is_twice_p(grid4096):
    f = bump(grid4096, 0.2, 0.5)
    m = grid4096.inner_mask()
    a = apply_L_X(f).values
    b = 2 * apply_P_spectral(f).values
    assert np.linalg.norm((a - b)[m]) / np.linalg.norm(b[m]) < 1e-6


def test_l_sqrt_is_p_after_x_squared():
    # L on x relates to Lcal through X = x^2: L u(x) = Lcal v(x^2) / 2 with v(X) = u(sqrt X)
    g = UniformLogGrid.dyadic(4096, 128)
    gs = UniformLogGrid(g.xi_min / 2, g.xi_max / 2, g.n)
    v = bump(g, 0.1, 0.5)
    u = RadialFunction(gs, v.values)
    a = apply_L_sqrt(u).values
    b = apply_P_spectral(v).values
    m = g.inner_mask()
    assert np.linalg.norm((a - b)[m]) / np.linalg.norm(b[m]) < 1e-6


@given(st.floats(-5, 5))
def test_constants_annihilated(c):
    g = UniformLogGrid.dyadic(256, 16)
    assert np.max(np.abs(apply_P0_spectral(Field(g, np.full(g.n, c))).values)) < 1e-12 * (1 + abs(c))


def test_p0_dissipative(grid4096):
    for f in bump_family(grid4096, 5):
        assert np.sum(apply_P0_direct(f).values * f.values) < 0


@pytest.mark.parametrize("R", [0.25, 0.5, 2.0, 4.0])
def test_homogeneity(grid4096, R):
    assert homogeneity_residual(bump(grid4096, 0.0, 0.5), R) <= 1e-5


def test_homogeneity_needs_decay(grid4096):
    v = bump(grid4096, 0.0, 3.0)
    with pytest.raises(DomainError):
        homogeneity_residual(v, 2.0)


def test_refinement_lowers_error(grid2048):
    f = bump_family(grid2048, 2)[1]
    ref = apply_P0_spectral(f).values
    m = grid2048.inner_mask()
    errs = []
    for pw in (2.0, 1.0, 0.5):
        q = QuadratureSpec(panel_order=4, panel_width=pw, estimate_error=False)
        errs.append(np.linalg.norm((apply_P0_direct(f, q).values - ref)[m]))
    assert errs[0] > errs[1] > errs[2]
    assert np.log2(errs[1] / errs[2]) >= 2


def test_error_estimate_raises_on_coarse_panels(grid2048):
    f = bump(grid2048, 0.0, 0.3, 8.0)
    with pytest.raises(QuadratureError):
        apply_P0_direct(f, QuadratureSpec(panel_order=2, panel_width=2.0, tolerance=1e-12))


@pytest.mark.parametrize("kwargs", [dict(split_radius=0.0), dict(tolerance=1e-14), dict(interp_order=3)])
def test_quadrature_spec_validation(kwargs):
    with pytest.raises(ConfigError):
        QuadratureSpec(**kwargs)


def test_cutoffs():
    chi = CutoffSpec("chi0")
    lo2, lo3, hi3, hi2 = chi.intervals()
    assert chi(np.array([lo3, 0.0, hi3])).tolist() == [1.0, 1.0, 1.0]
    assert chi(np.array([lo2 - 0.1, hi2 + 0.1])).tolist() == [0.0, 0.0]
    X = np.geomspace(0.3, 3, 11)
    assert np.allclose(CutoffSpec("eta0_R", (2.0,)).of_X(2 * X), CutoffSpec("eta0").of_X(X))
    with pytest.raises(ConfigError):
        CutoffSpec("eta0_R", (-1.0,))


def test_commutator_local(grid4096):
    # eta = 1 near the support of w and P0 is nonlocal only through tails
    eta = CutoffSpec("smooth_bump", (0.0, 0.5, 2.5))
    w = bump(grid4096, 0.0, 0.1)
    c = commutator_apply(eta, w)
    assert np.all(np.isfinite(c.values))
    # constant eta commutes
    assert np.max(np.abs(commutator_apply(np.ones(grid4096.n), w).values)) < 1e-12
