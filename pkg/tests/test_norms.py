import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavekin._quad import gagliardo_double_integral
from wavekin.errors import ConfigError, DomainError, UnsupportedOrderError
from wavekin.families import bump, bump_family, compact_bump
from wavekin.kinetic_ops import CutoffSpec
from wavekin.norms import (
    WeightSpec,
    Window,
    gagliardo_log_seminorm,
    h0log_double_integral_norm,
    local_log_bound_check,
    local_sobolev_norm,
    m_sigma_norm,
    mellin,
    mellin_quadrature,
    n_r_sigma,
    norm_equivalence_report,
    spectral_derivative,
    truncation_convergence,
    weighted_sup_norm,
    x_side_sobolev_combination,
)
from wavekin.spectral import Field, RadialFunction, UniformLogGrid, sobolev_norm


@pytest.mark.parametrize("theta, rho, mode", [
    (-0.1, 0.5, "decay"), (0.1, 1.5, "decay"), (0.3, 0.5, "smoothing"),
    (0.1, 0.2, "smoothing"), (0.6, 0.2, "remark"),
])
def test_weight_hypotheses_rejected(theta, rho, mode):
    with pytest.raises(ConfigError):
        WeightSpec(theta, rho).validate(mode)


def test_weight_hypotheses_accepted():
    WeightSpec(0.15, 0.5).validate("smoothing")
    WeightSpec(0.4, 0.5).validate("remark")
    WeightSpec(0.0, 0.5).validate("decay")


def test_window():
    w = Window(2.0, "I3")
    assert w.X_interval() == pytest.approx((1.25, 2.75))
    assert Window(1.0, "I1").contains(Window(1.0, "I4"))
    with pytest.raises(ConfigError):
        Window(-1.0)
    with pytest.raises(ConfigError):
        Window(1.0, "I9")


def test_weighted_sup_norm(grid1024):
    v = RadialFunction(grid1024, np.where(np.abs(grid1024.xi) < 1e-9, 1.0, 0.0))
    assert weighted_sup_norm(v, WeightSpec(0.15, 0.5)) == pytest.approx(2**0.5)


def test_truncation_converges(grid4096):
    # tails fall like n^-1/2 (small-X side) for these exponents
    g = RadialFunction.from_function(grid4096, lambda X: X**-0.1 * (1 + X) ** -1.4)
    r = truncation_convergence(g, WeightSpec(0.1, 0.6), WeightSpec(0.6, 0.0), [2, 10, 100, 1000, 10**4])
    assert r["monotone"]
    assert r["tail"][-1] == pytest.approx(1e-2, rel=0.05)
    with pytest.raises(ConfigError):
        truncation_convergence(g, WeightSpec(0.1, 0.6), WeightSpec(0.05, 0.3), [2])


@pytest.mark.parametrize("k", [0.0, 1.5, -4.0])
def test_mellin_two_routes(grid4096, k):
    v = RadialFunction.from_function(grid4096, lambda X: np.exp(-np.log(X) ** 2 / 0.5) * (X < 20))
    lattice = mellin(v, np.array([k]))[0]
    quad = mellin_quadrature(lambda X: np.exp(-np.log(X) ** 2 / 0.5), np.array([k]), 1e-6, 20.0)[0]
    assert abs(lattice - quad) < 1e-10


def test_spectral_derivative(grid4096):
    f = bump(grid4096, 0.0, 0.5)
    d = spectral_derivative(f).values
    assert np.max(np.abs(d + grid4096.xi / 0.25 * f.values)) < 1e-10


@pytest.mark.parametrize("sigma", [0.0, 1.0])
def test_local_equals_global_inside_window(grid4096, sigma):
    # integer orders: the window norm of data supported inside it is the full-line norm
    f = compact_bump(grid4096, -0.3, 0.3)
    assert local_sobolev_norm(f, sigma, -0.3, 0.3) == pytest.approx(sobolev_norm(f, sigma), rel=1e-4)


@pytest.mark.parametrize("sigma", [0.5, 1.5])
def test_local_norm_grows_with_window(grid4096, sigma):
    f = bump(grid4096, 0.0, 0.4, 2.0)
    assert local_sobolev_norm(f, sigma, -0.5, 0.5) < local_sobolev_norm(f, sigma, -1.0, 1.0)


def test_local_norm_range(grid1024):
    with pytest.raises(UnsupportedOrderError):
        local_sobolev_norm(bump(grid1024), 2.5, -1, 1)


def test_m_sigma_global_is_h_sigma(grid2048):
    f = bump(grid2048, 0.1, 0.5, 2.0)
    assert m_sigma_norm(f, 0.5) == pytest.approx(sobolev_norm(f, 0.5), rel=1e-14)


def test_norm_ordering(grid2048):
    for f in bump_family(grid2048, 10):
        assert sobolev_norm(f, 0, -1) <= sobolev_norm(f, 0) <= sobolev_norm(f, 0, 1)


def test_gagliardo_example():
    assert gagliardo_double_integral(lambda x: x, 1.0, 2.0, 1.0) == pytest.approx(1 / 3, abs=1e-6)


@given(st.floats(0.5, 3.0), st.floats(0.1, 2.0))
def test_gagliardo_linear_scaling(a, length):
    # int int_{(a, a+L)^2} |X - Y| dX dY = L^3 / 3 for v(X) = X
    assert gagliardo_double_integral(lambda x: x, a, a + length, 1.0) == pytest.approx(length**3 / 3, rel=1e-6)


def test_gagliardo_constant_is_zero(grid2048):
    v = RadialFunction(grid2048, np.ones(grid2048.n))
    assert gagliardo_log_seminorm(v, Window(1.0, "I3")) == pytest.approx(0.0, abs=1e-14)


def test_h0log_routes_comparable(grid2048):
    r = [h0log_double_integral_norm(f) / sobolev_norm(f, 0, 1) for f in bump_family(grid2048, 10)]
    assert max(r) / min(r) < 4


@pytest.mark.parametrize("sigma, limit", [(0.5, 1.25), (1.5, 1.5)])
def test_equivalence_constants_scale_free(grid4096, sigma, limit):
    fam = [lambda X, c=c, w=w, k=k: np.exp(-0.5 * ((np.log(X) - c) / w) ** 2) * np.cos(k * np.log(X))
           for c, w, k in [(0, 0.3, 0), (0.05, 0.2, 3), (-0.05, 0.25, 6)]]
    r = norm_equivalence_report((grid4096, fam), sigma, [0.25, 0.5, 1, 2, 4])
    assert r["spread"] < limit
    assert r["drift"] < 0.1


def test_x_side_orders(grid1024):
    with pytest.raises(UnsupportedOrderError):
        x_side_sobolev_combination(bump(grid1024), 1.0, Window())


@pytest.mark.parametrize("R", [0.25, 0.5, 2.0, 4.0])
def test_n_r_sigma_dilation(grid4096, R):
    # v(X) = phi(X / R) gives N_{R,sigma}[v] = N_{1,sigma}[phi] / sqrt(R)
    phi = bump(grid4096, 0.0, 0.3, 1.0)
    base = n_r_sigma(phi, 1.0, 0.5)
    v = RadialFunction(grid4096, np.roll(phi.values, grid4096.node_shift(R)))
    assert base > 0
    assert n_r_sigma(v, R, 0.5) == pytest.approx(base / np.sqrt(R), rel=1e-12)


def test_local_log_bound(grid2048):
    w = bump(grid2048, 0.0, 0.3, 2.0)
    r = local_log_bound_check(w, CutoffSpec("chi0"), Window(1.0, "I3").xi_interval())
    assert r["finite"] and r["lhs"] > 0
    with pytest.raises(DomainError):
        local_log_bound_check(w, CutoffSpec("chi0"), Window(1.0, "I1").xi_interval())
