import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavekin.errors import ContractError, DomainError
from wavekin.forcing import ForcingSpec
from wavekin.families import bump, bump_family, spectrum_family
from wavekin.spectral import (
    Field,
    Multiplier,
    RadialFunction,
    Spectrum,
    UniformLogGrid,
    apply_multiplier,
    duhamel_constant_closed_form,
    duhamel_solve,
    exp_convolution,
    forward,
    frozen_semigroup_apply,
    inverse,
    regularization_gain,
    sobolev_norm,
)
from wavekin.specfun import rho0


def test_grid_contract():
    with pytest.raises(ContractError):
        UniformLogGrid(0.0, 1.0, 100)
    with pytest.raises(ContractError):
        UniformLogGrid(1.0, 0.0, 64)


@pytest.mark.parametrize("j", [-4, -1, 1, 3])
def test_dyadic_dilations_are_node_shifts(grid4096, j):
    assert grid4096.node_shift(2.0**j) == 128 * j


def test_off_grid_dilation_raises(grid4096):
    with pytest.raises(DomainError):
        grid4096.node_shift(3.0)


def test_field_is_read_only(grid1024):
    f = bump(grid1024)
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    with pytest.raises(ContractError):
        Field(grid1024, np.full(grid1024.n, np.nan))


def test_round_trip(grid1024, rng):
    f = Field(grid1024, rng.standard_normal(grid1024.n))
    assert np.max(np.abs(inverse(forward(f)).values - f.values)) < 1e-13


def test_parseval(grid1024, rng):
    f = Field(grid1024, rng.standard_normal(grid1024.n))
    assert sobolev_norm(f, 0) == pytest.approx(f.l2(), rel=1e-12)


def test_gaussian_transform(grid4096):
    # w = exp(-xi^2/2) has w_hat(k) = exp(-k^2/2)
    f = Field.from_function(grid4096, lambda x: np.exp(-0.5 * x**2))
    c = forward(f).coefficients
    assert np.max(np.abs(c - np.exp(-0.5 * grid4096.k**2))) < 1e-13


def test_real_field_is_hermitian(grid1024, rng):
    f = Field(grid1024, rng.standard_normal(grid1024.n))
    assert forward(f).hermitian_defect() < 1e-12


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_forward_linear(a, b):
    g = UniformLogGrid.dyadic(256, 16)
    f1, f2 = bump(g, 0.3, 0.6), bump(g, -0.4, 0.5, 2.0)
    lhs = forward(a * f1 + b * f2).coefficients
    rhs = a * forward(f1).coefficients + b * forward(f2).coefficients
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * (1 + abs(a) + abs(b))


@given(st.integers(-40, 40))
def test_shift_is_phase(m):
    g = UniformLogGrid.dyadic(256, 16)
    f = bump(g, 0.0, 0.5, 1.5)
    shifted = Field(g, np.roll(f.values, m))
    ratio = forward(shifted).coefficients / np.where(forward(f).coefficients == 0, 1, forward(f).coefficients)
    expected = np.exp(-1j * g.k * m * g.dxi)
    big = np.abs(forward(f).coefficients) > 1e-8
    assert np.max(np.abs(ratio[big] - expected[big])) < 1e-6


@pytest.mark.parametrize("sigma", [-1.0, 0.0, 0.5, 2.0])
def test_sobolev_multiplier_matches_norm(grid1024, sigma):
    f = bump(grid1024, 0.2, 0.4, 3.0)
    s = apply_multiplier(forward(f), Multiplier.sobolev(sigma))
    assert sobolev_norm(inverse(s), 0) == pytest.approx(sobolev_norm(f, sigma), rel=1e-12)


def test_sobolev_norm_range(grid1024):
    with pytest.raises(DomainError):
        sobolev_norm(bump(grid1024), 5.0)
    with pytest.raises(DomainError):
        sobolev_norm(bump(grid1024), 0.0, 2)


def test_t1_t2_signs():
    k = np.array([-3.0, -0.5, 0.0, 0.9, 1.5, 10.0])
    t1 = Multiplier.T1().values(k)
    t2 = Multiplier.T2().values(k)
    assert np.all(t1 <= 0) and np.all(t2 <= 0)
    assert np.all((t1 == 0) == (np.abs(k) <= 1))
    assert np.all((t2 == -1) == (np.abs(k) <= 1))


def test_semigroup_identity_exact(grid1024):
    h = bump(grid1024, 0.1, 0.5, 2.0)
    assert np.array_equal(frozen_semigroup_apply(h, 0.0, 0.7).values, h.values)


@pytest.mark.parametrize("xi0", [-1.0, 0.0, 1.0])
def test_semigroup_composition(grid1024, xi0):
    for h in bump_family(grid1024, 4):
        a = frozen_semigroup_apply(h, 0.9, xi0).values
        b = frozen_semigroup_apply(frozen_semigroup_apply(h, 0.5, xi0), 0.4, xi0).values
        assert np.max(np.abs(a - b)) < 1e-12


@given(st.floats(0.0, 3.0), st.sampled_from([0.0, 0.5, 1.0]))
def test_semigroup_contracts(t, sigma):
    g = UniformLogGrid.dyadic(256, 16)
    h = bump(g, 0.0, 0.6, 2.5)
    assert sobolev_norm(frozen_semigroup_apply(h, t, 0.0), sigma) <= sobolev_norm(h, sigma) * (1 + 1e-12)


def test_semigroup_negative_time(grid1024):
    with pytest.raises(DomainError):
        frozen_semigroup_apply(bump(grid1024), -0.1, 0.0)


@pytest.mark.parametrize("sigma", [0.0, 0.5, 1.0])
def test_regularization_gain_bounded(grid1024, sigma):
    t = np.linspace(0, 2, 11)
    for h in spectrum_family(grid1024, sigma):
        r = regularization_gain(h, t, sigma, 0.0)["ratio"]
        assert r[0] == pytest.approx(1.0)
        assert max(r) < 10


def test_closed_form_limit_at_zero_rate():
    a = np.array([0.0, 1e-3, 2.0])
    v = duhamel_constant_closed_form(a, 0.7)
    assert v[0] == 0.7
    assert v[2] == pytest.approx((1 - np.exp(-1.4)) / 2)


@pytest.mark.parametrize("rate", [0.0, 0.3, 5.0, 2.0 + 1.0j])
def test_exp_convolution_constant(rate):
    t = np.linspace(0, 1, 9)
    E = exp_convolution(np.array([rate]), lambda s: 1.0, t)[:, 0]
    assert np.max(np.abs(E - duhamel_constant_closed_form(rate, t))) < 1e-12


def test_exp_convolution_oscillatory():
    # int_0^t e^{-a(t-s)} cos(w s) ds in closed form
    a, w = 1.5, 4.0
    t = np.linspace(0, 2, 17)
    E = exp_convolution(np.array([a]), lambda s: np.cos(w * s), t)[:, 0].real
    exact = (a * np.cos(w * t) + w * np.sin(w * t) - a * np.exp(-a * t)) / (a**2 + w**2)
    assert np.max(np.abs(E - exact)) < 1e-11


@pytest.mark.parametrize("profile, param", [("constant", 0.0), ("switch_off", 0.45), ("oscillatory", 6.0)])
def test_duhamel_solves_the_mode_equation(grid1024, profile, param):
    f = ForcingSpec("log_gaussian", (0.0, 0.6), profile, param)
    h0 = bump(grid1024, 0.5, 0.4)
    t = np.linspace(0, 1, 5)
    tr = duhamel_solve(h0, f, t, 0.0)
    assert tr.states[0].values is not h0.values
    # finite-difference check of dh/dt = P0 h + Q at an interior time
    eps = 1e-5
    tm = 0.6
    a = duhamel_solve(h0, f, [0.0, tm - eps, tm + eps], 0.0)
    dh = (forward(a.states[2]).coefficients - forward(a.states[1]).coefficients) / (2 * eps)
    mid = duhamel_solve(h0, f, [0.0, tm], 0.0).states[1]
    rhs = -rho0(grid1024.k) * forward(mid).coefficients + f.time_factor(tm) * forward(f.profile_field(grid1024)).coefficients
    rhs[grid1024.n // 2] = rhs[grid1024.n // 2].real
    assert np.max(np.abs(dh - rhs)) < 1e-6


def test_trajectory_contract(grid1024):
    from wavekin.spectral import Trajectory
    s = RadialFunction(grid1024, np.zeros(grid1024.n))
    with pytest.raises(ContractError):
        Trajectory([0.0, 0.0], [s, s])
    with pytest.raises(ContractError):
        Trajectory([0.0], [s, s])
