import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavekin.errors import DomainError, QuadratureError
from wavekin.specfun import (
    EULER_GAMMA,
    digamma,
    large_k_fit,
    rho0,
    rho0_as_printed,
    rho0_bounds_report,
    rho0_via_integral,
    small_k_constants,
    symbol_table,
)

# rho0 from its two defining integrals, mpmath quadosc at 30 digits
RHO0_FROZEN = {
    0.5: 0.24832930767207351026 - 0.31743054966914222846j,
    1.0: 0.67186598552400983788 - 0.36398547250893341852j,
    2.0: 1.2918071802755103873 - 0.24413323517364905425j,
    5.0: 2.190000509517279446 - 0.099999526556559880156j,
    20.0: 3.5731563239343579944 - 0.025j,
}

# mpmath.digamma at 30 digits
DIGAMMA_FROZEN = {
    0.3 + 0.7j: -0.44720792029956117395 + 1.8918108552185266687j,
    -2.5 + 1.0j: 1.1546043967509455474 + 2.8105638599909455956j,
    12.0 - 3.0j: 2.475522888235460357 - 0.25503860183529873739j,
    0.5 + 25.0j: 3.2188091395190942112 + 1.5707963267948966192j,
}


@pytest.mark.parametrize("k, expected", sorted(RHO0_FROZEN.items()))
def test_rho0_frozen_values(k, expected):
    assert abs(rho0(k) - expected) <= 1e-13 * max(1, abs(expected))


@pytest.mark.parametrize("z, expected", list(DIGAMMA_FROZEN.items()))
def test_digamma_frozen_values(z, expected):
    assert abs(digamma(z) - expected) <= 1e-13 * abs(expected)


@given(st.floats(-30, 30), st.floats(-30, 30))
def test_digamma_matches_mpmath(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    ref = complex(mpmath.digamma(z))
    assert abs(digamma(z) - ref) <= 1e-12 * max(1, abs(ref))


@pytest.mark.parametrize("z", [0, -1, -7])
def test_digamma_poles_raise(z):
    with pytest.raises(DomainError):
        digamma(z)


def test_digamma_recurrence(rng):
    z = rng.uniform(-5, 5, 50) + 1j * rng.uniform(-5, 5, 50)
    assert np.max(np.abs(digamma(z + 1) - digamma(z) - 1 / z)) < 1e-12


def test_digamma_one_is_minus_gamma():
    assert abs(digamma(1.0) + EULER_GAMMA) < 1e-15


@given(st.floats(-200, 200))
def test_rho0_hermitian(k):
    assert abs(rho0(-k) - np.conj(rho0(k))) <= 1e-13 * max(1, abs(rho0(k)))


def test_rho0_zero_at_origin():
    assert rho0(0.0) == 0


@given(st.floats(1e-3, 300))
def test_rho0_real_part_positive(k):
    assert rho0(k).real > 0


@pytest.mark.parametrize("k", [-40.0, -3.0, -0.2, 0.7, 4.0, 31.5])
def test_rho0_two_routes(k):
    assert abs(rho0(k) - rho0_via_integral(k)) <= 1e-9


def test_integral_route_rejects_bad_tolerance():
    with pytest.raises(DomainError):
        rho0_via_integral(1.0, tol=1e-14)


def test_printed_form_differs_in_imaginary_part_only():
    k = np.array([0.5, 2.0, 7.0])
    diff = rho0_as_printed(k) - rho0(k)
    assert np.max(np.abs(diff.real)) < 1e-13
    assert np.allclose(diff.imag, np.pi / 2 * np.tanh(np.pi * k / 2), atol=1e-12)


def test_rho0_analytic_continuation_point():
    # P0 e^{xi/2} = -rho0(-i/2) e^{xi/2}; -rho0(-i/2) ~ 0.957 drives the left plateau
    val = 0.5 * (np.log(4) + digamma(0.25) + digamma(1.25) + 2 * EULER_GAMMA)
    assert abs(val - (-0.95709068791478723807)) < 1e-13


def test_small_k_constants():
    r = small_k_constants()
    assert r["re_over_k2_fluctuation"] < 1e-3
    assert r["im_over_k_fluctuation"] < 1e-3
    assert abs(r["re_over_k2"] / r["zeta3"] - 1) < 1e-4
    assert abs(r["im_over_k"] / r["minus_pi2_over_12"] - 1) < 1e-4


def test_large_k_fit():
    r = large_k_fit()
    assert abs(r["imag_coefficient"] + 0.5) < 1e-3
    assert abs(r["c_lower_half"] - 1 / 12) < 5e-3
    assert r["max_real_remainder_times_k"] < 1


def test_symbol_table_invariants():
    t = symbol_table(np.linspace(-50, 50, 401))
    assert all(t.check().values())
    with pytest.raises(ValueError):
        t.values[0] = 1.0


def test_bounds_report_edges():
    r = rho0_bounds_report(100, 400)
    assert 0 < r["low_min"] <= r["low_max"]
    assert 0 < r["high_min"] <= r["high_max"]
    assert r["ratio_at_gap_edge_above"] > 5
    with pytest.raises(DomainError):
        rho0_bounds_report(0.5, 400)
