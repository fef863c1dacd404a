import numpy as np
import pytest

from wavekin.errors import ConfigError, NumericalAbort
from wavekin.evolve import (
    ExperimentConfig,
    evolve,
    forcing_time_integral,
    smoothing_footprint,
    spectral_tail_slope,
    stability_dt,
    weighted_decay_check,
)
from wavekin.families import bump
from wavekin.forcing import ForcingSpec
from wavekin.norms import WeightSpec
from wavekin.spectral import RadialFunction, UniformLogGrid, duhamel_solve, forward


@pytest.fixture(scope="module")
def small():
    return ExperimentConfig(grid=UniformLogGrid.dyadic(2048, 64), n_samples=9)


@pytest.fixture(scope="module")
def base_run(small):
    return evolve(small)


def test_zero_forcing_stays_zero(small):
    tr = evolve(small.with_(forcing=ForcingSpec("zero", ()), theorem_mode="none"))
    assert all(np.all(s.values == 0) for s in tr.states)


def test_linear_in_forcing(small, base_run):
    tr = evolve(small.with_(forcing=small.forcing.scaled(2.5)))
    for a, b in zip(tr.states, base_run.states):
        assert np.max(np.abs(a.values - 2.5 * b.values)) <= 1e-10 * max(1, np.abs(a.values).max())


def test_solution_grows_then_sits_on_window(base_run):
    g = base_run.grid
    top = [np.abs(s.values).max() for s in base_run.states]
    assert top[0] == 0 and np.all(np.diff(top) > 0)
    peak = g.xi[np.argmax(base_run.states[-1].values)]
    assert 0 <= peak <= np.log(2)


def test_imex_matches_rk4(small, base_run):
    tr = evolve(small.with_(integrator="imex_frozen"))
    m = small.grid.inner_mask()
    a, b = tr.states[-1].values, base_run.states[-1].values
    assert np.linalg.norm((a - b)[m]) / np.linalg.norm(b[m]) < 1e-8


def test_closure_makes_domain_irrelevant():
    # left end cut from -11.1 to -4.9 at the same dxi
    wide = ExperimentConfig(n_samples=5)
    short = wide.with_(grid=UniformLogGrid.dyadic(2048, 128, center=np.log(2)))
    off = wide.grid.node_shift(np.exp(short.grid.xi_min - wide.grid.xi_min))
    a = evolve(short).states[-1].values
    b = evolve(wide).states[-1].values[off:off + 2048]
    m = short.grid.inner_mask()
    assert np.linalg.norm((a - b)[m]) / np.linalg.norm(b[m]) < 2e-4


def test_without_closure_left_plateau_wraps():
    cfg = ExperimentConfig(grid=UniformLogGrid.dyadic(2048, 128, center=np.log(2)),
                           n_samples=5, left_closure=False)
    with pytest.raises(NumericalAbort, match="buffer"):
        evolve(cfg)


def test_weighted_energy_decays_after_switch_off(small):
    cfg = small.with_(forcing=ForcingSpec("indicator_window", (1.0, 2.0), "switch_off", 0.25))
    tr = evolve(cfg)
    e = np.array(tr.info["energy"])
    after = tr.times >= 0.25
    assert np.all(np.diff(e[after]) < 0)


def test_frozen_l2_decays_after_switch_off():
    cfg = ExperimentConfig(forcing=ForcingSpec("log_gaussian", (0.0, 0.7), "switch_off", 0.25),
                           frozen_xi0=0.0, integrator="imex_frozen", theorem_mode="none",
                           wrap_tol=1.0, n_samples=9)
    tr = evolve(cfg)
    l2 = np.array([s.l2() for s in tr.states])
    assert np.all(np.diff(l2[tr.times >= 0.25]) < 0)


def test_frozen_matches_duhamel():
    f = ForcingSpec("log_gaussian", (0.0, 0.7))
    cfg = ExperimentConfig(forcing=f, frozen_xi0=0.5, integrator="imex_frozen",
                           theorem_mode="none", wrap_tol=1.0, n_samples=5)
    tr = evolve(cfg)
    ref = duhamel_solve(RadialFunction(cfg.grid, np.zeros(cfg.grid.n)), f, tr.times, 0.5)
    for a, b in zip(tr.states, ref.states):
        assert np.max(np.abs(a.values - b.values)) < 1e-8


def test_step_above_stability_bound_rejected(small):
    with pytest.raises(ConfigError):
        small.with_(dt=2 * stability_dt(small)).validate()


@pytest.mark.parametrize("changes", [
    dict(integrator="euler"), dict(theorem_mode="x"), dict(T_star=0.0), dict(R_lattice=(3.0,)),
    dict(sigmas=(3.0,)), dict(t0_lattice=(2.0,)), dict(weight=WeightSpec(0.3, 0.5)),
])
def test_invalid_configs(small, changes):
    with pytest.raises(ConfigError):
        small.with_(**changes).validate()


def test_unbounded_forcing_rejected(small):
    with pytest.raises(ConfigError):
        small.with_(forcing=ForcingSpec("power_decay", (0.0, 0.2))).validate()


def test_wrap_monitor_aborts():
    cfg = ExperimentConfig(grid=UniformLogGrid.dyadic(512, 64), forcing=ForcingSpec("log_gaussian", (1.2, 0.7)),
                           theorem_mode="none", n_samples=5, wrap_tol=1e-6)
    with pytest.raises(NumericalAbort):
        evolve(cfg)


def test_samples_are_whole_steps(small):
    dt, per = small.steps()
    assert dt <= stability_dt(small) * (1 + 1e-12)
    assert per * dt * (small.n_samples - 1) == pytest.approx(small.T_star)


def test_digest_stable(small):
    assert small.digest() == small.with_().digest()
    assert small.digest() != small.with_(seed=1).digest()


def test_decay_ratios_bounded(base_run):
    r = weighted_decay_check(base_run, WeightSpec(0.15, 0.5))
    assert r["bounded"] and 0 < r["max_r1"] < 10


def test_forcing_time_integral_converges():
    # int_0^1 (1 + t^-0.6) dt = 1 + 1/0.4; trapezoid on t ~ j^2 next to t^-0.6 converges at order 0.8
    f = ForcingSpec("zero", ())
    errs = [forcing_time_integral(f, 0.15, 1.0, J) - 3.5 for J in (2000, 4000)]
    assert abs(errs[1]) < 1e-3
    assert np.log2(errs[0] / errs[1]) == pytest.approx(2 * (1 - 4 * 0.15), abs=0.05)


def test_tail_slope_of_known_spectrum(grid4096):
    from wavekin.spectral import field_with_spectrum
    f = field_with_spectrum(grid4096, lambda k: (1 + k**2) ** -1.5)
    assert spectral_tail_slope(f) == pytest.approx(-3.0, abs=0.05)


def test_solution_tail_steeper_than_forcing(base_run):
    fp = smoothing_footprint(base_run)
    assert fp["min_improvement"] > 0
