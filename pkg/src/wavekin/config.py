"""Flat ``key.path = value`` experiment files.

One assignment per line; ``#`` starts a comment. Values are Python
literals (numbers, quoted strings, tuples, None, True/False); a bare word
is read as a string. Lengths in xi are natural-log units and times are
dimensionless. Unknown keys are rejected so typos cannot pass silently.

Example::

    grid.n = 4096
    grid.per_octave = 128
    forcing.family = indicator_window
    forcing.params = (1.0, 2.0)
    weight.theta = 0.15
    weight.rho = 0.5
    evolve.T_star = 1.0
"""

import ast
from pathlib import Path

from .errors import ConfigError
from .evolve import ExperimentConfig
from .forcing import ForcingSpec
from .norms import WeightSpec
from .spectral import UniformLogGrid

__all__ = ["DEFAULTS", "parse_config", "load_config", "dump_config", "experiment_from", "grid_from"]

DEFAULTS = {
    "grid.n": 4096,
    "grid.per_octave": 128,
    "grid.center": 0.0,
    "grid.xi_min": None,
    "grid.xi_max": None,
    "forcing.family": "indicator_window",
    "forcing.params": (1.0, 2.0),
    "forcing.time_profile": "constant",
    "forcing.time_param": 0.0,
    "forcing.amplitude": 1.0,
    "weight.theta": 0.15,
    "weight.rho": 0.5,
    "evolve.sigmas": (0.0, 0.5),
    "evolve.R_lattice": tuple(2.0**j for j in range(-4, 5)),
    "evolve.t0_lattice": None,
    "evolve.T_star": 1.0,
    "evolve.dt": None,
    "evolve.integrator": "rk4",
    "evolve.frozen_xi0": None,
    "evolve.n_samples": 32,
    "evolve.theorem_mode": "smoothing",
    "evolve.wrap_tol": 1e-3,
    "evolve.left_closure": True,
    "evolve.seed": 0,
    "symbol.k_max": 50.0,
    "symbol.n": 401,
    "symbol.tol": 1e-10,
    "apply_op.operator": "P0",
    "apply_op.family": "bump",
    "apply_op.member": 0,
    "apply_op.panel_width": 0.5,
    "norms.trajectory": "trajectory.bin",
    "norms.menu": ("L2", "H0_log", "H0_log_inv", "M_sigma", "weighted_sup"),
    "norms.sigma": 0.5,
    "norms.windows": ("I3",),
    "norms.R": 1.0,
    "verify.quick": False,
    "output.dir": "out",
}


def _value(text, where):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        if text.replace("_", "").replace("-", "").isalnum():
            return text
        raise ConfigError(f"{where}: cannot read value {text!r}") from None


def parse_config(text, base=None):
    """Read a config text into a full key -> value mapping (defaults filled in)."""
    cfg = dict(DEFAULTS if base is None else base)
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {no}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"line {no}: unknown key {key!r}")
        cfg[key] = _value(val, f"line {no}")
    return cfg


def load_config(path):
    if path is None:
        return dict(DEFAULTS)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config: {err}") from None
    return parse_config(text)


def dump_config(cfg):
    """Canonical text form; parse_config(dump_config(c)) == c."""
    return "".join(f"{k} = {cfg[k]!r}\n" for k in sorted(cfg))


def grid_from(cfg):
    try:
        if cfg["grid.xi_min"] is not None or cfg["grid.xi_max"] is not None:
            return UniformLogGrid(float(cfg["grid.xi_min"]), float(cfg["grid.xi_max"]), int(cfg["grid.n"]))
        return UniformLogGrid.dyadic(int(cfg["grid.n"]), int(cfg["grid.per_octave"]), float(cfg["grid.center"]))
    except (TypeError, ValueError) as err:
        raise ConfigError(f"grid: {err}") from None


def experiment_from(cfg):
    """Build and validate an `ExperimentConfig`; raises `ConfigError`."""
    try:
        forcing = ForcingSpec(str(cfg["forcing.family"]), tuple(cfg["forcing.params"]),
                              str(cfg["forcing.time_profile"]), float(cfg["forcing.time_param"]),
                              float(cfg["forcing.amplitude"]))
        weight = WeightSpec(float(cfg["weight.theta"]), float(cfg["weight.rho"]))
        exp = ExperimentConfig(
            grid=grid_from(cfg),
            forcing=forcing,
            weight=weight,
            sigmas=tuple(cfg["evolve.sigmas"]),
            R_lattice=tuple(cfg["evolve.R_lattice"]),
            t0_lattice=None if cfg["evolve.t0_lattice"] is None else tuple(cfg["evolve.t0_lattice"]),
            T_star=float(cfg["evolve.T_star"]),
            dt=None if cfg["evolve.dt"] is None else float(cfg["evolve.dt"]),
            integrator=str(cfg["evolve.integrator"]),
            frozen_xi0=None if cfg["evolve.frozen_xi0"] is None else float(cfg["evolve.frozen_xi0"]),
            n_samples=int(cfg["evolve.n_samples"]),
            theorem_mode=str(cfg["evolve.theorem_mode"]),
            wrap_tol=float(cfg["evolve.wrap_tol"]),
            left_closure=bool(cfg["evolve.left_closure"]),
            seed=int(cfg["evolve.seed"]),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as err:
        raise ConfigError(str(err)) from None
    return exp.validate()
