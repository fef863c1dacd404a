"""Command-line entry point: ``wavekin <subcommand> [--config FILE] [--out DIR]``.

Subcommands: symbol, apply-op, evolve, norms, smoothing, verify. Each
writes CSV tables (with JSON mirrors) and ``manifest.json`` into the
output directory. Exit codes: 0 all checks passed, 2 invalid config,
3 numerical abort, 4 a check failed. The only environment variable read
is WAVEKIN_THREADS (worker threads for the smoothing sweep).
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import dump_config, experiment_from, grid_from, load_config
from .errors import ConfigError, DomainError, NumericalAbort
from .evolve import evolve, smoothing_footprint, smoothing_sweep
from .families import bump_family
from .kinetic_ops import (
    CutoffSpec,
    QuadratureSpec,
    apply_L_sqrt,
    apply_L_X,
    apply_P0_direct,
    apply_P0_spectral,
    apply_P_spectral,
    commutator_apply,
)
from .norms import Window, m_sigma_norm, weighted_sup_norm, WeightSpec
from .specfun import rho0, rho0_via_integral, symbol_table
from .spectral import Field, RadialFunction, UniformLogGrid, sobolev_norm
from .storage import RunManifest, config_hash, load_trajectory, save_trajectory, write_table
from .verify import run_checks

EXIT_OK, EXIT_CONFIG, EXIT_ABORT, EXIT_CHECK = 0, 2, 3, 4
OPERATORS = ("L_X", "L_sqrt", "P0", "P_spectral", "commutator")


def _rel(a, b, mask):
    den = np.linalg.norm(b[mask])
    return float(np.linalg.norm((a - b)[mask]) / den) if den > 0 else float(np.linalg.norm(a[mask]))


# ---------------------------------------------------------------------------
# subcommands; each returns after filling the manifest


def run_symbol(cfg, out, man):
    k_max, n, tol = float(cfg["symbol.k_max"]), int(cfg["symbol.n"]), float(cfg["symbol.tol"])
    if not k_max > 0 or n < 2:
        raise ConfigError("symbol.k_max must be positive and symbol.n >= 2")
    k = np.linspace(-k_max, k_max, n)
    a = rho0(k)
    b = np.array([rho0_via_integral(x, tol) for x in k])
    diff = np.abs(a - b)
    rows = [(k[i], a[i].real, a[i].imag, b[i].real, b[i].imag, diff[i]) for i in range(n)]
    cols = {"k": "wavenumber", "re_rho0": "Re rho0, digamma route", "im_rho0": "Im rho0, digamma route",
            "oracle_re": "Re rho0, defining integral", "oracle_im": "Im rho0, defining integral",
            "abs_diff": "|digamma route - integral route|"}
    man.add(write_table(out / "symbol.csv", cols, rows, {"max_abs_diff": float(diff.max())}))
    man.check("symbol_oracle", diff.max() <= 1e-8, float(diff.max()), 1e-8)
    for name, ok in symbol_table(k).check().items():
        man.check("table_" + name, ok)


def run_apply_op(cfg, out, man):
    op = str(cfg["apply_op.operator"])
    if op not in OPERATORS:
        raise ConfigError(f"apply_op.operator must be one of {OPERATORS}")
    if cfg["apply_op.family"] != "bump":
        raise ConfigError("apply_op.family: only 'bump' is available")
    g = grid_from(cfg)
    member = int(cfg["apply_op.member"])
    if not 0 <= member < 10:
        raise ConfigError("apply_op.member must lie in 0..9")
    w = bump_family(g, 10)[member]
    q = QuadratureSpec(panel_width=float(cfg["apply_op.panel_width"]))
    mask = g.inner_mask()
    if op == "L_X":
        out_v = apply_L_X(w, q).values
        alt, alt_name = 2 * apply_P_spectral(w).values, "2 P spectral"
        node = g.X
    elif op == "L_sqrt":
        # u(x) = v(x^2) on the grid in log x with half the spacing; L(u)(x) = P(w)(2 log x)
        gx = UniformLogGrid(g.xi_min / 2, g.xi_max / 2, g.n)
        out_v = apply_L_sqrt(RadialFunction(gx, w.values), q).values
        alt, alt_name = apply_P_spectral(w).values, "P spectral at X = x^2"
        node = gx.X
    elif op == "P0":
        out_v = apply_P0_direct(w, q).values
        alt, alt_name = apply_P0_spectral(w).values, "P0 spectral"
        node = g.xi
    elif op == "P_spectral":
        out_v = apply_P_spectral(w).values
        alt, alt_name = np.exp(-g.xi / 2) * apply_P0_direct(w, q).values, "direct quadrature"
        node = g.xi
    else:
        eta = CutoffSpec("smooth_bump", (0.0, 0.5, 2.5))
        out_v = commutator_apply(eta, w).values
        e = eta(g.xi)
        # eta is only C^2, which caps the panel rule near 1e-6
        qc = QuadratureSpec(panel_width=q.panel_width, tolerance=1e-5)
        alt = e * apply_P0_direct(w, qc).values - apply_P0_direct(Field(g, e * w.values), qc).values
        alt_name = "direct quadrature"
        node = g.xi
    gap = _rel(out_v, alt, mask)
    cols = {"node": "grid node (X for L_X, x for L_sqrt, xi otherwise)", "input": "input samples",
            "output": f"{op} applied", "alternative": alt_name}
    rows = list(zip(node, w.values, out_v, alt))
    summary = {"operator": op, "alternative": alt_name, "relative_inner_gap": gap, "member": member}
    man.add(write_table(out / "apply_op.csv", cols, rows, summary))
    man.check("equivalence_" + op, gap <= 1e-4, gap, 1e-4)


def run_evolve(cfg, out, man):
    exp = experiment_from(cfg)
    traj = evolve(exp)
    g = exp.grid
    man.add([save_trajectory(out / "trajectory.bin", traj)])
    rows = []
    for t, s, e in zip(traj.times, traj.states, traj.info["energy"]):
        v = s.values
        rows.append((t, np.sqrt(g.dxi * np.sum(v**2)), e, np.abs(v).max(),
                     weighted_sup_norm(s, exp.weight)))
    cols = {"t": "time", "l2": "||w||_{L^2(dxi)}", "weighted_energy": "(int w^2 / kappa dxi)^(1/2)",
            "sup": "max |w|", "weighted_sup": "||v||_{theta,rho} on the nodes"}
    meta = {"dt": traj.info["dt"], "steps": traj.info["steps"], "worst_wrap": traj.info["worst_wrap"],
            "config_digest": traj.provenance}
    man.add(write_table(out / "evolve.csv", cols, rows, meta))
    man.check("zero_initial_data", not np.any(traj.states[0].values), 0.0, 0.0)
    man.check("finite", bool(np.all(np.isfinite(traj.array()))))
    man.check("wrap_monitor", traj.info["worst_wrap"] <= exp.wrap_tol,
              traj.info["worst_wrap"], exp.wrap_tol)


def run_norms(cfg, out, man):
    path = Path(cfg["norms.trajectory"])
    traj = load_trajectory(path)
    menu = tuple(cfg["norms.menu"])
    known = {"L2", "H0_log", "H0_log_inv", "M_sigma", "weighted_sup"}
    bad = [m for m in menu if m not in known]
    if bad:
        raise ConfigError(f"norms.menu: unknown entries {bad}")
    sigma = float(cfg["norms.sigma"])
    R = float(cfg["norms.R"])
    weight = WeightSpec(float(cfg["weight.theta"]), float(cfg["weight.rho"]))
    windows = [Window(R, b) for b in cfg["norms.windows"]]
    rows = []
    ordered = True
    for t, s in zip(traj.times, traj.states):
        vals = {}
        if "L2" in menu:
            vals["L2"] = sobolev_norm(s, 0)
        if "H0_log" in menu:
            vals["H0_log"] = sobolev_norm(s, 0, 1)
        if "H0_log_inv" in menu:
            vals["H0_log_inv"] = sobolev_norm(s, 0, -1)
        for name in ("L2", "H0_log", "H0_log_inv"):
            if name in vals:
                rows.append((t, name, "global", vals[name]))
        if {"L2", "H0_log", "H0_log_inv"} <= set(vals):
            ordered &= vals["H0_log_inv"] <= vals["L2"] * (1 + 1e-12) + 1e-300
            ordered &= vals["L2"] <= vals["H0_log"] * (1 + 1e-12) + 1e-300
        if "M_sigma" in menu:
            rows.append((t, f"M_{sigma:g}", "global", m_sigma_norm(s, sigma)))
            for win in windows:
                a, b = win.X_interval()
                rows.append((t, f"M_{sigma:g}", f"R*{win.base}=({a:g},{b:g})", m_sigma_norm(s, sigma, win)))
        if "weighted_sup" in menu:
            rows.append((t, f"X_{weight.theta:g},{weight.rho:g}", "nodes", weighted_sup_norm(s, weight)))
    cols = {"t": "time", "norm_name": "norm", "window": "X window or 'global'", "value": "norm value"}
    man.add(write_table(out / "norms.csv", cols, rows, {"trajectory": str(path), "config_hash": traj.provenance}))
    man.check("finite", bool(np.all(np.isfinite([r[3] for r in rows]))))
    man.check("ordering_H0log_inv_L2_H0log", bool(ordered))


def run_smoothing(cfg, out, man):
    exp = experiment_from(cfg)
    traj = evolve(exp)
    res = smoothing_sweep(exp, traj)
    cols = {"sigma": "Sobolev order", "R": "dyadic scale", "t0": "window start",
            "lhs_name": "estimate", "lhs": "solution functional", "rhs_name": "forcing functional",
            "rhs": "lattice supremum of the forcing functionals", "ratio": "lhs / rhs"}
    rows = [(r["sigma"], r["R"], r["t0"], r["lhs_name"], r["lhs"], r["rhs_name"], r["rhs"], r["ratio"])
            for r in res["rows"]]
    fp = smoothing_footprint(traj)
    meta = {"C_hat": res["C_hat"], "lattice_supremum": True, "rhs": res["rhs"],
            "forcing_tail_slope": fp["forcing_slope"], "solution_tail_slopes": fp["solution_slopes"],
            "tail_slope_gain_min": fp["min_improvement"]}
    man.add(write_table(out / "smoothing.csv", cols, rows, meta))
    man.check("all_entries_finite", res["finite"])
    man.check("tail_steeper_than_forcing", fp["min_improvement"] > 0, fp["min_improvement"], 0.0)


def run_verify(cfg, out, man):
    quick = bool(cfg["verify.quick"])
    checks = run_checks(quick, progress=lambda c: print(
        f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.value:.3e} (limit {c.limit:g}) {c.detail}"))
    rows = [(c.name, c.passed, c.value, c.limit, c.detail) for c in checks]
    cols = {"name": "check", "passed": "1 if passed", "value": "measured value",
            "limit": "limit it was held to", "detail": "notes"}
    man.add(write_table(out / "verify.csv", cols, rows, {"quick": quick}))
    for c in checks:
        man.check(c.name, c.passed, c.value, c.limit)


COMMANDS = {
    "symbol": run_symbol,
    "apply-op": run_apply_op,
    "evolve": run_evolve,
    "norms": run_norms,
    "smoothing": run_smoothing,
    "verify": run_verify,
}


def build_parser():
    p = argparse.ArgumentParser(prog="wavekin", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("--config", help="flat key.path = value file (defaults when omitted)")
    p.add_argument("--out", help="output directory (overrides output.dir)")
    p.add_argument("--quick", action="store_true", help="verify: smaller families and grids")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.quick:
            cfg["verify.quick"] = True
        if args.subcommand in ("evolve", "smoothing"):
            experiment_from(cfg)
        out = Path(args.out or cfg["output.dir"])
    except (ConfigError, DomainError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    man = RunManifest(args.subcommand, config_hash(dump_config(cfg)), __version__,
                      {k: v for k, v in cfg.items() if k.split(".")[0] in
                       ("grid", "forcing", "weight", "evolve")})
    try:
        out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.subcommand](cfg, out, man)
    except (ConfigError, DomainError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalAbort as err:
        print(f"numerical abort: {err}", file=sys.stderr)
        man.check("numerical_abort", False)
        man.write(out)
        return EXIT_ABORT
    man.write(out)
    n_ok = sum(c["passed"] for c in man.checks)
    print(f"{args.subcommand}: {n_ok}/{len(man.checks)} checks passed; outputs in {out}")
    return EXIT_OK if man.passed else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
