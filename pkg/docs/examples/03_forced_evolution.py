"""Forced evolution from zero data, and its scaling twin.

The forcing is the indicator of X in [1, 2]. The solution grows on the
window, leaks towards X = 0 (xi -> -inf), where it tends to a
time-dependent constant, and spreads its spectrum more slowly than the
forcing's. The scaling run rescales (X, t) -> (RX, sqrt(R) t) and
checks that the solver reproduces the exact covariance.
"""

import numpy as np

from wavekin import ExperimentConfig, evolve
from wavekin.evolve import scaling_reproduction, smoothing_footprint
from wavekin.forcing import ForcingSpec

cfg = ExperimentConfig(n_samples=9)
tr = evolve(cfg)
g = cfg.grid
print(f"dt = {tr.info['dt']:.3e}, {tr.info['steps']} steps, right-buffer leak {tr.info['worst_wrap']:.1e} of the sup")
print("t       max w     w at xi_min   weighted energy")
for t, s, e in zip(tr.times, tr.states, tr.info["energy"]):
    print(f"{t:<7.3f} {s.values.max():<9.5f} {s.values[0]:<13.5f} {e:.5f}")

fp = smoothing_footprint(tr)
print(f"\ntail slope of the forcing {fp['forcing_slope']:.3f}; of w(T*) {fp['solution_slopes'][-1]:.3f}")
print("slope gain grows with t but stays below 1/ln k, since the operator has logarithmic order:")
print("  ", np.round(fp["improvement"], 3))

# after switch-off the weighted energy int w^2 e^{xi/2} dxi can only decrease
off = evolve(cfg.with_(forcing=ForcingSpec("indicator_window", (1.0, 2.0), "switch_off", 0.5)))
e = np.array(off.info["energy"])
print("\nweighted energy after switch-off at t = 0.5:", np.round(e[off.times >= 0.5], 5))

for R in (0.25, 4.0):
    r = scaling_reproduction(ExperimentConfig(), R)
    print(f"scaling twin R = {R:g}: max relative gap {r['max_rel_gap']:.1e}")
