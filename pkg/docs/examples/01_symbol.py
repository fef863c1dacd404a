"""The symbol rho0(k) of the log-variable operator.

rho0 has two independent routes: a closed form in the digamma function
and the defining integral, evaluated by adaptive quadrature. This script
compares them, then looks at the two ends of the k axis: rho0 ~ k^2 near
zero and rho0 ~ gamma + log k at infinity.
"""

import numpy as np

from wavekin.specfun import EULER_GAMMA, large_k_fit, rho0, rho0_as_printed, rho0_via_integral, small_k_constants

print("k        Re rho0          Im rho0          |digamma - integral|")
for k in (0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 50.0):
    a, b = rho0(k), rho0_via_integral(k)
    print(f"{k:<8g} {a.real:<16.12f} {a.imag:<16.12f} {abs(a - b):.1e}")

# A closed form with Psi(1/2 + ik/2) in place of Psi(1/2 - ik/2) has the right
# real part but an imaginary part off by (pi/2) tanh(pi k / 2).
k = np.array([0.5, 2.0, 8.0])
print("\nimaginary-part offset of the other sign choice:", (rho0_as_printed(k) - rho0(k)).imag)
print("(pi/2) tanh(pi k/2):                           ", np.pi / 2 * np.tanh(np.pi * k / 2))

r = small_k_constants()
print(f"\nnear k = 0:  Re rho0 / k^2 -> {r['re_over_k2']:.8f} (zeta(3) = {r['zeta3']:.8f})")
print(f"             Im rho0 / k   -> {r['im_over_k']:.8f} (-pi^2/12 = {r['minus_pi2_over_12']:.8f})")

fit = large_k_fit()
k = np.geomspace(100, 1000, 4)
print(f"\nlarge k: Im rho0 ~ {fit['imag_coefficient']:.4f} / k")
print("k * (Re rho0 - gamma - log k):", np.round(k * (rho0(k).real - EULER_GAMMA - np.log(k)), 5))
