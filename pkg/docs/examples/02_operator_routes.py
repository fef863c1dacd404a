"""Three ways to apply the collision operator to the same function.

* Lcal on the X side, with the singular kernel M evaluated as written;
* P0 in xi = log X by paired-h panel quadrature of its kernel G;
* P0 as the Fourier multiplier -rho0(k).

Lcal v = 2 e^{-xi/2} P0 w with w(xi) = v(e^xi). Refining the panels shows
the quadrature route converging to the multiplier route.
"""

import numpy as np

from wavekin import UniformLogGrid
from wavekin.families import bump_family
from wavekin.kinetic_ops import QuadratureSpec, apply_L_X, apply_P0_direct, apply_P_spectral, homogeneity_residual

g = UniformLogGrid.dyadic(4096, 128)
inner = g.inner_mask()
kappa = np.exp(-g.xi / 2)


def rel(a, b):
    return np.linalg.norm((a - b)[inner]) / np.linalg.norm(b[inner])


fam = bump_family(g, 4)
for i, f in enumerate(fam):
    spec = apply_P_spectral(f).values
    print(f"bump {i}: |direct P - spectral P| = {rel(kappa * apply_P0_direct(f).values, spec):.1e}, "
          f"|Lcal - 2P| = {rel(apply_L_X(f).values, 2 * spec):.1e}")

print("\npanel refinement (4-point panels, no error control):")
f = fam[1]
ref = apply_P_spectral(f).values
prev = None
for pw in (2.0, 1.0, 0.5, 0.25):
    e = rel(kappa * apply_P0_direct(f, QuadratureSpec(panel_order=4, panel_width=pw, estimate_error=False)).values, ref)
    note = f"  observed order {np.log2(prev / e):.2f}" if prev else ""
    print(f"  panel width {pw:<5g} error {e:.2e}{note}")
    prev = e

# dilations by powers of two are node shifts on this grid, so homogeneity is exact up to quadrature
print("\nLcal(v(R .)) vs R^{1/2} (Lcal v)(R .):")
for R in (0.25, 0.5, 2.0, 4.0):
    print(f"  R = {R:<5g} residual {homogeneity_residual(fam[0], R):.1e}")
