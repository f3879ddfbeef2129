#!/usr/bin/env python3
"""A proper biharmonic projection, verified end to end.

With the half-line profile (df = sqrt(t^4 - 1) d_t), the projection from
the gradient-deformed lift has tension (2/t) d_t, which never vanishes,
while its bitension vanishes identically: proper biharmonic.  Three
routes agree: the generic jet engine, the closed tension formula
grad(a)/(2a), and the base-manifold residual
Ricci(grad ln a) + grad(lap ln a)/2 + grad(|grad ln a|^2)/8.
"""

import numpy as np

from liftgeom import bitension, classify, example, tension
from liftgeom.closedform import biharm_residual_pi_alpha, tension_pi_alpha_closed

scn = example("ex4_1")
phi = scn.smooth_map()
rng = np.random.default_rng(1)

print("=" * 72)
print("Projection from the gradient-deformed lift, half-line profile")
print("=" * 72)
print(f"{'t':>4} {'generic tension':>24} {'2/t':>8} {'|bitension|':>12} "
      f"{'residual':>10}")
for t in (1.5, 2.0, 3.0):
    p = np.concatenate([[t, 0.0], rng.standard_normal(2)])
    tau = tension(phi, p)
    tau2 = bitension(phi, p)
    res = biharm_residual_pi_alpha(scn.metric, scn.f, [t, 0.0])
    print(f"{t:4.1f} {str(np.round(tau, 9)):>24} {2 / t:8.4f} "
          f"{np.max(np.abs(tau2)):12.2e} {np.max(np.abs(res)):10.2e}")

form1, form2 = tension_pi_alpha_closed(scn.metric, scn.f, [2.0, 0.0])
print(f"\nclosed tension forms at t = 2: {form1} and {form2} (identical)")

out = classify(phi, [bp.coords for bp in scn.bundle_points(rng)])
print(f"\nclassification over {out.samples} bundle samples: {out.verdict}")
print(f"  max|tension|   = {out.max_tension:.3e}  (> {out.eps_harmonic:.0e})")
print(f"  max|bitension| = {out.max_bitension:.3e}  (< {out.eps_biharmonic:.0e})")

print("\nFor contrast, the quadratic profile f = t^2 is neither harmonic")
print("nor biharmonic:")
quad = example("quadratic_profile")
qphi = quad.smooth_map()
out = classify(qphi, [bp.coords for bp in quad.bundle_points(rng)])
print(f"  verdict {out.verdict}: max|tension| {out.max_tension:.3f}, "
      f"max|bitension| {out.max_bitension:.3f}")
