"""
Nonlinear check of a linear growth rate.

Displaces the two-body ring along its unstable mode by 1e-8, integrates the
full equations, and fits the exponential rate of the deviation.
"""

from logring import RingParams
from logring.dynamics import (IntegratorConfig, growth_rate, integrate,
                              perturb_along_mode)
from logring.spectral import mode_factor

eps = 1e-8
for p, j in ((RingParams.central(2, 0.5), 1), (RingParams.free(8), 3)):
    lam = max(mode_factor(p, j).lambdas, key=lambda z: z.real)
    traj = integrate(perturb_along_mode(p, j, lam, eps), 20 / lam.real,
                     IntegratorConfig(sample_dt=0.02))
    g = growth_rate(traj, p, eps)
    print(f"n={p.n} central={p.has_central} j={j}: predicted {lam.real:.5f}, "
          f"fitted {g.rate:.5f} (r^2 {g.r_squared:.6f}, window {g.window[0]:.1f}..{g.window[1]:.1f})")
