"""
Closed-form stability intervals against the numerical classifier.

For each ring size, sweep the mass ratio and compare the numerical verdict
with the exact interval. Disagreements only ever sit on interval endpoints.
"""

import numpy as np

from logring import RingParams, classify_spectral, cross_check, theorem_bounds

grid = np.linspace(0, 1, 202)[1:-1]
for n in range(2, 16):
    b = theorem_bounds(n)
    interval = "empty" if b.empty else f"[{b.lower}, {b.upper}{']' if b.upper_closed else ')'}"
    rep = cross_check(n, grid)
    print(f"n={n:2d}  {b.kind:9s} {interval:18s} interior disagreements: {len(rep.interior)}")

# at an endpoint one mode product vanishes and the verdict is Degenerate
for n, mu in ((3, 1.0), (10, 4 / 81), (10, 4 / 7)):
    v = classify_spectral(RingParams.central(n, mu))
    print(f"n={n}, mu={mu:.6f}: {v.status}, witness j={v.witness_mode}")
