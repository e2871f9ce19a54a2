"""
Per-mode spectrum of a ring with a central mass.

Every mode j contributes a biquadratic in lambda. Its root product P_j
decides stability: P_j > 0 keeps the pair on the imaginary axis.
"""

from logring import RingParams, mode_factors

p = RingParams.central(10, 0.5)
print(f"n={p.n}, mu={p.mu}, omega^4 = {p.omega**4:.4f}")
for f in mode_factors(p):
    lams = ", ".join(f"{z.real:+.4f}{z.imag:+.4f}i" for z in f.lambdas[::2])
    print(f"j={f.j:2d}  C_j={f.c_sum:+8.4f}  P_j={f.P:+9.4f}  lambda: {lams} (and negatives)")

# the free octagon has three modes with a real, growing pair
for f in mode_factors(RingParams.free(8)):
    grow = max(z.real for z in f.lambdas)
    if grow > 1e-12:
        print(f"free n=8, j={f.j}: growth rate {grow:.6f}")
