"""
Regular ring under a logarithmic pair potential.

Builds the rotating equilibrium for a few ring sizes, checks force balance,
and compares the angular velocity with the Newtonian ring for reference.
"""

from logring import RingParams, newtonian_re_omega, re_residual

print(f"{'n':>3} {'mu':>5} {'omega (log)':>12} {'omega (1/r^2)':>14} {'residual':>10}")
for n in (2, 3, 6, 12):
    for mu in (0.1, 1.0):
        p = RingParams.central(n, mu)
        print(f"{n:>3} {mu:>5} {p.omega:>12.6f} {newtonian_re_omega(n, mu):>14.6f} "
              f"{re_residual(p):>10.1e}")

# without a central body the ring still rotates, at r^2 omega^2 = (n - 1)/2
for n in (2, 5, 9):
    p = RingParams.free(n)
    print(f"free n={n}: omega = {p.omega:.6f}, residual {re_residual(p):.1e}")
