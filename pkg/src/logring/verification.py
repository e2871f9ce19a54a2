"""
Invariant suites run by ``logring verify``.

Each check returns ``(passed, detail)``; ``run_suite`` stops at nothing and
reports every check, naming the first failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from . import dynamics, linmat, model, spectral, stability
from .model import RingParams

MU_SET = (0.01, 0.1, 0.5, 1.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_re_residual(n_max):
    worst = 0.0
    for n in range(2, n_max + 1):
        for p in [RingParams.central(n, mu) for mu in MU_SET] + [RingParams.free(n)]:
            worst = max(worst, model.re_residual(p))
    return worst <= 1e-12, f"max residual {worst:.3e} for n <= {n_max}"


def check_c_sums(n_max):
    worst = worst_im = 0.0
    for n in range(2, n_max + 1):
        for j in range(n):
            re, im = spectral.c_sum_bruteforce(n, j)
            worst = max(worst, abs(re - float(spectral.c_sum_closed(n, j))) / max(1, n * n))
            worst_im = max(worst_im, im)
    ok = worst <= 1e-10 and worst_im <= 1e-10
    return ok, f"max scaled error {worst:.3e}, max |imag| {worst_im:.3e} for n <= {n_max}"


def check_trig_sums(n_max):
    worst = 0.0
    for n in range(2, n_max + 1):
        s1, s2 = spectral.trig_identity_sums(n)
        worst = max(worst, abs(s1 - (n * n - 1) / 3) / max(1, n * n),
                    abs(s2 - (n - 1) * (n - 5) / 3) / max(1, n * n))
    return worst <= 1e-10, f"max scaled error {worst:.3e} for n <= {n_max}"


def check_product_formula(n_max):
    worst = 0.0
    grid = np.linspace(0.05, 1.0, 20)
    for n in range(2, n_max + 1):
        for mu in grid:
            p = RingParams.central(n, mu)
            w4 = p.omega**4
            for f in spectral.mode_factors(p):
                ref = spectral.product_formula_central(n, mu, f.j)
                worst = max(worst, abs(f.P - ref) / max(abs(ref), w4))
        p = RingParams.free(n)
        for f in spectral.mode_factors(p):
            ref = spectral.product_formula_free(n, f.j)
            worst = max(worst, abs(f.P - ref) / max(abs(ref), p.omega**4))
    return worst <= 1e-10, f"max relative mismatch {worst:.3e} for n <= {n_max}"


def check_root_residual(n_max):
    worst = 0.0
    for n in range(2, n_max + 1):
        for p in [RingParams.central(n, mu) for mu in MU_SET] + [RingParams.free(n)]:
            for f in spectral.mode_factors(p):
                lam = f.lambdas
                res = np.abs(lam**4 + f.A * lam**2 + f.B) / max(1.0, abs(f.B))
                worst = max(worst, float(res.max()))
    return worst <= 1e-9, f"max quartic residual {worst:.3e}"


def check_linmat(kronecker):
    worst_res = worst_det = worst_tr = 0.0
    for n in range(2, 13):
        for p in [RingParams.central(n, mu) for mu in (0.1, 0.5, 1.0)] + [RingParams.free(n)]:
            rep = linmat.full_spectrum_check(p, kronecker=kronecker)
            if not rep.passed:
                return False, f"n={n} mu={p.mu} central={p.has_central}: {rep.failures[0]}"
            worst_res = max(worst_res, rep.max_residual)
            worst_det = max(worst_det, rep.max_scaled_det)
            worst_tr = max(worst_tr, rep.trace_error)
    return True, (f"max residual {worst_res:.3e}, max scaled det {worst_det:.3e}, "
                  f"trace error {worst_tr:.3e}")


def check_theorem_central(n_max):
    grid = np.linspace(0.0, 1.0, 202)[1:-1]
    n_bad = 0
    first = ""
    for n in range(2, n_max + 1):
        rep = stability.cross_check(n, grid)
        if rep.interior:
            n_bad += len(rep.interior)
            first = first or f"n={n} mu={rep.interior[0].mu}"
    return n_bad == 0, f"{n_bad} interior disagreements for n <= {n_max} {first}".strip()


def check_theorem_free(n_max):
    for n in range(2, n_max + 1):
        v = stability.classify_spectral(RingParams.free(n))
        want = (stability.Status.STABLE if n <= 6 else
                stability.Status.DEGENERATE if n == 7 else stability.Status.UNSTABLE)
        if v.status != want:
            return False, f"n={n}: {v.status} (expected {want})"
    return True, f"free-ring verdicts match for n <= {n_max}"


def check_re_fidelity():
    p = RingParams.central(6, 0.5)
    traj = dynamics.integrate(model.re_configuration(p), 10 * p.period)
    err = float(dynamics.deviation(traj, p).max())
    d = dynamics.drifts(traj)
    ok = err <= 1e-6 and d["energy_drift"] <= 1e-8 and d["angular_momentum_drift"] <= 1e-10
    return ok, (f"position error {err:.3e}, energy drift {d['energy_drift']:.3e}, "
                f"angular momentum drift {d['angular_momentum_drift']:.3e}")


def suite(level: str, kronecker: str = spectral.KRONECKER_SPLIT) -> List[tuple]:
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    full = level == "full"
    return [
        ("core.re_residual", lambda: check_re_residual(64 if full else 16)),
        ("spectral.c_sum", lambda: check_c_sums(512 if full else 16)),
        ("spectral.trig_identity", lambda: check_trig_sums(512 if full else 16)),
        ("spectral.product_formula", lambda: check_product_formula(64 if full else 16)),
        ("spectral.root_residual", lambda: check_root_residual(64 if full else 16)),
        ("linmat.residual", lambda: check_linmat(kronecker)),
        ("stability.theorem_central", lambda: check_theorem_central(60 if full else 16)),
        ("stability.theorem_free", lambda: check_theorem_free(100 if full else 16)),
        ("dynamics.re_fidelity", check_re_fidelity),
    ]


def run_suite(level: str, kronecker: str = spectral.KRONECKER_SPLIT,
              progress: Callable[[CheckResult], None] = None) -> List[CheckResult]:
    out = []
    for name, fn in suite(level, kronecker):
        try:
            ok, detail = fn()
        except Exception as exc:  # report, never abort the suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, bool(ok), detail)
        out.append(res)
        if progress:
            progress(res)
    return out
