"""
Command-line interface: ``logring {bounds,classify,spectrum,sweep,simulate,verify}``.

Exit codes: 0 success, 1 usage error, 2 numerical or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import dynamics, model, spectral, stability, verification
from .model import RingParams

EXIT_USAGE = 1
EXIT_FAILURE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (stability.Status,)):
        return x.value
    return x


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_output(text: str, out):
    """Write to stdout, or atomically to ``out`` (temp file + rename)."""
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".logring-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _params(args) -> RingParams:
    try:
        if args.free:
            return RingParams.free(args.n)
        if args.mu is None:
            raise UsageError("--mu is required unless --free is given")
        return RingParams.central(args.n, args.mu)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit_table(args, header, rows, obj_key):
    if args.format == "json":
        write_output(json_text({obj_key: [dict(zip(header, r)) for r in rows]}), args.out)
    else:
        write_output(csv_text(header, rows), args.out)


# -- subcommands -------------------------------------------------------------

BOUNDS_HEADER = ["n", "case", "lower", "lower_decimal", "upper", "upper_decimal",
                 "upper_closed"]


def bounds_rows(n_min, n_max):
    rows = []
    for n in range(n_min, n_max + 1):
        b = stability.theorem_bounds(n)
        rows.append([n, b.kind, b.lower, None if b.lower is None else float(b.lower),
                     b.upper, None if b.upper is None else float(b.upper),
                     None if b.empty else b.upper_closed])
    return rows


def cmd_bounds(args):
    if args.n_min < 2 or args.n_max < args.n_min:
        raise UsageError("need 2 <= n_min <= n_max")
    rows = bounds_rows(args.n_min, args.n_max)
    if args.format == "json":
        write_output(json_text({"bounds": [dict(zip(BOUNDS_HEADER, r)) for r in rows]}),
                     args.out)
    else:
        write_output(csv_text(BOUNDS_HEADER, rows), args.out)


def classify_record(p: RingParams) -> dict:
    v = stability.classify_spectral(p)
    return {
        "n": p.n,
        "mu": p.mu if p.has_central else None,
        "has_central": p.has_central,
        "omega": p.omega,
        "physical_regime": p.physical_regime,
        "spectral_status": v.status.value,
        "theorem_status": stability.classify_theorem(p.n, p.mu, p.has_central).value,
        "max_re_lambda": v.max_re_lambda,
        "witness_mode": v.witness_mode,
        "per_mode_p": list(v.per_mode_P),
    }


def cmd_classify(args):
    rec = classify_record(_params(args))
    if args.format == "json":
        write_output(json_text(rec), args.out)
    else:
        header = list(rec)
        row = [";".join(fmt(x) for x in rec[k]) if k == "per_mode_p" else rec[k]
               for k in header]
        write_output(csv_text(header, [row]), args.out)


SPECTRUM_HEADER = ["j", "re_lambda", "im_lambda", "p", "c_sum"]


def spectrum_rows(p: RingParams):
    rows = []
    for f in spectral.mode_factors(p):
        lams = sorted(f.lambdas, key=lambda z: (-z.imag, -z.real))
        for lam in lams:
            rows.append([f.j, lam.real + 0.0, lam.imag + 0.0, f.P, f.c_sum])
    return rows


def cmd_spectrum(args):
    _emit_table(args, SPECTRUM_HEADER, spectrum_rows(_params(args)), "spectrum")


SWEEP_HEADER = ["mu", "status", "max_re_lambda", "min_nontrivial_p"]


def _threads():
    env = os.environ.get("LOGRING_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"LOGRING_THREADS must be an integer, got {env!r}")
    return min(4, os.cpu_count() or 1)


def sweep_rows(n, mu_min, mu_max, samples, threads=1):
    grid = np.linspace(mu_min, mu_max, samples)

    def one(mu):
        v = stability.classify_spectral(RingParams.central(n, float(mu)))
        return [float(mu), v.status.value, v.max_re_lambda, v.min_nontrivial_P]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, grid))


def cmd_sweep(args):
    if not (0 < args.mu_min < args.mu_max <= 1):
        raise UsageError("need 0 < mu_min < mu_max <= 1")
    if args.samples < 2:
        raise UsageError("need samples >= 2")
    if args.n < 2:
        raise UsageError("need n >= 2")
    rows = sweep_rows(args.n, args.mu_min, args.mu_max, args.samples, _threads())
    write_output(csv_text(SWEEP_HEADER, rows), args.out)


def simulate(p: RingParams, periods: float, perturb_mode=None, eps=1e-8, tol=1e-10,
             samples_per_period=200):
    """Run one simulation; returns ``(trajectory, summary dict)``."""
    cfg = dynamics.IntegratorConfig(rtol=tol, atol=tol * 1e-2,
                                    sample_dt=p.period / samples_per_period)
    predicted = None
    if perturb_mode is None:
        start = model.re_configuration(p)
    else:
        f = spectral.mode_factor(p, perturb_mode)
        lam = max(f.lambdas, key=lambda z: (round(z.real, 12), z.imag))
        predicted = lam
        start = dynamics.perturb_along_mode(p, perturb_mode, lam, eps)
    traj = dynamics.integrate(start, periods * p.period, cfg)
    summary = {
        "n": p.n, "mu": p.mu if p.has_central else None, "has_central": p.has_central,
        "omega": p.omega, "periods": periods, "tol": tol,
        "collided": traj.collided, "collision_time": traj.collision_time,
        "max_position_error": float(dynamics.deviation(traj, p).max()),
        **dynamics.drifts(traj),
        "perturb_mode": perturb_mode,
        "perturb_eps": eps if perturb_mode is not None else None,
        "growth": None,
    }
    if perturb_mode is not None:
        g = dynamics.growth_rate(traj, p, eps)
        summary["predicted_lambda"] = [predicted.real, predicted.imag]
        if g is not None:
            summary["growth"] = {"rate": g.rate, "r_squared": g.r_squared,
                                 "window": list(g.window), "samples": g.samples}
    return traj, summary


def trajectory_csv(traj) -> str:
    nb = traj.masses.size
    header = ["t"] + [f"{c}{i}" for i in range(nb) for c in ("x", "y", "vx", "vy")]
    rows = []
    for k, t in enumerate(traj.times):
        row = [t]
        for i in range(nb):
            row += [traj.positions[k, i, 0], traj.positions[k, i, 1],
                    traj.velocities[k, i, 0], traj.velocities[k, i, 1]]
        rows.append(row)
    return csv_text(header, rows)


def cmd_simulate(args):
    p = _params(args)
    if not args.periods > 0:
        raise UsageError("--periods must be positive")
    if args.perturb_mode is not None and not 0 <= args.perturb_mode < p.n:
        raise UsageError(f"--perturb-mode must lie in 0..{p.n - 1}")
    if not args.tol > 0 or not args.perturb_eps > 0:
        raise UsageError("--tol and --perturb-eps must be positive")
    traj, summary = simulate(p, args.periods, args.perturb_mode, args.perturb_eps, args.tol)
    if args.out:
        write_output(trajectory_csv(traj), args.out)
    write_output(json_text(summary), args.summary)


def cmd_verify(args):
    def progress(res):
        print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}: {res.detail}",
              file=sys.stderr)

    results = verification.run_suite(args.level, args.delta_placement, progress)
    failed = [r for r in results if not r.passed]
    report = {
        "level": args.level,
        "delta_placement": args.delta_placement,
        "passed": not failed,
        "first_failure": failed[0].name if failed else None,
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    write_output(json_text(report), args.out)
    if failed:
        print(f"verification failed: {failed[0].name}", file=sys.stderr)
        return EXIT_FAILURE
    return 0


# -- parser ------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="logring", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def common(sp, default_format="csv"):
        sp.add_argument("--format", choices=("csv", "json"), default=default_format)
        sp.add_argument("--out", default=None, help="output path (default: stdout)")

    def ring(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--mu", type=float, default=None)
        sp.add_argument("--free", action="store_true", help="no central mass")

    sp = sub.add_parser("bounds", help="closed-form stability intervals in mu")
    sp.add_argument("--n-min", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("classify", help="spectral and closed-form verdicts")
    ring(sp)
    common(sp, "json")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("spectrum", help="all 4n eigenvalues")
    ring(sp)
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", help="stability along a grid of mu")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mu-min", type=float, required=True)
    sp.add_argument("--mu-max", type=float, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", help="integrate the nonlinear equations")
    ring(sp)
    sp.add_argument("--periods", type=float, required=True)
    sp.add_argument("--perturb-mode", type=int, default=None)
    sp.add_argument("--perturb-eps", type=float, default=1e-8)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--out", default=None, help="trajectory CSV path")
    sp.add_argument("--summary", default=None, help="summary JSON path (default: stdout)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="run the invariant suites")
    sp.add_argument("--level", choices=("quick", "full"), default="quick")
    sp.add_argument("--delta-placement", choices=(spectral.KRONECKER_SPLIT,
                                                  spectral.KRONECKER_LITERAL),
                    default=spectral.KRONECKER_SPLIT,
                    help="Kronecker shift placement for the dense-matrix check")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except UsageError as exc:
        print(f"logring: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (dynamics.StepSizeError, model.CollisionError, OSError,
            FloatingPointError) as exc:
        print(f"logring: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
