"""
Nonlinear integration of the full (n+1)- or n-body system in the inertial frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.stats import linregress

from .linmat import mode_eigenvector
from .model import (DMIN, BodySet, CollisionError, RingParams, acceleration_array,
                    min_pair_distance, pair_differences, re_configuration)


class StepSizeError(RuntimeError):
    """The adaptive integrator could not proceed (step size underflow)."""

    def __init__(self, message, time):
        super().__init__(f"{message} (t = {time:.17g})")
        self.time = time


@dataclass
class IntegratorConfig:
    """Tolerances and sampling for :func:`integrate`.

    ``sample_dt`` of ``None`` records 201 evenly spaced samples.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = np.inf
    sample_dt: Optional[float] = None
    method: str = "RK45"
    dmin: float = DMIN

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")


@dataclass
class Trajectory:
    times: np.ndarray
    positions: np.ndarray   # (samples, bodies, 2)
    velocities: np.ndarray  # (samples, bodies, 2)
    masses: np.ndarray
    collided: bool = False
    collision_time: Optional[float] = None
    nfev: int = 0

    def state(self, i: int) -> BodySet:
        return BodySet(self.masses, self.positions[i], self.velocities[i], self.times[i])

    @property
    def final(self) -> BodySet:
        return self.state(-1)


def _pack(bodies):
    return np.concatenate([bodies.positions.ravel(), bodies.velocities.ravel()])


def integrate(initial: BodySet, t_final: float,
              cfg: Optional[IntegratorConfig] = None) -> Trajectory:
    """Integrate from ``initial.time`` to ``t_final`` with an embedded RK pair.

    Collisions (pairwise distance below ``cfg.dmin``) stop the run early and
    return the partial trajectory with ``collided`` set. Works backwards in
    time too when ``t_final < initial.time``.

    Raises
    ------
    StepSizeError
        If the step size underflows.
    """
    cfg = cfg or IntegratorConfig()
    t0 = float(initial.time)
    if t_final == t0:
        raise ValueError("t_final must differ from the initial time")
    if min_pair_distance(initial.positions) < cfg.dmin:
        raise ValueError("initial state is already in collision")
    masses = initial.masses.copy()
    nb = len(initial)
    half = 2 * nb

    def rhs(_t, y):
        pos = y[:half].reshape(nb, 2)
        acc = acceleration_array(masses, pos, dmin=0.0)
        return np.concatenate([y[half:], acc.ravel()])

    def collision(_t, y):
        _, r2 = pair_differences(y[:half].reshape(nb, 2))
        return math.sqrt(r2.min()) - cfg.dmin

    collision.terminal = True

    span = t_final - t0
    if cfg.sample_dt is None:
        t_eval = t0 + np.linspace(0.0, 1.0, 201) * span
    else:
        count = max(2, int(math.floor(abs(span) / cfg.sample_dt + 1e-9)) + 1)
        t_eval = t0 + np.sign(span) * cfg.sample_dt * np.arange(count)
        if abs(t_eval[-1] - t_final) > 1e-12 * max(1.0, abs(t_final)):
            t_eval = np.append(t_eval, t_final)
        else:
            t_eval[-1] = t_final

    sol = solve_ivp(rhs, (t0, t_final), _pack(initial), method=cfg.method,
                    t_eval=t_eval, rtol=cfg.rtol, atol=cfg.atol,
                    max_step=cfg.max_step, events=collision)
    if sol.status == -1:
        t_fail = float(sol.t[-1]) if sol.t.size else t0
        raise StepSizeError(sol.message, t_fail)
    y = sol.y.T
    collided = sol.status == 1
    return Trajectory(
        times=sol.t.copy(),
        positions=y[:, :half].reshape(-1, nb, 2),
        velocities=y[:, half:].reshape(-1, nb, 2),
        masses=masses,
        collided=collided,
        collision_time=float(sol.t_events[0][0]) if collided else None,
        nfev=sol.nfev,
    )


@dataclass(frozen=True)
class ConservedQuantities:
    energy: float
    angular_momentum: float
    linear_momentum: np.ndarray


def conserved(state: BodySet) -> ConservedQuantities:
    """Energy, angular momentum and linear momentum of ``state``.

    The pair potential is ``m_i m_k ln|x_i - x_k|``.
    """
    m, x, v = state.masses, state.positions, state.velocities
    _, r2 = pair_differences(x)
    if np.sqrt(r2.min()) < DMIN:
        raise CollisionError("coincident bodies")
    kinetic = 0.5 * float(np.sum(m * np.einsum("ic,ic->i", v, v)))
    iu = np.triu_indices(len(m), 1)
    potential = float(np.sum((m[:, None] * m[None, :])[iu] * 0.5 * np.log(r2[iu])))
    ang = float(np.sum(m * (x[:, 0] * v[:, 1] - x[:, 1] * v[:, 0])))
    lin = np.sum(m[:, None] * v, axis=0)
    return ConservedQuantities(kinetic + potential, ang, lin)


def drifts(traj: Trajectory) -> dict:
    """Largest relative energy and angular-momentum drift along ``traj``."""
    q0 = conserved(traj.state(0))
    e_scale = max(abs(q0.energy), 1e-300)
    l_scale = max(abs(q0.angular_momentum), 1e-300)
    de = dl = dp = 0.0
    for i in range(len(traj.times)):
        q = conserved(traj.state(i))
        de = max(de, abs(q.energy - q0.energy) / e_scale)
        dl = max(dl, abs(q.angular_momentum - q0.angular_momentum) / l_scale)
        dp = max(dp, float(np.linalg.norm(q.linear_momentum - q0.linear_momentum)))
    return {"energy_drift": de, "angular_momentum_drift": dl, "linear_momentum_drift": dp}


def reference_positions(params: RingParams, times) -> np.ndarray:
    """Positions of the exact rotating equilibrium, shape ``(len(times), bodies, 2)``."""
    return np.stack([re_configuration(params, t).positions for t in np.atleast_1d(times)])


def deviation(traj: Trajectory, params: RingParams) -> np.ndarray:
    """Per-sample maximum distance of any body to the rotating equilibrium."""
    ref = reference_positions(params, traj.times)
    d = traj.positions - ref
    return np.max(np.hypot(d[..., 0], d[..., 1]), axis=1)


def perturb_along_mode(params: RingParams, j: int, lam: complex,
                       eps: Optional[float] = None) -> BodySet:
    """Equilibrium at ``t = 0`` displaced along the real solution spanned by mode ``j``.

    The mode eigenvector and its conjugate partner are combined into a
    physical displacement, normalised so the largest ring-body displacement
    is ``eps`` (default ``1e-8 r``). The central body is moved so that the
    centre of mass and the total momentum stay zero.
    """
    if eps is None:
        eps = 1e-8 * params.r
    pair = mode_eigenvector(params, j, lam)
    n = params.n
    rho = pair.v[:2 * n].reshape(n, 2)  # rows (xi1 rho^k, xi2 rho^k)

    best = None
    for phase in (1.0, 1j):
        dw = phase * rho[:, 0] + np.conj(phase * rho[:, 1])
        dwdot = pair.lam * phase * rho[:, 0] + np.conj(pair.lam * phase * rho[:, 1])
        size = max(np.max(np.abs(dw)), np.max(np.abs(dwdot)))
        if best is None or size > best[0] * (1 + 1e-12):
            best = (size, dw, dwdot)
    _, dw, dwdot = best

    rot = np.exp(1j * params.theta)
    dz = rot * dw
    dzdot = rot * (1j * params.omega * dw + dwdot)
    scale = np.max(np.abs(dz))
    if scale < 1e-12 * np.max(np.abs(dzdot)):
        scale = np.max(np.abs(dzdot))
    dz, dzdot = eps * dz / scale, eps * dzdot / scale

    state = re_configuration(params)
    state.positions[:n] += np.column_stack([dz.real, dz.imag])
    state.velocities[:n] += np.column_stack([dzdot.real, dzdot.imag])
    if params.has_central:
        m = params.mu
        state.positions[n] -= m * np.array([dz.real.sum(), dz.imag.sum()])
        state.velocities[n] -= m * np.array([dzdot.real.sum(), dzdot.imag.sum()])
    return state


@dataclass(frozen=True)
class GrowthEstimate:
    rate: float
    window: tuple
    r_squared: float
    samples: int


def growth_rate(traj: Trajectory, params: RingParams, eps: float,
                low: float = 10.0, high: float = 1000.0) -> Optional[GrowthEstimate]:
    """Exponential rate of the deviation from the rotating equilibrium.

    Fits ``log d(t)`` over the first contiguous stretch with
    ``low*eps <= d <= high*eps``. Returns ``None`` when the deviation never
    enters that band (or enters it for fewer than three samples).
    """
    d = deviation(traj, params)
    inside = (d >= low * eps) & (d <= high * eps)
    idx = np.flatnonzero(inside)
    if idx.size == 0:
        return None
    start = idx[0]
    stop = start
    while stop + 1 < d.size and inside[stop + 1]:
        stop += 1
    sl = slice(start, stop + 1)
    if stop - start + 1 < 3:
        return None
    t, logd = traj.times[sl], np.log(d[sl])
    fit = linregress(t, logd)
    return GrowthEstimate(rate=float(fit.slope), window=(float(t[0]), float(t[-1])),
                          r_squared=float(fit.rvalue**2), samples=int(t.size))
