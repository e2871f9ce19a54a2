"""
Scaled planar n-body problem with logarithmic pair interaction.

Units are chosen so that the central mass and the interaction constant are
both one; ring bodies carry the mass ratio ``mu``. Without a central mass the
ring bodies carry unit mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

DMIN = 1e-12


class CollisionError(ValueError):
    """Two bodies are closer than the collision guard distance."""


def _check_domain(n, mu, r):
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu!r}")
    if not r > 0:
        raise ValueError(f"r must be positive, got {r!r}")


def re_angular_velocity(n: int, mu: float, r: float = 1.0,
                        has_central: bool = True) -> float:
    """Angular velocity of the regular n-gon rotating equilibrium.

    Central case: ``r**2 * omega**2 = 1 + mu*(n-1)/2``.
    Free ring (unit masses): ``r**2 * omega**2 = (n-1)/2``.
    """
    _check_domain(n, mu, r)
    if has_central:
        return math.sqrt(1.0 + 0.5 * mu * (n - 1)) / r
    return math.sqrt(0.5 * (n - 1)) / r


def newtonian_re_omega(n: int, mu: float, r: float = 1.0) -> float:
    """Angular velocity of the same ring under Newtonian attraction.

    Comparison only; nothing else in the package uses it.
    """
    _check_domain(n, mu, r)
    k = np.arange(1, n)
    s = np.sum(1.0 / (2.0 * np.sin(np.pi * k / n)))
    return math.sqrt((1.0 + 0.5 * mu * s) / r**3)


@dataclass(frozen=True)
class RingParams:
    """One regular n-gon problem instance.

    ``omega`` is derived from the equilibrium relation unless given
    explicitly; an explicit value is accepted so that off-equilibrium
    rotation rates can be probed. ``mu`` is ignored by the free-ring
    dynamics, whose ring bodies have unit mass.
    """

    n: int
    mu: float = 1.0
    has_central: bool = True
    r: float = 1.0
    omega: Optional[float] = field(default=None)

    def __post_init__(self):
        _check_domain(self.n, self.mu, self.r)
        object.__setattr__(self, "n", int(self.n))
        if self.omega is None:
            w = re_angular_velocity(self.n, self.mu, self.r, self.has_central)
            object.__setattr__(self, "omega", w)
        elif not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")

    @classmethod
    def central(cls, n, mu, r=1.0):
        return cls(n=n, mu=mu, has_central=True, r=r)

    @classmethod
    def free(cls, n, r=1.0):
        return cls(n=n, mu=1.0, has_central=False, r=r)

    @property
    def ring_mass(self) -> float:
        return self.mu if self.has_central else 1.0

    @property
    def physical_regime(self) -> bool:
        """False when the mass ratio exceeds one (central case only)."""
        return (not self.has_central) or self.mu <= 1.0

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def omega_sq_exact(self) -> Fraction:
        """Equilibrium ``omega**2`` as an exact rational in (n, mu, r).

        Only meaningful for the equilibrium rate; an explicit ``omega``
        override is ignored here.
        """
        r2 = Fraction(self.r) ** 2
        if self.has_central:
            return (1 + Fraction(self.mu) * (self.n - 1) / 2) / r2
        return Fraction(self.n - 1, 2) / r2


@dataclass
class BodySet:
    """Masses, planar positions and velocities of all bodies at one time.

    Ring bodies come first; the central body, when present, is last.
    """

    masses: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        self.velocities = np.asarray(self.velocities, dtype=float).reshape(-1, 2)
        nb = self.masses.shape[0]
        if self.positions.shape[0] != nb or self.velocities.shape[0] != nb:
            raise ValueError("masses, positions and velocities disagree in length")
        if np.any(self.masses <= 0):
            raise ValueError("all masses must be strictly positive")

    def __len__(self):
        return self.masses.shape[0]

    def copy(self) -> "BodySet":
        return BodySet(self.masses.copy(), self.positions.copy(),
                       self.velocities.copy(), self.time)


# A phase-space point of the integrator is just a BodySet.
PhaseState = BodySet


def re_configuration(params: RingParams, t: float = 0.0) -> BodySet:
    """Bodies of the rotating equilibrium at time ``t``."""
    phase = params.omega * t + params.theta
    pos = params.r * np.column_stack([np.cos(phase), np.sin(phase)])
    speed = params.r * params.omega
    vel = speed * np.column_stack([-np.sin(phase), np.cos(phase)])
    masses = np.full(params.n, params.ring_mass)
    if params.has_central:
        pos = np.vstack([pos, [0.0, 0.0]])
        vel = np.vstack([vel, [0.0, 0.0]])
        masses = np.append(masses, 1.0)
    return BodySet(masses, pos, vel, t)


def pair_differences(positions):
    """``d[i, k] = x_k - x_i`` and squared distances with an inf diagonal."""
    d = positions[None, :, :] - positions[:, None, :]
    r2 = np.einsum("ikc,ikc->ik", d, d)
    np.fill_diagonal(r2, np.inf)
    return d, r2


def min_pair_distance(positions) -> float:
    _, r2 = pair_differences(positions)
    return float(np.sqrt(r2.min()))


def acceleration_array(masses, positions, dmin=DMIN):
    """Logarithmic-force accelerations, ``a_i = sum_k m_k (x_k - x_i)/|x_k - x_i|**2``."""
    d, r2 = pair_differences(positions)
    if r2.min() < dmin * dmin:
        i, k = np.unravel_index(np.argmin(r2), r2.shape)
        raise CollisionError(
            f"bodies {i} and {k} are {math.sqrt(r2[i, k]):.3e} apart (dmin={dmin:g})")
    w = masses[None, :] / r2
    return np.einsum("ik,ikc->ic", w, d)


def accelerations(bodies: BodySet, dmin: float = DMIN) -> np.ndarray:
    """Acceleration of every body, shape ``(len(bodies), 2)``.

    Raises
    ------
    CollisionError
        If some pairwise distance is below ``dmin``.
    """
    return acceleration_array(bodies.masses, bodies.positions, dmin)


def re_residual(params: RingParams) -> float:
    """Largest violation of ``a = -omega**2 x`` over all bodies of the equilibrium."""
    bodies = re_configuration(params)
    acc = accelerations(bodies)
    res = acc + params.omega**2 * bodies.positions
    return float(np.max(np.hypot(res[:, 0], res[:, 1])))
