"""
Linear stability verdicts: numerical (from the mode factors) and closed-form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .model import RingParams
from .spectral import mode_factors


class Status(str, enum.Enum):
    STABLE = "SpectrallyStable"
    DEGENERATE = "Degenerate"
    UNSTABLE = "Unstable"

    def __str__(self):
        return self.value


@dataclass
class StabilityVerdict:
    status: Status
    max_re_lambda: float
    witness_mode: Optional[int]
    per_mode_P: List[float]
    trivial_zeros_excluded: int = 2

    @property
    def min_nontrivial_P(self) -> float:
        return min(self.per_mode_P[1:]) if len(self.per_mode_P) > 1 else float("nan")


def classify_spectral(params: RingParams, p_tol: float = 1e-9,
                      re_tol: float = 1e-9) -> StabilityVerdict:
    """Classify from the ``n`` mode factors.

    Tolerances are relative: ``|P| <= p_tol * omega**4`` marks an extra zero
    eigenvalue pair, ``Re lam > re_tol * omega`` marks instability. The
    small-``|y|`` pair of a mode with ``|P|`` under tolerance counts as the
    extra zero pair and is kept out of the real-part test, so that rounding
    at a boundary cannot masquerade as growth.
    """
    w = params.omega
    tol_p = p_tol * w**4
    tol_re = re_tol * w
    factors = mode_factors(params)
    per_mode_p = [f.P for f in factors]

    re_by_mode = []
    degenerate = []
    for f in factors:
        lams = f.lambdas
        if f.j == 0:
            # the symmetry pair sits at indices 2, 3 (y = B / y1 = 0)
            lams = lams[:2]
        elif abs(f.P) <= tol_p:
            degenerate.append(f.j)
            lams = lams[:2]
        re_by_mode.append(float(np.max(lams.real)))

    max_re = max(re_by_mode)
    if max_re > tol_re:
        # smallest j among (near-)ties
        cut = max_re - 1e-12 * max(1.0, abs(max_re))
        witness = next(j for j, v in enumerate(re_by_mode) if v >= cut)
        status = Status.UNSTABLE
    elif degenerate:
        witness = degenerate[0]
        status = Status.DEGENERATE
    else:
        witness = None
        status = Status.STABLE
    return StabilityVerdict(status=status, max_re_lambda=max_re if max_re > 0 else 0.0,
                            witness_mode=witness, per_mode_P=per_mode_p)


@dataclass(frozen=True)
class MuBounds:
    """Mass-ratio interval of linear stability for a ring with a central mass.

    ``kind`` is one of ``unstable`` (empty), ``point``, ``open-unit``,
    ``even``, ``odd``.
    """

    n: int
    kind: str
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    upper_closed: bool

    @property
    def empty(self) -> bool:
        return self.lower is None

    def contains(self, mu) -> bool:
        if self.empty:
            return False
        m = Fraction(mu)
        if m < self.lower:
            return False
        return m <= self.upper if self.upper_closed else m < self.upper

    def boundaries(self) -> List[Fraction]:
        if self.empty:
            return []
        return sorted({self.lower, self.upper})

    def distance(self, mu) -> float:
        """Distance from ``mu`` to the nearest endpoint (inf if empty)."""
        b = self.boundaries()
        if not b:
            return float("inf")
        m = Fraction(mu)
        return float(min(abs(m - x) for x in b))


def theorem_bounds(n: int) -> MuBounds:
    """Stability interval in ``mu`` from the closed-form analysis."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if n == 2:
        return MuBounds(n, "unstable", None, None, False)
    if n == 3:
        return MuBounds(n, "point", Fraction(1), Fraction(1), True)
    lower = Fraction(4, (n - 1) ** 2)
    if n <= 9:
        return MuBounds(n, "open-unit", lower, Fraction(1), False)
    if n % 2 == 0:
        return MuBounds(n, "even", lower, Fraction(16, n * n - 8 * n + 8), True)
    return MuBounds(n, "odd", lower, Fraction(16, (n - 1) * (n - 7)), True)


def classify_theorem(n: int, mu: float = 1.0, has_central: bool = True) -> Status:
    """Verdict of the closed-form theorems (stable or unstable only)."""
    if not has_central:
        return Status.STABLE if 2 <= n <= 6 else Status.UNSTABLE
    return Status.STABLE if theorem_bounds(n).contains(mu) else Status.UNSTABLE


@dataclass
class Disagreement:
    mu: float
    spectral: Status
    theorem: Status
    distance: float
    boundary: bool


@dataclass
class CrossCheckReport:
    n: int
    checked: int
    disagreements: List[Disagreement] = field(default_factory=list)

    @property
    def interior(self) -> List[Disagreement]:
        return [d for d in self.disagreements if not d.boundary]

    @property
    def reconciled(self) -> List[Disagreement]:
        return [d for d in self.disagreements if d.boundary]

    @property
    def passed(self) -> bool:
        return not self.interior


def cross_check(n: int, mu_grid: Sequence[float], boundary_tol: float = 1e-9) -> CrossCheckReport:
    """Compare spectral and closed-form verdicts on a grid of mass ratios.

    Disagreements within ``boundary_tol`` of an interval endpoint are
    reconciliations (degenerate or endpoint-convention cases); any other
    disagreement is a failure.
    """
    bounds = theorem_bounds(n)
    rep = CrossCheckReport(n=n, checked=len(mu_grid))
    for mu in sorted(mu_grid):
        s = classify_spectral(RingParams.central(n, mu)).status
        t = classify_theorem(n, mu)
        if s != t:
            dist = bounds.distance(mu)
            rep.disagreements.append(Disagreement(mu, s, t, dist, dist <= boundary_tol))
    return rep
