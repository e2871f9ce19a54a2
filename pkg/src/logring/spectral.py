"""
Roots-of-unity mode reduction of the ring linearization.

Each mode ``j`` contributes a biquadratic ``lam**4 + A lam**2 + B`` with
``A = 2 omega**2``. The coefficient ``B`` is evaluated in exact rational
arithmetic from (n, mu, r) so that structurally zero products (mode 0,
boundary parameters) come out as exact zeros rather than rounding noise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import gmpy2
import numpy as np

from .model import RingParams

Q = gmpy2.mpq

KRONECKER_SPLIT = "split"
KRONECKER_LITERAL = "literal"


def mode_root(n: int, j: int) -> complex:
    """``exp(2 pi i j / n)``."""
    return cmath.exp(2j * math.pi * (j % n) / n)


def _check_mode(n, j):
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0 <= j < n:
        raise ValueError(f"mode index must lie in 0..{n - 1}, got {j}")


def c_sum_bruteforce(n: int, j: int) -> Tuple[float, float]:
    """Term-by-term ``(1/4) sum_k rho_j**k / sin(theta_k/2)**2``.

    Returns
    -------
    (real part, |imaginary part|)
    """
    _check_mode(n, j)
    k = np.arange(1, n)
    # exact integer reduction of j*k and k to symmetric ranges, so terms k
    # and n-k carry bit-identical magnitudes and opposite-signed sines
    m = (j * k) % n
    m = np.where(2 * m > n, m - n, m)
    kk = np.minimum(k, n - k)
    phase = 2.0 * np.pi * m / n
    s2 = np.sin(np.pi * kk / n) ** 2
    re = math.fsum(np.cos(phase) / s2)
    im = math.fsum(np.sin(phase) / s2)
    return 0.25 * re, 0.25 * abs(im)


def c_sum_closed(n: int, j: int) -> Fraction:
    """``(n**2 - 6 n j + 6 j**2 - 1) / 12`` as an exact rational."""
    _check_mode(n, j)
    return Fraction(n * n - 6 * n * j + 6 * j * j - 1, 12)


def trig_identity_sums(n: int) -> Tuple[float, float]:
    """Direct sums ``sum 1/sin**2(theta_k/2)`` and ``Re sum e^{i theta_k}/sin**2(theta_k/2)``.

    They equal ``(n**2-1)/3`` and ``(n-1)(n-5)/3``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    k = np.arange(1, n)
    s2 = np.sin(np.pi * k / n) ** 2
    return float(np.sum(1.0 / s2)), float(np.sum(np.cos(2.0 * np.pi * k / n) / s2))


@dataclass(frozen=True)
class SpectralConstants:
    a: float
    b: float


@dataclass(frozen=True)
class _Exact:
    """Rational per-instance constants shared by all modes."""

    n: int
    mu: object
    inv_r2: object
    w2: object
    a: object
    b: object

    @classmethod
    def of(cls, params: RingParams) -> "_Exact":
        n = params.n
        mu = Q(params.mu)
        inv_r2 = 1 / Q(params.r) ** 2
        if params.has_central:
            w2 = (1 + mu * (n - 1) / 2) * inv_r2
        else:
            w2 = Q(n - 1, 2) * inv_r2
        a = mu * w2 * (n - 1) * (n - 5) / (6 * (2 + mu * (n - 1)))
        b = w2 * Q(n - 5, 6)
        return cls(n, mu, inv_r2, w2, a, b)


def _c_exact(n, j):
    return Q(n * n - 6 * n * j + 6 * j * j - 1, 12)


def spectral_constants(params: RingParams) -> SpectralConstants:
    """Diagonal shifts ``a`` (central case) and ``b`` (free ring).

    Both are evaluated with the equilibrium ``omega`` of ``params``; only
    the one matching ``params.has_central`` enters that case's factors.
    """
    ex = _Exact.of(params)
    return SpectralConstants(a=float(ex.a), b=float(ex.b))


@dataclass(frozen=True)
class ModeFactor:
    """Characteristic factor ``y**2 + A y + B`` of one mode, ``y = lam**2``.

    ``delta`` follows the per-case discriminant convention: ``A**2/4 - B`` for the
    central case and ``A**2 - 4B`` for the free ring.
    """

    j: int
    rho: complex
    c_sum: float
    A: float
    B: float
    delta: float
    S: float
    P: float
    lambdas: np.ndarray

    @property
    def y_roots(self) -> np.ndarray:
        return self.lambdas[::2] ** 2


def _sqrt_pair(y):
    y = complex(y)
    if y.imag == 0.0:
        if y.real < 0:
            s = 1j * math.sqrt(-y.real)
        else:
            s = complex(math.sqrt(y.real), 0.0)
    else:
        s = cmath.sqrt(y)
    return s, -s


def biquadratic_roots(A: float, B: float, disc: Optional[float] = None) -> np.ndarray:
    """Four roots of ``lam**4 + A lam**2 + B``, ordered ``[+s1, -s1, +s2, -s2]``.

    The y-quadratic is solved with the cancellation-free form: the larger
    root from the quadratic formula, the other as ``B`` divided by it.
    ``disc`` overrides ``A**2 - 4B`` when a more accurate value is known.
    """
    if disc is None:
        disc = A * A - 4.0 * B
    sq = math.sqrt(disc) if disc >= 0 else 1j * math.sqrt(-disc)
    sign = 1.0 if A >= 0 else -1.0
    y1 = (-A - sign * sq) / 2.0
    if y1 == 0:
        # A == 0 and B == 0
        y2 = 0.0
    else:
        y2 = B / y1
    lam = [*_sqrt_pair(y1), *_sqrt_pair(y2)]
    return np.array(lam, dtype=complex)


def _factor(j, n, c, A, B, delta, disc):
    A_f, B_f = float(A), float(B)
    return ModeFactor(
        j=j, rho=mode_root(n, j), c_sum=float(c), A=A_f, B=B_f,
        delta=float(delta), S=-A_f, P=B_f,
        lambdas=biquadratic_roots(A_f, B_f, float(disc)),
    )


def _central_brackets(ex: _Exact, j: int, kronecker: str):
    n = ex.n
    x = ex.inv_r2 - ex.a + ex.mu * ex.inv_r2 * _c_exact(n, j)
    shift = ex.mu * n * ex.inv_r2
    if kronecker == KRONECKER_SPLIT:
        return x + shift * (j == 1), x + shift * (j == n - 1)
    if kronecker == KRONECKER_LITERAL:
        return x + shift * (j == 1), x + shift * (j == 1)
    raise ValueError(f"unknown kronecker placement {kronecker!r}")


def central_brackets(params: RingParams, j: int,
                     kronecker: str = KRONECKER_SPLIT) -> Tuple[Fraction, Fraction]:
    """The two off-diagonal entries of the reduced 2x2 block of mode ``j``.

    ``X = 1/r**2 - a + mu C_j / r**2``; the mode-1 and mode-(n-1) entries
    pick up an extra ``mu n / r**2``. ``kronecker="literal"`` puts the
    mode-1 shift in both entries instead; it exists only to demonstrate
    that the dense-matrix check rejects it.
    """
    _check_mode(params.n, j)
    x1, x2 = _central_brackets(_Exact.of(params), j, kronecker)
    return Fraction(int(x1.numerator), int(x1.denominator)), \
        Fraction(int(x2.numerator), int(x2.denominator))


def _central_factor(ex: _Exact, j: int, kronecker: str) -> ModeFactor:
    x1, x2 = _central_brackets(ex, j, kronecker)
    w4 = ex.w2 * ex.w2
    B = w4 - x1 * x2
    # A**2/4 - B == x1 * x2 exactly
    quarter = x1 * x2
    return _factor(j, ex.n, _c_exact(ex.n, j), 2 * ex.w2, B, quarter, 4 * quarter)


def _free_factor(ex: _Exact, j: int) -> ModeFactor:
    c = _c_exact(ex.n, j)
    x = c * ex.inv_r2 - ex.b
    B = ex.w2 * ex.w2 - x * x
    return _factor(j, ex.n, c, 2 * ex.w2, B, 4 * x * x, 4 * x * x)


def mode_factor_central(params: RingParams, j: int,
                        kronecker: str = KRONECKER_SPLIT) -> ModeFactor:
    """Mode-``j`` factor of the ring with a central mass."""
    if not params.has_central:
        raise ValueError("mode_factor_central needs a central-mass RingParams")
    _check_mode(params.n, j)
    return _central_factor(_Exact.of(params), j, kronecker)


def mode_factor_free(params: RingParams, j: int) -> ModeFactor:
    """Mode-``j`` factor of the ring without a central mass."""
    if params.has_central:
        raise ValueError("mode_factor_free needs a free-ring RingParams")
    _check_mode(params.n, j)
    return _free_factor(_Exact.of(params), j)


def mode_factor(params: RingParams, j: int, kronecker: str = KRONECKER_SPLIT) -> ModeFactor:
    if params.has_central:
        return mode_factor_central(params, j, kronecker)
    return mode_factor_free(params, j)


def mode_factors(params: RingParams, kronecker: str = KRONECKER_SPLIT) -> List[ModeFactor]:
    """All ``n`` mode factors, ``j = 0 .. n-1``."""
    ex = _Exact.of(params)
    if params.has_central:
        return [_central_factor(ex, j, kronecker) for j in range(params.n)]
    return [_free_factor(ex, j) for j in range(params.n)]


def product_formula_central(n: int, mu: float, j: int, r: float = 1.0) -> float:
    """Closed-form root product of mode ``j`` with a central mass.

    Generic modes use ``mu j (n-j) [mu (j**2 - j n + 2(n-1)) + 4]``, modes
    1 and n-1 use ``mu (mu (n-1)**2 - 4)``, both over ``(2 + mu(n-1))**2``
    and times ``omega**4``. For ``n = 2`` the single nontrivial mode is both
    1 and n-1 and its product is ``-3 mu (4 + 5 mu)/(2 + mu)**2 omega**4``.
    """
    _check_mode(n, j)
    w4 = ((1.0 + 0.5 * mu * (n - 1)) / r**2) ** 2
    den = (2.0 + mu * (n - 1)) ** 2
    if j == 0:
        return 0.0
    if n == 2:
        return w4 * (-3.0 * mu * (4.0 + 5.0 * mu)) / den
    if j in (1, n - 1):
        return w4 * mu * (mu * (n - 1) ** 2 - 4.0) / den
    parabola = j * j - j * n + 2 * (n - 1)
    return w4 * mu * j * (n - j) * (mu * parabola + 4.0) / den


def product_formula_free(n: int, j: int, r: float = 1.0) -> float:
    """Closed-form root product of mode ``j`` of the free ring, ``omega**4`` included."""
    _check_mode(n, j)
    w4 = (0.5 * (n - 1) / r**2) ** 2
    return w4 * j * (n - j) * (j * j - j * n + 2 * (n - 1)) / (n - 1) ** 2


def parabola_factor(n: int, j: int) -> int:
    return j * j - j * n + 2 * (n - 1)
