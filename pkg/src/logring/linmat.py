"""
Dense 4n x 4n linearization about the rotating equilibrium.

The matrix acts on ``(dW_0..dW_{n-1}, dW'_0..dW'_{n-1})`` with
``dW_k = (dw_k, conj dw_k)`` in co-rotating coordinates. Its blocks are
built from direct trigonometric sums, never from the closed-form mode
sums, so that it serves as an independent check on the mode factors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg

from .model import RingParams
from .spectral import KRONECKER_SPLIT, mode_factors, mode_root

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


class EigenvectorError(RuntimeError):
    """No acceptable kernel vector for a candidate eigenvalue."""


@dataclass
class LinearizationMatrix:
    n: int
    entries: np.ndarray
    D: np.ndarray
    N: List[np.ndarray]  # N[k] for k = 0..n-1; N[0] is unused (zeros)
    Omega: np.ndarray

    @property
    def size(self) -> int:
        return 4 * self.n

    def block(self, row: int, col: int) -> np.ndarray:
        """2x2 block ``(row, col)`` of the full matrix, in 2x2 block units."""
        return self.entries[2 * row:2 * row + 2, 2 * col:2 * col + 2]

    def lower_left(self, j: int, k: int) -> np.ndarray:
        return self.block(self.n + j, k)

    def norm(self) -> float:
        """Maximum absolute row sum."""
        return float(np.max(np.sum(np.abs(self.entries), axis=1)))

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


def _blocks(params: RingParams):
    n, r, w = params.n, params.r, params.omega
    k = np.arange(1, n)
    theta = 2.0 * np.pi * k / n
    inv4s2 = 1.0 / (4.0 * np.sin(theta / 2.0) ** 2)
    N = [np.zeros((2, 2), dtype=complex)]
    if params.has_central:
        mu = params.mu
        a = mu / r**2 * float(np.sum(np.exp(1j * theta) * inv4s2).real)
        D = w**2 * np.eye(2) + ((1.0 + mu) / r**2 - a) * SWAP
        for th, c in zip(theta, inv4s2):
            N.append(mu / r**2 * np.array(
                [[0.0, np.exp(-1j * th) + c], [np.exp(1j * th) + c, 0.0]]))
    else:
        b = float(np.sum(np.exp(-1j * theta) * inv4s2).real) / r**2
        D = w**2 * np.eye(2) - b * SWAP
        for c in inv4s2:
            N.append(c / r**2 * SWAP)
    Omega = 2j * w * np.diag([-1.0, 1.0])
    return D.astype(complex), N, Omega.astype(complex)


def assemble(params: RingParams) -> LinearizationMatrix:
    """Dense linearization; lower-left block ``(j, k)`` is ``N[(k - j) % n]``."""
    n = params.n
    D, N, Omega = _blocks(params)
    m = np.zeros((4 * n, 4 * n), dtype=complex)
    m[:2 * n, 2 * n:] = np.eye(2 * n)
    for j in range(n):
        rj = 2 * n + 2 * j
        for k in range(n):
            m[rj:rj + 2, 2 * k:2 * k + 2] = D if k == j else N[(k - j) % n]
        m[rj:rj + 2, 2 * n + 2 * j:2 * n + 2 * j + 2] = Omega
    return LinearizationMatrix(n=n, entries=m, D=D, N=N, Omega=Omega)


def reduced_block(mat: LinearizationMatrix, j: int, lam: complex) -> np.ndarray:
    """``K(lam) = D + sum_k rho**k N_k + lam Omega - lam**2 I`` for mode ``j``."""
    rho = mode_root(mat.n, j)
    K = mat.D.copy()
    for k in range(1, mat.n):
        K = K + rho**k * mat.N[k]
    return K + lam * mat.Omega - lam * lam * np.eye(2)


@dataclass
class ModeEigenpair:
    j: int
    lam: complex
    xi: np.ndarray
    v: np.ndarray
    kernel_residual: float

    def residual(self, mat: LinearizationMatrix) -> float:
        """``||(M - lam I) v|| / ||v||``."""
        r = mat.entries @ self.v - self.lam * self.v
        return float(np.linalg.norm(r) / np.linalg.norm(self.v))


def ansatz_vector(n: int, j: int, lam: complex, xi) -> np.ndarray:
    rho = mode_root(n, j)
    x = np.concatenate([rho**k * np.asarray(xi, dtype=complex) for k in range(n)])
    return np.concatenate([x, lam * x])


def mode_eigenvector(params: RingParams, j: int, lam: complex,
                     mat: Optional[LinearizationMatrix] = None) -> ModeEigenpair:
    """Eigenvector of the dense matrix built from the roots-of-unity ansatz.

    Raises
    ------
    EigenvectorError
        If ``lam`` does not make the reduced 2x2 block singular.
    """
    if mat is None:
        mat = assemble(params)
    lam = complex(lam)
    K = reduced_block(mat, j, lam)
    knorm = float(np.max(np.sum(np.abs(K), axis=1)))
    c1 = np.array([K[0, 1], -K[0, 0]])
    c2 = np.array([K[1, 1], -K[1, 0]])
    xi = c1 if np.linalg.norm(c1) >= np.linalg.norm(c2) else c2
    if np.linalg.norm(xi) < 1e-13 * max(1.0, params.omega**2):
        xi = np.array([1.0, 0.0], dtype=complex)
    xi = xi / np.linalg.norm(xi)
    kres = float(np.linalg.norm(K @ xi))
    if kres > 1e-8 * max(knorm, 1e-300):
        raise EigenvectorError(
            f"mode {j}: lam={lam:.6g} leaves |K xi| = {kres:.3e} (|K| = {knorm:.3e})")
    return ModeEigenpair(j=j, lam=lam, xi=xi, v=ansatz_vector(mat.n, j, lam, xi),
                         kernel_residual=kres)


@dataclass
class DetResult:
    det: complex
    scaled: float


def det_at(mat: LinearizationMatrix, lam: complex) -> DetResult:
    """``det(M - lam I)`` by LU with partial pivoting.

    ``scaled`` is ``|det|`` divided by the product of the row maxima of
    ``M - lam I``, a conditioning-aware smallness measure. A zero pivot
    gives a zero determinant.
    """
    a = mat.entries - complex(lam) * np.eye(mat.size)
    rowmax = np.max(np.abs(a), axis=1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    d = np.diag(lu)
    if np.any(d == 0) or np.any(rowmax == 0):
        return DetResult(0j, 0.0)
    swaps = int(np.sum(piv != np.arange(piv.size)))
    logabs = float(np.sum(np.log(np.abs(d))))
    phase = np.prod(d / np.abs(d)) * (-1.0) ** swaps
    scaled = math.exp(logabs - float(np.sum(np.log(rowmax))))
    with np.errstate(over="ignore"):
        det = complex(phase * math.exp(min(logabs, 700.0)))
    return DetResult(det, scaled)


def characteristic_product(params: RingParams, lam: complex,
                           kronecker: str = KRONECKER_SPLIT) -> complex:
    """Product over modes of ``lam**4 + A lam**2 + B``."""
    lam = complex(lam)
    out = 1.0 + 0j
    for f in mode_factors(params, kronecker):
        out *= lam**4 + f.A * lam**2 + f.B
    return out


def conjugate_partner(pair: ModeEigenpair, n: int) -> tuple:
    """Mode, eigenvalue and spinor of the conjugacy partner of ``pair``.

    Swapping and conjugating the two components of an eigenvector of mode
    ``j`` gives an eigenvector of mode ``n - j`` at ``conj(lam)``; together
    they span a real solution.
    """
    xi = np.array([np.conj(pair.xi[1]), np.conj(pair.xi[0])])
    return (-pair.j) % n, np.conj(pair.lam), xi


@dataclass
class SpectrumCheckReport:
    n: int
    norm: float
    max_residual: float = 0.0
    max_scaled_det: float = 0.0
    trace_error: float = 0.0
    conjugacy_violations: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def full_spectrum_check(params: RingParams, kronecker: str = KRONECKER_SPLIT,
                        residual_tol: float = 1e-9, det_tol: float = 1e-8,
                        trace_tol: float = 1e-8) -> SpectrumCheckReport:
    """Check every predicted eigenvalue against the dense matrix.

    Residuals are reported relative to ``||M||`` (max row sum).
    """
    mat = assemble(params)
    mnorm = mat.norm()
    rep = SpectrumCheckReport(n=params.n, norm=mnorm)
    total = 0j
    for f in mode_factors(params, kronecker):
        for lam in f.lambdas:
            total += lam
            try:
                pair = mode_eigenvector(params, f.j, lam, mat)
            except EigenvectorError as exc:
                rep.failures.append(f"eigenvector residual: {exc}")
                rep.max_residual = max(rep.max_residual, float("inf"))
                continue
            res = pair.residual(mat) / mnorm
            rep.max_residual = max(rep.max_residual, res)
            if res > residual_tol:
                rep.failures.append(
                    f"eigenvector residual: mode {f.j} lam={lam:.6g} residual {res:.3e}")
            sd = det_at(mat, lam).scaled
            rep.max_scaled_det = max(rep.max_scaled_det, sd)
            if sd > det_tol:
                rep.failures.append(
                    f"determinant: mode {f.j} lam={lam:.6g} scaled |det| {sd:.3e}")
            pj, plam, pxi = conjugate_partner(pair, params.n)
            pv = ansatz_vector(params.n, pj, plam, pxi)
            pres = np.linalg.norm(mat.entries @ pv - plam * pv) / np.linalg.norm(pv)
            if pres > residual_tol * mnorm:
                rep.conjugacy_violations += 1
    rep.trace_error = abs(total - mat.trace()) / mnorm
    if rep.trace_error > trace_tol:
        rep.failures.append(f"trace: sum of eigenvalues differs by {rep.trace_error:.3e}")
    return rep
