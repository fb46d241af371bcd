"""Zeros of p_j against Chebyshev zeros, normalized angles and their discrepancy."""
import logging
from dataclasses import dataclass

import numpy as np

from analysis.equilibrium import chebyshev_zeros
from jacobi.matrix import JacobiMatrix
from jacobi.tridiag import tridiagonal_eigenvalues
from utils.errors import DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ZeroComparisonReport:
    order: int
    zeros: np.ndarray
    chebyshev: np.ndarray
    angles: np.ndarray
    uniform_angles: np.ndarray

    @property
    def zero_differences(self) -> np.ndarray:
        return self.chebyshev - self.zeros

    @property
    def angle_differences(self) -> np.ndarray:
        return self.uniform_angles - self.angles

    @property
    def U(self) -> float:
        return float(np.max(np.abs(self.zero_differences)))

    @property
    def V(self) -> float:
        return float(np.max(np.abs(self.angle_differences)))


def normalized_angles(zeros: np.ndarray) -> np.ndarray:
    """ψ = arccos(1 - 2ζ)/π, mapping [0,1] onto [0,1] increasingly."""
    return np.arccos(np.clip(1.0 - 2.0 * np.asarray(zeros, dtype=float), -1.0, 1.0)) / np.pi


def zero_comparison(J: JacobiMatrix, j: int) -> ZeroComparisonReport:
    zeros = tridiagonal_eigenvalues(J, j)
    l = np.arange(1, j + 1)
    return ZeroComparisonReport(
        order=j,
        zeros=zeros,
        chebyshev=chebyshev_zeros(j),
        angles=normalized_angles(zeros),
        uniform_angles=(2 * l - 1) / (2.0 * j),
    )


def discrepancy(psi) -> float:
    """
    Discrepancy between the point masses 1/j at ψ_1 <= ... <= ψ_j and Lebesgue measure.

    The interior term max_{l,k,i=±1} |ψ_l - ψ_k - (l-k+i)/j| is reduced to O(j) through
    d_l = ψ_l - l/j: it equals (max d - min d) + 1/j.
    """
    psi = np.asarray(psi, dtype=float)
    j = psi.size
    if j == 0:
        raise DataError("discrepancy of an empty point set")
    if np.any(np.diff(psi) < 0):
        raise DataError("discrepancy needs non-decreasing angles")
    if psi[0] < 0.0 or psi[-1] > 1.0:
        raise DataError("discrepancy needs angles in [0,1]")
    l = np.arange(1, j + 1)
    d1 = max(np.max(np.abs(psi - l / j)), np.max(np.abs(psi - (l - 1) / j)))
    d2 = max(
        np.max(np.abs(1.0 - psi - (j - l) / j)),
        np.max(np.abs(1.0 - psi - (j - l + 1) / j)),
    )
    d = psi - l / j
    spread = np.max(d) - np.min(d)
    d3 = max(abs(spread - 1.0 / j), abs(spread + 1.0 / j), abs(-spread - 1.0 / j), abs(-spread + 1.0 / j))
    return float(max(d1, d2, d3))


def discrepancy_bruteforce(psi) -> float:
    """O(j²) evaluation of the same three terms; reference for small j."""
    psi = np.asarray(psi, dtype=float)
    j = psi.size
    l = np.arange(1, j + 1)
    d1 = max(np.max(np.abs(psi - (l - i) / j)) for i in (0, 1))
    d2 = max(np.max(np.abs(1.0 - psi - (j - l + i) / j)) for i in (0, 1))
    diff = psi[:, None] - psi[None, :]
    steps = (l[:, None] - l[None, :]).astype(float)
    d3 = max(np.max(np.abs(diff - (steps + i) / j)) for i in (-1, 1))
    return float(max(d1, d2, d3))
