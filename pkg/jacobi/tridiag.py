"""Tridiagonal linear algebra on Jacobi matrices: spectra, shifted solves and moments."""
import logging
from typing import Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, solve_banded

from jacobi.matrix import JacobiMatrix
from utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)

# cond(A) >= |A| |w| / |rhs|; beyond this the solution carries no digits
_SINGULAR_CONDITION = 1e15


def tridiagonal_eigenvalues(J: JacobiMatrix, j: int) -> np.ndarray:
    """
    Eigenvalues of the leading j×j block, ascending (zeros of p_j).

    Uses LAPACK's root-free QL/QR iteration with implicit shifts (``sterf``).
    """
    if not 1 <= j <= J.n:
        raise DomainError(f"order j={j} outside 1..{J.n}")
    if j == 1:
        return np.array([J.b[0]])
    return eigh_tridiagonal(J.b[:j], J.a[: j - 1], eigvals_only=True, lapack_driver="sterf")


def tridiagonal_solve(J: JacobiMatrix, shift_scale: Tuple[float, float], rhs: np.ndarray) -> np.ndarray:
    """
    Solve (c·J + d·I) w = rhs by banded LU with partial pivoting.

    Args:
        J: Jacobi matrix defining the system.
        shift_scale: The pair (c, d).
        rhs: Right-hand side of length N (or N×k).

    Returns:
        np.ndarray: The solution w.

    Raises:
        SolverError: When the system is singular or numerically singular.
    """
    c, d = shift_scale
    n = J.n
    rhs = np.asarray(rhs, dtype=float)
    bands = np.zeros((3, n))
    bands[1] = c * J.b + d
    if n > 1:
        bands[0, 1:] = c * J.a
        bands[2, :-1] = c * J.a
    try:
        w = solve_banded((1, 1), bands, rhs, check_finite=False)
    except LinAlgError as e:
        raise SolverError(f"tridiagonal system (c={c}, d={d}) is singular: {e}") from e
    if not np.all(np.isfinite(w)):
        raise SolverError(f"tridiagonal system (c={c}, d={d}) produced non-finite values")
    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm > 0:
        matrix_norm = np.max(np.abs(bands).sum(axis=0))
        estimate = matrix_norm * np.linalg.norm(w) / rhs_norm
        if estimate > _SINGULAR_CONDITION:
            raise SolverError(f"tridiagonal system (c={c}, d={d}) is numerically singular", estimate)
    return w


def moments_from_jacobi(J: JacobiMatrix, m_max: int) -> np.ndarray:
    """
    Moments ∫x^m dμ = <e_0, J^m e_0> for m = 0..m_max.

    Exact in exact arithmetic for m <= 2N-1. Only J^{ceil(m/2)} e_0 is formed, and even/odd
    moments come from inner products of those vectors.
    """
    if m_max < 0:
        raise DomainError(f"m_max must be non-negative, got {m_max}")
    vectors = [np.zeros(J.n)]
    vectors[0][0] = 1.0
    for _ in range((m_max + 1) // 2):
        vectors.append(J.matvec(vectors[-1]))
    moments = np.empty(m_max + 1)
    for m in range(m_max + 1):
        lo = m // 2
        moments[m] = float(np.dot(vectors[lo], vectors[m - lo]))
    return moments
