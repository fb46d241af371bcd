"""Lanczos tridiagonalization and the Jacobi-matrix constructions built on it."""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

import config
from jacobi.matrix import JacobiMatrix
from measure.discrete import DiscreteMeasure
from utils.errors import DataError, DomainError

logger = logging.getLogger(__name__)

Operator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LanczosResult:
    jacobi: JacobiMatrix
    breakdown: bool
    steps: int


def lanczos_tridiagonalize(
    apply: Operator,
    start: np.ndarray,
    steps: int,
    breakdown_tol: float = None,
) -> LanczosResult:
    """
    Jacobi matrix of the spectral measure of a self-adjoint operator relative to ``start``.

    Every new residual is orthogonalized twice against all previous Lanczos vectors
    (classical Gram–Schmidt applied twice), so the recurrence keeps full orthogonality.

    Args:
        apply: Self-adjoint operator on vectors of dimension D.
        start: Start vector; normalized internally.
        steps: Number K <= D of recurrence coefficients b_0..b_{K-1} to produce.
        breakdown_tol: Relative residual below which the Krylov space is exhausted.

    Returns:
        LanczosResult: The (possibly shorter) Jacobi matrix and whether breakdown occurred.
    """
    tol = config.BREAKDOWN_TOL if breakdown_tol is None else breakdown_tol
    start = np.asarray(start, dtype=float)
    dim = start.shape[0]
    if not 1 <= steps <= dim:
        raise DomainError(f"Lanczos needs 1 <= K <= D, got K={steps}, D={dim}")
    norm = np.linalg.norm(start)
    if norm == 0:
        raise DomainError("Lanczos start vector is zero")

    basis = np.zeros((dim, steps))
    q = start / norm
    diag = []
    off = []
    breakdown = False
    for k in range(steps):
        basis[:, k] = q
        w = apply(q)
        image_norm = np.linalg.norm(w)
        alpha = float(np.dot(q, w))
        diag.append(alpha)
        if k == steps - 1:
            break
        active = basis[:, : k + 1]
        for _ in range(2):
            w = w - active @ (active.T @ w)
        beta = float(np.linalg.norm(w))
        if beta <= tol * max(image_norm, 1.0):
            breakdown = True
            logger.debug(f"Lanczos breakdown after {k + 1} of {steps} steps (residual {beta:.3e})")
            break
        off.append(beta)
        q = w / beta
    return LanczosResult(JacobiMatrix(np.array(diag), np.array(off)), breakdown, len(diag))


def jacobi_from_atoms(m: DiscreteMeasure, K: int) -> JacobiMatrix:
    """
    First K recurrence coefficients of a discrete measure (normalized to unit mass).

    The diagonal operator of atom positions is tridiagonalized from the start vector of
    square-root weights. Atoms whose normalized weight underflows are dropped and counted.
    """
    if K > m.size:
        raise DomainError(f"K={K} exceeds the {m.size} atoms of the measure")
    normalized = m.log_weights - m.total_mass_log
    amplitudes = np.exp(0.5 * normalized)
    keep = amplitudes * amplitudes > np.finfo(float).tiny
    dropped = int(np.count_nonzero(~keep))
    if dropped:
        logger.warning(f"jacobi_from_atoms: dropped {dropped} atoms with underflowing weight")
    if np.count_nonzero(keep) < K:
        raise DomainError(f"only {np.count_nonzero(keep)} atoms with representable weight, K={K}")
    positions = m.x[keep]
    start = amplitudes[keep]
    result = lanczos_tridiagonalize(lambda v: positions * v, start, K)
    if result.breakdown:
        logger.warning(f"jacobi_from_atoms: breakdown at {result.steps} < {K} coefficients")
    return result.jacobi


def jacobi_linear_factor(J: JacobiMatrix, c: float = 0.0, method: str = "atoms") -> JacobiMatrix:
    """
    Jacobi matrix of dρ = (x - c)dμ / ∫(x - c)dμ, of size N-1.

    Args:
        J: Jacobi matrix of μ (size N >= 2).
        c: Shift at or below the smallest support point.
        method: ``"atoms"`` reweights the N-point Gauss rule of μ and re-tridiagonalizes;
            ``"cholesky"`` factors J - cI = L·Lᵀ and returns the leading block of Lᵀ·L + cI.

    Raises:
        DomainError: When c lies inside the support (negative reweighted mass or pivot).
    """
    if J.n < 2:
        raise DomainError("jacobi_linear_factor needs a Jacobi matrix of size >= 2")
    if method == "atoms":
        return _linear_factor_atoms(J, c)
    if method == "cholesky":
        return _linear_factor_cholesky(J, c)
    raise DomainError(f"unknown linear-factor method '{method}'")


def _linear_factor_atoms(J: JacobiMatrix, c: float) -> JacobiMatrix:
    # imported here: quadrature builds on this module
    from quadrature.gauss import gauss_rule

    rule = gauss_rule(J, J.n)
    shifted = rule.nodes - c
    scale = max(1.0, float(np.max(np.abs(rule.nodes))))
    if np.any(shifted < -1e-13 * scale):
        raise DomainError(f"shift c={c} lies inside the support (node {rule.nodes[0]:.6g})")
    positive = shifted > 1e-13 * scale
    if np.count_nonzero(positive) < J.n - 1:
        raise DomainError(f"shift c={c} leaves fewer than {J.n - 1} atoms with positive weight")
    reweighted = DiscreteMeasure(
        tuple(rule.nodes[positive]),
        rule.log_weights[positive] + np.log(shifted[positive]),
    )
    return jacobi_from_atoms(reweighted, J.n - 1)


def _linear_factor_cholesky(J: JacobiMatrix, c: float) -> JacobiMatrix:
    n = J.n
    diag = np.empty(n)
    sub = np.empty(n - 1)
    scale = max(1.0, float(np.max(np.abs(J.b))))
    pivot = J.b[0] - c
    for k in range(n):
        if k > 0:
            sub[k - 1] = J.a[k - 1] / diag[k - 1]
            pivot = J.b[k] - c - sub[k - 1] ** 2
        if pivot < -1e-13 * scale:
            raise DomainError(f"shift c={c} lies inside the support (pivot {k} = {pivot:.3e})")
        pivot = max(pivot, 0.0)
        if pivot <= 1e-13 * scale and k < n - 1:
            raise DataError(f"zero pivot at row {k}; the measure has only {k + 1} support points")
        diag[k] = np.sqrt(pivot)
    b = diag[:-1] ** 2 + sub ** 2 + c
    a = sub[:-1] * diag[1:-1]
    return JacobiMatrix(b, a)
