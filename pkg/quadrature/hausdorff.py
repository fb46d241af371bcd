"""
Rigorous Gauss brackets for the Hausdorff dimension of the question-mark measure.

dim = log 2 / (2 I) with I = ∫ log(1+x) dμ(x). The first bracket integrates log(1+x)
with the Gauss rule of μ; the second integrates log(1+x)/x with the Gauss rule of the
normalized measure x·dμ/m_1 and multiplies back by m_1 = ∫ x dμ. The derivatives of the
two integrands have opposite fixed signs, so the two quadratures err on opposite sides.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from jacobi.lanczos import jacobi_linear_factor
from jacobi.matrix import JacobiMatrix
from quadrature.gauss import gauss_rule, integrate
from utils.errors import DomainError

logger = logging.getLogger(__name__)

# High-order reference value of the dimension
REFERENCE_DIMENSION = 0.874716305108211
# Rounding allowance of a bracket evaluated in double precision
BRACKET_SLACK = 5e-14


@dataclass(frozen=True)
class HausdorffBounds:
    order: int
    dim_upper: float
    dim_lower: float
    first_formula: float
    second_formula: float

    @property
    def gap(self) -> float:
        return self.dim_upper - self.dim_lower

    def contains(self, value: float = REFERENCE_DIMENSION, slack: float = BRACKET_SLACK) -> bool:
        return self.dim_lower - slack <= value <= self.dim_upper + slack


def _log1p_over_x(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 1.0, np.log1p(x) / safe)


def hausdorff_bounds(J_mu: JacobiMatrix, j: int, linear_factor_method: str = "atoms") -> HausdorffBounds:
    """
    Dimension bracket of order j.

    Args:
        J_mu: Jacobi matrix of μ, size >= j+2.
        j: Quadrature order, >= 2.
        linear_factor_method: Route used for the Jacobi matrix of x·dμ.

    Returns:
        HausdorffBounds: Both candidates sorted into lower and upper.
    """
    if j < 2:
        raise DomainError(f"hausdorff_bounds needs j >= 2, got {j}")
    if J_mu.n < j + 2:
        raise DomainError(f"hausdorff_bounds at order {j} needs a Jacobi matrix of size {j + 2}, got {J_mu.n}")
    J = J_mu.truncated(j + 2)
    first = integrate(gauss_rule(J, j), np.log1p)

    m1 = float(J.b[0])
    J_rho = jacobi_linear_factor(J, 0.0, method=linear_factor_method)
    second = m1 * integrate(gauss_rule(J_rho, j), _log1p_over_x)

    candidates = sorted((math.log(2.0) / (2.0 * first), math.log(2.0) / (2.0 * second)))
    bounds = HausdorffBounds(
        order=j,
        dim_lower=candidates[0],
        dim_upper=candidates[1],
        first_formula=first,
        second_formula=second,
    )
    logger.debug(f"hausdorff_bounds: order {j} bracket [{bounds.dim_lower:.15f}, {bounds.dim_upper:.15f}]")
    return bounds
