"""
Christoffel functions λ_j(x) = 1/K_j(x,x) over an extreme dynamic range.

The orthonormal polynomials are advanced with the two-term transfer matrix

    [p_{l+1}]   [(x - b_l)/a_{l+1}   -a_l/a_{l+1}] [p_l    ]
    [p_l    ] = [        1                 0     ] [p_{l-1}]

and the state is rescaled by its max-norm V whenever the running kernel
K = sum p_l^2 exceeds a threshold; log V is accumulated in W so that
log λ_j(x) = -(log K + 2W). Evaluation is vectorized over x: every point follows its
own renormalization schedule and results do not depend on the batch they are in.
"""
import logging
from dataclasses import dataclass

import numpy as np

import config
from jacobi.matrix import JacobiMatrix
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RenormalizedPolyState:
    """
    Transfer-matrix state after a sweep to order j, one entry per evaluation point.

    Attributes:
        v: Shape (2, P): rescaled (p_{j-1}(x), p_{j-2}(x)).
        log_scale: W(x), accumulated log of renormalization factors.
        kernel_partial: Rescaled K_j(x,x); the true value is kernel_partial·exp(2W).
        renormalizations: Number of rescalings per point.
    """

    v: np.ndarray
    log_scale: np.ndarray
    kernel_partial: np.ndarray
    renormalizations: np.ndarray

    @property
    def log_kernel(self) -> np.ndarray:
        return np.log(self.kernel_partial) + 2.0 * self.log_scale

    @property
    def log_christoffel(self) -> np.ndarray:
        return -self.log_kernel

    @property
    def last_share(self) -> np.ndarray:
        """p_{j-1}(x)^2 / K_j(x,x), free of any scale."""
        return self.v[0] ** 2 / self.kernel_partial


def christoffel_sweep(J: JacobiMatrix, x, j: int, threshold: float = None) -> RenormalizedPolyState:
    """
    Run the renormalized transfer recurrence for p_0..p_{j-1} at every point of ``x``.

    Args:
        J: Jacobi matrix of a probability measure (p_0 = 1).
        x: Scalar or array of evaluation points.
        j: Order, 1 <= j <= N.
        threshold: Kernel value that triggers renormalization.

    Returns:
        RenormalizedPolyState: Final state for each point.
    """
    if not 1 <= j <= J.n:
        raise DomainError(f"order j={j} outside 1..{J.n}")
    limit = config.RENORM_THRESHOLD if threshold is None else threshold
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p_cur = np.ones_like(x)
    p_prev = np.zeros_like(x)
    kernel = np.ones_like(x)
    log_scale = np.zeros_like(x)
    count = np.zeros(x.shape, dtype=int)
    a_pad = J.a_padded()
    for l in range(j - 1):
        p_next = ((x - J.b[l]) * p_cur - a_pad[l] * p_prev) / a_pad[l + 1]
        p_prev, p_cur = p_cur, p_next
        kernel = kernel + p_cur * p_cur
        over = kernel > limit
        if np.any(over):
            # the kernel bound keeps K below the threshold after a decaying stretch
            scale = np.maximum(
                np.maximum(np.abs(p_cur[over]), np.abs(p_prev[over])),
                np.sqrt(kernel[over] / limit),
            )
            p_cur[over] /= scale
            p_prev[over] /= scale
            kernel[over] /= scale * scale
            log_scale[over] += np.log(scale)
            count[over] += 1
    return RenormalizedPolyState(np.vstack((p_cur, p_prev)), log_scale, kernel, count)


def log_christoffel(J: JacobiMatrix, x, j: int, threshold: float = None):
    """
    log λ_j(x) = -log K_j(x,x) with K_j(x,x) = sum_{l<j} p_l(x)^2.

    Returns a float for scalar ``x`` and an array otherwise.
    """
    state = christoffel_sweep(J, x, j, threshold)
    values = state.log_christoffel
    if np.ndim(x) == 0:
        return float(values[0])
    return values
