"""Root-asymptotic regularity: geometric means Γ_j of a_l against the capacity 1/4."""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from analysis.fitting import power_law_fit
from jacobi.matrix import JacobiMatrix
from utils.errors import DataError, DomainError

logger = logging.getLogger(__name__)

CAPACITY = 0.25


@dataclass(frozen=True, eq=False)
class RegularityReport:
    """
    Γ_j = exp(mean_{l<=j} log a_l) and δ_j = log(1/4) - mean_{l<=j} log a_l, j = 1..j_max.

    ``fit`` is (A, B, residual) of δ_j ≈ A j^-B over the window, or None when δ_j is not
    positive there. ``sigma3`` is j·δ_j.
    """

    j: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    fit: Optional[Tuple[float, float, float]]
    fit_window: Tuple[int, int]
    capacity: float = CAPACITY

    @property
    def sigma3(self) -> np.ndarray:
        return self.j * self.delta


def regularity_report(J: JacobiMatrix, j_max: int) -> RegularityReport:
    if not 1 <= j_max <= J.n - 1:
        raise DomainError(f"j_max={j_max} needs a_1..a_{j_max}, the matrix holds {J.n - 1}")
    a = J.a[:j_max]
    if np.any(a <= 0):
        raise DataError("regularity_report needs positive a_l")
    j = np.arange(1, j_max + 1)
    mean_log = np.cumsum(np.log(a)) / j
    delta = np.log(CAPACITY) - mean_log
    gamma = np.exp(mean_log)

    lo = max(1, j_max // 10)
    window = slice(lo - 1, j_max)
    fit = None
    if j_max - lo >= 1 and np.all(delta[window] > 0):
        fit = power_law_fit(j[window], delta[window])
    else:
        logger.warning(f"regularity_report: δ_j not positive on [{lo}, {j_max}], fit skipped")
    return RegularityReport(j=j, gamma=gamma, delta=delta, fit=fit, fit_window=(lo, j_max))
