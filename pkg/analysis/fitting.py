import logging
from typing import Tuple

import numpy as np

from utils.errors import DataError

logger = logging.getLogger(__name__)


def power_law_fit(xs, ys) -> Tuple[float, float, float]:
    """
    Least-squares fit of log y = log A - B log x.

    Args:
        xs: Positive abscissae, at least two distinct values.
        ys: Positive ordinates.

    Returns:
        tuple: (A, B, residual) with residual the RMS misfit in log space.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise DataError(f"power_law_fit: {xs.size} abscissae but {ys.size} ordinates")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DataError("power_law_fit needs strictly positive data")
    if np.unique(xs).size < 2:
        raise DataError("power_law_fit needs at least two distinct abscissae")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = float(np.sqrt(np.mean((ly - (intercept + slope * lx)) ** 2)))
    return float(np.exp(intercept)), float(-slope), residual
