"""
Gaussian weights near Farey points: empirical averages against the asymptotic formula.

Near the Farey point 1/q, at distance y to its right, the logarithm of the mean Gauss
weight of order j behaves like Λ_j(q; y) = Λ1 + Λ2 + Λ3 + Λ4 with

    Λ1 = ½·log[(1/q + y) - (1/q + y)²] + log 2
    Λ2 = (2 - q - 1/q)·log 2 + log(log 2)
    Λ3 = -log 2/(q²y) - 2·log(qy)
    Λ4 = -log j

and -log of that mean weight over I_{q,k} is bracketed by explicit bounds that use
h± = (1 + qy)/(1 ∓ q²y) and H± = log[h±/q·(1 - h±/q)].
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

import config
from analysis.equilibrium import arcsine_cdf
from jacobi.matrix import GaussRule, JacobiMatrix
from measure.minkowski import measure_of_interval
from measure.moebius import FareyInterval, farey_interval, farey_length
from quadrature.gauss import gauss_rule
from utils.errors import DomainError

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class AverageWeight:
    """Weights of the nodes inside an interval: mean of logs and log of the mean."""

    mean_log_weight: float
    log_mean_weight: float
    log_total_weight: float
    count: int

    @property
    def empty(self) -> bool:
        return self.count == 0


def avg_log_weight(rule: GaussRule, interval: Tuple[float, float]) -> AverageWeight:
    """
    Average the Gauss weights of the nodes in a closed interval.

    Args:
        rule: Gauss rule.
        interval: (lo, hi) inside [0,1].

    Returns:
        AverageWeight: NaN averages and count 0 when no node falls in the interval.
    """
    lo, hi = (float(v) for v in interval)
    if not 0.0 <= lo <= hi <= 1.0:
        raise DomainError(f"interval ({lo}, {hi}) is not inside [0,1]")
    inside = (rule.nodes >= lo) & (rule.nodes <= hi)
    count = int(np.count_nonzero(inside))
    if count == 0:
        return AverageWeight(math.nan, math.nan, -math.inf, 0)
    selected = rule.log_weights[inside]
    total = float(logsumexp(selected))
    return AverageWeight(float(np.mean(selected)), total - math.log(count), total, count)


def weight_ratio_residual(rule: GaussRule, interval: Tuple[float, float]) -> float:
    """
    log(j·w_I) - log(μ(I)/ν(I)), with w_I the arithmetic mean weight in I.

    Tends to zero as j grows for intervals of positive μ-mass; NaN for empty intervals.
    """
    average = avg_log_weight(rule, interval)
    if average.empty:
        return math.nan
    lo, hi = interval
    mu = measure_of_interval(lo, hi)
    nu = float(arcsine_cdf(float(hi)) - arcsine_cdf(float(lo)))
    return average.log_mean_weight + math.log(rule.order) - math.log(mu / nu)


@dataclass(frozen=True)
class AsymptoticDecomposition:
    q: int
    y: float
    j: int
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    h_plus: float
    h_minus: Optional[float]
    H_plus: float
    H_minus: Optional[float]
    bound_lower: float
    bound_upper: Optional[float]

    @property
    def total(self) -> float:
        return self.lambda1 + self.lambda2 + self.lambda3 + self.lambda4


def _H(h: float, q: int) -> float:
    s = h / q
    arg = s * (1.0 - s)
    return math.log(arg) if arg > 0 else math.nan


def lambda_asymptotic(q: int, y: float, j: int) -> AsymptoticDecomposition:
    """
    The four contributions to Λ_j(q; y) and the bounds on -log w_{I_{q,k}}.

    The upper bound is None when q²y >= 1 or when H- is undefined there.
    """
    if q < 2:
        raise DomainError(f"lambda_asymptotic needs q >= 2, got {q}")
    if not 0.0 < y < 0.5:
        raise DomainError(f"lambda_asymptotic needs y in (0, 1/2), got {y}")
    if j < 1:
        raise DomainError(f"lambda_asymptotic needs j >= 1, got {j}")
    t = 1.0 / q + y
    q2y = q * q * y
    lambda1 = 0.5 * math.log(t - t * t) + LOG2
    lambda2 = (2.0 - q - 1.0 / q) * LOG2 + math.log(LOG2)
    lambda3 = -LOG2 / q2y - 2.0 * math.log(q * y)
    lambda4 = -math.log(j)

    h_plus = (1.0 + q * y) / (1.0 + q2y)
    H_plus = _H(h_plus, q)
    bound_lower = (
        LOG2 * (1.0 / q2y + 1.0 / q + q - 3.0)
        + math.log(j)
        - 0.5 * H_plus
        + 2.0 * math.log(q * y)
        - math.log(1.0 + q2y)
    )
    h_minus = H_minus = bound_upper = None
    if q2y < 1.0:
        h_minus = (1.0 + q * y) / (1.0 - q2y)
        H_minus = _H(h_minus, q)
        if math.isfinite(H_minus):
            bound_upper = (
                LOG2 * (1.0 / q2y + 1.0 / q + q - 2.0)
                + math.log(j)
                - 0.5 * H_minus
                + 2.0 * math.log(q * y)
                - math.log(1.0 - q2y)
            )
    return AsymptoticDecomposition(
        q=q, y=y, j=j,
        lambda1=lambda1, lambda2=lambda2, lambda3=lambda3, lambda4=lambda4,
        h_plus=h_plus, h_minus=h_minus, H_plus=H_plus, H_minus=H_minus,
        bound_lower=bound_lower, bound_upper=bound_upper,
    )


@dataclass(frozen=True)
class CuspRow:
    """One Farey interval of a cusp validation table; ``observed`` is -log w_I."""

    interval: FareyInterval
    y: float
    count: int
    observed: float
    mean_neg_log_weight: float
    decomposition: AsymptoticDecomposition
    slack: float

    @property
    def empty(self) -> bool:
        return self.count == 0

    @property
    def within_lower(self) -> bool:
        return not self.empty and self.observed >= self.decomposition.bound_lower - self.slack

    @property
    def within_upper(self) -> Optional[bool]:
        upper = self.decomposition.bound_upper
        if self.empty or upper is None:
            return None
        return self.observed <= upper + self.slack

    @property
    def relative_deviation(self) -> float:
        if self.empty:
            return math.nan
        return abs((-self.decomposition.total - self.observed) / self.observed)


def cusp_validation(
    J: JacobiMatrix, j: int, q: int, k_range, slack: float = None, rule: GaussRule = None
) -> List[CuspRow]:
    """
    Compare mean Gauss weights over I_{q,k} with the asymptotic formula and its bounds.

    The distance y is the midpoint of (l_{q,k+1}, l_{q,k}). Empty intervals are kept in
    the table with count 0 and logged.
    """
    slack = config.CUSP_SLACK if slack is None else slack
    rule = gauss_rule(J, j) if rule is None else rule
    rows = []
    for k in k_range:
        interval = farey_interval(q, k)
        y = float((interval.length_l + farey_length(q, k + 1)) / 2)
        average = avg_log_weight(rule, interval.as_floats())
        if average.empty:
            logger.warning(f"cusp_validation: I_({q},{k}) holds no node at order {j}")
        rows.append(
            CuspRow(
                interval=interval,
                y=y,
                count=average.count,
                observed=-average.log_mean_weight,
                mean_neg_log_weight=-average.mean_log_weight,
                decomposition=lambda_asymptotic(q, y, j),
                slack=slack,
            )
        )
    return rows
