"""
Nevai-class diagnostics: the measures σ_j, their distance to σ_E and the divergent series.

σ_j(μ) puts mass S^j_l = w^j_l·p_{j-1}²(ζ^j_l) at each Gauss node. For the equilibrium
measure these masses have the closed form 2 sin²((2l-1)π/(2j))/j, and σ_j(ν_E) tends to
σ_E, with density (8/π)√(x(1-x)).
"""
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import bisect

from analysis.equilibrium import chebyshev_sigma_weights, sigma_e_cdf, sigma_e_cdf_integral
from jacobi.matrix import JacobiMatrix
from jacobi.tridiag import tridiagonal_eigenvalues
from measure.discrete import DiscreteMeasure
from quadrature.christoffel import christoffel_sweep
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NevaiDiagnostics:
    """
    Per-order comparisons with ν_E and the series over the recurrence coefficients.

    Attributes:
        orders: The orders j, ascending.
        s_max: s_j = max_l |S^j_l(ν_E) - S^j_l(μ)|.
        sigma0: Σ⁰_j = Σ_l |S^j_l(ν_E) - S^j_l(μ)|.
        hutchinson: d(σ_j(μ), σ_E).
        mass_defect: |Σ_l S^j_l(μ) - 1|.
        index: l = 1..L for the series below.
        sigma1: Σ_{l'=2..l} |a_l' - a_{l'-1}|.
        sigma2: Σ_{l'<=l} |1 - 16 a_l'²|.
        sigma3: -Σ_{l'<=l} (log a_l' + log 4).
        envelope: u(l) = max{|a_l' - 1/4| : l <= l' <= L}.
    """

    orders: np.ndarray
    s_max: np.ndarray
    sigma0: np.ndarray
    hutchinson: np.ndarray
    mass_defect: np.ndarray
    index: np.ndarray
    sigma1: np.ndarray
    sigma2: np.ndarray
    sigma3: np.ndarray
    envelope: np.ndarray


def sigma_weights(J: JacobiMatrix, j: int) -> DiscreteMeasure:
    """
    σ_j(μ) with masses computed as the ratio p_{j-1}²/K_j inside the renormalized sweep.

    The ratio never forms the Gauss weight or the polynomial value on its own, so both
    can be far outside the double range.
    """
    if j < 2:
        raise DomainError(f"sigma_weights needs j >= 2, got {j}")
    nodes = tridiagonal_eigenvalues(J, j)
    state = christoffel_sweep(J, nodes, j)
    log_share = 2.0 * np.log(np.abs(state.v[0])) - np.log(state.kernel_partial)
    return DiscreteMeasure(tuple(float(x) for x in nodes), log_share)


def distribution_l1_distance(
    m: DiscreteMeasure, cdf: Callable, antiderivative: Callable
) -> float:
    """
    ∫_0^1 |F_m(x) - F(x)| dx for an atomic m and a continuous non-decreasing F.

    F_m is constant between atoms, so each segment contributes |c·(t-s) - (G(t) - G(s))|
    with G the antiderivative of F, split at the single point where F crosses c.
    """
    x = m.x
    if m.size and (x[0] < 0.0 or x[-1] > 1.0):
        raise DomainError("distribution_l1_distance needs atoms inside [0,1]")
    edges = np.concatenate(([0.0], x, [1.0]))
    levels = np.concatenate(([0.0], m.cumulative()))
    levels[-1] = 1.0

    def piece(c: float, s: float, t: float) -> float:
        return abs(c * (t - s) - (float(antiderivative(t)) - float(antiderivative(s))))

    total = 0.0
    for c, s, t in zip(levels, edges[:-1], edges[1:]):
        if t <= s:
            continue
        gap_s = c - float(cdf(s))
        gap_t = c - float(cdf(t))
        if gap_s * gap_t >= 0.0:
            total += piece(c, s, t)
            continue
        r = bisect(lambda v: c - float(cdf(v)), s, t, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        total += piece(c, s, r) + piece(c, r, t)
    return total


def hutchinson_distance_to_sigmaE(m: DiscreteMeasure) -> float:
    """Hutchinson distance between a probability measure on [0,1] and σ_E."""
    return distribution_l1_distance(m, sigma_e_cdf, sigma_e_cdf_integral)


def nevai_diagnostics(J: JacobiMatrix, j_list: Sequence[int]) -> NevaiDiagnostics:
    orders = np.array(sorted(set(int(j) for j in j_list)), dtype=int)
    if orders.size == 0:
        raise DomainError("nevai_diagnostics needs at least one order")
    if orders[0] < 2 or orders[-1] > J.n:
        raise DomainError(f"orders must lie in 2..{J.n}, got {orders[0]}..{orders[-1]}")

    s_max = np.empty(orders.size)
    sigma0 = np.empty(orders.size)
    hutchinson = np.empty(orders.size)
    mass_defect = np.empty(orders.size)
    for i, j in enumerate(orders):
        sigma = sigma_weights(J, int(j))
        diff = np.abs(chebyshev_sigma_weights(int(j)) - sigma.weights)
        s_max[i] = np.max(diff)
        sigma0[i] = np.sum(diff)
        mass_defect[i] = abs(np.sum(sigma.weights) - 1.0)
        hutchinson[i] = hutchinson_distance_to_sigmaE(sigma)
        logger.debug(f"nevai_diagnostics: j={j} s={s_max[i]:.3e} d={hutchinson[i]:.3e}")

    a = J.a[: min(int(orders[-1]), J.n - 1)]
    index = np.arange(1, a.size + 1)
    sigma1 = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(a)))))
    sigma2 = np.cumsum(np.abs(1.0 - 16.0 * a * a))
    sigma3 = -np.cumsum(np.log(a) + np.log(4.0))
    envelope = np.maximum.accumulate(np.abs(a - 0.25)[::-1])[::-1]
    return NevaiDiagnostics(
        orders=orders,
        s_max=s_max,
        sigma0=sigma0,
        hutchinson=hutchinson,
        mass_defect=mass_defect,
        index=index,
        sigma1=sigma1,
        sigma2=sigma2,
        sigma3=sigma3,
        envelope=envelope,
    )
