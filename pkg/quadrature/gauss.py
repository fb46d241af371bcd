"""Gauss rules from eigenvalue nodes and Shohat log-weights, and integration against them."""
import logging
import math
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import logsumexp

from jacobi.matrix import GaussRule, JacobiMatrix
from jacobi.tridiag import tridiagonal_eigenvalues
from quadrature.christoffel import log_christoffel
from utils.errors import DomainError, EvaluationError

logger = logging.getLogger(__name__)

# tolerance on log of total mass before a rule is reported as off-normalization
_MASS_TOL = 1e-10


def gauss_rule(J: JacobiMatrix, j: int) -> GaussRule:
    """
    j-point Gauss rule of the measure encoded by J.

    Nodes are the eigenvalues of the leading j×j block; weights are Christoffel numbers
    w_l = 1/K_j(ζ_l, ζ_l), evaluated in log form so that weights far below the double
    range are still resolved.
    """
    nodes = tridiagonal_eigenvalues(J, j)
    log_weights = np.atleast_1d(log_christoffel(J, nodes, j))
    rule = GaussRule(order=j, nodes=nodes, log_weights=log_weights)
    if abs(rule.log_mass) > _MASS_TOL:
        logger.warning(f"gauss_rule: order {j} has log total mass {rule.log_mass:.3e}")
    return rule


def golub_welsch_rule(J: JacobiMatrix, j: int) -> GaussRule:
    """
    Gauss rule with weights taken as squared first eigenvector components.

    Comparison path only: components below the rounding level of the eigensolver come
    out as noise, so tiny weights are lost. ``gauss_rule`` is the production route.
    """
    if not 1 <= j <= J.n:
        raise DomainError(f"order j={j} outside 1..{J.n}")
    if j == 1:
        return GaussRule(order=1, nodes=np.array([J.b[0]]), log_weights=np.zeros(1))
    nodes, vectors = eigh_tridiagonal(J.b[:j], J.a[: j - 1])
    with np.errstate(divide="ignore"):
        log_weights = 2.0 * np.log(np.abs(vectors[0]))
    return GaussRule(order=j, nodes=nodes, log_weights=log_weights)


def integrate(rule: GaussRule, f: Callable) -> float:
    """
    Σ w_l f(ζ_l) over a Gauss rule.

    Positive integrands are summed as exp(logsumexp(log w + log f)); mixed-sign ones with
    a compensated sum.

    Raises:
        EvaluationError: When f is non-finite at a node.
    """
    try:
        values = np.asarray(f(rule.nodes), dtype=float)
    except (TypeError, ValueError):
        # scalar-only integrand
        values = None
    if values is None or values.shape != rule.nodes.shape:
        values = np.vectorize(f, otypes=[float])(rule.nodes)
    if not np.all(np.isfinite(values)):
        bad = rule.nodes[~np.isfinite(values)]
        raise EvaluationError(f"integrand is not finite at nodes {bad[:5]}")
    if np.all(values > 0):
        return float(np.exp(logsumexp(rule.log_weights + np.log(values))))
    return math.fsum(rule.weights * values)
