"""Seeded structural checks on a computed Jacobi matrix, reported as pass/fail flags."""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from jacobi.matrix import JacobiMatrix
from jacobi.tridiag import moments_from_jacobi, tridiagonal_eigenvalues
from quadrature.christoffel import log_christoffel
from quadrature.gauss import gauss_rule

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10
EXACTNESS_TOL = 1e-10
MAX_EXACTNESS_ORDER = 64


@dataclass
class InvariantResult:
    passed: bool
    worst: float
    detail: str = ""


@dataclass
class InvariantSuite:
    seed: int
    results: Dict[str, InvariantResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def as_flags(self) -> Dict[str, bool]:
        return {name: r.passed for name, r in sorted(self.results.items())}


def check_symmetry(J: JacobiMatrix, j: int) -> InvariantResult:
    """A measure symmetric about 1/2 has b_l = 1/2 and zeros ζ_l + ζ_{j+1-l} = 1."""
    zeros = tridiagonal_eigenvalues(J, j)
    worst = max(
        float(np.max(np.abs(J.b[:j] - 0.5))),
        float(np.max(np.abs(zeros + zeros[::-1] - 1.0))),
    )
    return InvariantResult(worst <= SYMMETRY_TOL, worst, f"order {j}")


def check_interlacing(J: JacobiMatrix, j: int) -> InvariantResult:
    """Zeros of p_j strictly separate consecutive zeros of p_{j+1}."""
    inner = tridiagonal_eigenvalues(J, j)
    outer = tridiagonal_eigenvalues(J, j + 1)
    slack = np.minimum(inner - outer[:-1], outer[1:] - inner)
    worst = float(np.min(slack))
    return InvariantResult(worst > 0.0, worst, f"orders {j}, {j + 1}")


def check_gauss_exactness(J: JacobiMatrix, j: int) -> InvariantResult:
    """Σ w_l ζ_l^m = <e_0, J^m e_0> for m <= 2j-1."""
    rule = gauss_rule(J, j)
    exact = moments_from_jacobi(J, 2 * j - 1)
    powers = rule.nodes[None, :] ** np.arange(2 * j)[:, None]
    approx = powers @ rule.weights
    worst = float(np.max(np.abs(approx - exact) / np.abs(exact)))
    return InvariantResult(worst <= EXACTNESS_TOL, worst, f"order {j}")


def check_christoffel_monotone(J: JacobiMatrix, x: np.ndarray, j_max: int) -> InvariantResult:
    """log λ_j(x) is non-increasing in j at every point."""
    values = np.array([log_christoffel(J, x, j) for j in range(1, j_max + 1)])
    steps = np.diff(values, axis=0)
    # relative rounding of the log kernel
    worst = float(np.max(steps / np.maximum(1.0, np.abs(values[1:]))))
    return InvariantResult(worst <= 1e-12, worst, f"{x.size} points up to order {j_max}")


def run_invariant_suite(J: JacobiMatrix, seed: int = 0, j_max: Optional[int] = None) -> InvariantSuite:
    """
    Run every check at orders and points drawn from ``numpy.random.default_rng(seed)``.

    Symmetry is only meaningful for symmetric measures; callers that use another measure
    should read the other flags.
    """
    rng = np.random.default_rng(seed)
    top = J.n - 1 if j_max is None else min(j_max, J.n - 1)
    suite = InvariantSuite(seed=seed)
    if top < 2:
        logger.warning(f"run_invariant_suite: matrix of size {J.n} is too small")
        return suite
    j_sym = int(rng.integers(2, top + 1))
    j_int = int(rng.integers(1, top + 1))
    j_gauss = int(rng.integers(2, min(top, MAX_EXACTNESS_ORDER) + 1))
    points = np.sort(rng.random(8))
    suite.results["symmetry"] = check_symmetry(J, j_sym)
    suite.results["interlacing"] = check_interlacing(J, j_int)
    suite.results["gauss_exactness"] = check_gauss_exactness(J, j_gauss)
    suite.results["christoffel_monotone"] = check_christoffel_monotone(J, points, min(top, 128))
    for name, result in sorted(suite.results.items()):
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"invariant {name}: passed={result.passed} worst={result.worst:.3e} ({result.detail})")
    return suite
