import math

import numpy as np
import pytest

from jacobi.matrix import JacobiMatrix
from jacobi.tridiag import moments_from_jacobi
from quadrature.gauss import gauss_rule, golub_welsch_rule, integrate
from utils.errors import EvaluationError


def test_lebesgue_rule_matches_golub_welsch():
    J = JacobiMatrix.uniform(20)
    rule = gauss_rule(J, 20)
    reference = golub_welsch_rule(J, 20)
    np.testing.assert_allclose(rule.nodes, reference.nodes, atol=1e-14)
    np.testing.assert_allclose(rule.weights, reference.weights, rtol=1e-12)
    assert rule.log_mass == pytest.approx(0.0, abs=1e-13)


def test_one_point_rules():
    J = JacobiMatrix.uniform(3)
    assert gauss_rule(J, 1).nodes[0] == 0.5
    assert golub_welsch_rule(J, 1).weights[0] == 1.0


@pytest.mark.parametrize("j", [8, 32, 64])
def test_exactness_on_minkowski(minkowski_jacobi, j):
    rule = gauss_rule(minkowski_jacobi, j)
    exact = moments_from_jacobi(minkowski_jacobi.truncated(j), 2 * j - 1)
    powers = rule.nodes[None, :] ** np.arange(2 * j)[:, None]
    np.testing.assert_allclose(powers @ rule.weights, exact, rtol=1e-10)


def test_integrate_positive_and_mixed():
    rule = gauss_rule(JacobiMatrix.uniform(6), 6)
    assert integrate(rule, lambda x: x * x) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert integrate(rule, lambda x: x - 0.5) == pytest.approx(0.0, abs=1e-15)
    wide = gauss_rule(JacobiMatrix.uniform(12), 12)
    assert integrate(wide, np.log1p) == pytest.approx(2.0 * np.log(2.0) - 1.0, rel=1e-13)


def test_integrate_scalar_only_integrand():
    rule = gauss_rule(JacobiMatrix.uniform(12), 12)
    expected = 2.0 * math.log(2.0) - 1.0
    assert integrate(rule, math.log1p) == pytest.approx(expected, rel=1e-13)
    assert integrate(rule, lambda x: math.log(1.0 + x)) == pytest.approx(expected, rel=1e-13)
    assert integrate(rule, lambda x: x if x < 0.5 else 1.0 - x) == pytest.approx(0.25, abs=1e-2)


def test_integrate_rejects_non_finite():
    rule = gauss_rule(JacobiMatrix.uniform(4), 4)
    with pytest.raises(EvaluationError):
        integrate(rule, lambda x: np.full_like(x, np.nan))
