from fractions import Fraction

import numpy as np
import pytest

from jacobi.lanczos import jacobi_from_atoms
from jacobi.matrix import JacobiMatrix
from jacobi.tridiag import moments_from_jacobi
from measure.discrete import farey_level_measure
from measure.moebius import M1, M2, MoebiusMap
from quadrature.gauss import gauss_rule
from tests.conftest import REFERENCE_A
from utils.errors import DomainError
from workflow.fixpoint import (
    FixpointConfig,
    converged_rank,
    default_buffer,
    default_max_iters,
    error_statistics,
    fixpoint_solve,
    jacobi_average,
    moebius_pushforward,
    t_map,
)


def test_converged_rank():
    assert converged_rank(np.array([1e-14, 1e-14, 1e-3]), 1e-12) == 2
    assert converged_rank(np.array([1e-3, 1e-14]), 1e-12) == 0
    assert converged_rank(np.zeros(5), 1e-12) == 5


def test_config_defaults():
    cfg = FixpointConfig(n_target=64)
    assert cfg.buffer == default_buffer(64) == 32
    assert cfg.working_size == 96
    assert cfg.max_iters == default_max_iters(64)
    with pytest.raises(DomainError):
        FixpointConfig(n_target=0)
    with pytest.raises(DomainError):
        FixpointConfig(n_target=8, probabilities=(0.3, 0.3))
    with pytest.raises(DomainError):
        FixpointConfig(n_target=8, stat_window=1)


@pytest.mark.parametrize("moebius", [M1, M2])
def test_pushforward_moments(moebius):
    J = JacobiMatrix.uniform(6)
    out = moebius_pushforward(J, moebius, 6)
    rule = gauss_rule(J, 6)
    images = np.array([moebius(float(x)) for x in rule.nodes])
    expected = [float(np.sum(rule.weights * images ** m)) for m in range(12)]
    np.testing.assert_allclose(moments_from_jacobi(out, 11), expected, rtol=1e-10)


def test_pushforward_rejects_pole_on_interval():
    with pytest.raises(DomainError):
        moebius_pushforward(JacobiMatrix.uniform(4), MoebiusMap(1, 0, -2, 1), 3)
    with pytest.raises(DomainError):
        moebius_pushforward(JacobiMatrix.uniform(4), M1, 5)


def test_average_with_itself():
    J = JacobiMatrix.chebyshev(10)
    out = jacobi_average(J, J, (0.3, 0.7), 10)
    np.testing.assert_allclose(out.b, J.b, atol=1e-13)
    np.testing.assert_allclose(out.a, J.a, atol=1e-13)


def test_average_of_two_deltas():
    out = jacobi_average(JacobiMatrix.delta(0.2), JacobiMatrix.delta(0.6), (0.5, 0.5), 2)
    assert out.b[0] == pytest.approx(0.4)
    assert out.a[0] == pytest.approx(0.2)


def test_t_map_grows_from_a_point_mass():
    cfg = FixpointConfig(n_target=8, buffer=8)
    J = t_map(JacobiMatrix.delta(0.5), cfg)
    assert J.n == 2
    assert J.b[0] == pytest.approx(0.5, abs=1e-15)
    assert J.a[0] == pytest.approx(1.0 / 6.0, abs=1e-15)


def test_threaded_pushforwards_match_sequential():
    J = JacobiMatrix.uniform(24)
    sequential = t_map(J, FixpointConfig(n_target=16, buffer=16, parallel=False))
    threaded = t_map(J, FixpointConfig(n_target=16, buffer=16, parallel=True))
    np.testing.assert_array_equal(threaded.a, sequential.a)
    np.testing.assert_array_equal(threaded.b, sequential.b)


@pytest.mark.parametrize("levels", [3, 6, 9, 12])
def test_operator_route_matches_farey_atoms(levels):
    cfg = FixpointConfig(n_target=32, buffer=32)
    J = JacobiMatrix.delta(float(Fraction(1, 2)))
    for _ in range(levels):
        J = t_map(J, cfg)
    assert J.n == min(2 ** levels, cfg.working_size)
    n = min(J.n, 32)
    reference = jacobi_from_atoms(farey_level_measure(levels), n)
    np.testing.assert_allclose(J.a[: n - 1], reference.a[: n - 1], atol=1e-10)
    np.testing.assert_allclose(J.b[:n], reference.b[:n], atol=1e-10)


def test_reference_coefficients(minkowski_run):
    J, report, _ = minkowski_run
    assert report.converged
    assert report.spot_check_failures == 0
    for j, value in REFERENCE_A.items():
        assert J.a[j - 1] == pytest.approx(value, abs=1e-12)
    np.testing.assert_allclose(J.b[:65], 0.5, atol=1e-12)


def test_report_traces(minkowski_run):
    _, report, cfg = minkowski_run
    assert report.iterations == len(report.deltas)
    assert report.converged_rank[-1] >= cfg.n_target
    trace = report.delta_trace(1)
    assert trace.size == report.iterations
    assert trace[-1] < trace[0]


def test_report_error_spread(minkowski_run):
    _, report, cfg = minkowski_run
    assert cfg.stat_window >= 2
    assert report.error_std.shape[0] >= cfg.n_target
    assert np.all(report.error_std[: cfg.n_target] < 1e-11)


def test_partial_run_is_reported():
    cfg = FixpointConfig(n_target=16, max_iters=2)
    _, report = fixpoint_solve(cfg, JacobiMatrix.uniform(cfg.working_size))
    assert not report.converged
    assert report.iterations == 2
    assert report.error_std is None


def test_initial_matrix_too_small():
    cfg = FixpointConfig(n_target=16)
    with pytest.raises(DomainError):
        fixpoint_solve(cfg, JacobiMatrix.uniform(cfg.working_size - 1))


def test_error_statistics(minkowski_run):
    J, _, cfg = minkowski_run
    spread = error_statistics(J, cfg, 4)
    assert spread.shape[0] >= cfg.n_target
    assert np.all(spread[:cfg.n_target] < 1e-11)
    with pytest.raises(DomainError):
        error_statistics(J, cfg, 1)
