from analysis.invariants import (
    check_gauss_exactness,
    check_interlacing,
    check_symmetry,
    run_invariant_suite,
)
from jacobi.matrix import JacobiMatrix


def test_suite_passes_on_minkowski(minkowski_jacobi):
    suite = run_invariant_suite(minkowski_jacobi, seed=0)
    assert suite.passed
    assert set(suite.as_flags()) == {"symmetry", "interlacing", "gauss_exactness", "christoffel_monotone"}


def test_suite_is_seeded(minkowski_jacobi):
    first = run_invariant_suite(minkowski_jacobi, seed=3)
    second = run_invariant_suite(minkowski_jacobi, seed=3)
    assert {k: v.worst for k, v in first.results.items()} == {k: v.worst for k, v in second.results.items()}


def test_symmetry_detects_shifted_measure():
    J = JacobiMatrix.constant(20, 0.25, 0.3)
    assert not check_symmetry(J, 10).passed
    assert check_interlacing(J, 10).passed
    assert check_gauss_exactness(J, 10).passed
    assert not run_invariant_suite(J, seed=1).passed


def test_reference_measures_pass():
    for J in (JacobiMatrix.uniform(40), JacobiMatrix.chebyshev(40)):
        assert run_invariant_suite(J, seed=5).passed


def test_tiny_matrix_yields_empty_suite():
    suite = run_invariant_suite(JacobiMatrix.uniform(2))
    assert suite.results == {}
    assert suite.passed
