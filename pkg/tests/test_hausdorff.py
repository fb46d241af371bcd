import pytest

from quadrature.hausdorff import BRACKET_SLACK, REFERENCE_DIMENSION, hausdorff_bounds
from utils.errors import DomainError

# order: (upper, lower)
REFERENCE_BRACKETS = {
    2: (0.874761611261160, 0.874552879123086),
    3: (0.874716939422290, 0.874714034545017),
    4: (0.874716314143510, 0.874716274367535),
    5: (0.874716305274063, 0.874716304510136),
    6: (0.874716305110859, 0.874716305099384),
    7: (0.874716305108267, 0.874716305108003),
    8: (0.874716305108213, 0.874716305108207),
}


@pytest.mark.parametrize("j", sorted(REFERENCE_BRACKETS))
def test_brackets(minkowski_jacobi, j):
    bounds = hausdorff_bounds(minkowski_jacobi, j)
    upper, lower = REFERENCE_BRACKETS[j]
    assert bounds.dim_upper == pytest.approx(upper, abs=BRACKET_SLACK)
    assert bounds.dim_lower == pytest.approx(lower, abs=BRACKET_SLACK)
    assert bounds.contains(REFERENCE_DIMENSION)


def test_gap_shrinks(minkowski_jacobi):
    gaps = [hausdorff_bounds(minkowski_jacobi, j).gap for j in range(2, 9)]
    assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))


def test_linear_factor_routes_agree(minkowski_jacobi):
    atoms = hausdorff_bounds(minkowski_jacobi, 6, linear_factor_method="atoms")
    cholesky = hausdorff_bounds(minkowski_jacobi, 6, linear_factor_method="cholesky")
    assert atoms.second_formula == pytest.approx(cholesky.second_formula, rel=1e-12)


def test_argument_checks(minkowski_jacobi):
    with pytest.raises(DomainError):
        hausdorff_bounds(minkowski_jacobi, 1)
    with pytest.raises(DomainError):
        hausdorff_bounds(minkowski_jacobi.truncated(5), 4)
