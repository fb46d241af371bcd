import numpy as np
import pytest
from scipy.integrate import quad

from analysis.equilibrium import (
    arcsine_cdf,
    chebyshev_sigma_weights,
    chebyshev_zeros,
    sigma_e_cdf,
    sigma_e_cdf_integral,
)
from utils.errors import DomainError


def test_chebyshev_zeros():
    np.testing.assert_allclose(chebyshev_zeros(1), [0.5])
    half = np.sqrt(2.0) / 2.0
    np.testing.assert_allclose(chebyshev_zeros(2), [(1 - half) / 2, (1 + half) / 2], atol=1e-15)
    theta = chebyshev_zeros(17)
    np.testing.assert_allclose(theta + theta[::-1], 1.0, atol=1e-15)
    assert np.all(np.diff(theta) > 0)
    with pytest.raises(DomainError):
        chebyshev_zeros(0)


def test_sigma_weights_closed_form():
    np.testing.assert_allclose(chebyshev_sigma_weights(2), [0.5, 0.5])
    for j in (3, 10, 101):
        assert chebyshev_sigma_weights(j).sum() == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(DomainError):
        chebyshev_sigma_weights(1)


def test_arcsine_cdf():
    assert arcsine_cdf(0.0) == 0.0
    assert arcsine_cdf(1.0) == pytest.approx(1.0)
    assert arcsine_cdf(0.25) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_sigma_e_cdf_fixed_points():
    assert sigma_e_cdf(0.0) == pytest.approx(0.0, abs=1e-16)
    assert sigma_e_cdf(1.0) == pytest.approx(1.0, abs=1e-16)
    assert sigma_e_cdf(0.5) == pytest.approx(0.5, abs=1e-16)
    grid = np.linspace(0.0, 1.0, 10001)
    assert np.all(np.diff(sigma_e_cdf(grid)) >= 0.0)


def test_sigma_e_cdf_is_integral_of_density():
    density = lambda t: 8.0 / np.pi * np.sqrt(t * (1.0 - t))
    for x in (0.1, 0.37, 0.8):
        assert sigma_e_cdf(x) == pytest.approx(quad(density, 0.0, x)[0], abs=1e-12)


def test_antiderivative():
    assert sigma_e_cdf_integral(0.0) == pytest.approx(0.0, abs=1e-16)
    # F_E is symmetric about (1/2, 1/2)
    assert sigma_e_cdf_integral(1.0) == pytest.approx(0.5, abs=1e-15)
    for x in (0.2, 0.5, 0.9):
        assert sigma_e_cdf_integral(x) == pytest.approx(quad(sigma_e_cdf, 0.0, x)[0], abs=1e-12)
