"""Closed forms for the equilibrium (arcsine) measure of [0,1] and for σ_E."""
import numpy as np

from utils.errors import DomainError


def chebyshev_zeros(j: int) -> np.ndarray:
    """θ^j_l = (1 - cos(π(2l-1)/(2j)))/2, l = 1..j, increasing."""
    if j < 1:
        raise DomainError(f"chebyshev_zeros needs j >= 1, got {j}")
    l = np.arange(1, j + 1)
    return 0.5 * (1.0 - np.cos(np.pi * (2 * l - 1) / (2.0 * j)))


def chebyshev_sigma_weights(j: int) -> np.ndarray:
    """S^j_l(ν_E) = 2 sin²((2l-1)π/(2j))/j; valid for j >= 2."""
    if j < 2:
        raise DomainError(f"the closed form holds for j >= 2, got {j}")
    l = np.arange(1, j + 1)
    return 2.0 * np.sin((2 * l - 1) * np.pi / (2.0 * j)) ** 2 / j


def arcsine_cdf(x):
    """ν_E([0, x]) = (2/π)·arcsin(√x)."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return 2.0 / np.pi * np.arcsin(np.sqrt(x))


def sigma_e_cdf(x):
    """
    Distribution function of σ_E, density (8/π)·√(x(1-x)) on [0,1].

    F_E(x) = (2/π)(2x-1)√(x-x²) + (1/π)·arcsin(2x-1) + 1/2.
    """
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    u = 2.0 * x - 1.0
    root = np.sqrt(np.maximum(x - x * x, 0.0))
    return 2.0 / np.pi * u * root + np.arcsin(u) / np.pi + 0.5


def sigma_e_cdf_integral(x):
    """∫_0^x F_E(t) dt in closed form."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    u = 2.0 * x - 1.0
    s = np.sqrt(np.maximum(1.0 - u * u, 0.0))
    h = (-(s ** 3) / 3.0 + u * np.arcsin(u) + s) / np.pi + 0.5 * u
    # h(-1) = 0, so no constant is needed
    return 0.5 * h
