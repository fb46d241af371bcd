"""Jacobi matrices of measures on [0,1] and the Gauss rules derived from them."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from utils.errors import DataError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """
    Truncated three-term recurrence x·p_j = a_{j+1} p_{j+1} + b_j p_j + a_j p_{j-1}.

    Attributes:
        b: Diagonal b_0..b_{N-1}.
        a: Off-diagonal a_1..a_{N-1}; ``a[k]`` holds a_{k+1}.
    """

    b: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=float).reshape(-1)
        a = np.array(self.a, dtype=float).reshape(-1)
        if b.size == 0:
            raise DataError("JacobiMatrix needs at least one diagonal entry")
        if a.size != b.size - 1:
            raise DataError(f"JacobiMatrix with {b.size} diagonal entries needs {b.size - 1} off-diagonal ones, got {a.size}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DataError("JacobiMatrix entries must be finite")
        if np.any(a <= 0):
            first = int(np.argmax(a <= 0)) + 1
            raise DataError(f"JacobiMatrix off-diagonal a_{first} = {a[first - 1]} is not positive")
        b.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return int(self.b.size)

    def a_padded(self) -> np.ndarray:
        """Off-diagonal with the a_0 = 0 convention prepended (index j holds a_j)."""
        return np.concatenate(([0.0], self.a))

    def truncated(self, size: int) -> "JacobiMatrix":
        if not 1 <= size <= self.n:
            raise DomainError(f"cannot truncate a size-{self.n} Jacobi matrix to {size}")
        return JacobiMatrix(self.b[:size], self.a[: size - 1])

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """J·v for a vector (or a stack of column vectors) of length N."""
        out = self.b[:, None] * v if v.ndim == 2 else self.b * v
        if self.n > 1:
            if v.ndim == 2:
                out[:-1] += self.a[:, None] * v[1:]
                out[1:] += self.a[:, None] * v[:-1]
            else:
                out[:-1] += self.a * v[1:]
                out[1:] += self.a * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.b) + np.diag(self.a, 1) + np.diag(self.a, -1)

    @classmethod
    def uniform(cls, n: int) -> "JacobiMatrix":
        """Lebesgue measure on [0,1]: rescaled Legendre recurrence."""
        j = np.arange(1, n, dtype=float)
        return cls(np.full(n, 0.5), j / (2.0 * np.sqrt(4.0 * j * j - 1.0)))

    @classmethod
    def chebyshev(cls, n: int) -> "JacobiMatrix":
        """Arcsine (equilibrium) measure of [0,1]."""
        a = np.full(max(n - 1, 0), 0.25)
        if n > 1:
            a[0] = np.sqrt(2.0) / 4.0
        return cls(np.full(n, 0.5), a)

    @classmethod
    def constant(cls, n: int, a_value: float = 0.25, b_value: float = 0.5) -> "JacobiMatrix":
        return cls(np.full(n, b_value), np.full(max(n - 1, 0), a_value))

    @classmethod
    def delta(cls, position: float) -> "JacobiMatrix":
        return cls(np.array([position]), np.empty(0))


@dataclass(frozen=True, eq=False)
class GaussRule:
    """j-point Gauss rule: ascending nodes and log Christoffel numbers."""

    order: int
    nodes: np.ndarray
    log_weights: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def log_mass(self) -> float:
        return float(logsumexp(self.log_weights))
