"""Atomic measures with log-domain weights and the Perron–Frobenius operator on them."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from measure.moebius import M1, M2
from utils.errors import DataError, DomainError

logger = logging.getLogger(__name__)

Position = Union[float, Fraction]


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """
    Finite sum of weighted point masses on [0,1].

    Positions may be exact rationals (Farey-tree iterates) or floats (quadrature nodes).
    Weights are always stored as logarithms so that measures with weights far below the
    double-precision range keep their relative information.
    """

    positions: Tuple[Position, ...]
    log_weights: np.ndarray

    def __post_init__(self):
        positions = tuple(self.positions)
        log_weights = np.asarray(self.log_weights, dtype=float)
        if len(positions) != log_weights.shape[0]:
            raise DataError(
                f"{len(positions)} positions but {log_weights.shape[0]} log-weights"
            )
        if not np.all(np.isfinite(log_weights)):
            raise DataError("DiscreteMeasure log-weights must be finite")
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise DataError("DiscreteMeasure positions must be strictly increasing")
        log_weights.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "log_weights", log_weights)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[Position, float]]) -> "DiscreteMeasure":
        """Build from (position, weight) pairs with positive weights, in any order."""
        merged: Dict[Position, float] = {}
        for position, weight in pairs:
            if weight <= 0:
                raise DomainError(f"atom at {position} has non-positive weight {weight}")
            merged[position] = np.logaddexp(merged.get(position, -np.inf), np.log(weight))
        ordered = sorted(merged)
        return cls(tuple(ordered), np.array([merged[p] for p in ordered]))

    @classmethod
    def delta(cls, position: Position) -> "DiscreteMeasure":
        return cls((position,), np.zeros(1))

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def x(self) -> np.ndarray:
        """Positions as floats."""
        return np.array([float(p) for p in self.positions])

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def total_mass_log(self) -> float:
        return float(logsumexp(self.log_weights))

    def normalized(self) -> "DiscreteMeasure":
        return DiscreteMeasure(self.positions, self.log_weights - self.total_mass_log)

    def cumulative(self) -> np.ndarray:
        """Distribution function at each atom, the atom itself included."""
        return np.cumsum(np.exp(self.log_weights - self.total_mass_log))


def perron_frobenius_step(
    m: DiscreteMeasure, probabilities: Tuple[float, float] = (0.5, 0.5)
) -> DiscreteMeasure:
    """
    T*m = ρ1·(m∘M1⁻¹) + ρ2·(m∘M2⁻¹).

    Args:
        m: Input measure, positions exact or float.
        probabilities: (ρ1, ρ2), positive and summing to one.

    Returns:
        DiscreteMeasure: Atoms at M_i(x_l) with log-weights log ρ_i + log w_l; images that
        coincide as exact rationals are merged.
    """
    rho1, rho2 = probabilities
    if rho1 <= 0 or rho2 <= 0 or abs(rho1 + rho2 - 1.0) > 1e-14:
        raise DomainError(f"probabilities must be positive and sum to 1, got {probabilities}")
    merged: Dict[Position, float] = {}
    for moebius, log_rho in ((M1, np.log(rho1)), (M2, np.log(rho2))):
        for position, log_w in zip(m.positions, m.log_weights):
            image = moebius(position)
            merged[image] = np.logaddexp(merged.get(image, -np.inf), log_rho + log_w)
    ordered = sorted(merged)
    return DiscreteMeasure(tuple(ordered), np.array([merged[p] for p in ordered]))


def farey_level_measure(n: int, probabilities: Tuple[float, float] = (0.5, 0.5)) -> DiscreteMeasure:
    """n-fold Perron–Frobenius iterate of δ_{1/2}: atoms on the level-n Farey nodes."""
    if n < 0:
        raise DomainError(f"farey_level_measure needs n >= 0, got {n}")
    m = DiscreteMeasure.delta(Fraction(1, 2))
    for _ in range(n):
        m = perron_frobenius_step(m, probabilities)
    return m
