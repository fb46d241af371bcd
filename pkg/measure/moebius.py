"""Möbius and affine maps of the question-mark IFS, symbolic words and Farey intervals.

All arithmetic here is exact (``fractions.Fraction``); floating point enters only when a
caller converts the results.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

from utils.errors import DomainError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


@dataclass(frozen=True)
class MoebiusMap:
    """x ↦ (num_a·x + num_b)/(den_c·x + den_d) with rational coefficients."""

    num_a: Fraction
    num_b: Fraction
    den_c: Fraction
    den_d: Fraction

    def __post_init__(self):
        for name in ("num_a", "num_b", "den_c", "den_d"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.determinant == 0:
            raise DomainError("Möbius map with zero determinant")

    @property
    def determinant(self) -> Fraction:
        return self.num_a * self.den_d - self.num_b * self.den_c

    def __call__(self, x):
        """Apply the map; exact for rationals, float for floats."""
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return (self.num_a * x + self.num_b) / (self.den_c * x + self.den_d)
        a, b, c, d = (float(v) for v in (self.num_a, self.num_b, self.den_c, self.den_d))
        return (a * x + b) / (c * x + d)

    def compose(self, inner: "MoebiusMap") -> "MoebiusMap":
        """Return self ∘ inner (matrix product of the coefficient matrices)."""
        return MoebiusMap(
            self.num_a * inner.num_a + self.num_b * inner.den_c,
            self.num_a * inner.num_b + self.num_b * inner.den_d,
            self.den_c * inner.num_a + self.den_d * inner.den_c,
            self.den_c * inner.num_b + self.den_d * inner.den_d,
        )

    def pole_outside_unit_interval(self) -> bool:
        """True when den_c·x + den_d does not vanish on [0,1]."""
        at0, at1 = self.den_d, self.den_c + self.den_d
        return at0 * at1 > 0


@dataclass(frozen=True)
class AffineMap:
    """y ↦ scale·y + offset."""

    scale: Fraction
    offset: Fraction

    def __call__(self, y):
        if isinstance(y, (int, Fraction)):
            return Fraction(self.scale) * y + Fraction(self.offset)
        return float(self.scale) * y + float(self.offset)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self ∘ inner."""
        scale = Fraction(self.scale)
        return AffineMap(scale * Fraction(inner.scale), scale * Fraction(inner.offset) + Fraction(self.offset))


M1 = MoebiusMap(1, 0, 1, 1)
M2 = MoebiusMap(0, 1, -1, 2)
P1 = AffineMap(Fraction(1, 2), Fraction(0))
P2 = AffineMap(Fraction(1, 2), Fraction(1, 2))
IDENTITY = MoebiusMap(1, 0, 0, 1)

MOEBIUS_MAPS = {1: M1, 2: M2}
AFFINE_MAPS = {1: P1, 2: P2}


@dataclass(frozen=True)
class SymbolicWord:
    """Finite word over {1, 2}; M_σ applies the last letter first."""

    letters: Tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(s) for s in self.letters)
        if any(s not in (1, 2) for s in letters):
            raise DomainError(f"word letters must be 1 or 2, got {letters}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def from_runs(cls, runs: Iterable[Tuple[int, int]]) -> "SymbolicWord":
        """Build a word from (letter, repeat) pairs, e.g. [(1, q-2), (2, 1), (1, k)]."""
        letters = []
        for letter, count in runs:
            letters.extend([letter] * count)
        return cls(tuple(letters))

    @property
    def length(self) -> int:
        return len(self.letters)

    def moebius(self) -> MoebiusMap:
        composite = IDENTITY
        for letter in self.letters:
            composite = composite.compose(MOEBIUS_MAPS[letter])
        return composite

    def affine(self) -> AffineMap:
        """P_σ, the conjugate of M_σ under Q: Q∘M_σ = P_σ∘Q."""
        composite = AffineMap(Fraction(1), Fraction(0))
        for letter in self.letters:
            composite = composite.compose(AFFINE_MAPS[letter])
        return composite


def word_image_interval(word: SymbolicWord) -> Tuple[Tuple[Fraction, Fraction], Fraction]:
    """
    Image of [0,1] under M_σ and its question-mark mass.

    Args:
        word: Non-empty symbolic word.

    Returns:
        tuple: ((left, right), mass) with mass = 2^(-|σ|).
    """
    if word.length == 0:
        raise DomainError("word_image_interval needs a non-empty word")
    composite = word.moebius()
    ends = sorted((composite(Fraction(0)), composite(Fraction(1))))
    return (ends[0], ends[1]), word.affine().scale


def farey_length(q: int, k: int) -> Fraction:
    """l_{q,k} = 1/(q(qk+q-1))."""
    return Fraction(1, q * (q * k + q - 1))


@dataclass(frozen=True)
class FareyInterval:
    q: int
    k: int
    left: Fraction
    right: Fraction
    length_l: Fraction
    mass: Fraction

    def as_floats(self) -> Tuple[float, float]:
        return float(self.left), float(self.right)

    def contains(self, x: float) -> bool:
        return float(self.left) <= x <= float(self.right)


def farey_interval(q: int, k: int) -> FareyInterval:
    """I_{q,k} = [1/q + l_{q,k+1}, 1/q + l_{q,k}], of mass 2^(-q-k)."""
    if q < 2:
        raise DomainError(f"farey_interval needs q >= 2, got {q}")
    if k < 0:
        raise DomainError(f"farey_interval needs k >= 0, got {k}")
    base = Fraction(1, q)
    return FareyInterval(
        q=q,
        k=k,
        left=base + farey_length(q, k + 1),
        right=base + farey_length(q, k),
        length_l=farey_length(q, k),
        mass=Fraction(1, 2 ** (q + k)),
    )
