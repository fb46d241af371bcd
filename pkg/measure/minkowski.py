"""Minkowski's question-mark function Q and the graph approximations of its IFS."""
import logging
from fractions import Fraction
from typing import List, Tuple, Union

import config
from measure.moebius import M1, M2, P1, P2
from utils.errors import DomainError, ResourceError

logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction]


def continued_fraction(x: Fraction) -> List[int]:
    """
    Canonical continued fraction x = 1/(n1 + 1/(n2 + ...)) of a rational in (0,1).

    Args:
        x: Rational strictly between 0 and 1.

    Returns:
        list: Digits n_i >= 1, the last one >= 2.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise DomainError(f"continued_fraction needs x in (0,1), got {x}")
    digits = []
    p, q = x.numerator, x.denominator
    while p:
        digit, rest = divmod(q, p)
        digits.append(digit)
        p, q = rest, p
    return digits


def _digits_of_real(x: Fraction, guard_bits: int, digit_cap: int) -> List[int]:
    """Digits of the exact binary value of a double, cut where they stop mattering."""
    digits = []
    p, q = x.numerator, x.denominator
    partial = 0
    first = None
    while p:
        digit, rest = divmod(q, p)
        if digit > digit_cap:
            break
        partial += digit
        if first is None:
            first = partial
        elif partial > first + guard_bits:
            break
        digits.append(digit)
        p, q = rest, p
    return digits


def _q_from_digits(digits: List[int]) -> Fraction:
    if not digits:
        return Fraction(0)
    total = 0
    partials = []
    for digit in digits:
        total += digit
        partials.append(total)
    top = partials[-1]
    numerator = 0
    for idx, n_j in enumerate(partials):
        sign = 1 if idx % 2 == 0 else -1
        numerator += sign * 2 ** (top - n_j)
    # sum of (-1)^(j+1) 2^(1-N_j), scaled by 2^(top-1)
    return Fraction(numerator, 2 ** (top - 1))


def minkowski_q_exact(x: Union[int, Fraction]) -> Fraction:
    """Q(x) as an exact dyadic rational for rational x in [0,1]."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"minkowski_q needs x in [0,1], got {x}")
    if x == 0 or x == 1:
        return x
    return _q_from_digits(continued_fraction(x))


def minkowski_q(x: Real) -> float:
    """
    Evaluate Q(x) = sum (-1)^(j+1) 2^(1-N_j) from the continued fraction of x.

    Rationals (int, Fraction) are evaluated exactly and rounded once. Floats are expanded
    from their exact binary value; the series stops once N_j exceeds N_1 by the guard
    width, or at a digit larger than the configured cap.
    """
    if isinstance(x, (int, Fraction)):
        return float(minkowski_q_exact(x))
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"minkowski_q needs x in [0,1], got {x!r}")
    if x in (0.0, 1.0):
        return x
    digits = _digits_of_real(Fraction(x), config.Q_GUARD_BITS, config.Q_DIGIT_CAP)
    return float(_q_from_digits(digits))


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction))


def measure_of_interval(a: Real, b: Real) -> float:
    """μ([a, b]) = Q(b) - Q(a) for 0 <= a <= b <= 1."""
    if not 0 <= a <= b <= 1:
        raise DomainError(f"measure_of_interval needs 0 <= a <= b <= 1, got ({a}, {b})")
    if _is_exact(a) and _is_exact(b):
        return float(minkowski_q_exact(b) - minkowski_q_exact(a))
    return minkowski_q(b) - minkowski_q(a)


def q_graph_approx(n: int) -> List[Tuple[Fraction, Fraction]]:
    """
    Vertices of Φ^n(K), K the graph of the identity on [0,1].

    Φ maps a point (x, y) to (M_i(x), P_i(y)); every vertex lies on the graph of Q.

    Args:
        n: Generation, 0 <= n <= config.MAX_GRAPH_LEVEL.

    Returns:
        list: 2^n + 1 exact (x, y) pairs sorted by x.
    """
    if n < 0:
        raise DomainError(f"q_graph_approx needs n >= 0, got {n}")
    if n > config.MAX_GRAPH_LEVEL:
        raise ResourceError(
            f"q_graph_approx level {n} exceeds MINK_MAX_GRAPH_LEVEL={config.MAX_GRAPH_LEVEL}"
        )
    points = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))]
    for _ in range(n):
        left = [(M1(x), P1(y)) for x, y in points]
        right = [(M2(x), P2(y)) for x, y in points]
        # M1(1) = M2(0) = 1/2 is shared by both halves
        points = left + right[1:]
    logger.debug(f"q_graph_approx: level {n} with {len(points)} vertices")
    return points
