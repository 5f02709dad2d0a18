from functools import reduce
from math import gcd
from typing import Iterable


def ceil_div(numerator: int, denominator: int) -> int:
    """
    Integer ceiling division for non-negative numerators.

    Args:
        numerator: Dividend in ticks
        denominator: Positive divisor

    Returns:
        The smallest integer q with q * denominator >= numerator
    """
    if denominator <= 0:
        raise ValueError(f"denominator must be positive, got {denominator}")
    return -(-numerator // denominator)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def hyperperiod(periods: Iterable[int]) -> int:
    """Least common multiple of the given periods (1 for an empty collection)."""
    return reduce(lcm, periods, 1)
