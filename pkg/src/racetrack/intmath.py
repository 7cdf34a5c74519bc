"""Exact integer helpers for square roots and rounded division."""

from math import isqrt


def ceil_sqrt(n: int) -> int:
    """Smallest r >= 0 with r*r >= n (0 for n <= 0)."""
    if n <= 0:
        return 0
    r = isqrt(n)
    return r if r * r == n else r + 1


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def ceil_two_sqrt(n: int) -> int:
    """Smallest t >= 0 with t >= 2*sqrt(n), i.e. t*t >= 4n."""
    return ceil_sqrt(4 * n)
