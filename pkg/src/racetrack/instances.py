"""Instance generators and the closed-form costs for the slope family.

The slope family places city i at (i*delta, -i). A trajectory that never
moves left pays at least ``ntu_lower_bound``; one that first backs up to
gather speed pays ``tu_cost``. ``crossover_n0`` is the first n at which
backing up wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .errors import DomainError, InvalidInputError
from .intmath import ceil_sqrt
from .multipoint import Instance

_MASK64 = (1 << 64) - 1

# max of crossover_n0(k, d) / (k*d)**2 over k <= 4, 2 <= d <= 20 is 101/25 (k=1, d=5)
N0_QUADRATIC_CONSTANT = 5


class SplitMix64:
    """SplitMix64: 64-bit state, golden-ratio increment, two xor-shift-multiply rounds."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        """Uniform integer in [0, m) by rejection, so there is no modulo bias."""
        if m <= 0:
            raise InvalidInputError("range must be positive")
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            r = self.next()
            if r < limit:
                return r % m


def gen_random(n: int, L: int, d: int = 2, seed: int = 0) -> Instance:
    """n cities drawn uniformly from {0..L}^d, coordinates in order."""
    if n < 1 or L < 1 or d < 1:
        raise InvalidInputError("need n >= 1, L >= 1 and d >= 1")
    rng = SplitMix64(seed)
    return Instance(tuple(tuple(rng.below(L + 1) for _ in range(d)) for _ in range(n)))


@dataclass(frozen=True)
class SlopeFamily:
    n: int
    delta: int
    k: int = 1

    def __post_init__(self):
        if self.n < 0 or self.k < 1:
            raise InvalidInputError("need n >= 0 and k >= 1")
        if self.delta < 7:
            raise DomainError("the slope family needs delta >= 7")

    def instance(self) -> Instance:
        return gen_slope(self.n, self.delta)

    @property
    def n0(self) -> int:
        return crossover_n0(self.k, self.delta)

    def tu_cost(self) -> Fraction:
        return tu_cost(self.n, self.k, self.delta)

    def ntu_lower_bound(self) -> Fraction:
        return ntu_lower_bound(self.n, self.delta)


def gen_slope(n: int, delta: int) -> Instance:
    if n < 0 or delta < 1:
        raise InvalidInputError("need n >= 0 and delta >= 1")
    return Instance(tuple((i * delta, -i) for i in range(n + 1)))


def ntu_lower_bound(n: int, delta: int) -> Fraction:
    if delta < 2:
        raise DomainError("delta must be at least 2")
    return Fraction(delta, delta - 1) * n + delta - 2


def _ramp_term(k: int, delta: int) -> int:
    m = k * delta
    return ceil_sqrt(m * (m - 1) // 2)


def tu_cost(n: int, k: int, delta: int) -> Fraction:
    if k < 1 or delta < 1:
        raise DomainError("need k >= 1 and delta >= 1")
    return Fraction(n, k) + 2 * k * delta + 4 * _ramp_term(k, delta) + 2


def crossover_n0(k: int, delta: int) -> int:
    """Smallest n with tu_cost(n, k, delta) < ntu_lower_bound(n, delta)."""
    if k < 1 or delta < 2 or Fraction(delta, delta - 1) <= Fraction(1, k):
        raise DomainError(f"no crossover for k={k}, delta={delta}")
    # n * (delta/(delta-1) - 1/k) > rhs, and the slope equals (k*delta-delta+1) / (k*(delta-1))
    rhs = 4 * _ramp_term(k, delta) + 4 + delta * (2 * k - 1)
    return floor(Fraction(rhs * k * (delta - 1), k * delta - delta + 1)) + 1
