"""Feasible trajectory lengths between two configurations.

In one dimension the set of lengths is at most two intervals, the last
unbounded. Arbitrary instances are translated and reflected into a
canonical form (start at 0, target ahead, both speeds non-negative),
possibly after peeling off a forced braking prefix or acceleration
suffix. In d dimensions the lengths are the intersection of the
per-dimension sets, since each coordinate moves independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, InvalidInputError
from .intervals import MultiInterval, intersect_all
from .intmath import ceil_div, ceil_sqrt, ceil_two_sqrt
from .kinematics import ACCEL, DECEL, Configuration


def braking_distance(s: int) -> int:
    """Distance covered while braking from speed s to a stop."""
    s = abs(s)
    return s * (s - 1) // 2


def accel_distance(s: int) -> int:
    """Distance covered while accelerating from rest to speed s."""
    s = abs(s)
    return s * (s + 1) // 2


def _check_t(s: int, s2: int, t: int) -> None:
    if t < abs(s2 - s):
        raise DomainError(f"t={t} is below the minimum {abs(s2 - s)} steps for speeds {s}->{s2}")


def _alpha4(s: int, s2: int) -> int:
    # four times alpha = (s2+s+1)(s2-s)/2
    return 2 * (s2 + s + 1) * (s2 - s)


def delta_min(s: int, s_prime: int, t: int) -> int:
    """Least distance coverable in exactly t steps from speed s to s_prime."""
    _check_t(s, s_prime, t)
    num = (3 * s - t + s_prime) * (t - s_prime + s) + _alpha4(s, s_prime)
    return ceil_div(num, 4)


def delta_max(s: int, s_prime: int, t: int) -> int:
    """Greatest distance coverable in exactly t steps from speed s to s_prime."""
    _check_t(s, s_prime, t)
    num = (3 * s_prime + t + s) * (t - s_prime + s) + _alpha4(s, s_prime)
    return num // 4


@dataclass(frozen=True)
class FeasibilityCurves:
    """Coefficients of the distance curves for a canonical instance."""

    s: int
    s_prime: int
    delta: int

    @property
    def alpha(self) -> Fraction:
        return Fraction(_alpha4(self.s, self.s_prime), 4)

    @property
    def disc_min(self) -> int:
        s, s2 = self.s, self.s_prime
        return 2 * s2 * s2 + 2 * s * s + 2 * s2 - 2 * s - 4 * self.delta

    @property
    def disc_max(self) -> int:
        s, s2 = self.s, self.s_prime
        return 2 * s2 * s2 + 2 * s * s - 2 * s2 + 2 * s + 4 * self.delta

    @property
    def t_min(self) -> int:
        return abs(self.s_prime - self.s)

    def lo(self, t: int) -> int:
        return delta_min(self.s, self.s_prime, t)

    def hi(self, t: int) -> int:
        return delta_max(self.s, self.s_prime, t)

    def admits(self, t: int) -> bool:
        return t >= self.t_min and self.lo(t) <= self.delta <= self.hi(t)


def _case4_raw(s: int, s2: int, delta: int) -> tuple[int, int, int]:
    """Feasible lengths as (a, b, tail) meaning [a, b] U [tail, inf).

    ``a > b`` signals that only the tail is present.
    """
    cv = FeasibilityCurves(s, s2, delta)
    tmin = cv.t_min
    peak = s + s2  # delta_min attains its maximum here

    # t1: first length whose maximum distance reaches delta
    t1 = max(tmin, ceil_sqrt(cv.disc_max) - peak)
    while t1 > tmin and cv.hi(t1 - 1) >= delta:
        t1 -= 1
    while cv.hi(t1) < delta:
        t1 += 1

    if cv.disc_min <= 0:  # delta >= delta_min(peak): every t >= t1 works
        return 1, 0, t1

    root = ceil_sqrt(cv.disc_min)
    # t3: first length past the peak whose minimum distance drops back to delta
    t3 = max(tmin, peak + root)
    while cv.lo(t3) > delta:
        t3 += 1
    while t3 - 1 >= max(tmin, peak) and cv.lo(t3 - 1) <= delta:
        t3 -= 1
    t3 = max(t3, t1)

    # t2: last length before the peak whose minimum distance is still <= delta
    t2 = peak - root
    while t2 >= tmin and cv.lo(t2) > delta:
        t2 -= 1
    while t2 + 1 < peak and t2 + 1 >= tmin and cv.lo(t2 + 1) <= delta:
        t2 += 1
    if t2 >= t1:
        return t1, t2, t3
    return 1, 0, t3


def _to_multi(raw: tuple[int, int, int]) -> MultiInterval:
    a, b, tail = raw
    return MultiInterval(((a, b),) if a <= b else (), tail)


def case4_intervals(s: int, s_prime: int, delta: int) -> MultiInterval:
    """Feasible lengths from (0, s) to (delta, s_prime) with all three >= 0."""
    if s < 0 or s_prime < 0 or delta < 0:
        raise DomainError(f"canonical instance needs non-negative s, s', delta; got {s}, {s_prime}, {delta}")
    return _to_multi(_case4_raw(s, s_prime, delta))


@dataclass(frozen=True)
class CaseTag:
    """How an instance was brought into canonical form.

    ``offset`` is the translation applied first, ``reflected`` whether all
    coordinates were then negated. ``prefix`` and ``suffix`` are the forced
    monotone segments (action, steps) in the reflected frame, and the core
    instance runs from (0, core[0]) to (core[2], core[1]); when
    ``core_reflected`` is set the core lives in a further mirrored frame.
    """

    tag: int
    offset: int
    reflected: bool
    prefix: tuple[int, int] = (0, 0)
    suffix: tuple[int, int] = (0, 0)
    core: tuple[int, int, int] = (0, 0, 0)
    core_reflected: bool = False
    turn_points: tuple[int, ...] = field(default=())

    @property
    def shift(self) -> int:
        return self.prefix[1] + self.suffix[1]


def reduce(c: Configuration, c_prime: Configuration) -> CaseTag:
    """Classify a 1D instance and reduce it to a canonical core."""
    if c.d != 1 or c_prime.d != 1:
        raise InvalidInputError("reduce works on one-dimensional configurations")
    x, s = c.p[0], c.v[0]
    x2, s2 = c_prime.p[0], c_prime.v[0]
    delta = x2 - x
    reflected = delta < 0 or (delta == 0 and s <= 0 and s2 <= 0)
    if reflected:
        delta, s, s2 = -delta, -s, -s2
    if s == 0 and s2 == 0:
        return CaseTag(0, x, reflected, core=(0, 0, delta))
    if s >= 0 and s2 >= 0:
        return CaseTag(4, x, reflected, core=(s, s2, delta))
    if s <= 0 and s2 <= 0:
        # brake to a stop, shuttle between two rest points, then reverse
        p1 = -braking_distance(s)
        p2 = delta + accel_distance(s2)
        return CaseTag(1, x, reflected, (ACCEL, -s), (DECEL, -s2), (0, 0, p2 - p1), turn_points=(p1, p2))
    if s < 0 < s2:
        p1 = -braking_distance(s)
        p2 = delta - accel_distance(s2)
        if p1 <= p2:
            return CaseTag(2, x, reflected, prefix=(ACCEL, -s), core=(0, s2, delta - p1), turn_points=(p1, p2))
        return CaseTag(2, x, reflected, suffix=(ACCEL, s2), core=(-s, 0, -p2), core_reflected=True,
                       turn_points=(p1, p2))
    # s > 0 > s2
    p1 = braking_distance(s)
    p2 = delta + accel_distance(s2)
    if p1 >= p2:
        return CaseTag(3, x, reflected, prefix=(DECEL, s), core=(0, -s2, p1 - delta), core_reflected=True,
                       turn_points=(p1, p2))
    return CaseTag(3, x, reflected, suffix=(DECEL, -s2), core=(s, 0, p2), turn_points=(p1, p2))


def feasible_raw(x: int, s: int, x2: int, s2: int) -> tuple[int, int, int]:
    """Integer-only form of :func:`feasible_lengths_1d`: (a, b, tail)."""
    tag = reduce(Configuration((x,), (s,)), Configuration((x2,), (s2,)))
    cs, cs2, cd = tag.core
    if tag.tag in (0, 1):
        a, b, tail = 1, 0, ceil_two_sqrt(cd)
    else:
        a, b, tail = _case4_raw(cs, cs2, cd)
    k = tag.shift
    if a > b:
        return 1, 0, tail + k
    return a + k, b + k, tail + k


def feasible_lengths_1d(c: Configuration, c_prime: Configuration) -> MultiInterval:
    """All lengths of trajectories from c to c_prime (one dimension)."""
    return _to_multi(feasible_raw(c.p[0], c.v[0], c_prime.p[0], c_prime.v[0]))


def _check_pair(c: Configuration, c_prime: Configuration) -> None:
    if c.d != c_prime.d:
        raise InvalidInputError(f"dimension mismatch: {c.d} vs {c_prime.d}")


def feasible_lengths(c: Configuration, c_prime: Configuration) -> MultiInterval:
    """Lengths feasible in every dimension at once."""
    _check_pair(c, c_prime)
    return intersect_all(feasible_lengths_1d(c.project(j), c_prime.project(j)) for j in range(c.d))


def per_dimension(c: Configuration, c_prime: Configuration) -> list[MultiInterval]:
    _check_pair(c, c_prime)
    return [feasible_lengths_1d(c.project(j), c_prime.project(j)) for j in range(c.d)]


def branching_cost(c: Configuration, c_prime: Configuration) -> int:
    """Length of a shortest trajectory from c to c_prime."""
    return feasible_lengths(c, c_prime).min()
