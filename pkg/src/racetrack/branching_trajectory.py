"""Constant-size witnesses for feasible lengths.

For a canonical instance (0, s) -> (delta, s') and length l, let
``n = l - |s' - s|`` be the number of steps not spent changing speed.
Two ramp trajectories bracket the distances reachable with little
effort: hold the lower speed for n steps and ramp (``d_rmin``), or ramp
first and hold the higher speed (``d_rmax``). Any target distance is hit
by bending one of them:

* region A (below ``d_rmin``): dig a valley of k layers into the
  low plateau, removing k*(n-k) units;
* region B (between the ramps): slide k ramp steps across the plateau,
  moving k*n units;
* region C (above ``d_rmax``): raise a hill of k layers, adding k*(n-k).

When the area does not come out exact, a single one-unit step inside the
plateau makes up the excess. The result never needs more than five
segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .branching_cost import delta_max, delta_min, feasible_lengths_1d, reduce
from .errors import DomainError, InfeasibleError, InvalidInputError
from .intmath import ceil_sqrt
from .kinematics import (
    ACCEL,
    DECEL,
    HOLD,
    CompactTrajectory,
    Configuration,
    ControlSegment,
    Trajectory,
    assemble,
    canonical_segments,
)

MAX_SEGMENTS = 5


@dataclass(frozen=True)
class RegionProfile:
    region: Optional[str]
    d_rmin: int
    d_rmax: int
    alpha1: int
    alpha2: int
    deficit: int
    free: int  # l - |s' - s|

    @property
    def k_m(self):
        from fractions import Fraction

        return Fraction(self.free, 2)


@dataclass(frozen=True)
class Checkpoints:
    k1: int
    k2: int
    aligned: bool  # area matched exactly by whole layers


def region_bounds(s: int, s_prime: int, ell: int, delta: Optional[int] = None) -> RegionProfile:
    """Ramp distances for length ell, and the region of ``delta`` if given."""
    gap = abs(s_prime - s)
    if ell < gap:
        raise DomainError(f"length {ell} is below the {gap} steps needed to change speed")
    n = ell - gap
    alpha1 = (s_prime - s) * (s + s_prime + 1) // 2
    alpha2 = (s - s_prime) * (s + s_prime - 1) // 2
    if s < s_prime:
        lo, hi = s * n + alpha1, s_prime * n + alpha1
    else:
        lo, hi = s_prime * n + alpha2, s * n + alpha2
    if delta is None:
        return RegionProfile(None, lo, hi, alpha1, alpha2, 0, n)
    if delta < delta_min(s, s_prime, ell) or delta > delta_max(s, s_prime, ell):
        raise InfeasibleError(f"distance {delta} is not coverable in {ell} steps from speed {s} to {s_prime}")
    if delta <= lo:
        region, deficit = "A", lo - delta
    elif delta <= hi:
        region, deficit = "B", (delta - lo) if s <= s_prime else (hi - delta)
    else:
        region, deficit = "C", delta - hi
    return RegionProfile(region, lo, hi, alpha1, alpha2, deficit, n)


def layer_area(k: int, ell: int, s: int, s_prime: int, region: str) -> int:
    """Area moved by k layers relative to the region's base ramp."""
    n = ell - abs(s_prime - s)
    if region in ("A", "C"):
        if not 0 <= k <= n / 2:
            raise DomainError(f"k={k} outside [0, {n}/2]")
        return k * (n - k)
    if region == "B":
        if k < 0:
            raise DomainError("k must be non-negative")
        return n * k
    raise DomainError(f"unknown region {region!r}")


def _fewest_layers(n: int, area: int) -> int:
    """Smallest k in [0, n // 2] with k * (n - k) >= area."""
    k = max(0, (n - ceil_sqrt(n * n - 4 * area)) // 2) if area <= n * n // 4 else n // 2
    while k > 0 and (k - 1) * (n - k + 1) >= area:
        k -= 1
    while k * (n - k) < area:
        k += 1
    return k


def solve_checkpoints(s: int, s_prime: int, ell: int, delta: int) -> tuple[RegionProfile, Checkpoints]:
    prof = region_bounds(s, s_prime, ell, delta)
    n, D = prof.free, prof.deficit
    if prof.region == "B":
        k1, excess = (D // n, D % n) if n else (0, 0)
        if excess == 0:
            return prof, Checkpoints(k1, n + k1, True)
        return prof, Checkpoints(k1, excess, False)
    k1 = _fewest_layers(n, D)
    excess = k1 * (n - k1) - D
    if excess == 0:
        return prof, Checkpoints(k1, n - k1, True)
    return prof, Checkpoints(k1, excess, False)


# Each template lists (action, coefficients) with the segment count equal to
# n*cn + g*cg + k*ck + e*ce + c1, where g = |s' - s|, k = k1 and e = excess.
# Keys: (region, start speed <= end speed, aligned).
_TEMPLATES = {
    ("A", True, True): ((DECEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, -2, 0, 0)), (ACCEL, (0, 1, 1, 0, 0))),
    ("A", True, False): ((DECEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, -2, -1, 0)), (ACCEL, (0, 0, 0, 0, 1)),
                         (HOLD, (0, 0, 0, 1, 0)), (ACCEL, (0, 1, 1, 0, -1))),
    ("A", False, True): ((DECEL, (0, 1, 1, 0, 0)), (HOLD, (1, 0, -2, 0, 0)), (ACCEL, (0, 0, 1, 0, 0))),
    ("A", False, False): ((DECEL, (0, 1, 1, 0, 0)), (HOLD, (1, 0, -2, -1, 0)), (ACCEL, (0, 0, 0, 0, 1)),
                          (HOLD, (0, 0, 0, 1, 0)), (ACCEL, (0, 0, 1, 0, -1))),
    ("B", True, True): ((ACCEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, 0, 0, 0)), (ACCEL, (0, 1, -1, 0, 0))),
    ("B", True, False): ((ACCEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, 0, -1, 0)), (ACCEL, (0, 0, 0, 0, 1)),
                         (HOLD, (0, 0, 0, 1, 0)), (ACCEL, (0, 1, -1, 0, -1))),
    ("B", False, True): ((DECEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, 0, 0, 0)), (DECEL, (0, 1, -1, 0, 0))),
    ("B", False, False): ((DECEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, 0, -1, 0)), (DECEL, (0, 0, 0, 0, 1)),
                          (HOLD, (0, 0, 0, 1, 0)), (DECEL, (0, 1, -1, 0, -1))),
    ("C", True, True): ((ACCEL, (0, 1, 1, 0, 0)), (HOLD, (1, 0, -2, 0, 0)), (DECEL, (0, 0, 1, 0, 0))),
    ("C", True, False): ((ACCEL, (0, 1, 1, 0, 0)), (HOLD, (1, 0, -2, -1, 0)), (DECEL, (0, 0, 0, 0, 1)),
                         (HOLD, (0, 0, 0, 1, 0)), (DECEL, (0, 0, 1, 0, -1))),
    ("C", False, True): ((ACCEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, -2, 0, 0)), (DECEL, (0, 1, 1, 0, 0))),
    ("C", False, False): ((ACCEL, (0, 0, 1, 0, 0)), (HOLD, (1, 0, -2, -1, 0)), (DECEL, (0, 0, 0, 0, 1)),
                          (HOLD, (0, 0, 0, 1, 0)), (DECEL, (0, 1, 1, 0, -1))),
}


def core_segments(s: int, s_prime: int, delta: int, ell: int) -> tuple[ControlSegment, ...]:
    """Control segments from (0, s) to (delta, s') in exactly ell steps."""
    prof, cp = solve_checkpoints(s, s_prime, ell, delta)
    gap = abs(s_prime - s)
    excess = 0 if cp.aligned else cp.k2
    values = (prof.free, gap, cp.k1, excess, 1)
    segs = []
    for action, coeffs in _TEMPLATES[(prof.region, s <= s_prime, cp.aligned)]:
        count = sum(a * b for a, b in zip(coeffs, values))
        if count < 0:
            raise AssertionError(f"negative segment count in template {prof.region}")
        segs.append((action, count))
    return canonical_segments(segs)


def _mirror(segs) -> list[tuple[int, int]]:
    return [(-seg.action if isinstance(seg, ControlSegment) else -seg[0],
             seg.count if isinstance(seg, ControlSegment) else seg[1]) for seg in segs]


def construct_1d(c: Configuration, c_prime: Configuration, ell: int) -> CompactTrajectory:
    """A trajectory from c to c_prime with exactly ell steps, in at most 5 segments."""
    if c.d != 1 or c_prime.d != 1:
        raise InvalidInputError("construct_1d works on one-dimensional configurations")
    lengths = feasible_lengths_1d(c, c_prime)
    if ell not in lengths:
        raise InfeasibleError(f"no trajectory of length {ell} from {c} to {c_prime}; feasible: {lengths}")
    tag = reduce(c, c_prime)
    cs, cs2, cd = tag.core
    core = core_segments(cs, cs2, cd, ell - tag.shift)
    core = _mirror(core) if tag.core_reflected else [(g.action, g.count) for g in core]
    segs = [tag.prefix, *core, tag.suffix]
    if tag.reflected:
        segs = _mirror(segs)
    ct = CompactTrajectory(c, canonical_segments(segs))
    if ct.end() != c_prime or ct.length != ell or len(ct.segments) > MAX_SEGMENTS:
        raise AssertionError(f"witness check failed for {c} -> {c_prime}, length {ell}: {ct}")
    return ct


@dataclass(frozen=True)
class Construction:
    dims: tuple[CompactTrajectory, ...]
    trajectory: Trajectory

    @property
    def length(self) -> int:
        return self.trajectory.length

    def to_json(self, expand_points: bool = True) -> dict:
        out = {"dims": [ct.to_json() for ct in self.dims], "length": self.length}
        if expand_points:
            out["points"] = [list(c.p) for c in self.trajectory]
            out["velocities"] = [list(c.v) for c in self.trajectory]
        return out


def construct(c: Configuration, c_prime: Configuration, ell: Optional[int] = None) -> Construction:
    """Per-dimension witnesses of a common length, and their assembly."""
    from .branching_cost import branching_cost, per_dimension

    if c.d != c_prime.d:
        raise InvalidInputError(f"dimension mismatch: {c.d} vs {c_prime.d}")
    if ell is None:
        ell = branching_cost(c, c_prime)
    for j, lengths in enumerate(per_dimension(c, c_prime)):
        if ell not in lengths:
            raise InfeasibleError(f"length {ell} is infeasible in dimension {j} (feasible: {lengths})")
    dims = tuple(construct_1d(c.project(j), c_prime.project(j), ell) for j in range(c.d))
    return Construction(dims, assemble(dims))
