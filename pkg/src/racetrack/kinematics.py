"""Model types for the discrete acceleration model.

A configuration is a pair (p, v) of integer vectors. A trajectory
c_0 .. c_l is valid when p_i = p_{i-1} + v_i and every component of
v_i - v_{i-1} is in {-1, 0, 1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidInputError

DECEL, HOLD, ACCEL = -1, 0, 1
_ACTION_SYMBOL = {DECEL: "-", HOLD: "0", ACCEL: "+"}
_SYMBOL_ACTION = {v: k for k, v in _ACTION_SYMBOL.items()}


@dataclass(frozen=True, order=True)
class Configuration:
    """Position and velocity of the vehicle, both integer vectors."""

    p: tuple[int, ...]
    v: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(a) for a in self.p))
        object.__setattr__(self, "v", tuple(int(a) for a in self.v))
        if len(self.p) != len(self.v) or not self.p:
            raise InvalidInputError(
                f"position and velocity must share a dimension >= 1, got {self.p} and {self.v}"
            )

    @property
    def d(self) -> int:
        return len(self.p)

    @property
    def tail(self) -> tuple[int, ...]:
        """Position one step earlier, p - v."""
        return tuple(a - b for a, b in zip(self.p, self.v))

    def project(self, dim: int) -> "Configuration":
        return Configuration((self.p[dim],), (self.v[dim],))

    def step(self, dv: Sequence[int]) -> "Configuration":
        v = tuple(a + b for a, b in zip(self.v, dv))
        return Configuration(tuple(a + b for a, b in zip(self.p, v)), v)

    def to_json(self) -> dict:
        return {"p": list(self.p), "v": list(self.v)}

    @classmethod
    def from_json(cls, obj: dict) -> "Configuration":
        try:
            return cls(tuple(obj["p"]), tuple(obj["v"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"bad configuration object: {obj!r}") from exc

    @classmethod
    def at_rest(cls, x: Sequence[int]) -> "Configuration":
        return cls(tuple(x), (0,) * len(x))


def config1(x: int, s: int) -> Configuration:
    """Shorthand for a one-dimensional configuration."""
    return Configuration((x,), (s,))


@dataclass(frozen=True)
class Trajectory:
    configs: tuple[Configuration, ...]

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(self.configs))
        if not self.configs:
            raise InvalidInputError("a trajectory holds at least one configuration")

    @property
    def length(self) -> int:
        return len(self.configs) - 1

    @property
    def d(self) -> int:
        return self.configs[0].d

    def positions(self) -> list[tuple[int, ...]]:
        return [c.p for c in self.configs]

    def __len__(self):
        return len(self.configs)

    def __iter__(self):
        return iter(self.configs)

    def __getitem__(self, i):
        return self.configs[i]


def validate_trajectory(t: Trajectory) -> bool:
    d = t.configs[0].d
    if any(c.d != d for c in t.configs):
        raise InvalidInputError("configurations of a trajectory must share one dimension")
    for prev, cur in zip(t.configs, t.configs[1:]):
        for j in range(d):
            if cur.p[j] != prev.p[j] + cur.v[j]:
                return False
            if abs(cur.v[j] - prev.v[j]) > 1:
                return False
    return True


def _check_dim(c: Configuration, x: Sequence[int]) -> None:
    if len(x) != c.d:
        raise InvalidInputError(f"point {tuple(x)} does not match dimension {c.d}")


def _gcd_abs(v: Sequence[int]) -> int:
    return math.gcd(*(abs(a) for a in v)) if len(v) > 1 else abs(v[0])


def visits(c: Configuration, x: Sequence[int]) -> bool:
    """True iff lattice point x lies on the closed segment from p - v to p."""
    _check_dim(c, x)
    g = _gcd_abs(c.v)
    if g == 0:
        return tuple(x) == c.p
    base = c.tail
    step = [a // g for a in c.v]
    # x = base + j*step for some 0 <= j <= g
    j = None
    for b, s, xi in zip(base, step, x):
        if s == 0:
            if xi != b:
                return False
            continue
        q, r = divmod(xi - b, s)
        if r:
            return False
        if j is None:
            j = q
        elif j != q:
            return False
    return j is not None and 0 <= j <= g


def _sqdist(a: Sequence[int], b: Sequence[int]) -> int:
    return sum((x - y) ** 2 for x, y in zip(a, b))


def visit_order_ok(c: Configuration, xs: Sequence[Sequence[int]]) -> bool:
    """True iff the points are met in sequence order along the last move."""
    for x in xs:
        if not visits(c, x):
            raise InvalidInputError(f"{tuple(x)} is not visited by {c}")
    base = c.tail
    dists = [_sqdist(base, x) for x in xs]
    return all(a < b for a, b in zip(dists, dists[1:]))


def visits_in_order(t: Trajectory, points: Sequence[Sequence[int]]) -> bool:
    """Check that the trajectory visits ``points`` in order.

    Scans configurations greedily; one configuration may account for
    several consecutive points when their distances from p - v grow.
    """
    k = 0
    n = len(points)
    for c in t.configs:
        last = -1
        base = c.tail
        while k < n and visits(c, points[k]):
            dist = _sqdist(base, points[k])
            if dist <= last:
                break
            last = dist
            k += 1
        if k == n:
            return True
    return k == n


@dataclass(frozen=True)
class ControlSegment:
    action: int
    count: int

    def __post_init__(self):
        if self.action not in _ACTION_SYMBOL:
            raise InvalidInputError(f"unknown action {self.action!r}")
        if self.count < 0:
            raise InvalidInputError("segment count must be non-negative")

    def to_json(self) -> list:
        return [_ACTION_SYMBOL[self.action], self.count]


def canonical_segments(segments: Iterable[tuple[int, int] | ControlSegment]) -> tuple[ControlSegment, ...]:
    """Drop empty segments and merge neighbours that share an action."""
    out: list[ControlSegment] = []
    for seg in segments:
        if not isinstance(seg, ControlSegment):
            seg = ControlSegment(*seg)
        if seg.count == 0:
            continue
        if out and out[-1].action == seg.action:
            out[-1] = ControlSegment(seg.action, out[-1].count + seg.count)
        else:
            out.append(seg)
    return tuple(out)


@dataclass(frozen=True)
class CompactTrajectory:
    """One-dimensional trajectory stored as run-length control segments."""

    start: Configuration
    segments: tuple[ControlSegment, ...] = field(default=())

    def __post_init__(self):
        if self.start.d != 1:
            raise InvalidInputError("compact trajectories are one-dimensional")
        object.__setattr__(self, "segments", canonical_segments(self.segments))

    @property
    def length(self) -> int:
        return sum(seg.count for seg in self.segments)

    def speeds(self) -> list[int]:
        s = self.start.v[0]
        out = []
        for seg in self.segments:
            for _ in range(seg.count):
                s += seg.action
                out.append(s)
        return out

    def end(self) -> Configuration:
        x, s = self.start.p[0], self.start.v[0]
        for seg in self.segments:
            a, k = seg.action, seg.count
            # k steps with speeds s+a, s+2a, ..., s+k*a
            x += k * s + a * k * (k + 1) // 2
            s += a * k
        return config1(x, s)

    def to_json(self) -> dict:
        return {"start": self.start.to_json(), "segments": [s.to_json() for s in self.segments]}

    @classmethod
    def from_json(cls, obj: dict) -> "CompactTrajectory":
        try:
            segs = [ControlSegment(_SYMBOL_ACTION[a], int(k)) for a, k in obj["segments"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad compact trajectory: {obj!r}") from exc
        return cls(Configuration.from_json(obj["start"]), tuple(segs))

    @classmethod
    def from_speeds(cls, start: Configuration, speeds: Sequence[int]) -> "CompactTrajectory":
        """Run-length encode an explicit speed sequence."""
        segs = []
        prev = start.v[0]
        for s in speeds:
            segs.append((s - prev, 1))
            prev = s
        return cls(start, canonical_segments(segs))


def expand(ct: CompactTrajectory) -> Trajectory:
    x, s = ct.start.p[0], ct.start.v[0]
    configs = [ct.start]
    for seg in ct.segments:
        for _ in range(seg.count):
            s += seg.action
            x += s
            configs.append(config1(x, s))
    return Trajectory(tuple(configs))


def assemble(dims: Sequence[CompactTrajectory]) -> Trajectory:
    """Zip per-dimension expansions into one d-dimensional trajectory."""
    if not dims:
        raise InvalidInputError("need at least one dimension")
    parts = [expand(ct) for ct in dims]
    lengths = {p.length for p in parts}
    if len(lengths) != 1:
        raise InvalidInputError(f"per-dimension lengths differ: {sorted(lengths)}")
    return from_projections(parts)


def from_projections(parts: Sequence[Trajectory]) -> Trajectory:
    configs = []
    for step in zip(*(p.configs for p in parts)):
        configs.append(
            Configuration(tuple(c.p[0] for c in step), tuple(c.v[0] for c in step))
        )
    return Trajectory(tuple(configs))


def project(t: Trajectory, dim: int) -> Trajectory:
    return Trajectory(tuple(c.project(dim) for c in t.configs))
