"""Sets of non-negative integers as a few closed intervals plus a tail."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InvalidInputError


@dataclass(frozen=True)
class MultiInterval:
    """Union of disjoint closed integer intervals and an optional [tail, inf).

    Construction canonicalizes: components are sorted, overlapping or
    adjacent ones merged, and bounded pieces swallowed by the tail dropped.
    """

    bounded: tuple[tuple[int, int], ...] = ()
    tail: Optional[int] = None

    def __post_init__(self):
        pieces = sorted((int(a), int(b)) for a, b in self.bounded if a <= b)
        merged: list[tuple[int, int]] = []
        for a, b in pieces:
            if merged and a <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        tail = self.tail
        if tail is not None:
            tail = int(tail)
            while merged and merged[-1][1] + 1 >= tail:
                tail = min(tail, merged[-1][0])
                merged.pop()
        object.__setattr__(self, "bounded", tuple(merged))
        object.__setattr__(self, "tail", tail)

    @classmethod
    def from_tail(cls, t: int) -> "MultiInterval":
        return cls((), t)

    def __contains__(self, t: int) -> bool:
        if self.tail is not None and t >= self.tail:
            return True
        return any(a <= t <= b for a, b in self.bounded)

    def is_empty(self) -> bool:
        return not self.bounded and self.tail is None

    def min(self) -> int:
        if self.bounded:
            return self.bounded[0][0]
        if self.tail is None:
            raise InvalidInputError("empty set has no minimum")
        return self.tail

    def components(self) -> int:
        return len(self.bounded) + (self.tail is not None)

    def shift(self, k: int) -> "MultiInterval":
        """The set {t + k : t in self}."""
        return MultiInterval(
            tuple((a + k, b + k) for a, b in self.bounded),
            None if self.tail is None else self.tail + k,
        )

    def at_least(self, lo: int) -> "MultiInterval":
        return MultiInterval(
            tuple((max(a, lo), b) for a, b in self.bounded),
            None if self.tail is None else max(self.tail, lo),
        )

    def members(self, upto: int) -> set[int]:
        """Elements not exceeding ``upto``."""
        out = set()
        for a, b in self.bounded:
            out.update(range(a, min(b, upto) + 1))
        if self.tail is not None:
            out.update(range(self.tail, upto + 1))
        return out

    def intersect(self, other: "MultiInterval") -> "MultiInterval":
        return intersect_all([self, other])

    def to_json(self) -> dict:
        return {"bounded": [list(c) for c in self.bounded], "tail": self.tail}

    @classmethod
    def from_json(cls, obj: dict) -> "MultiInterval":
        return cls(tuple(tuple(c) for c in obj.get("bounded", [])), obj.get("tail"))

    def __str__(self) -> str:
        parts = [f"[{a},{b}]" for a, b in self.bounded]
        if self.tail is not None:
            parts.append(f"[{self.tail},inf)")
        return " U ".join(parts) if parts else "{}"


_INF = float("inf")


def intersect_all(sets: Iterable[MultiInterval]) -> MultiInterval:
    """Intersection by sweeping sorted endpoints.

    Each component contributes +1 at its start and -1 just past its end;
    the sweep keeps the stretches where the running count equals the
    number of sets.
    """
    sets = list(sets)
    if not sets:
        raise InvalidInputError("intersection of no sets is undefined")
    events: list[tuple[float, int]] = []
    for m in sets:
        for a, b in m.bounded:
            events.append((a, 1))
            events.append((b + 1, -1))
        if m.tail is not None:
            events.append((m.tail, 1))
    events.sort()
    need = len(sets)
    depth = 0
    bounded: list[tuple[int, int]] = []
    tail = None
    open_at = None
    i = 0
    while i < len(events):
        pos = events[i][0]
        while i < len(events) and events[i][0] == pos:
            depth += events[i][1]
            i += 1
        if depth == need and open_at is None:
            open_at = pos
        elif depth < need and open_at is not None:
            bounded.append((int(open_at), int(pos) - 1))
            open_at = None
    if open_at is not None:
        tail = int(open_at)
    return MultiInterval(tuple(bounded), tail)
