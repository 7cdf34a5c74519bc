"""Brute-force search over the configuration graph.

Ground truth for the closed forms. Everything here works on the explicit
graph whose nodes are configurations inside a finite box and whose edges
are the legal moves; nothing is borrowed from the closed-form modules.

One-dimensional reachability uses Python integers as bitsets: for every
speed u, bit i of ``layer[u]`` is set when position ``lo + i`` is
reachable at that speed after exactly the current number of steps.
"""

from __future__ import annotations

import heapq
import itertools
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DomainError, InvalidInputError, ResourceError
from .kinematics import Configuration

DEFAULT_SPEED_CAP = 8
DEFAULT_STEP_CAP = 200
DEFAULT_STATE_BUDGET = 2_000_000


@dataclass(frozen=True)
class SearchBounds:
    pos_lo: tuple[int, ...]
    pos_hi: tuple[int, ...]
    speed_cap: int = DEFAULT_SPEED_CAP
    step_cap: int = DEFAULT_STEP_CAP

    def __post_init__(self):
        if len(self.pos_lo) != len(self.pos_hi):
            raise InvalidInputError("bounds must share one dimension")
        if any(a > b for a, b in zip(self.pos_lo, self.pos_hi)):
            raise InvalidInputError("empty position range")

    def contains(self, c: Configuration) -> bool:
        return all(
            lo <= p <= hi and abs(v) <= self.speed_cap
            for lo, hi, p, v in zip(self.pos_lo, self.pos_hi, c.p, c.v)
        )

    @property
    def d(self) -> int:
        return len(self.pos_lo)


def default_bounds(points: Sequence[Sequence[int]], speed_cap: int = DEFAULT_SPEED_CAP,
                   step_cap: int = DEFAULT_STEP_CAP) -> SearchBounds:
    """Bounding box of ``points`` widened by the braking distance of the cap."""
    margin = max(speed_cap * (speed_cap - 1) // 2, 10)
    d = len(points[0])
    lo = tuple(min(p[j] for p in points) - margin for j in range(d))
    hi = tuple(max(p[j] for p in points) + margin for j in range(d))
    return SearchBounds(lo, hi, speed_cap, step_cap)


def _require_inside(bounds: SearchBounds, *cs: Configuration) -> None:
    for c in cs:
        if c.d != bounds.d:
            raise InvalidInputError(f"configuration {c} does not match bounds dimension {bounds.d}")
        if not bounds.contains(c):
            raise DomainError(f"configuration {c} lies outside the search bounds")


# --- one-dimensional bitset layers -----------------------------------------


def _forward_step(layer: dict[int, int], cap: int, width: int, full: int) -> dict[int, int]:
    nxt = {}
    for u in range(-cap, cap + 1):
        src = layer.get(u - 1, 0) | layer.get(u, 0) | layer.get(u + 1, 0)
        if not src:
            continue
        moved = (src << u) if u >= 0 else (src >> -u)
        moved &= full
        if moved:
            nxt[u] = moved
    return nxt


def _backward_step(layer: dict[int, int], cap: int, full: int) -> dict[int, int]:
    # (z, u) precedes (z + w, w) when |w - u| <= 1
    shifted = {}
    for w, bits in layer.items():
        moved = (bits >> w) if w >= 0 else (bits << -w)
        shifted[w] = moved & full
    prev = {}
    for u in range(-cap, cap + 1):
        bits = shifted.get(u - 1, 0) | shifted.get(u, 0) | shifted.get(u + 1, 0)
        if bits:
            prev[u] = bits
    return prev


def lengths_1d(x: int, s: int, x2: int, s2: int, lo: int, hi: int, cap: int, t_max: int) -> set[int]:
    """Exact lengths t <= t_max of 1D trajectories kept inside [lo, hi]."""
    width = hi - lo + 1
    full = (1 << width) - 1
    layer = {s: 1 << (x - lo)}
    target_bit = 1 << (x2 - lo)
    out = set()
    for t in range(t_max + 1):
        if layer.get(s2, 0) & target_bit:
            out.add(t)
        if t < t_max:
            layer = _forward_step(layer, cap, width, full)
            if not layer:
                break
    return out


class _BackwardTable:
    """For one dimension: which states reach a fixed target in exactly r steps."""

    def __init__(self, x2: int, s2: int, lo: int, hi: int, cap: int, depth: int):
        self.lo = lo
        full = (1 << (hi - lo + 1)) - 1
        layer = {s2: 1 << (x2 - lo)}
        self.layers = [layer]
        for _ in range(depth):
            layer = _backward_step(layer, cap, full)
            self.layers.append(layer)
        self._cache: dict[tuple[int, int], int] = {}

    def mask(self, z: int, w: int) -> int:
        """Bit r set iff (z, w) reaches the target in exactly r steps."""
        key = (z, w)
        m = self._cache.get(key)
        if m is None:
            bit = 1 << (z - self.lo)
            m = 0
            for r, layer in enumerate(self.layers):
                if layer.get(w, 0) & bit:
                    m |= 1 << r
            self._cache[key] = m
        return m


def _lowest_bit(m: int) -> Optional[int]:
    return (m & -m).bit_length() - 1 if m else None


# --- public searches ---------------------------------------------------------


def feasible_lengths_bfs(c: Configuration, c_prime: Configuration, bounds: SearchBounds,
                         t_max: int) -> set[int]:
    """All t <= t_max admitting a trajectory of exactly t steps within bounds.

    One dimension uses bitset layers; higher dimensions iterate explicit
    sets of configurations, which is only practical for small boxes.
    """
    _require_inside(bounds, c, c_prime)
    if c.d == 1:
        return lengths_1d(c.p[0], c.v[0], c_prime.p[0], c_prime.v[0],
                          bounds.pos_lo[0], bounds.pos_hi[0], bounds.speed_cap, t_max)
    out = set()
    layer = {c}
    deltas = list(itertools.product((-1, 0, 1), repeat=c.d))
    for t in range(t_max + 1):
        if c_prime in layer:
            out.add(t)
        if t == t_max:
            break
        nxt = set()
        for cfg in layer:
            for dv in deltas:
                n = cfg.step(dv)
                if bounds.contains(n):
                    nxt.add(n)
        if len(nxt) > DEFAULT_STATE_BUDGET:
            raise ResourceError(f"layer {t + 1} holds {len(nxt)} configurations")
        layer = nxt
    return out


def _successors(cfg: Configuration, bounds: SearchBounds, deltas):
    for dv in deltas:
        n = cfg.step(dv)
        if bounds.contains(n):
            yield n


def _touches_bound(path: Sequence[Configuration], bounds: SearchBounds) -> bool:
    for c in path:
        for j in range(c.d):
            if abs(c.v[j]) == bounds.speed_cap or c.p[j] in (bounds.pos_lo[j], bounds.pos_hi[j]):
                return True
    return False


def bfs_branching(c: Configuration, c_prime: Configuration, bounds: SearchBounds,
                  budget: int = DEFAULT_STATE_BUDGET) -> Optional[int]:
    """Shortest path length from c to c_prime in the bounded configuration graph.

    Best-first search ordered by depth plus a lower bound: the first length
    r at which every coordinate can still reach its target in exactly r
    steps (bitset tables over single coordinates). A projection of any
    remaining path is a path of the same length in each coordinate, so the
    bound never overestimates and the first goal popped is optimal.
    """
    _require_inside(bounds, c, c_prime)
    tables = [
        _BackwardTable(c_prime.p[j], c_prime.v[j], bounds.pos_lo[j], bounds.pos_hi[j],
                       bounds.speed_cap, bounds.step_cap)
        for j in range(c.d)
    ]

    def h(cfg: Configuration) -> Optional[int]:
        m = -1
        for j, tab in enumerate(tables):
            m &= tab.mask(cfg.p[j], cfg.v[j])
            if not m:
                return None
        return _lowest_bit(m)

    deltas = list(itertools.product((-1, 0, 1), repeat=c.d))
    h0 = h(c)
    if h0 is None:
        return None
    best_g = {c: 0}
    parent: dict[Configuration, Configuration] = {}
    # ties on f go to the deeper node: the bound is nearly exact, so this
    # walks straight down the plateau instead of sweeping it
    heap = [(h0, 0, c)]
    while heap:
        f, neg_g, cfg = heapq.heappop(heap)
        g = -neg_g
        if g > best_g.get(cfg, g):
            continue
        if cfg == c_prime:
            path = [cfg]
            while path[-1] in parent:
                path.append(parent[path[-1]])
            if _touches_bound(path, bounds):
                warnings.warn("oracle optimum touches the search bounds; widen them to be sure",
                              stacklevel=2)
            return g
        if g >= bounds.step_cap:
            continue
        for n in _successors(cfg, bounds, deltas):
            ng = g + 1
            if ng >= best_g.get(n, ng + 1):
                continue
            hn = h(n)
            if hn is None or ng + hn > bounds.step_cap:
                continue
            best_g[n] = ng
            parent[n] = cfg
            heapq.heappush(heap, (ng + hn, -ng, n))
        if len(best_g) > budget:
            raise ResourceError(f"search exceeded {budget} states")
    return None


def _advance(cfg_p: Sequence[int], cfg_v: Sequence[int], points, k: int, strict: bool) -> int:
    """Number of cities done after landing on (p, v) with k already done."""
    n = len(points)
    base = [a - b for a, b in zip(cfg_p, cfg_v)]
    last = -1
    while k < n:
        x = points[k]
        if not _on_segment(base, cfg_v, x):
            break
        dist = sum((xi - bi) ** 2 for xi, bi in zip(x, base))
        if dist < last or (strict and dist == last):
            break
        last = dist
        k += 1
    return k


def _on_segment(base, v, x) -> bool:
    # lattice point x on the closed segment base -> base + v
    j_num = None  # x - base = (num/den) * v with 0 <= num/den <= 1
    for b, vi, xi in zip(base, v, x):
        dx = xi - b
        if vi == 0:
            if dx != 0:
                return False
            continue
        if j_num is None:
            j_num, j_den = dx, vi
            if j_den < 0:
                j_num, j_den = -j_num, -j_den
            if j_num < 0 or j_num > j_den:
                return False
        elif dx * j_den != j_num * vi:
            return False
    return True


def _relaxed_distances(points, dim: int, lo: int, hi: int, cap: int) -> dict:
    """Exact remaining steps in the single-coordinate relaxation.

    A projected move counts as visiting a city when the city's coordinate
    lies between the two projected positions; several cities may be taken
    in one move when their coordinate distances do not decrease.
    """
    coords = [(p[dim],) for p in points]
    n = len(points)
    rev: dict[tuple[int, int, int], list] = {}
    for z in range(lo, hi + 1):
        for w in range(-cap, cap + 1):
            for k in range(1, n + 1):
                for u in (w - 1, w, w + 1):
                    z2 = z + u
                    if abs(u) > cap or not lo <= z2 <= hi:
                        continue
                    k2 = _advance((z2,), (u,), coords, k, strict=False)
                    rev.setdefault((z2, u, k2), []).append((z, w, k))
    goal = (points[-1][dim], 0, n)
    dist = {goal: 0}
    frontier = [goal]
    while frontier:
        nxt = []
        for state in frontier:
            for pred in rev.get(state, ()):
                if pred not in dist:
                    dist[pred] = dist[state] + 1
                    nxt.append(pred)
        frontier = nxt
    return dist


def bfs_multipoint(points: Sequence[Sequence[int]], bounds: Optional[SearchBounds] = None,
                   budget: int = DEFAULT_STATE_BUDGET) -> int:
    """Optimal length of a trajectory from rest at the first city to rest at the
    last, visiting every city in order.

    The search state is (configuration, cities done). The lower bound is
    the largest single-coordinate relaxed distance, which is consistent, so
    the best-first search returns an optimum.
    """
    points = [tuple(p) for p in points]
    if not points:
        raise InvalidInputError("need at least one city")
    n = len(points)
    if n == 1:
        return 0
    d = len(points[0])
    if bounds is None:
        bounds = default_bounds(points)
    start = Configuration.at_rest(points[0])
    goal = Configuration.at_rest(points[-1])
    _require_inside(bounds, start, goal)
    relaxed = [
        _relaxed_distances(points, j, bounds.pos_lo[j], bounds.pos_hi[j], bounds.speed_cap)
        for j in range(d)
    ]

    def h(cfg: Configuration, k: int) -> Optional[int]:
        best = 0
        for j in range(d):
            r = relaxed[j].get((cfg.p[j], cfg.v[j], k))
            if r is None:
                return None
            best = max(best, r)
        return best

    deltas = list(itertools.product((-1, 0, 1), repeat=d))
    k0 = _advance(start.p, start.v, points, 0, strict=True)
    s0 = (start, k0)
    h0 = h(start, k0)
    if h0 is None:
        raise ResourceError("goal unreachable within the search bounds")
    best_g = {s0: 0}
    parent = {}
    heap = [(h0, 0, start.p, start.v, k0)]
    while heap:
        f, neg_g, p, v, k = heapq.heappop(heap)
        g = -neg_g
        cfg = Configuration(p, v)
        state = (cfg, k)
        if g > best_g[state]:
            continue
        if k == n and cfg == goal:
            path = [cfg]
            while state in parent:
                state = parent[state]
                path.append(state[0])
            if _touches_bound(path, bounds):
                warnings.warn("oracle optimum touches the search bounds; widen them to be sure",
                              stacklevel=2)
            return g
        for nc in _successors(cfg, bounds, deltas):
            nk = _advance(nc.p, nc.v, points, k, strict=True)
            ns = (nc, nk)
            ng = g + 1
            if ng >= best_g.get(ns, ng + 1):
                continue
            hn = h(nc, nk)
            if hn is None:
                continue
            best_g[ns] = ng
            parent[ns] = state
            heapq.heappush(heap, (ng + hn, -ng, nc.p, nc.v, nk))
        if len(best_g) > budget:
            raise ResourceError(f"multipoint search exceeded {budget} states")
    raise ResourceError("goal unreachable within the search bounds")


# --- exhaustive one-dimensional sweep ---------------------------------------


@dataclass
class SweepReport:
    pairs: int
    mismatches: int
    examples: list  # up to 20 (x, s, x2, s2, formula_mask, search_mask)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def _interval_mask(mi, t_max: int) -> int:
    full = (1 << (t_max + 1)) - 1
    m = 0
    for a, b in mi.bounded:
        if a <= t_max:
            m |= ((1 << (min(b, t_max) + 1)) - 1) ^ ((1 << a) - 1)
    if mi.tail is not None and mi.tail <= t_max:
        m |= full ^ ((1 << mi.tail) - 1)
    return m


def sweep_1d(pos: int = 30, speed: int = 6, t_max: int = 60, formula=None) -> SweepReport:
    """Compare ``formula(c, c2)`` with layered search for every 1D pair in the box.

    The search box is wide enough that no trajectory of at most t_max steps
    between two states of the sweep can leave it: at step t the speed is at
    most speed + min(t, t_max - t), which also bounds the total excursion.
    """
    import numpy as np

    if formula is None:
        from .branching_cost import feasible_lengths_1d as formula
    cap = speed + t_max // 2
    reach = pos + speed * t_max + (t_max * t_max) // 4 + t_max
    lo, hi = -reach, reach
    full = (1 << (hi - lo + 1)) - 1
    xs = list(range(-pos, pos + 1))
    ss = list(range(-speed, speed + 1))
    nx, T = len(xs), t_max + 1
    window = (1 << nx) - 1
    shifts = np.arange(nx, dtype=np.int64)
    weights = np.left_shift(np.int64(1), np.arange(T, dtype=np.int64))
    mismatches = 0
    examples = []
    for x in xs:
        for s in ss:
            rows = np.zeros((len(ss), T), dtype=np.int64)
            layer = {s: 1 << (x - lo)}
            for t in range(T):
                for k, s2 in enumerate(ss):
                    rows[k, t] = (layer.get(s2, 0) >> (-pos - lo)) & window
                if t < t_max:
                    layer = _forward_step(layer, cap, hi - lo + 1, full)
            bits = (rows[:, :, None] >> shifts[None, None, :]) & 1
            found = (bits * weights[None, :, None]).sum(axis=1)  # [speed, position] -> t-mask
            c = Configuration((x,), (s,))
            for k, s2 in enumerate(ss):
                for i, x2 in enumerate(xs):
                    m = _interval_mask(formula(c, Configuration((x2,), (s2,))), t_max)
                    if m != int(found[k, i]):
                        mismatches += 1
                        if len(examples) < 20:
                            examples.append((x, s, x2, s2, m, int(found[k, i])))
    return SweepReport(len(xs) ** 2 * len(ss) ** 2, mismatches, examples)
