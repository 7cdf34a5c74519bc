"""Shortest trajectory through an ordered list of cities.

Dynamic program over candidate configurations: for each city, every
configuration with bounded speed whose last move passes over the city.
The cost of reaching candidate c at city i is the cheapest
``cost(i-1, c') + branching_cost(c', c)``. The first and last
configurations are the first and last city at rest.
"""

from __future__ import annotations

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernel
from .branching_cost import branching_cost
from .branching_trajectory import construct
from .errors import ConfigurationError, InfeasibleError, InvalidInputError
from .intmath import ceil_sqrt
from .kinematics import (
    CompactTrajectory,
    Configuration,
    Trajectory,
    from_projections,
    visit_order_ok,
    visits,
)

log = logging.getLogger(__name__)

WARM_START_SMAX = 5
BOX_STEP_CAP = 63  # longest single transition representable in a 64-bit mask
RAW_TABLE_LIMIT = 8_000_000  # entries; 12 bytes each


@dataclass(frozen=True)
class Instance:
    points: tuple[tuple[int, ...], ...]
    tour: bool = False

    def __post_init__(self):
        pts = tuple(tuple(int(a) for a in p) for p in self.points)
        if not pts:
            raise InvalidInputError("an instance needs at least one city")
        if len({len(p) for p in pts}) != 1 or not pts[0]:
            raise InvalidInputError("all cities must share one dimension >= 1")
        object.__setattr__(self, "points", pts)

    @property
    def d(self) -> int:
        return len(self.points[0])

    @property
    def n(self) -> int:
        return len(self.points)

    def spread(self) -> int:
        """Largest extent of the cities along any single axis."""
        return max(max(p[j] for p in self.points) - min(p[j] for p in self.points) for j in range(self.d))

    def bounding_box(self, margin: int = 0) -> tuple[tuple[int, ...], tuple[int, ...]]:
        lo = tuple(min(p[j] for p in self.points) - margin for j in range(self.d))
        hi = tuple(max(p[j] for p in self.points) + margin for j in range(self.d))
        return lo, hi

    def to_json(self) -> dict:
        return {"d": self.d, "points": [list(p) for p in self.points], "tour": self.tour}

    @classmethod
    def from_json(cls, obj: dict) -> "Instance":
        try:
            inst = cls(tuple(tuple(p) for p in obj["points"]), bool(obj.get("tour", False)))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"bad instance object: {exc}") from exc
        if "d" in obj and obj["d"] != inst.d:
            raise InvalidInputError(f"declared d={obj['d']} but points have dimension {inst.d}")
        return inst


@dataclass
class CandidateSet:
    city_index: int  # 1-based
    configs: list[Configuration]

    def __len__(self):
        return len(self.configs)


@dataclass(frozen=True)
class SpeedBoundPolicy:
    mode: str  # "fixed", "conservative", "conjecture" or "incremental"
    smax: Optional[int] = None

    @property
    def exact(self) -> bool:
        # incremental runs are exact only if they climb to the safe bound
        return self.mode in ("fixed", "conservative")


def candidate_arrays(x: Sequence[int], smax: int) -> tuple[np.ndarray, np.ndarray]:
    """Positions and velocities of every candidate for city x, in (p, v) order.

    For velocity v with g = gcd(|v_j|), x is the j-th of the g + 1 lattice
    points on the last move, so p = x + (g - j) * v / g for j = 0..g.
    """
    if smax < 0:
        raise InvalidInputError("smax must be non-negative")
    x = np.asarray(x, dtype=np.int64)
    d = x.shape[0]
    axis = np.arange(-smax, smax + 1, dtype=np.int64)
    V = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    g = np.gcd.reduce(np.abs(V), axis=1)
    counts = g + 1
    g = np.where(g == 0, 1, g)
    step = V // g[:, None]
    Vr = np.repeat(V, counts, axis=0)
    Sr = np.repeat(step, counts, axis=0)
    first = np.repeat(np.cumsum(counts) - counts, counts)
    back = np.repeat(np.where(np.all(V == 0, axis=1), 0, g), counts) - (np.arange(Vr.shape[0]) - first)
    P = x[None, :] + back[:, None] * Sr
    return _lex_sorted(P, Vr)


def _lex_sorted(P: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = P.shape[1]
    keys = tuple(V[:, j] for j in reversed(range(d))) + tuple(P[:, j] for j in reversed(range(d)))
    order = np.lexsort(keys)
    return np.ascontiguousarray(P[order]), np.ascontiguousarray(V[order])


def _to_configs(P: np.ndarray, V: np.ndarray) -> list[Configuration]:
    return [Configuration(tuple(p), tuple(v)) for p, v in zip(P.tolist(), V.tolist())]


def candidate_configs(x: Sequence[int], smax: int, city_index: int = 0) -> CandidateSet:
    """Every configuration with |v_j| <= smax whose last move passes over x."""
    return CandidateSet(city_index, _to_configs(*candidate_arrays(x, smax)))


def _box_mask(P: np.ndarray, box) -> np.ndarray:
    lo, hi = (np.asarray(b, dtype=np.int64) for b in box)
    return np.all((P >= lo) & (P <= hi), axis=1)


def build_sets(inst: Instance, smax: int, box=None, S: Optional[int] = None, backend=None,
               counts: Optional[list] = None) -> list[CandidateSet]:
    """Candidate sets for every city; with S, candidates failing the length filter never materialize.

    ``counts``, when given, receives each set's size before filtering.
    """
    be = backend or kernel.backend
    n = inst.n
    first = Configuration.at_rest(inst.points[0])
    last = Configuration.at_rest(inst.points[-1])
    sets = []
    for i, x in enumerate(inst.points, start=1):
        if i == 1 or i == n:
            sets.append(CandidateSet(i, [first if i == 1 else last]))
            if counts is not None:
                counts.append(1)
            continue
        P, V = candidate_arrays(x, smax)
        if box is not None:
            keep = _box_mask(P, box)
            P, V = P[keep], V[keep]
        if counts is not None:
            counts.append(len(P))
        if S is not None:
            keep = _filter_arrays(P, V, first, last, S, be)
            P, V = P[keep], V[keep]
        sets.append(CandidateSet(i, _to_configs(P, V)))
    return sets


def _filter_arrays(P, V, first, last, S, be) -> np.ndarray:
    if be is kernel.python_backend:
        keep = be.filter_mask(P.tolist(), V.tolist(), first.p, first.v, last.p, last.v, S)
    else:
        keep = be.filter_mask(np.ascontiguousarray(P), np.ascontiguousarray(V), first.p, first.v,
                              last.p, last.v, S)
    return np.asarray(keep, dtype=bool)


@dataclass
class DpTable:
    """Per-city configurations with their best cost and predecessor index."""

    configs: list[list[Configuration]]
    costs: list[np.ndarray]
    preds: list[np.ndarray]

    def cost(self, i: int, c: Configuration) -> int:
        k = self.configs[i - 1].index(c)
        return int(self.costs[i - 1][k])

    def pred(self, i: int, c: Configuration) -> Optional[Configuration]:
        if i == 1:
            return None
        k = self.configs[i - 1].index(c)
        j = int(self.preds[i - 1][k])
        return self.configs[i - 2][j] if j >= 0 else None


@dataclass
class DpResult:
    cost: int
    sequence: list[Configuration]
    steps: list[int]  # transition lengths between consecutive visiting configs
    table: DpTable


def _as_arrays(configs: Sequence[Configuration]):
    P = np.ascontiguousarray(np.array([c.p for c in configs], dtype=np.int64))
    V = np.ascontiguousarray(np.array([c.v for c in configs], dtype=np.int64))
    return P, V


def _groups(prev: Sequence[Configuration], cost: np.ndarray):
    by_vel = defaultdict(list)
    for i, c in enumerate(prev):
        if cost[i] < kernel.INF:
            by_vel[c.v].append(i)
    groups = []
    for vel, idx in by_vel.items():
        idx.sort(key=lambda i: (cost[i], i))
        groups.append((int(cost[idx[0]]), vel, idx))
    groups.sort(key=lambda g: (g[0], g[1]))
    d = prev[0].d
    start = [0]
    members = []
    for _, _, idx in groups:
        members.extend(idx)
        start.append(len(members))
    return (
        np.array(start, dtype=np.int64),
        np.array(members, dtype=np.int64),
        np.array([g[0] for g in groups], dtype=np.int64),
        np.ascontiguousarray(np.array([g[1] for g in groups], dtype=np.int64).reshape(len(groups), d)),
    )


def _box_inputs(prev, cur, box, be):
    """Per-coordinate masks of box-respecting transition lengths."""
    d = prev[0].d
    lo, hi = box
    src_id = np.zeros((len(prev), d), dtype=np.int64)
    tgt_id = np.zeros((len(cur), d), dtype=np.int64)
    per_dim = []
    for j in range(d):
        srcs = sorted({(c.p[j], c.v[j]) for c in prev})
        tgts = sorted({(c.p[j], c.v[j]) for c in cur})
        si = {s: k for k, s in enumerate(srcs)}
        ti = {t: k for k, t in enumerate(tgts)}
        src_id[:, j] = [si[(c.p[j], c.v[j])] for c in prev]
        tgt_id[:, j] = [ti[(c.p[j], c.v[j])] for c in cur]
        arr = lambda xs: np.array(xs, dtype=np.int64)  # noqa: E731
        tab = be.box_tables(arr([s[0] for s in srcs]), arr([s[1] for s in srcs]),
                            arr([t[0] for t in tgts]), arr([t[1] for t in tgts]),
                            lo[j], hi[j], BOX_STEP_CAP)
        per_dim.append(tab)
    if be is kernel.python_backend:
        return src_id.tolist(), tgt_id.tolist(), per_dim
    ns = max(len(t) for t in per_dim)
    nt = max(len(t[0]) if len(t) else 0 for t in per_dim)
    tables = np.zeros((d, ns, nt), dtype=np.uint64)
    for j, t in enumerate(per_dim):
        t = np.asarray(t, dtype=np.uint64)
        tables[j, : t.shape[0], : t.shape[1]] = t
    return src_id, tgt_id, tables


def _raw_table(configs, be):
    """Interval lookup table covering every displacement and speed pair of the DP, if small enough."""
    if not hasattr(be, "raw_table"):
        return None
    slo = min(min(min(c.v) for c in cs) for cs in configs)
    shi = max(max(max(c.v) for c in cs) for cs in configs)
    dlo = dhi = 0
    for prev, cur in zip(configs, configs[1:]):
        d = prev[0].d
        for j in range(d):
            plo, phi = min(c.p[j] for c in prev), max(c.p[j] for c in prev)
            clo, chi = min(c.p[j] for c in cur), max(c.p[j] for c in cur)
            dlo, dhi = min(dlo, clo - phi), max(dhi, chi - plo)
    if (dhi - dlo + 1) * (shi - slo + 1) ** 2 > RAW_TABLE_LIMIT:
        return None
    return be.raw_table(dlo, dhi, slo, shi), dlo, slo


def _stage(prev, prev_cost, cur, x_prev, x_cur, box, be, raw=None):
    index = {c: i for i, c in enumerate(prev)}
    self_idx = np.array([index.get(c, -1) for c in cur], dtype=np.int64)
    self_zero = np.array(
        [i >= 0 and visit_order_ok(c, [x_prev, x_cur]) for c, i in zip(cur, self_idx)], dtype=np.uint8
    )
    box_args = _box_inputs(prev, cur, box, be) if box is not None else (None, None, None)
    if be is kernel.python_backend:
        costs, preds = be.dp_stage(
            [c.p for c in prev], [c.v for c in prev], [int(a) for a in prev_cost],
            [c.p for c in cur], [c.v for c in cur], self_idx.tolist(), self_zero.tolist(), *box_args,
        )
        return np.array(costs, dtype=np.int64), np.array(preds, dtype=np.int64)
    PP, PV = _as_arrays(prev)
    CP, CV = _as_arrays(cur)
    start, members, gmin, gvel = _groups(prev, prev_cost)
    extra = {} if raw is None or box is not None else {"raw": raw[0], "dlo": raw[1], "slo": raw[2]}
    return be.dp_stage(PP, PV, np.ascontiguousarray(prev_cost, dtype=np.int64), CP, CV, self_idx, self_zero,
                       start, members, gmin, gvel, *box_args, **extra)


def dp_solve(inst: Instance, sets: Sequence[CandidateSet], box=None, backend=None) -> DpResult:
    """Run the DP; ``box`` (lo, hi) keeps every configuration of every transition inside."""
    be = backend or kernel.backend
    if len(sets) != inst.n:
        raise InvalidInputError("need one candidate set per city")
    for cs in sets:
        if not cs.configs:
            raise InfeasibleError(f"candidate set of city {cs.city_index} is empty")
    configs = [sorted(cs.configs) for cs in sets]
    raw = _raw_table(configs, be) if box is None and be is not kernel.python_backend else None
    costs = [np.zeros(1, dtype=np.int64)]
    preds = [np.full(1, -1, dtype=np.int64)]
    for i in range(1, inst.n):
        c, p = _stage(configs[i - 1], costs[-1], configs[i], inst.points[i - 1], inst.points[i], box, be, raw)
        costs.append(c)
        preds.append(p)
    table = DpTable(configs, costs, preds)
    final = int(costs[-1][0])
    if final >= kernel.INF:
        raise InfeasibleError("no candidate chain connects the cities")
    seq = [configs[-1][0]]
    idx = 0
    steps = []
    for i in range(inst.n - 1, 0, -1):
        j = int(preds[i][idx])
        steps.append(int(costs[i][idx] - costs[i - 1][j]))
        idx = j
        seq.append(configs[i - 1][idx])
    seq.reverse()
    steps.reverse()
    return DpResult(final, seq, steps, table)


def filter_candidates(sets: Sequence[CandidateSet], c_1: Configuration, c_n: Configuration,
                      S: Optional[int], backend=None) -> list[CandidateSet]:
    """Drop inner candidates that no trajectory of length <= S can pass through."""
    be = backend or kernel.backend
    if S is None:
        return [CandidateSet(cs.city_index, list(cs.configs)) for cs in sets]
    out = []
    last = len(sets)
    for cs in sets:
        if cs.city_index in (1, last) or not cs.configs:
            out.append(CandidateSet(cs.city_index, list(cs.configs)))
            continue
        if be is kernel.python_backend:
            keep = be.filter_mask([c.p for c in cs.configs], [c.v for c in cs.configs],
                                  c_1.p, c_1.v, c_n.p, c_n.v, S)
        else:
            P, V = _as_arrays(cs.configs)
            keep = be.filter_mask(P, V, c_1.p, c_1.v, c_n.p, c_n.v, S)
        out.append(CandidateSet(cs.city_index, [c for c, k in zip(cs.configs, keep) if k]))
    return out


def warm_start_S(inst: Instance, smax: int = WARM_START_SMAX, box=None, backend=None) -> int:
    """Length of the DP optimum under a small speed cap; an upper bound on the optimum."""
    if inst.n == 1:
        return 0
    return dp_solve(inst, build_sets(inst, smax, box), box, backend).cost


def speed_bound(policy: SpeedBoundPolicy, S: Optional[int] = None, L: Optional[int] = None,
                tour: bool = False) -> int:
    if policy.mode == "fixed":
        if policy.smax is None:
            raise ConfigurationError("fixed policy needs smax")
        return policy.smax
    if policy.mode == "conservative":
        if S is None:
            raise ConfigurationError("conservative policy needs a warm-start length S")
        return S // 4 if tour else S // 2
    if policy.mode == "incremental":
        raise ConfigurationError("incremental policy picks smax while solving")
    if policy.mode == "conjecture":
        if L is None:
            raise ConfigurationError("conjecture policy needs the city spread L")
        return ceil_sqrt(L)
    raise ConfigurationError(f"unknown policy mode {policy.mode!r}")


@dataclass
class Solution:
    cost: int
    configs: list[Configuration]
    transitions: list[list[CompactTrajectory]]
    trajectory: Trajectory
    smax: int
    exact: bool
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "cost": self.cost,
            "exact": self.exact,
            "smax": self.smax,
            "visiting": [c.to_json() for c in self.configs],
            "transitions": [[ct.to_json() for ct in dims] for dims in self.transitions],
            "points": [list(c.p) for c in self.trajectory],
            "velocities": [list(c.v) for c in self.trajectory],
            "stats": self.stats,
        }


def box_witness_1d(x: int, s: int, x2: int, s2: int, ell: int, lo: int, hi: int) -> list[int]:
    """Speeds of an ell-step 1D path from (x, s) to (x2, s2) inside [lo, hi]."""
    layers = [{(x, s)}]
    for _ in range(ell):
        nxt = set()
        for z, w in layers[-1]:
            for u in (w - 1, w, w + 1):
                if lo <= z + u <= hi:
                    nxt.add((z + u, u))
        layers.append(nxt)
    state = (x2, s2)
    if state not in layers[-1]:
        raise InfeasibleError(f"no {ell}-step path from {(x, s)} to {state} inside [{lo}, {hi}]")
    speeds = []
    for t in range(ell, 0, -1):
        z, w = state
        speeds.append(w)
        for u in (w - 1, w, w + 1):
            if (z - w, u) in layers[t - 1]:
                state = (z - w, u)
                break
    speeds.reverse()
    return speeds


def _stitch(seq, steps, box):
    parts: list[Trajectory] = []
    transitions = []
    for a, b, ell in zip(seq, seq[1:], steps):
        if ell == 0:
            continue
        if box is None:
            built = construct(a, b, ell)
            dims, traj = list(built.dims), built.trajectory
        else:
            lo, hi = box
            dims = [
                CompactTrajectory.from_speeds(
                    a.project(j), box_witness_1d(a.p[j], a.v[j], b.p[j], b.v[j], ell, lo[j], hi[j])
                )
                for j in range(a.d)
            ]
            from .kinematics import expand

            traj = from_projections([expand(ct) for ct in dims])
        transitions.append(dims)
        parts.append(traj)
    configs = [seq[0]]
    for t in parts:
        configs.extend(t.configs[1:])
    return transitions, Trajectory(tuple(configs))


def _incremental(inst, S, box, use_filter, backend):
    """Raise smax from 1 until the cost stops dropping or the safe bound is hit.

    Stopping on the first non-improving step is a heuristic: the cost may
    plateau in smax and fall again later.
    """
    safe = speed_bound(SpeedBoundPolicy("conservative"), S=S, tour=inst.tour)
    prev = None
    smax = 0
    while True:
        smax += 1
        counts: list[int] = []
        sets = build_sets(inst, smax, box, S if use_filter else None, backend, counts)
        res = dp_solve(inst, sets, box, backend)
        if smax >= safe:
            return res, smax, counts, sets, True
        if prev is not None and res.cost >= prev[0].cost:
            return prev + (False,)
        prev = (res, smax, counts, sets)


def solve(inst: Instance, policy: SpeedBoundPolicy = SpeedBoundPolicy("conservative"),
          hull_margin: Optional[int] = None, use_filter: bool = True, backend=None) -> Solution:
    """Warm start, speed bound, candidates, filtering, DP and stitching.

    With ``hull_margin`` every configuration of the returned trajectory,
    not only the visiting ones, stays inside the cities' bounding box
    widened by the margin.
    """
    t0 = time.perf_counter()
    if inst.n == 1:
        c = Configuration.at_rest(inst.points[0])
        return Solution(0, [c], [], Trajectory((c,)), 0, policy.exact,
                        {"warm_start": 0, "candidates": 1, "after_filter": 1, "runtime_ms": 0.0,
                         "backend": (backend or kernel.backend).NAME})
    box = inst.bounding_box(hull_margin) if hull_margin is not None else None
    S = warm_start_S(inst, box=box, backend=backend)
    exact = policy.exact
    if policy.mode == "incremental":
        res, smax, counts, sets, exact = _incremental(inst, S, box, use_filter, backend)
    else:
        smax = speed_bound(policy, S=S, L=inst.spread(), tour=inst.tour)
        counts = []
        sets = build_sets(inst, smax, box, S if use_filter else None, backend, counts)
        res = dp_solve(inst, sets, box, backend)
    total = sum(counts)
    kept = sum(len(cs) for cs in sets)
    transitions, traj = _stitch(res.sequence, res.steps, box)
    stats = {
        "warm_start": S,
        "candidates": total,
        "after_filter": kept,
        "runtime_ms": round((time.perf_counter() - t0) * 1000, 3),
        "backend": (backend or kernel.backend).NAME,
    }
    log.debug("solve: %s", stats)
    return Solution(res.cost, res.sequence, transitions, traj, smax, exact, stats)
