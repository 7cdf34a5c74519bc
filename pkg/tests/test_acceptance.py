"""Acceptance criteria, one test each, every one printing a PASS/FAIL line.

Run alone with ``pytest -v tests/test_acceptance.py``; verdicts are repeated
in the terminal summary under "acceptance".
"""
import random
import time
import warnings
from fractions import Fraction

import numpy as np

from racetrack.branching_cost import branching_cost, feasible_lengths_1d, per_dimension
from racetrack.branching_trajectory import construct_1d
from racetrack.cli import bench_records
from racetrack.instances import crossover_n0, gen_random, gen_slope, ntu_lower_bound, tu_cost
from racetrack.intervals import MultiInterval
from racetrack.kinematics import Configuration, config1, expand, validate_trajectory
from racetrack.multipoint import Instance, SpeedBoundPolicy, solve
from racetrack.oracle import SearchBounds, bfs_branching, bfs_multipoint, sweep_1d

POS, SPEED, T_MAX = 30, 6, 60


def _fastest(fn, repeats=200):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best * 1000.0


def test_golden_values(verdict):
    diagonal = (Configuration((1, 2), (1, 2)), Configuration((12, 3), (2, 1)))
    vertical = (Configuration((1, 3), (0, 3)), Configuration((7, 6), (0, 3)))
    pair = (config1(0, 6), config1(24, 5))
    c2, ms2 = _fastest(lambda: branching_cost(*diagonal))
    c3, ms3 = _fastest(lambda: branching_cost(*vertical))
    dims3 = per_dimension(*vertical)
    iv, ms1 = _fastest(lambda: feasible_lengths_1d(*pair))
    ok = (
        c2 == 5
        and c3 == 11
        and dims3[0].min() == 5
        and dims3[1] == MultiInterval(((1, 1),), 11)
        and iv == MultiInterval(((4, 6),), 16)
        and max(ms1, ms2, ms3) < 1.0
    )
    verdict(1, "golden branching values", ok,
            f"diagonal={c2} vertical={c3} x-min={dims3[0].min()} y={dims3[1]} 1d={iv} "
            f"max {max(ms1, ms2, ms3):.3f} ms")


def test_cost_sweep(verdict):
    t0 = time.perf_counter()
    rep = sweep_1d(POS, SPEED, T_MAX)
    secs = time.perf_counter() - t0
    # negative control: an off-by-one formula must be caught
    broken = sweep_1d(4, 2, 12, formula=lambda c, c2: feasible_lengths_1d(c, c2).shift(1))
    ok = rep.ok and not broken.ok and secs < 300
    verdict(2, "1D cost formula equals layered search", ok,
            f"{rep.pairs} pairs, {rep.mismatches} mismatches, {secs:.1f} s, "
            f"negative control mismatches={broken.mismatches}")


def _segments_valid(ct, c, c2, ell):
    return (
        ct.start == c
        and ct.length == ell
        and ct.end() == c2
        and len(ct.segments) <= 5
        and all(seg.action in (-1, 0, 1) and seg.count > 0 for seg in ct.segments)
    )


def test_trajectory_sweep(verdict):
    # construct_1d reads positions only through x' - x, so each displacement
    # class is covered once per length with the start rotated across the box;
    # the equivariance pass below checks that claim on every class.
    t0 = time.perf_counter()
    checked = bad = expanded = 0
    rot = 0
    for dx in range(-2 * POS, 2 * POS + 1):
        starts = list(range(max(-POS, -POS - dx), min(POS, POS - dx) + 1))
        for s in range(-SPEED, SPEED + 1):
            for s2 in range(-SPEED, SPEED + 1):
                x = starts[rot % len(starts)]
                rot += 1
                c, c2 = config1(x, s), config1(x + dx, s2)
                lengths = feasible_lengths_1d(c, c2).members(T_MAX)
                for ell in sorted(lengths):
                    ct = construct_1d(c, c2, ell)
                    checked += 1
                    ok = _segments_valid(ct, c, c2, ell)
                    if ok and checked % 97 == 0:
                        traj = expand(ct)
                        ok = validate_trajectory(traj) and traj.configs[-1] == c2
                        expanded += 1
                    bad += not ok
                if lengths:
                    ell = min(lengths)
                    ref = construct_1d(c, c2, ell).segments
                    for x0 in (starts[0], starts[len(starts) // 2], starts[-1]):
                        other = construct_1d(config1(x0, s), config1(x0 + dx, s2), ell).segments
                        bad += other != ref
    secs = time.perf_counter() - t0
    verdict(3, "construct_1d witnesses for every feasible length", bad == 0 and secs < 600,
            f"{checked} constructions, {expanded} expanded step by step, {bad} failures, {secs:.1f} s")


def test_branching_vs_search(verdict):
    rng = random.Random(4)
    bounds = {d: SearchBounds((-80,) * d, (80,) * d, 15, 100) for d in (2, 3)}
    bad = []
    t0 = time.perf_counter()
    for i in range(1000):
        d = 2 + i % 2
        c = Configuration(tuple(rng.randint(-20, 20) for _ in range(d)), tuple(rng.randint(-5, 5) for _ in range(d)))
        c2 = Configuration(tuple(rng.randint(-20, 20) for _ in range(d)), tuple(rng.randint(-5, 5) for _ in range(d)))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            want = bfs_branching(c, c2, bounds[d])
        if branching_cost(c, c2) != want:
            bad.append((c, c2))
    verdict(4, "d-dimensional cost equals best-first search", not bad,
            f"1000 pairs, {len(bad)} mismatches, {time.perf_counter() - t0:.1f} s")


def test_dp_vs_search(verdict):
    rng = random.Random(5)
    bad = []
    for _ in range(200):
        n = rng.randint(2, 4)
        pts = tuple((rng.randint(0, 7), rng.randint(0, 7)) for _ in range(n))
        got = solve(Instance(pts), SpeedBoundPolicy("conservative")).cost
        if got != bfs_multipoint(pts):
            bad.append(pts)
    verdict(5, "multipoint DP equals search over (configuration, progress)", not bad,
            f"200 instances, {len(bad)} mismatches")


def _filter_instances():
    rng = random.Random(6)
    out = []
    for seed in range(100):
        n, L = rng.randint(2, 10), rng.randint(4, 30)
        out.append(gen_random(n, L, 2, seed=seed))
    return out


def test_filter_soundness(verdict):
    bad = removed = total = 0
    for inst in _filter_instances():
        a = solve(inst)
        b = solve(inst, use_filter=False)
        bad += a.cost != b.cost
        total += a.stats["candidates"]
        removed += a.stats["candidates"] - a.stats["after_filter"]
    verdict(6, "length filter never changes the optimum", bad == 0,
            f"100 instances, {bad} mismatches, removal ratio {removed / total:.3f}")


def test_speed_bound_safety(verdict):
    bad = 0
    for inst in _filter_instances():
        a = solve(inst, SpeedBoundPolicy("conservative"))
        S = a.stats["warm_start"]
        b = solve(inst, SpeedBoundPolicy("fixed", S))
        bad += a.cost != b.cost
    verdict(7, "half warm-start speed bound keeps the optimum", bad == 0, f"100 instances, {bad} mismatches")


def _first_crossing(k, delta, limit=100_000):
    for n in range(1, limit):
        if tu_cost(n, k, delta) < ntu_lower_bound(n, delta):
            return n
    return None


def test_crossover(verdict):
    n0 = crossover_n0(1, 7)
    head = (
        n0 == 187
        and tu_cost(187, 1, 7) == 223
        and ntu_lower_bound(187, 7) == Fraction(223 * 6 + 1, 6)
        and tu_cost(186, 1, 7) >= ntu_lower_bound(186, 7)
    )
    grid_bad = []
    for k in range(1, 4):
        for delta in range(7, 13):
            m = crossover_n0(k, delta)
            if m != _first_crossing(k, delta):
                grid_bad.append((k, delta, "n0"))
            if any(tu_cost(n, k, delta) >= ntu_lower_bound(n, delta) for n in range(m, m + 51)):
                grid_bad.append((k, delta, "range"))
    verdict(8, "turning trajectories win from the crossover on", head and not grid_bad,
            f"n0(1,7)={n0}, tu(187)={tu_cost(187, 1, 7)}, ntu(187)={ntu_lower_bound(187, 7)}, "
            f"grid failures {grid_bad}")


def test_hull_excursion(verdict):
    inst = gen_slope(60, 7)
    pol = SpeedBoundPolicy("conjecture")
    t0 = time.perf_counter()
    free = solve(inst, pol)
    boxed = solve(inst, pol, hull_margin=0)
    secs = time.perf_counter() - t0
    lo = min(p[0] for p in inst.points)
    dips = min(c.p[0] for c in free.trajectory.configs) < lo
    verdict(9, "leaving the bounding box pays off on the slope family", boxed.cost > free.cost and secs < 600,
            f"unrestricted {free.cost} (leaves box: {dips}), box-restricted {boxed.cost}, {secs:.1f} s")


def test_runtime_scaling(verdict):
    ns = list(range(5, 41, 5))
    recs = bench_records([(n, 100) for n in ns], ["conjecture"], repeats=3)
    x = np.array([r.n for r in recs], dtype=float)
    y = np.array([r.runtime_ms for r in recs], dtype=float)
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    verdict(10, "conjecture-bound runtime grows linearly in n", r2 >= 0.9,
            f"R^2={r2:.3f}, slope {slope:.1f} ms/city, runtimes {[round(v) for v in y]}")
