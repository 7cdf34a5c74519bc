"""Command-line front end.

Configurations are written ``x1,..,xd@v1,..,vd``, e.g. ``0,0@1,-2``.
Exit codes: 0 success, 1 oracle mismatch, 2 usage or parse error,
3 infeasible, 4 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

from . import __version__
from .branching_cost import branching_cost, feasible_lengths, per_dimension
from .branching_trajectory import construct
from .errors import (
    ConfigurationError,
    DomainError,
    InfeasibleError,
    InvalidInputError,
    ResourceError,
    UnsupportedError,
)
from .instances import gen_random, gen_slope
from .kinematics import Configuration, Trajectory
from .multipoint import Instance, SpeedBoundPolicy, solve

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_RESOURCE = 0, 1, 2, 3, 4
BENCH_CSV_VERSION = 1

log = logging.getLogger("racetrack")


def parse_config(text: str) -> Configuration:
    try:
        pos, vel = text.split("@")
        p = tuple(int(a) for a in pos.split(","))
        v = tuple(int(a) for a in vel.split(","))
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse configuration {text!r}; expected x1,..,xd@v1,..,vd") from exc
    if len(p) != len(v):
        raise InvalidInputError(f"{text!r}: position and velocity differ in dimension")
    return Configuration(p, v)


def format_config(c: Configuration) -> str:
    return ",".join(map(str, c.p)) + "@" + ",".join(map(str, c.v))


def _config_arg(text: str) -> Configuration:
    try:
        return parse_config(text)
    except InvalidInputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(a) for a in text.split(",") if a]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc


def _emit(obj, out: Optional[str]) -> None:
    text = json.dumps(obj, indent=None if out is None else 1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- commands ------------------------------------------------------------------


def cmd_cost(args) -> int:
    c, c2 = args.source, args.target
    print(branching_cost(c, c2))
    if c.d > 1 or args.verbose:
        for j, mi in enumerate(per_dimension(c, c2)):
            print(f"dim {j}: {mi}")
        print(f"all: {feasible_lengths(c, c2)}")
    return EXIT_OK


def cmd_traj(args) -> int:
    built = construct(args.source, args.target, args.length)
    _emit(built.to_json(expand_points=args.expand), args.out)
    return EXIT_OK


def _policy(args) -> SpeedBoundPolicy:
    if args.policy == "fixed" and args.smax is None:
        raise ConfigurationError("--policy fixed needs --smax")
    return SpeedBoundPolicy(args.policy, args.smax)


def cmd_multi(args) -> int:
    inst = Instance.from_json(_read_json(args.input))
    sol = solve(inst, _policy(args), hull_margin=args.hull_margin, use_filter=not args.no_filter)
    out = sol.to_json()
    out["cities"] = [list(p) for p in inst.points]
    _emit(out, args.out)
    return EXIT_OK


@dataclass
class BenchRecord:
    n: int
    L: int
    d: int
    policy: str
    candidate_count: int
    runtime_ms: float
    cost: int


def bench_records(points: Sequence[tuple[int, int]], policies: Sequence[str], d: int = 2, seed: int = 0,
                  smax: Optional[int] = None, repeats: int = 1) -> list[BenchRecord]:
    """One record per (n, L, policy); runtime is the best of ``repeats`` runs."""
    records = []
    for n, L in points:
        inst = gen_random(n, L, d, seed=seed * 1_000_003 + n * 1009 + L)
        for pol in policies:
            best = None
            for _ in range(repeats):
                sol = solve(inst, SpeedBoundPolicy(pol, smax))
                if best is None or sol.stats["runtime_ms"] < best.stats["runtime_ms"]:
                    best = sol
            records.append(BenchRecord(n, L, d, pol, best.stats["after_filter"], best.stats["runtime_ms"],
                                       best.cost))
    return records


def write_bench_csv(records: Sequence[BenchRecord], fh) -> None:
    names = [f.name for f in fields(BenchRecord)]
    fh.write(f"# racetrack bench csv v{BENCH_CSV_VERSION}: {','.join(names)}\n")
    w = csv.DictWriter(fh, fieldnames=names, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(asdict(r))


def cmd_bench(args) -> int:
    points = []
    if args.sweep in ("n", "both"):
        points += [(n, args.fixed_L) for n in args.n_values]
    if args.sweep in ("L", "both"):
        points += [(args.fixed_n, L) for L in args.L_values]
    records = bench_records(points, args.policy, args.d, args.seed, args.smax, args.repeats)
    if args.out:
        with open(args.out, "w") as fh:
            write_bench_csv(records, fh)
    else:
        write_bench_csv(records, sys.stdout)
    return EXIT_OK


def _trajectory_from_json(obj) -> tuple[Optional[Trajectory], list]:
    cities = obj.get("cities", [])
    if "points" in obj and "velocities" in obj and "d" not in obj:
        configs = tuple(Configuration(tuple(p), tuple(v)) for p, v in zip(obj["points"], obj["velocities"]))
        return (Trajectory(configs) if configs else None), cities
    if "points" in obj:  # an instance file: cities only
        return None, obj["points"]
    raise InvalidInputError("expected a trajectory (points + velocities) or an instance")


def cmd_plot(args) -> int:
    from .svg import render

    traj, cities = _trajectory_from_json(_read_json(args.input))
    text = render(traj, cities)
    with open(args.out, "w") as fh:
        fh.write(text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from . import oracle

    if args.subject == "sweep":
        rep = oracle.sweep_1d(args.pos, args.speed, args.t_max)
        for ex in rep.examples:
            print("mismatch x=%d s=%d x2=%d s2=%d formula=%s search=%s" % (*ex[:4], bin(ex[4]), bin(ex[5])))
        print(f"{'PASS' if rep.ok else 'FAIL'} sweep: {rep.pairs} pairs, t <= {args.t_max}, "
              f"{rep.mismatches} mismatches")
        return EXIT_OK if rep.ok else EXIT_MISMATCH
    if args.subject == "pair":
        c, c2 = args.source, args.target
        mi = feasible_lengths(c, c2)
        bounds = oracle.default_bounds([c.p, c2.p], speed_cap=max(args.speed_cap, *map(abs, c.v + c2.v)))
        found = oracle.feasible_lengths_bfs(c, c2, bounds, args.t_max)
        expected = {t for t in range(args.t_max + 1) if t in mi}
        print(f"formula: {mi}")
        print(f"search:  {sorted(found) if len(found) < 40 else _compress(found)}")
        ok = found == expected
        print(f"{'PASS' if ok else 'FAIL'} pair {format_config(c)} -> {format_config(c2)} (t <= {args.t_max})")
        return EXIT_OK if ok else EXIT_MISMATCH
    if args.subject == "multi":
        inst = Instance.from_json(_read_json(args.input))
        got = solve(inst, _policy(args)).cost
        want = oracle.bfs_multipoint(inst.points)
        ok = got == want
        print(f"{'PASS' if ok else 'FAIL'} multi: dp={got} search={want}")
        return EXIT_OK if ok else EXIT_MISMATCH
    raise InvalidInputError(f"unknown oracle subject {args.subject}")


def _compress(ts) -> str:
    ts = sorted(ts)
    runs = []
    start = prev = ts[0]
    for t in ts[1:]:
        if t != prev + 1:
            runs.append((start, prev))
            start = t
        prev = t
    runs.append((start, prev))
    return " U ".join(f"[{a},{b}]" for a, b in runs)


def cmd_gen(args) -> int:
    if args.kind == "random":
        inst = gen_random(args.n, args.L, args.d, args.seed)
    else:
        inst = gen_slope(args.n, args.delta)
    if args.tour:
        inst = Instance(inst.points + (inst.points[0],), tour=True)
    _emit(inst.to_json(), args.out)
    return EXIT_OK


# --- parser --------------------------------------------------------------------------


def _add_policy(p) -> None:
    p.add_argument("--policy", choices=["fixed", "conservative", "conjecture", "incremental"], default="conservative")
    p.add_argument("--smax", type=int, help="speed cap for --policy fixed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="racetrack", description="Shortest racetrack trajectories on Z^d.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--log-level", default="WARNING")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cost", help="shortest length between two configurations")
    p.add_argument("source", type=_config_arg)
    p.add_argument("target", type=_config_arg)
    p.add_argument("-v", "--verbose", action="store_true", help="print intervals even for d=1")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("traj", help="a trajectory between two configurations")
    p.add_argument("source", type=_config_arg)
    p.add_argument("target", type=_config_arg)
    p.add_argument("--length", type=int)
    p.add_argument("--expand", action="store_true", help="include every configuration")
    p.add_argument("--out")
    p.set_defaults(func=cmd_traj)

    p = sub.add_parser("multi", help="visit the cities of an instance file in order")
    p.add_argument("input", help="instance JSON, or - for stdin")
    _add_policy(p)
    p.add_argument("--hull-margin", type=int)
    p.add_argument("--no-filter", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_multi)

    p = sub.add_parser("bench", help="runtime sweeps as CSV")
    p.add_argument("--sweep", choices=["n", "L", "both"], default="both")
    p.add_argument("--n-values", type=_int_list, default=list(range(5, 45, 5)))
    p.add_argument("--L-values", type=_int_list, default=list(range(20, 220, 20)))
    p.add_argument("--fixed-L", type=int, default=100)
    p.add_argument("--fixed-n", type=int, default=10)
    p.add_argument("--policy", type=lambda s: s.split(","), default=["conjecture"])
    p.add_argument("--smax", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("plot", help="render a 2D trajectory or instance as SVG")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("oracle", help="check closed forms against brute-force search")
    osub = p.add_subparsers(dest="subject", required=True)
    q = osub.add_parser("sweep")
    q.add_argument("--pos", type=int, default=30)
    q.add_argument("--speed", type=int, default=6)
    q.add_argument("--t-max", type=int, default=60)
    q = osub.add_parser("pair")
    q.add_argument("source", type=_config_arg)
    q.add_argument("target", type=_config_arg)
    q.add_argument("--t-max", type=int, default=60)
    q.add_argument("--speed-cap", type=int, default=12)
    q = osub.add_parser("multi")
    q.add_argument("input")
    _add_policy(q)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument("kind", choices=["random", "slope"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, default=100)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=int, default=7)
    p.add_argument("--tour", action="store_true", help="append the first city at the end")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidInputError, DomainError, ConfigurationError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
