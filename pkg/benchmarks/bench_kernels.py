"""Compare the compiled kernel with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--n 6] [--L 20] [--repeats 3]

Every timed call is checked for identical output across backends.
"""
import argparse
import sys
import time

import numpy as np

from racetrack import kernel
from racetrack.instances import gen_random
from racetrack.multipoint import build_sets, dp_solve, warm_start_S


def best_of(fn, repeats):
    best, out = float("inf"), None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_feasible(be):
    # the fallback shares the closed form with the rest of the package
    f = be.feasible_1d if be is kernel.compiled_backend else be.feasible_raw
    out = []
    for s in range(-6, 7):
        for s2 in range(-6, 7):
            for dx in range(-60, 61):
                out.append(tuple(f(0, s, dx, s2)))
    return out


def bench_box(be, as_arrays):
    xs = list(range(0, 21))
    src_x = [x for x in xs for _ in range(5)]
    src_s = [s for _ in xs for s in range(-2, 3)]
    if as_arrays:
        arr = lambda v: np.array(v, dtype=np.int64)  # noqa: E731
        res = be.box_tables(arr(src_x), arr(src_s), arr(src_x), arr(src_s), 0, 20, 63)
        return [[int(v) for v in row] for row in res]
    return be.box_tables(src_x, src_s, src_x, src_s, 0, 20, 63)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--L", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    c, py = kernel.compiled_backend, kernel.python_backend
    if c is None:
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1

    inst = gen_random(args.n, args.L, 2, seed=args.seed)
    S = warm_start_S(inst)
    sets = build_sets(inst, max(1, S // 2), S=S)

    rows = []
    tp, outp = best_of(lambda: bench_feasible(py), args.repeats)
    tc, outc = best_of(lambda: bench_feasible(c), args.repeats)
    rows.append(("feasible_1d x 20449", tp, tc, outp == outc))
    tp, outp = best_of(lambda: bench_box(py, False), args.repeats)
    tc, outc = best_of(lambda: bench_box(c, True), args.repeats)
    rows.append(("box_tables 105x105", tp, tc, outp == outc))
    tp, outp = best_of(lambda: dp_solve(inst, sets, backend=py), 1)
    tc, outc = best_of(lambda: dp_solve(inst, sets, backend=c), args.repeats)
    rows.append((f"dp_solve n={args.n} L={args.L} ({sum(len(s.configs) for s in sets)} cand.)",
                 tp, tc, outp.cost == outc.cost))

    print(f"{'kernel':<44}{'python s':>12}{'cython s':>12}{'speedup':>10}  same")
    for name, tp, tc, same in rows:
        print(f"{name:<44}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x  {same}")
    return 0 if all(r[3] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
