import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racetrack import kernel, multipoint
from racetrack.branching_cost import branching_cost, feasible_raw
from racetrack.kinematics import Configuration
from racetrack.multipoint import Instance, build_sets, dp_solve

from strategies import configs

compiled = pytest.mark.skipif(kernel.compiled_backend is None, reason="compiled kernel not built")
py = kernel.python_backend


def test_backend_selection():
    assert kernel.backend.NAME in ("cython", "python")
    assert py.NAME == "python"


@compiled
def test_feasible_parity():
    c = kernel.compiled_backend
    for s in range(-8, 9):
        for s2 in range(-8, 9):
            for dx in range(-80, 81, 3):
                assert tuple(c.feasible_1d(0, s, dx, s2)) == feasible_raw(0, s, dx, s2)


@given(configs(3), configs(3))
def test_python_cost_matches_reference(c, c2):
    assert py.cost_nd(c.p, c.v, c2.p, c2.v) == branching_cost(c, c2)


@compiled
@given(configs(3), configs(3))
def test_compiled_cost_matches_reference(c, c2):
    assert kernel.compiled_backend.cost_nd(c.p, c.v, c2.p, c2.v) == branching_cost(c, c2)


@compiled
def test_raw_table_matches_direct():
    tab = kernel.compiled_backend.raw_table(-30, 30, -5, 5)
    for i, dx in enumerate(range(-30, 31)):
        for j, s in enumerate(range(-5, 6)):
            for k, s2 in enumerate(range(-5, 6)):
                a, b, t = feasible_raw(0, s, dx, s2)
                assert tuple(tab[i, j, k]) == (a, b, t)


def random_instances(count, seed, box=9, n_max=5):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, n_max)
        yield Instance(tuple((rng.randint(0, box), rng.randint(0, box)) for _ in range(n)))


@compiled
@pytest.mark.parametrize("seed", range(4))
def test_dp_parity(seed, monkeypatch):
    """Brute-force Python DP, pruned compiled DP and the table-driven compiled DP agree exactly."""
    for inst in random_instances(6, seed):
        sets = build_sets(inst, 2)
        a = dp_solve(inst, sets, backend=py)
        b = dp_solve(inst, sets, backend=kernel.compiled_backend)
        monkeypatch.setattr(multipoint, "RAW_TABLE_LIMIT", 0)
        c = dp_solve(inst, sets, backend=kernel.compiled_backend)
        monkeypatch.undo()
        assert a.cost == b.cost == c.cost
        assert a.sequence == b.sequence == c.sequence
        for x, y in zip(a.table.costs, b.table.costs):
            assert np.array_equal(x, y)


@compiled
@pytest.mark.parametrize("seed", range(3))
def test_boxed_dp_parity(seed):
    for inst in random_instances(4, 100 + seed, box=6, n_max=4):
        box = inst.bounding_box(1)
        sets = build_sets(inst, 2, box)
        a = dp_solve(inst, sets, box, backend=py)
        b = dp_solve(inst, sets, box, backend=kernel.compiled_backend)
        assert (a.cost, a.sequence) == (b.cost, b.sequence)


@compiled
def test_filter_parity():
    inst = Instance(((0, 0), (6, 2), (3, 9), (8, 8)))
    sets = build_sets(inst, 4)
    first, last = sets[0].configs[0], sets[-1].configs[0]
    for cs in sets[1:-1]:
        P = np.array([c.p for c in cs.configs], dtype=np.int64)
        V = np.array([c.v for c in cs.configs], dtype=np.int64)
        want = py.filter_mask(P.tolist(), V.tolist(), first.p, first.v, last.p, last.v, 20)
        got = kernel.compiled_backend.filter_mask(P, V, first.p, first.v, last.p, last.v, 20)
        assert list(map(bool, got)) == list(map(bool, want))


@compiled
@settings(max_examples=30)
@given(st.integers(-8, 8), st.integers(-3, 3), st.integers(-8, 8), st.integers(-3, 3))
def test_box_table_parity(x, s, x2, s2):
    srcs = np.array([x], dtype=np.int64), np.array([s], dtype=np.int64)
    tgts = np.array([x2], dtype=np.int64), np.array([s2], dtype=np.int64)
    got = kernel.compiled_backend.box_tables(*srcs, *tgts, -10, 10, 63)
    want = py.box_tables(*srcs, *tgts, -10, 10, 63)
    assert int(got[0][0]) == int(want[0][0])


@compiled
@settings(max_examples=100)
@given(st.integers(0, 3), st.lists(st.tuples(st.integers(-2, 5), st.integers(-6, 6)), min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(-2, 5), st.integers(-6, 6)), min_size=1, max_size=4))
def test_box_table_parity_narrow_box(w, srcs, tgts):
    # speeds and positions may fall outside a narrow box
    arr = lambda xs: np.array(xs, dtype=np.int64)  # noqa: E731
    sx, ss = arr([a for a, _ in srcs]), arr([b for _, b in srcs])
    tx, ts = arr([a for a, _ in tgts]), arr([b for _, b in tgts])
    got = kernel.compiled_backend.box_tables(sx, ss, tx, ts, 0, w, 63)
    want = py.box_tables(sx.tolist(), ss.tolist(), tx.tolist(), ts.tolist(), 0, w, 63)
    assert [[int(v) for v in r] for r in got] == want


def test_tie_break_prefers_lexicographically_smallest():
    # two symmetric predecessors give equal totals; the smaller (p, v) must win
    inst = Instance(((0, 0), (2, 0), (4, 0)))
    sets = build_sets(inst, 2)
    for be in filter(None, (py, kernel.compiled_backend)):
        res = dp_solve(inst, sets, backend=be)
        stage = res.table
        for i in range(1, inst.n):
            for k, c in enumerate(stage.configs[i]):
                j = int(stage.preds[i][k])
                if j < 0:
                    continue
                best = int(stage.costs[i][k])
                for jj in range(j):
                    p = stage.configs[i - 1][jj]
                    if stage.costs[i - 1][jj] >= kernel.INF:
                        continue
                    if p == c:
                        continue
                    assert stage.costs[i - 1][jj] + branching_cost(p, c) > best
