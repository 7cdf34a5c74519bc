from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from racetrack.errors import DomainError, InvalidInputError
from racetrack.instances import (
    N0_QUADRATIC_CONSTANT,
    SlopeFamily,
    SplitMix64,
    crossover_n0,
    gen_random,
    gen_slope,
    ntu_lower_bound,
    tu_cost,
)
from racetrack.intmath import ceil_sqrt


def test_splitmix_reference_stream():
    # published SplitMix64 outputs for seed 0
    rng = SplitMix64(0)
    assert [rng.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_random_single_point():
    inst = gen_random(1, 5, 2, seed=3)
    assert inst.n == 1 and all(0 <= a <= 5 for a in inst.points[0])


def test_random_is_deterministic():
    assert gen_random(10, 100, 2, seed=7) == gen_random(10, 100, 2, seed=7)
    assert gen_random(10, 100, 2, seed=7) != gen_random(10, 100, 2, seed=8)


def test_random_range():
    inst = gen_random(10, 100, 2, seed=1)
    assert inst.n == 10 and inst.d == 2
    assert all(0 <= a <= 100 for p in inst.points for a in p)


def test_random_covers_both_ends():
    vals = {a for p in gen_random(400, 3, 1, seed=0).points for a in p}
    assert vals == {0, 1, 2, 3}


def test_random_rejects_bad_sizes():
    with pytest.raises(InvalidInputError):
        gen_random(0, 5)
    with pytest.raises(InvalidInputError):
        gen_random(3, 0)


def test_slope():
    assert gen_slope(2, 7).points == ((0, 0), (7, -1), (14, -2))
    assert gen_slope(0, 7).points == ((0, 0),)
    assert gen_slope(60, 7).n == 61
    with pytest.raises(DomainError):
        SlopeFamily(5, 6)


def test_lower_bound():
    assert ntu_lower_bound(60, 7) == 75
    assert ntu_lower_bound(0, 7) == 5
    assert ntu_lower_bound(186, 7) == 222
    assert ntu_lower_bound(187, 7) == Fraction(1339, 6)
    with pytest.raises(DomainError):
        ntu_lower_bound(5, 1)


def test_tu_cost():
    assert ceil_sqrt(21) == 5
    assert tu_cost(60, 1, 7) == 96
    assert tu_cost(187, 1, 7) == 223
    assert tu_cost(10, 1, 1) == 10 + 2 + 0 + 2
    assert tu_cost(5, 2, 7) == Fraction(5, 2) + 28 + 4 * ceil_sqrt(91) + 2


def scan_n0(k, delta):
    n = 0
    while not tu_cost(n, k, delta) < ntu_lower_bound(n, delta):
        n += 1
    return n


def test_crossover_examples():
    assert crossover_n0(1, 7) == 187
    assert tu_cost(186, 1, 7) == ntu_lower_bound(186, 7)
    assert crossover_n0(2, 7) == scan_n0(2, 7) == 98


@pytest.mark.parametrize("k", range(1, 5))
@pytest.mark.parametrize("delta", range(2, 21))
def test_crossover_is_the_first_crossing(k, delta):
    n0 = crossover_n0(k, delta)
    assert n0 == scan_n0(k, delta)
    assert tu_cost(n0, k, delta) < ntu_lower_bound(n0, delta)
    assert tu_cost(n0 - 1, k, delta) >= ntu_lower_bound(n0 - 1, delta)
    assert n0 <= N0_QUADRATIC_CONSTANT * (k * delta) ** 2


@given(st.integers(1, 4), st.integers(7, 20), st.integers(0, 500))
def test_crossing_persists(k, delta, extra):
    n = crossover_n0(k, delta) + extra
    assert tu_cost(n, k, delta) < ntu_lower_bound(n, delta)


def test_crossover_domain():
    with pytest.raises(DomainError):
        crossover_n0(0, 7)
    with pytest.raises(DomainError):
        crossover_n0(1, 1)


def test_slope_family_fields():
    fam = SlopeFamily(187, 7, 1)
    assert fam.n0 == 187
    assert fam.tu_cost() < fam.ntu_lower_bound()
    assert fam.instance().points[-1] == (187 * 7, -187)
