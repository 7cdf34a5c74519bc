import pytest
from hypothesis import given
from hypothesis import strategies as st

from racetrack.errors import InvalidInputError
from racetrack.kinematics import (
    ACCEL,
    DECEL,
    HOLD,
    CompactTrajectory,
    Configuration,
    ControlSegment,
    Trajectory,
    assemble,
    canonical_segments,
    config1,
    expand,
    project,
    validate_trajectory,
    visit_order_ok,
    visits,
    visits_in_order,
)


def path(points, v0):
    """Trajectory through explicit points; velocities are the differences."""
    configs = [Configuration(points[0], v0)]
    for a, b in zip(points, points[1:]):
        configs.append(Configuration(b, tuple(y - x for x, y in zip(a, b))))
    return Trajectory(tuple(configs))


def test_single_configuration_is_valid():
    assert validate_trajectory(Trajectory((Configuration((3, -4), (7, 7)),)))


def test_drawn_2d_example_solid_part_is_valid():
    pts = [(5, 1), (8, 2), (10, 4), (11, 6), (11, 7), (10, 8), (8, 8), (5, 8)]
    t = path(pts, (3, 1))
    assert validate_trajectory(t)
    assert [c.v for c in t][1:] == [(3, 1), (2, 2), (1, 2), (0, 1), (-1, 1), (-2, 0), (-3, 0)]


def test_drawn_2d_example_with_dashed_leadin_breaks_acceleration():
    t = path([(0, 1), (5, 1), (8, 2)], (0, 0))
    assert not validate_trajectory(t)


def test_velocity_jump_of_two_is_invalid():
    t = Trajectory((Configuration((0, 0), (0, 0)), Configuration((2, 0), (2, 0))))
    assert not validate_trajectory(t)


def test_position_inconsistency_is_invalid():
    t = Trajectory((config1(0, 1), config1(3, 1)))
    assert not validate_trajectory(t)


def test_mixed_dimensions_rejected():
    with pytest.raises(InvalidInputError):
        validate_trajectory(Trajectory((config1(0, 0), Configuration((0, 0), (0, 0)))))


def test_configuration_needs_matching_dims():
    with pytest.raises(InvalidInputError):
        Configuration((0, 0), (1,))


@pytest.mark.parametrize(
    "c, x, expected",
    [
        (Configuration((5, 5), (0, 0)), (5, 5), True),
        (Configuration((4, 2), (4, 2)), (2, 1), True),
        (Configuration((4, 2), (4, 2)), (1, 1), False),
        (Configuration((4, 2), (4, 2)), (0, 0), True),
        (Configuration((4, 2), (4, 2)), (4, 2), True),
        (Configuration((4, 2), (4, 2)), (6, 3), False),
        (Configuration((5, 5), (0, 0)), (5, 6), False),
    ],
)
def test_visits(c, x, expected):
    assert visits(c, x) is expected


def test_visits_matches_segment_enumeration():
    # brute force: lattice points t*(p-v) + (1-t)*p for rational t, checked by cross product
    for vx in range(-4, 5):
        for vy in range(-4, 5):
            c = Configuration((vx, vy), (vx, vy))
            for x in range(-5, 6):
                for y in range(-5, 6):
                    on_line = vx * y - vy * x == 0
                    between = min(0, vx) <= x <= max(0, vx) and min(0, vy) <= y <= max(0, vy)
                    assert visits(c, (x, y)) == (on_line and between)


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6),
       st.integers(-9, 9), st.integers(-9, 9), st.integers(-20, 20), st.integers(-20, 20))
def test_visits_translation_and_negation(px, py, vx, vy, x, y, tx, ty):
    c = Configuration((px, py), (vx, vy))
    base = visits(c, (x, y))
    assert visits(Configuration((px + tx, py + ty), (vx, vy)), (x + tx, y + ty)) == base
    assert visits(Configuration((-px, -py), (-vx, -vy)), (-x, -y)) == base


def test_visit_order():
    c = Configuration((4, 2), (4, 2))
    xs = [(0, 0), (2, 1), (4, 2)]
    assert visit_order_ok(c, xs[:1])
    assert visit_order_ok(c, xs)
    assert not visit_order_ok(c, xs[::-1])
    assert not visit_order_ok(c, [(2, 1), (2, 1)])


def test_visit_order_requires_visits():
    with pytest.raises(InvalidInputError):
        visit_order_ok(Configuration((4, 2), (4, 2)), [(1, 1)])


def test_visits_in_order_one_move_several_cities():
    t = Trajectory((Configuration((0, 0), (0, 0)), Configuration((1, 0), (1, 0)), Configuration((3, 0), (2, 0))))
    assert visits_in_order(t, [(0, 0), (2, 0), (3, 0)])
    assert not visits_in_order(t, [(0, 0), (3, 0), (2, 0)])


def test_expand_constant_speed():
    t = expand(CompactTrajectory(config1(0, 2), (ControlSegment(HOLD, 3),)))
    assert [c.v[0] for c in t][1:] == [2, 2, 2]
    assert t[-1].p == (6,)


def test_expand_turning_sequence():
    ct = CompactTrajectory(config1(0, 6), ((DECEL, 8), (HOLD, 1), (ACCEL, 7)))
    t = expand(ct)
    assert [c.v[0] for c in t][1:] == [5, 4, 3, 2, 1, 0, -1, -2, -2, -1, 0, 1, 2, 3, 4, 5]
    assert t[-1] == config1(24, 5)
    assert ct.end() == t[-1]


def test_expand_short_sequence():
    ct = CompactTrajectory(config1(0, 6), ((DECEL, 3), (HOLD, 1), (ACCEL, 2)))
    assert ct.speeds() == [5, 4, 3, 3, 4, 5]
    assert expand(ct)[-1] == config1(24, 5)


@given(st.integers(-20, 20), st.integers(-6, 6),
       st.lists(st.tuples(st.sampled_from([DECEL, HOLD, ACCEL]), st.integers(0, 6)), max_size=6))
def test_expand_round_trip(x, s, segs):
    ct = CompactTrajectory(config1(x, s), tuple(segs))
    t = expand(ct)
    assert validate_trajectory(t)
    assert t.length == ct.length
    assert t[-1] == ct.end()
    assert CompactTrajectory.from_speeds(ct.start, ct.speeds()) == ct
    assert CompactTrajectory.from_json(ct.to_json()) == ct


def test_canonical_segments_merge_and_drop():
    segs = canonical_segments([(DECEL, 2), (HOLD, 0), (DECEL, 1), (ACCEL, 3)])
    assert segs == (ControlSegment(DECEL, 3), ControlSegment(ACCEL, 3))


def test_segment_json():
    assert CompactTrajectory(config1(0, 6), ((DECEL, 3), (HOLD, 1), (ACCEL, 2))).to_json() == {
        "start": {"p": [0], "v": [6]},
        "segments": [["-", 3], ["0", 1], ["+", 2]],
    }


def test_assemble_drawn_example():
    # both coordinates of the 11-step drawing, starting at (1,3) with speed (0,3)
    xs = [1, 1, 2, 3, 4, 4, 4, 5, 6, 7, 7, 7]
    ys = [3, 5, 6, 6, 5, 3, 1, 0, 0, 1, 3, 6]
    def compact(pos, v0):
        return CompactTrajectory.from_speeds(config1(pos[0], v0), [b - a for a, b in zip(pos, pos[1:])])
    t = assemble([compact(xs, 0), compact(ys, 3)])
    assert validate_trajectory(t)
    assert t.length == 11
    assert t[0] == Configuration((1, 3), (0, 3))
    assert t[-1] == Configuration((7, 6), (0, 3))
    assert t.positions() == list(zip(xs, ys))


def test_assemble_identity_in_1d():
    ct = CompactTrajectory(config1(2, 1), ((ACCEL, 2),))
    assert assemble([ct]) == expand(ct)


def test_assemble_length_mismatch():
    a = CompactTrajectory(config1(0, 0), ((HOLD, 5),))
    b = CompactTrajectory(config1(0, 0), ((HOLD, 11),))
    with pytest.raises(InvalidInputError):
        assemble([a, b])


@given(st.lists(st.tuples(st.integers(-1, 1), st.integers(-1, 1)), max_size=12))
def test_projections_of_valid_trajectories_are_valid(dvs):
    c = Configuration((0, 0), (0, 0))
    configs = [c]
    for dv in dvs:
        c = c.step(dv)
        configs.append(c)
    t = Trajectory(tuple(configs))
    assert validate_trajectory(t)
    for j in range(2):
        assert validate_trajectory(project(t, j))


def test_configuration_json_round_trip():
    c = Configuration((1, -2, 3), (0, 4, -5))
    assert Configuration.from_json(c.to_json()) == c
    with pytest.raises(InvalidInputError):
        Configuration.from_json({"p": [1]})
