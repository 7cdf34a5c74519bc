import xml.etree.ElementTree as ET

import pytest

from racetrack.branching_trajectory import construct
from racetrack.errors import UnsupportedError
from racetrack.kinematics import Configuration, Trajectory, config1
from racetrack.svg import count_arrows, render


def test_cities_only():
    text = render(None, [(0, 0), (4, 2)])
    root = ET.fromstring(text)
    assert root.tag.endswith("svg")
    assert count_arrows(text) == 0
    assert text.count("<circle") == 2


def test_single_configuration():
    t = Trajectory((Configuration((1, 1), (0, 0)),))
    assert count_arrows(render(t, [(1, 1)])) == 0


def test_one_arrow_per_moving_configuration():
    b = construct(Configuration((1, 2), (1, 2)), Configuration((12, 3), (2, 1)))
    assert count_arrows(render(b.trajectory)) == 6


def test_idle_moves_have_no_arrow():
    t = Trajectory((Configuration((0, 0), (0, 0)), Configuration((0, 0), (0, 0)), Configuration((1, 0), (1, 0))))
    assert count_arrows(render(t)) == 1


def test_rejects_other_dimensions():
    with pytest.raises(UnsupportedError):
        render(Trajectory((config1(0, 0),)))
