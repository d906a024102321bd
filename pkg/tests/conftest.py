"""Shared builders for the test suite."""
import pytest

from uavclust.model import Cam, RoadPoint, Vehicle

# one line per acceptance criterion, echoed after the test run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_vehicle(vid, x, *, y=-2.0, direction=1, speed=10.0,
                 history=None, tx_power=1e-10, generation=0):
    return Vehicle(id=vid, pos=RoadPoint(x, y), dir=direction, speed=speed,
                   speed_history=tuple(history) if history else (speed,),
                   tx_power=tx_power, generation=generation)


def make_cam(vid, avg_speed, *, cluster_id=0, is_ch=False, x=0.0, y=-2.0,
             direction=1, speed=None, neighbors=()):
    return Cam(vehicle_id=vid, cluster_id=cluster_id, is_ch=is_ch,
               pos=RoadPoint(x, y), dir=direction,
               speed=avg_speed if speed is None else speed,
               avg_speed=avg_speed, neighbors=frozenset(neighbors))


@pytest.fixture
def vehicle_factory():
    return make_vehicle


@pytest.fixture
def cam_factory():
    return make_cam
