import itertools

import numpy as np
import pytest
from jax import config

import vanetgraph.coordinates as vc
import vanetgraph.mobility as vmob

from .oracles import snapshot_from_edges


config.update("jax_enable_x64", True)


def _complete(n, offset=0):
    return [(i + offset, j + offset) for i, j in itertools.combinations(range(n), 2)]


def _path(n):
    return [(i, i + 1) for i in range(n - 1)]


@pytest.fixture
def make_graph():
    return snapshot_from_edges


@pytest.fixture
def k3():
    return snapshot_from_edges(3, _complete(3))


@pytest.fixture
def k4():
    return snapshot_from_edges(4, _complete(4))


@pytest.fixture
def k5():
    return snapshot_from_edges(5, _complete(5))


@pytest.fixture
def path3():
    return snapshot_from_edges(3, _path(3))


@pytest.fixture
def path4():
    return snapshot_from_edges(4, _path(4))


@pytest.fixture
def path5():
    return snapshot_from_edges(5, _path(5))


@pytest.fixture
def path11():
    return snapshot_from_edges(11, _path(11))


@pytest.fixture
def cycle4():
    return snapshot_from_edges(4, _path(4) + [(3, 0)])


@pytest.fixture
def cycle5():
    return snapshot_from_edges(5, _path(5) + [(4, 0)])


@pytest.fixture
def star4():
    return snapshot_from_edges(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def star5():
    return snapshot_from_edges(6, [(0, i) for i in range(1, 6)])


@pytest.fixture
def star9():
    return snapshot_from_edges(10, [(0, i) for i in range(1, 10)])


@pytest.fixture
def two_k3():
    return snapshot_from_edges(6, _complete(3) + _complete(3, offset=3))


@pytest.fixture
def bridged_k4s():
    return snapshot_from_edges(8, _complete(4) + _complete(4, offset=4) + [(3, 4)])


@pytest.fixture
def two_edges():
    return snapshot_from_edges(4, [(0, 1), (2, 3)])


@pytest.fixture
def square_region():
    return vc.Region(0.0, 0.0, 400.0, 400.0)


@pytest.fixture
def road_map(square_region):
    """Streets at 0, 200 and 400 m along both axes."""
    return vmob.RoadGrid(square_region, 200.0, corridor_width=20.0)


@pytest.fixture
def grid_config():
    return vmob.GridScenarioConfig(
        grid_size=3,
        street_spacing=200.0,
        vehicle_count=20,
        speed_range=(5.0, 15.0),
        duration=30.0,
        seed=7,
    )


@pytest.fixture
def grid_trajectories(grid_config):
    return vmob.generate_grid_scenario(grid_config)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
