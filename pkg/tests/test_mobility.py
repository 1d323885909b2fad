import pytest

import numpy as np
from jax import config

import vanetgraph.coordinates as vc
import vanetgraph.mobility as vmob
from vanetgraph.errors import ConfigError, DomainError, ValidationError

config.update("jax_enable_x64", True)


@pytest.fixture
def region():
    return vc.Region(0.0, 0.0, 100.0, 100.0)


class TestClipAndResample:
    def test_midpoint_interpolation(self, region):
        trajectory = vmob.Trajectory("a", [0.0, 2.0], [[0.0, 0.0], [2.0, 0.0]])
        (resampled,) = vmob.clip_and_resample([trajectory], region, 1.0)
        np.testing.assert_array_equal(resampled.times, [0.0, 1.0, 2.0])
        np.testing.assert_allclose(resampled.positions[1], [1.0, 0.0])

    def test_outside_vehicle_is_removed(self, region):
        outside = vmob.Trajectory("x", [0.0, 5.0], [[500.0, 500.0], [600.0, 500.0]])
        inside = vmob.Trajectory("y", [0.0, 5.0], [[10.0, 10.0], [20.0, 10.0]])
        resampled = vmob.clip_and_resample([outside, inside], region, 1.0)
        assert [tr.vehicle_id for tr in resampled] == ["y"]

    def test_tick_count(self, region):
        parked = vmob.Trajectory("p", [0.0, 10.0], [[50.0, 50.0], [50.0, 50.0]])
        (resampled,) = vmob.clip_and_resample([parked], region, 1.0)
        assert resampled.n_samples == 11

    def test_reentry_keeps_vehicle_id(self, region):
        trajectory = vmob.Trajectory(
            "a",
            [0.0, 10.0, 20.0],
            [[50.0, 50.0], [250.0, 50.0], [50.0, 50.0]],
        )
        segments = vmob.clip_and_resample([trajectory], region, 1.0)
        assert len(segments) == 2
        assert {s.vehicle_id for s in segments} == {"a"}
        assert segments[0].end_time < segments[1].start_time - 1.0

    def test_uniform_ticks_inside_region(self, region, rng):
        times = np.sort(rng.uniform(0.0, 60.0, size=40))
        times = np.unique(times)
        positions = rng.uniform(-20.0, 120.0, size=(times.size, 2))
        trajectory = vmob.Trajectory("r", times, positions)
        for segment in vmob.clip_and_resample([trajectory], region, 0.5):
            np.testing.assert_allclose(np.diff(segment.times), 0.5)
            assert bool(region.contains(segment.positions).all())

    def test_rejects_nonpositive_tick(self, region):
        trajectory = vmob.Trajectory("a", [0.0, 1.0], [[0.0, 0.0], [1.0, 0.0]])
        with pytest.raises(DomainError):
            vmob.clip_and_resample([trajectory], region, 0.0)


def test_trajectory_validation():
    with pytest.raises(ValidationError):
        vmob.Trajectory("a", [1.0, 0.0], [[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ValidationError):
        vmob.Trajectory("a", [0.0, 1.0], [[0.0, 0.0], [np.inf, 1.0]])


class TestPenetration:
    ids = [f"v{i:03d}" for i in range(100)]

    def test_full_ratio_selects_everything(self):
        sample = vmob.sample_penetration(self.ids, 1.0, seed=0)
        assert sample.selected_set == set(self.ids)

    def test_rounding(self):
        assert len(vmob.sample_penetration(self.ids, 0.05, seed=0).selected) == 5

    @pytest.mark.parametrize("seed", [0, 1, 42])
    def test_nesting(self, seed):
        ratios = [0.01, 0.05, 0.1, 0.15, 0.2, 0.4, 0.6, 0.8, 1.0]
        samples = [vmob.sample_penetration(self.ids, r, seed) for r in ratios]
        for smaller, larger in zip(samples, samples[1:]):
            assert smaller.selected_set <= larger.selected_set

    def test_deterministic(self):
        first = vmob.sample_penetration(self.ids, 0.2, seed=9)
        second = vmob.sample_penetration(reversed(self.ids), 0.2, seed=9)
        assert first.selected == second.selected

    @pytest.mark.parametrize("ratio", [0.0, -0.1, 1.5])
    def test_ratio_out_of_range(self, ratio):
        with pytest.raises(DomainError):
            vmob.sample_penetration(self.ids, ratio, seed=0)


class TestGridScenario:
    def test_deterministic(self, grid_config):
        first = vmob.generate_grid_scenario(grid_config)
        second = vmob.generate_grid_scenario(grid_config)
        for a, b in zip(first, second):
            assert a.vehicle_id == b.vehicle_id
            np.testing.assert_array_equal(a.times, b.times)
            np.testing.assert_array_equal(a.positions, b.positions)

    def test_steady_state(self):
        cfg = vmob.GridScenarioConfig(10, 200.0, 150, (5.0, 15.0), 60.0, seed=1)
        trajectories = vmob.generate_grid_scenario(cfg)
        assert len(trajectories) == 150
        assert len({tr.vehicle_id for tr in trajectories}) == 150
        for trajectory in trajectories:
            assert trajectory.start_time == 0.0
            assert trajectory.end_time == 60.0
            assert trajectory.n_samples == 61

    def test_speeds_within_range(self, grid_config, grid_trajectories):
        v_min, v_max = grid_config.speed_range
        for trajectory in grid_trajectories:
            # The L1 length of a step equals the distance driven.
            steps = np.abs(np.diff(np.asarray(trajectory.positions), axis=0)).sum(-1)
            assert v_min - 1e-6 <= steps.max() <= v_max + 1e-6

    def test_vehicles_stay_on_streets(self, grid_config, grid_trajectories):
        road_map = grid_config.road_map
        side = grid_config.region.width
        for trajectory in grid_trajectories:
            positions = np.asarray(trajectory.positions)
            assert bool(road_map.in_corridor(positions).all())
            assert positions.min() > -1e-6 and positions.max() < side + 1e-6

    def test_seed_changes_scenario(self, grid_config):
        other = vmob.GridScenarioConfig(
            grid_config.grid_size,
            grid_config.street_spacing,
            grid_config.vehicle_count,
            grid_config.speed_range,
            grid_config.duration,
            seed=grid_config.seed + 1,
        )
        a = vmob.generate_grid_scenario(grid_config)[0]
        b = vmob.generate_grid_scenario(other)[0]
        assert not np.array_equal(a.positions, b.positions)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(grid_size=0),
            dict(vehicle_count=0),
            dict(speed_range=(0.5, 10.0)),
            dict(speed_range=(10.0, 40.0)),
            dict(duration=-1.0),
        ],
    )
    def test_infeasible_config(self, kwargs):
        values = dict(
            grid_size=3,
            street_spacing=200.0,
            vehicle_count=5,
            speed_range=(5.0, 10.0),
            duration=10.0,
        )
        values.update(kwargs)
        with pytest.raises(ConfigError):
            vmob.GridScenarioConfig(**values)


class TestRoadGrid:
    def test_intersections(self, road_map):
        assert road_map.shape == (3, 3)
        np.testing.assert_array_equal(road_map.intersection_position(4), [200, 200])
        assert road_map.neighbor_intersection(4, 0) == 7
        assert road_map.neighbor_intersection(0, 2) is None
        assert [r.heading for r in road_map.roads_from(0)] == [0, 1]

    def test_line_of_sight(self, road_map):
        a = np.array([[300.0, 200.0], [100.0, 200.0]])
        b = np.array([[200.0, 300.0], [300.0, 200.0]])
        np.testing.assert_array_equal(road_map.line_of_sight(a, b), [False, True])

    def test_junction_zone(self, road_map):
        assert road_map.junction_at(np.array([210.0, 195.0])) == 4
        assert road_map.junction_at(np.array([260.0, 200.0])) is None


def test_place_rsus_at_intersections(road_map, square_region):
    rsus = vmob.place_rsus(square_region, 4, seed=0, road_map=road_map)
    assert rsus.rsu_ids == ("rsu:0", "rsu:1", "rsu:2", "rsu:3")
    intersections = {tuple(p) for p in road_map.intersections.tolist()}
    assert {tuple(p) for p in np.asarray(rsus.positions).tolist()} <= intersections


def test_place_rsus_rejects_vehicle_id_collisions(square_region):
    rsus = vmob.place_rsus(square_region, 3, seed=0, vehicle_ids=["rsu0", "v00"])
    assert rsus.rsu_ids == ("rsu:0", "rsu:1", "rsu:2")
    with pytest.raises(ConfigError, match="rsu_count"):
        vmob.place_rsus(square_region, 3, seed=0, vehicle_ids=["v00", "rsu:1"])
