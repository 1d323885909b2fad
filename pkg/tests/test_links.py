import pytest

import numpy as np
from jax import config

import vanetgraph.links as vl
from vanetgraph.errors import ValidationError

from .oracles import random_graph, snapshot_from_edges

config.update("jax_enable_x64", True)


def _series(n, linked, n_ticks, kinds=None):
    """Snapshots at ticks `0 .. n_ticks - 1`, where `linked` maps an index
    pair to the ticks it is linked on."""
    return [
        snapshot_from_edges(
            n,
            [pair for pair, ticks in linked.items() if t in ticks],
            kinds=kinds,
            time=float(t),
        )
        for t in range(n_ticks)
    ]


def _as_tuple(timeline):
    return (
        timeline.pair,
        timeline.intervals,
        timeline.censored_start,
        timeline.censored_end,
    )


class TestTimelines:
    def test_two_periods(self):
        ticks = set(range(0, 11)) | set(range(20, 26))
        timelines = vl.build_link_timelines(_series(2, {(0, 1): ticks}, 31))
        timeline = timelines[("n00", "n01")]
        assert timeline.period_count == 2
        assert timeline.intervals == ((0.0, 10.0), (20.0, 25.0))
        assert timeline.censored_start and not timeline.censored_end

        stats = vl.link_stats(timelines)
        (pair,) = stats.pairs
        assert pair.durations == (10.0, 5.0)
        assert pair.rehealings == (10.0,)
        assert pair.duration_ticks == (11.0, 6.0)

    def test_single_tick(self):
        timelines = vl.build_link_timelines(_series(3, {(0, 1): {7}}, 11))
        timeline = timelines[("n00", "n01")]
        assert timeline.intervals == ((7.0, 7.0),)
        assert not (timeline.censored_start or timeline.censored_end)
        assert vl.link_stats(timelines).pairs[0].durations == (0.0,)

    def test_never_linked_pair_is_absent(self):
        timelines = vl.build_link_timelines(_series(3, {(0, 1): {2, 3}}, 5))
        assert list(timelines) == [("n00", "n01")]

    def test_non_uniform_ticks(self):
        snapshots = [snapshot_from_edges(2, [(0, 1)], time=t) for t in (0.0, 1.0, 3.0)]
        with pytest.raises(ValidationError):
            vl.build_link_timelines(snapshots)

    def test_empty_stream(self):
        assert vl.build_link_timelines([]) == {}

    def test_link_class(self):
        kinds = ("vehicle", "rsu", "rsu")
        timelines = vl.build_link_timelines(
            _series(3, {(0, 1): {0, 1}, (1, 2): {1}}, 3, kinds=kinds)
        )
        assert timelines[("n00", "n01")].link_class == "v2i"
        assert timelines[("n01", "n02")].link_class == "i2i"
        stats = vl.link_stats(timelines)
        assert stats.class_aggregates["v2i"]["link_duration"].count == 1
        assert stats.class_aggregates["v2v"]["link_duration"].count == 0
        assert stats.class_aggregates["v2v"]["link_duration"].median is None


def test_hand_enumerated_median():
    linked = {
        (0, 1): set(range(0, 5)),
        (2, 3): {2, 3, 6, 7, 8, 9},
        (4, 5): {5},
    }
    stats = vl.link_stats(vl.build_link_timelines(_series(6, linked, 13)))
    duration = stats.aggregates["link_duration"]
    assert duration.count == 4
    assert duration.median == 2.0
    assert duration.min == 0.0 and duration.max == 4.0
    assert stats.aggregates["connected_periods"].mean == 4 / 3
    assert stats.aggregates["rehealing"].median == 3.0


class TestMerge:
    @pytest.fixture
    def snapshots(self, rng):
        linked = {}
        for i, j in random_graph(rng, 6, 0.6):
            linked[(i, j)] = {t for t in range(30) if rng.random() < 0.5}
        return _series(6, linked, 30)

    def test_merge_is_associative(self, snapshots):
        a, b, c = (
            vl.build_link_timelines(snapshots[k : k + 10]) for k in (0, 10, 20)
        )
        left = vl.merge_link_timelines(vl.merge_link_timelines(a, b), c)
        right = vl.merge_link_timelines(a, vl.merge_link_timelines(b, c))
        whole = vl.build_link_timelines(snapshots)
        assert list(left) == list(right) == list(whole)
        for pair in whole:
            assert _as_tuple(left[pair]) == _as_tuple(whole[pair])
            assert _as_tuple(right[pair]) == _as_tuple(whole[pair])

    def test_reconstruction(self, snapshots):
        timelines = vl.build_link_timelines(snapshots)
        times = [s.time for s in snapshots]
        connectivity = vl.reconstruct_connectivity(timelines, times)
        for k, snapshot in enumerate(snapshots):
            linked = {pair for pair, mask in connectivity.items() if mask[k]}
            assert linked == snapshot.edge_pairs()


@pytest.mark.parametrize("seed", range(100))
def test_reconstruction_on_random_series(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    n_ticks = int(rng.integers(1, 25))
    density = rng.uniform(0.2, 0.8)
    linked = {
        pair: {t for t in range(n_ticks) if rng.random() < density}
        for pair in random_graph(rng, n, rng.uniform(0.2, 1.0))
    }
    snapshots = _series(n, linked, n_ticks)
    connectivity = vl.reconstruct_connectivity(
        vl.build_link_timelines(snapshots), [s.time for s in snapshots]
    )
    for k, snapshot in enumerate(snapshots):
        linked_now = {pair for pair, mask in connectivity.items() if mask[k]}
        assert linked_now == snapshot.edge_pairs()


def test_cdf_properties(rng):
    linked = {}
    for i, j in random_graph(rng, 30, 0.1):
        linked[(i, j)] = {t for t in range(40) if rng.random() < 0.4}
    stats = vl.link_stats(vl.build_link_timelines(_series(30, linked, 40)))
    sample = stats.samples("link_duration")
    support, fraction = stats.cdf("link_duration")
    support, fraction = np.asarray(support), np.asarray(fraction)
    assert np.all(np.diff(fraction) >= 0)
    assert fraction[-1] == 1.0
    expected = [np.mean(sample <= value) for value in support]
    np.testing.assert_allclose(fraction, expected)


def test_summary_of_empty_sample():
    summary = vl.SummaryStats.of([])
    assert summary.count == 0
    assert summary.mean is None
