import io

import pytest

import numpy as np
from jax import config

import vanetgraph.coordinates as vc
import vanetgraph.graph as vg
import vanetgraph.io as vio
import vanetgraph.mobility as vmob
from vanetgraph.errors import DomainError, TraceParseError, ValidationError

config.update("jax_enable_x64", True)


def test_parse_two_samples():
    trajectories = vio.parse_trace(["0,a,0,0\n", "1,a,5,0\n"])
    assert len(trajectories) == 1
    (a,) = trajectories
    assert a.vehicle_id == "a"
    np.testing.assert_array_equal(a.times, [0.0, 1.0])
    np.testing.assert_array_equal(a.positions, [[0.0, 0.0], [5.0, 0.0]])


def test_out_of_order_timestamps():
    with pytest.raises(ValidationError, match="'a'"):
        vio.parse_trace(["1,a,0,0", "0,a,1,1"])


def test_many_vehicles():
    lines = ["#format,cartesian"]
    lines += [f"{t},veh{v},{v},{t}" for v in range(704) for t in range(2)]
    trajectories = vio.parse_trace(lines)
    assert len(trajectories) == 704
    assert len({tr.vehicle_id for tr in trajectories}) == 704


@pytest.mark.parametrize(
    "lines, line_number",
    [
        (["#format,cartesian", "0,a,0"], 2),
        (["0,a,0,0", "x,a,1,1"], 2),
        (["0,a,0,0", "1,a,1,nan"], 2),
        (["0,,0,0"], 1),
    ],
)
def test_malformed_rows(lines, line_number):
    with pytest.raises(TraceParseError) as info:
        vio.parse_trace(lines)
    assert info.value.line_number == line_number
    assert str(info.value).startswith(f"line {line_number}:")


def test_gps_trace_is_projected():
    lines = ["#format,gps", "#ref,0.0,10.0", "0,a,0.0,10.0", "1,a,0.0,10.01"]
    (a,) = vio.parse_trace(lines)
    np.testing.assert_allclose(a.positions[0], [0.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(a.positions[1], [1111.95, 0.0], atol=0.01)


def test_gps_trace_requires_reference():
    with pytest.raises(TraceParseError):
        vio.parse_trace(["#format,gps", "0,a,0.0,10.0"])


def test_format_argument_must_match_header():
    with pytest.raises(TraceParseError):
        vio.parse_trace(["#format,gps", "#ref,0,0"], format="cartesian_csv")


def test_write_then_parse(grid_trajectories):
    stream = io.StringIO()
    vio.write_trace(grid_trajectories, stream)
    stream.seek(0)
    parsed = vio.parse_trace(stream)
    assert [tr.vehicle_id for tr in parsed] == [
        tr.vehicle_id for tr in grid_trajectories
    ]
    for original, copy in zip(grid_trajectories, parsed):
        np.testing.assert_array_equal(original.times, copy.times)
        np.testing.assert_array_equal(original.positions, copy.positions)


@pytest.mark.parametrize(
    "value, text",
    [(10.0, "10"), (0.1, "0.1"), (3, "3"), (None, ""), (True, "true"), (-2.5, "-2.5")],
)
def test_format_number(value, text):
    assert vio.format_number(value) == text


@pytest.mark.parametrize("value", [1 / 3, 1e-12, 123456.789, 2.0**0.5])
def test_format_number_is_lossless(value):
    assert float(vio.format_number(value)) == value


class TestRsuCatalog:
    def test_rows_in_region(self):
        region = vc.Region(0.0, 0.0, 2000.0, 2000.0)
        lines = ["#coords,xy"] + [f"ap{i},{i},{2 * i}" for i in range(427)]
        rsus = vio.load_rsus(lines, region)
        assert len(rsus) == 427

    def test_out_of_region_rows_are_dropped(self):
        region = vc.Region(0.0, 0.0, 100.0, 100.0)
        rsus = vio.load_rsus(["a,10,10", "b,500,10", "c,100,100"], region)
        assert rsus.rsu_ids == ("a", "c")

    def test_empty_file(self):
        rsus = vio.load_rsus([], vc.Region(0.0, 0.0, 1.0, 1.0))
        assert len(rsus) == 0
        assert rsus.positions.shape == (0, 2)

    def test_invalid_latitude(self):
        lines = ["#coords,gps", "#ref,0,0", "ap0,200,10"]
        with pytest.raises(DomainError):
            vio.load_rsus(lines, vc.Region(0.0, 0.0, 1.0, 1.0))

    def test_malformed_row(self):
        with pytest.raises(TraceParseError):
            vio.load_rsus(["ap0,1"], vc.Region(0.0, 0.0, 1.0, 1.0))

    def test_write_then_load(self):
        region = vc.Region(0.0, 0.0, 1000.0, 1000.0)
        rsus = vmob.place_rsus(region, 12, seed=3)
        stream = io.StringIO()
        vio.write_rsus(rsus, stream)
        stream.seek(0)
        loaded = vio.load_rsus(stream, region)
        assert loaded.rsu_ids == rsus.rsu_ids
        np.testing.assert_array_equal(loaded.positions, rsus.positions)


def test_snapshot_dump_round_trip():
    snapshot = vg.build_snapshot(
        [
            ("a", "vehicle", 0.0, 0.0),
            ("b", "vehicle", 250.5, 0.0),
            ("r", "rsu", 0, 300),
        ],
        vg.UnitDiskRadio(300.0),
        time=12.0,
    )
    stream = io.StringIO()
    vio.write_snapshot_dump(snapshot, stream)
    stream.seek(0)
    loaded = vio.read_snapshot_dump(stream)
    assert loaded.time == 12.0
    assert loaded.node_ids == snapshot.node_ids
    assert loaded.kinds == snapshot.kinds
    assert loaded.edge_pairs() == snapshot.edge_pairs()
    np.testing.assert_array_equal(loaded.positions, snapshot.positions)


def test_snapshot_dump_layout():
    snapshot = vg.build_snapshot(
        [("a", "vehicle", 0.0, 0.0), ("b", "vehicle", 250.5, 0.0)],
        vg.UnitDiskRadio(300.0),
        time=12.0,
    )
    stream = io.StringIO()
    vio.write_snapshot_dump(snapshot, stream)
    assert stream.getvalue().splitlines() == [
        "#t,12",
        "#nodes id kind x y",
        "a vehicle 0 0",
        "b vehicle 250.5 0",
        "#edges u v",
        "a b",
    ]
