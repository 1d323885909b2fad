"""
Constant-bit-rate traffic: who sends, to whom, and when.
"""

__all__ = ["Flow", "TrafficConfig", "emission_schedule", "make_flows"]

import math
from typing import Literal, Optional, Sequence

import equinox as eqx
import jax.random as jr
import numpy as np
from equinox import field

from ..errors import ConfigError, DomainError
from ..graph import Snapshot
from ..mobility import RoadGrid


DestinationPolicy = Literal["node", "geo"]


def _as_flows(flows) -> Optional[tuple[tuple[str, str], ...]]:
    if flows is None:
        return None
    return tuple((str(src), str(dst)) for src, dst in flows)


class TrafficConfig(eqx.Module, strict=True):
    """Configuration of the packet traffic of a routing run.

    **Attributes:**

    `sender_count`: Number of senders drawn from the vehicles of the first
    snapshot.

    `packets_per_second`: Constant emission rate of every sender.

    `destination_policy`: `"node"` for a fixed destination vehicle per
    sender, `"geo"` for a fixed geographic point per sender.

    `flows`: Explicit `(source, destination)` node id pairs. When given,
    they replace the random draw of senders.

    `ttl`: Lifetime of a packet in seconds. `None` uses the default of the
    routing protocol.

    `hop_latency`: Time spent by one wireless hop, in seconds.

    `max_hops_per_tick`: Number of hops a packet may travel within one tick
    before it rests.

    `max_packets_per_sender`: Optional cap on the packets each sender emits.
    """

    sender_count: int = field(static=True, converter=int, default=15)
    packets_per_second: float = field(static=True, converter=float, default=0.1)
    destination_policy: DestinationPolicy = field(static=True, default="node")
    flows: Optional[tuple[tuple[str, str], ...]] = field(
        static=True, converter=_as_flows, default=None
    )
    ttl: Optional[float] = field(static=True, default=None)
    hop_latency: float = field(static=True, converter=float, default=0.005)
    max_hops_per_tick: int = field(static=True, converter=int, default=100)
    max_packets_per_sender: Optional[int] = field(static=True, default=None)

    def __check_init__(self):
        if self.flows is None and self.sender_count < 1:
            raise ConfigError("at least one sender is required", "sender_count")
        if self.flows is not None:
            if len(self.flows) == 0:
                raise ConfigError("at least one flow is required", "flows")
            for src, dst in self.flows:
                if src == dst:
                    raise ConfigError(f"flow {src!r} sends to itself", "flows")
        if not self.packets_per_second > 0:
            raise ConfigError("must be positive", "packets_per_second")
        if self.destination_policy not in ("node", "geo"):
            raise ConfigError(
                f"expected 'node' or 'geo', got {self.destination_policy!r}",
                "destination_policy",
            )
        if self.ttl is not None and not self.ttl > 0:
            raise ConfigError("must be positive", "ttl")
        if not self.hop_latency > 0:
            raise ConfigError("must be positive", "hop_latency")
        if self.max_hops_per_tick < 1:
            raise ConfigError("must be at least 1", "max_hops_per_tick")
        if self.max_packets_per_sender is not None and self.max_packets_per_sender < 1:
            raise ConfigError("must be at least 1", "max_packets_per_sender")


class Flow(eqx.Module, strict=True):
    """A sender and its destination. A geographic destination has
    `dst_point` set and `dst` names it."""

    src: str = field(static=True)
    dst: str = field(static=True)
    phase: float = field(static=True, converter=float)
    dst_point: Optional[tuple[float, float]] = field(static=True, default=None)

    @property
    def is_geo(self) -> bool:
        return self.dst_point is not None


def _geo_name(point: np.ndarray) -> str:
    return f"geo:{float(point[0])!r}:{float(point[1])!r}"


def make_flows(
    snapshot: Snapshot,
    traffic: TrafficConfig,
    seed: int,
    road_map: Optional[RoadGrid] = None,
) -> list[Flow]:
    """Draw the flows of a run from the vehicles of its first snapshot.

    Senders are a seeded permutation prefix of the vehicles. A node
    destination is another vehicle of the same snapshot; a geographic one is
    a random intersection of `road_map`, or a uniform point of the
    snapshot's bounding box without a road map. Every sender gets a phase in
    `[0, 1 / packets_per_second)`.
    """
    key_senders, key_dst, key_phase = jr.split(jr.PRNGKey(seed), 3)
    period = 1.0 / traffic.packets_per_second
    if traffic.flows is not None:
        phases = np.asarray(
            jr.uniform(key_phase, (len(traffic.flows),), maxval=period)
        )
        return [
            Flow(src, dst, phase)
            for (src, dst), phase in zip(traffic.flows, phases.tolist())
        ]

    vehicles = np.flatnonzero(snapshot.kind_mask("vehicle"))
    n_vehicles = vehicles.size
    if n_vehicles < 2:
        raise DomainError(
            f"Drawing flows needs at least two vehicles, got {n_vehicles}."
        )
    count = min(traffic.sender_count, n_vehicles)
    order = np.asarray(jr.permutation(key_senders, n_vehicles))[:count]
    phases = np.asarray(jr.uniform(key_phase, (count,), maxval=period)).tolist()
    ids = snapshot.node_ids
    if traffic.destination_policy == "node":
        offsets = np.asarray(jr.randint(key_dst, (count,), 1, n_vehicles))
        destinations = vehicles[(order + offsets) % n_vehicles]
        return [
            Flow(ids[vehicles[s]], ids[d], phase)
            for s, d, phase in zip(order, destinations, phases)
        ]
    if road_map is not None:
        corners = road_map.intersections
        points = corners[np.asarray(jr.randint(key_dst, (count,), 0, len(corners)))]
    else:
        positions = np.asarray(snapshot.positions)
        lo, hi = positions.min(axis=0), positions.max(axis=0)
        points = np.asarray(
            jr.uniform(key_dst, (count, 2), minval=lo, maxval=hi)
        )
    return [
        Flow(ids[vehicles[s]], _geo_name(p), phase, (float(p[0]), float(p[1])))
        for s, p, phase in zip(order, points, phases)
    ]


def emission_schedule(
    flows: Sequence[Flow], traffic: TrafficConfig, t_start: float, t_end: float
) -> list[tuple[float, int]]:
    """Creation instants `t_start + phase + k / packets_per_second` that fall
    before `t_end`, as `(time, flow index)` sorted by time and then by flow."""
    period = 1.0 / traffic.packets_per_second
    events = []
    for f, flow in enumerate(flows):
        count = max(0, math.ceil((t_end - t_start - flow.phase) / period - 1e-12))
        if traffic.max_packets_per_sender is not None:
            count = min(count, traffic.max_packets_per_sender)
        times = t_start + flow.phase + period * np.arange(count)
        events.extend((float(t), f) for t in times if t < t_end)
    events.sort()
    return events
