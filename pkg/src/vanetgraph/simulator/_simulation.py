"""
The discrete-time routing simulation over a series of snapshots.
"""

__all__ = ["SimulationResult", "run_simulation"]

import logging
from typing import Optional, Sequence

import equinox as eqx
import numpy as np
from equinox import field

from ..errors import ConfigError, DomainError, ValidationError
from ..graph import Snapshot
from ..mobility import RoadGrid
from ._packet import PacketState
from ._protocols import (
    CARRY,
    DROP,
    AbstractRoutingProtocol,
    TickView,
    make_routing_protocol,
)
from ._records import PacketRecord, RoutingStats, routing_stats
from ._traffic import Flow, TrafficConfig, emission_schedule, make_flows


logger = logging.getLogger(__name__)


class SimulationResult(eqx.Module, strict=True):
    """The outcome of one routing run.

    **Attributes:**

    `protocol`: Name of the routing protocol.

    `seed`: Seed of the run.

    `stats`: Delivery statistics.

    `packets`: One record per created packet, in order of creation.
    """

    protocol: str = field(static=True)
    seed: int = field(static=True)
    stats: RoutingStats
    packets: tuple[PacketRecord, ...] = field(converter=tuple)


def _uniform_tick(snapshots: Sequence[Snapshot], dt: Optional[float]) -> float:
    times = np.asarray([s.time for s in snapshots])
    if times.size < 2:
        return 1.0 if dt is None else float(dt)
    steps = np.diff(times)
    if not (steps[0] > 0 and np.allclose(steps, steps[0], rtol=1e-9, atol=1e-9)):
        raise ValidationError("Snapshots must be spaced by a uniform, positive tick.")
    return float(steps[0])


class _Run:
    """State of a routing run between ticks."""

    def __init__(
        self,
        routing: AbstractRoutingProtocol,
        traffic: TrafficConfig,
        flows: list[Flow],
        transmission_range: Optional[float],
        ttl: float,
    ):
        self.routing = routing
        self.traffic = traffic
        self.flows = flows
        self.transmission_range = transmission_range
        self.ttl = ttl
        self.packets: list[PacketState] = []
        self.active: list[PacketState] = []
        self.last_seen: dict[str, np.ndarray] = {}

    def observe(self, view: TickView):
        for flow in self.flows:
            if not flow.is_geo and flow.dst in view.index:
                self.last_seen[flow.dst] = view.positions[view.index[flow.dst]]

    def destination(
        self, packet: PacketState, view: TickView
    ) -> tuple[Optional[int], Optional[np.ndarray]]:
        """The destination's node index in `view`, if present, and its
        position, if known."""
        if packet.dst_point is None:
            return view.index.get(packet.dst), self.last_seen.get(packet.dst)
        point = np.asarray(packet.dst_point)
        if view.positions.shape[0] == 0:
            return None, point
        distances = np.linalg.norm(view.positions - point, axis=-1)
        within = distances <= self.transmission_range
        if not within.any():
            return None, point
        nearest = np.flatnonzero(within & (distances == distances[within].min()))
        return int(nearest[0]), point

    def advance(self, packet: PacketState, view: TickView, start: float):
        """Forward `packet` from instant `start` until it is delivered,
        dropped, carried or out of hops for this tick."""
        latency = self.traffic.hop_latency
        hops = 0
        while True:
            holder = view.index[packet.holder]
            dst_index, dst_position = self.destination(packet, view)
            if dst_index == holder:
                packet.delivered_t = start + hops * latency
                return
            if hops >= self.traffic.max_hops_per_tick:
                return
            if dst_index is not None and np.any(view.neighbors[holder] == dst_index):
                self._hand_off(packet, view.snapshot.node_ids[dst_index])
                packet.delivered_t = start + (hops + 1) * latency
                return
            if dst_position is None:
                choice = CARRY if self.routing.delay_tolerant else DROP
            else:
                choice = self.routing.next_hop(packet, holder, view, dst_position)
            if choice == CARRY:
                return
            if choice == DROP:
                packet.drop_reason = "local_optimum"
                return
            self._hand_off(packet, view.snapshot.node_ids[choice])
            hops += 1

    @staticmethod
    def _hand_off(packet: PacketState, node_id: str):
        packet.previous = packet.holder
        packet.holder = node_id
        packet.hop_count += 1


def run_simulation(
    snapshots: Sequence[Snapshot],
    road_map: Optional[RoadGrid],
    protocol: str | AbstractRoutingProtocol,
    gpcr_mode: str = "neighbor_table",
    traffic: TrafficConfig = TrafficConfig(),
    seed: int = 0,
    *,
    lobby_threshold: Optional[int] = None,
    transmission_range: Optional[float] = None,
    dt: Optional[float] = None,
) -> SimulationResult:
    """Route packets over a series of snapshots.

    At every tick, in-flight packets whose holder left the network are
    dropped, packets older than their lifetime expire, and the rest advance
    up to `traffic.max_hops_per_tick` hops. Then senders present in the
    snapshot emit the packets scheduled within the tick, which start
    forwarding at their creation instant. Delay-tolerant protocols carry
    packets across ticks; the others drop them at a local optimum.

    **Arguments:**

    `snapshots`: Snapshots with a uniform tick.

    `road_map`: The static street map, required by VADD.

    `protocol`: `"vadd_baseline"`, `"vadd_enhanced"`, `"gpcr"` or a
    protocol instance.

    `gpcr_mode`: The coordinator detection mode of GPCR.

    `traffic`: The traffic configuration.

    `seed`: Seed of the flow and phase draws.

    `lobby_threshold`: Coordinator lobby threshold for the `lobby_index`
    mode.

    `transmission_range`: Radio range. Defaults to the range the snapshots
    were built with.

    `dt`: The tick, only used with a single snapshot.
    """
    snapshots = list(snapshots)
    if not snapshots:
        raise DomainError("Cannot simulate routing without snapshots.")
    tick = _uniform_tick(snapshots, dt)
    if transmission_range is None:
        transmission_range = snapshots[0].transmission_range
    if isinstance(protocol, AbstractRoutingProtocol):
        routing = protocol
    else:
        routing = make_routing_protocol(
            protocol,
            road_map=road_map,
            transmission_range=transmission_range,
            gpcr_mode=gpcr_mode,
            lobby_threshold=lobby_threshold,
            hop_latency=traffic.hop_latency,
        )
    if traffic.destination_policy == "geo" and transmission_range is None:
        raise ConfigError("geographic destinations require the radio range", "range")
    if traffic.flows is not None:
        present = set().union(*(s.node_ids for s in snapshots))
        missing = sorted({n for flow in traffic.flows for n in flow} - present)
        if missing:
            raise ConfigError(f"nodes {missing} never appear in the snapshots", "flows")

    flows = make_flows(snapshots[0], traffic, seed, road_map)
    ttl = routing.default_ttl if traffic.ttl is None else traffic.ttl
    run = _Run(routing, traffic, flows, transmission_range, ttl)
    for snapshot in snapshots:
        run.observe(TickView(snapshot))
        if len(run.last_seen) == len({f.dst for f in flows if not f.is_geo}):
            break
    t_start = snapshots[0].time
    events = emission_schedule(flows, traffic, t_start, snapshots[-1].time + tick)
    logger.info(
        "Routing %d packets of %d flows with %s over %d snapshots (seed %d).",
        len(events),
        len(flows),
        routing.name,
        len(snapshots),
        seed,
    )

    next_event = 0
    for snapshot in snapshots:
        view = TickView(snapshot)
        run.observe(view)
        t = snapshot.time
        for packet in run.active:
            if packet.holder not in view.index:
                packet.drop_reason = "no_carrier"
            elif t - packet.created_t > ttl:
                packet.drop_reason = "ttl_expired"
            else:
                run.advance(packet, view, t)
        while next_event < len(events) and events[next_event][0] < t + tick:
            created_t, f = events[next_event]
            next_event += 1
            flow = flows[f]
            if flow.src not in view.index:
                logger.debug("Sender %s is absent at t=%s.", flow.src, t)
                continue
            packet = PacketState(
                packet_id=len(run.packets),
                src=flow.src,
                dst=flow.dst,
                created_t=created_t,
                holder=flow.src,
                dst_point=flow.dst_point,
            )
            run.packets.append(packet)
            run.active.append(packet)
            run.advance(packet, view, created_t)
        run.active = [p for p in run.active if not p.done]

    records = tuple(p.record() for p in run.packets)
    stats = routing_stats(records)
    logger.info(
        "%s delivered %d of %d packets (%d dropped, %d in flight).",
        routing.name,
        stats.delivered,
        stats.created,
        stats.dropped,
        stats.in_flight,
    )
    return SimulationResult(routing.name, seed, stats, records)
