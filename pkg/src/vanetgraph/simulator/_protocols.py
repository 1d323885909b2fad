"""
Routing protocols as interchangeable decision rules.
"""

__all__ = [
    "CARRY",
    "DROP",
    "PROTOCOLS",
    "AbstractRoutingProtocol",
    "GpcrRouting",
    "TickView",
    "VaddRouting",
    "make_routing_protocol",
]

from abc import abstractmethod
from typing import ClassVar, Literal, Optional

import equinox as eqx
import numpy as np
from equinox import AbstractClassVar, AbstractVar, field
from typing_extensions import override

from ..errors import ConfigError
from ..graph import Snapshot
from ..mobility import RoadGrid
from ._beacon import GraphBeacon, compute_beacons
from ._gpcr import (
    COORDINATOR_MODES,
    CoordinatorMode,
    coordinator_mask,
    gpcr_forward_step,
)
from ._packet import PacketState
from ._vadd import intersection_decision


ProtocolName = Literal["vadd_baseline", "vadd_enhanced", "gpcr"]
PROTOCOLS = ("vadd_baseline", "vadd_enhanced", "gpcr")

# Outcomes of a forwarding decision other than a hand-off to a node index.
CARRY = -1
DROP = -2


class TickView:
    """A snapshot together with the derived data the protocols query,
    computed on first use."""

    def __init__(self, snapshot: Snapshot):
        self.snapshot = snapshot
        self.index = snapshot.index()
        self.positions = np.asarray(snapshot.positions)
        self.neighbors = snapshot.neighbors()
        self._beacon: Optional[GraphBeacon] = None
        self._coordinators: dict[tuple, np.ndarray] = {}

    @property
    def beacon(self) -> GraphBeacon:
        if self._beacon is None:
            self._beacon = compute_beacons(self.snapshot)
        return self._beacon

    def coordinators(
        self, mode: str, lobby_threshold: Optional[int], correlation_threshold: float
    ) -> np.ndarray:
        key = (mode, lobby_threshold, correlation_threshold)
        if key not in self._coordinators:
            self._coordinators[key] = coordinator_mask(
                self.snapshot,
                mode,
                lobby_threshold,
                correlation_threshold=correlation_threshold,
                neighbors=self.neighbors,
            )
        return self._coordinators[key]


class AbstractRoutingProtocol(eqx.Module, strict=True):
    """Base class for a routing protocol.

    A protocol decides, one hop at a time, where the holder of a packet
    hands it next. Delivery to a neighboring destination is handled by the
    simulation before the protocol is asked.
    """

    name: AbstractVar[str]
    default_ttl: AbstractClassVar[float]
    delay_tolerant: AbstractClassVar[bool]

    @abstractmethod
    def next_hop(
        self, packet: PacketState, holder: int, view: TickView, dst: np.ndarray
    ) -> int:
        """The node index receiving the packet, `CARRY` or `DROP`."""
        raise NotImplementedError


class VaddRouting(AbstractRoutingProtocol, strict=True):
    """Carry-and-forward routing along the streets of a static map.

    **Attributes:**

    `road_map`: The street map.

    `transmission_range`: Radio range in meters.

    `enhanced`: Use graph beacons to choose a forwarder when the best road
    is empty.

    `hop_latency`, `mean_speed`, `density_threshold`: Parameters of the
    expected road delay.
    """

    road_map: RoadGrid
    transmission_range: float = field(static=True, converter=float)
    enhanced: bool = field(static=True, default=False)
    hop_latency: float = field(static=True, converter=float, default=0.005)
    mean_speed: float = field(static=True, converter=float, default=10.0)
    density_threshold: int = field(static=True, default=1)

    default_ttl: ClassVar[float] = 300.0
    delay_tolerant: ClassVar[bool] = True

    @property
    def name(self) -> str:
        return "vadd_enhanced" if self.enhanced else "vadd_baseline"

    def _greedy_toward(self, holder: int, view: TickView, target: np.ndarray) -> int:
        around = view.neighbors[holder]
        if around.size == 0:
            return CARRY
        distances = np.linalg.norm(view.positions[around] - target, axis=-1)
        here = np.linalg.norm(view.positions[holder] - target)
        closer = distances < here
        if not closer.any():
            return CARRY
        best = distances[closer].min()
        return int(around[closer & (distances == best)].min())

    @override
    def next_hop(
        self, packet: PacketState, holder: int, view: TickView, dst: np.ndarray
    ) -> int:
        junction = self.road_map.junction_at(view.positions[holder])
        if junction is None:
            packet.decided_junction = None
        elif junction != packet.decided_junction:
            choice, road, on_best = intersection_decision(
                holder,
                view.neighbors[holder],
                dst,
                self.road_map,
                view.positions,
                self.transmission_range,
                beacon=view.beacon if self.enhanced else None,
                enhanced=self.enhanced,
                hop_latency=self.hop_latency,
                mean_speed=self.mean_speed,
                density_threshold=self.density_threshold,
            )
            packet.target_junction = None if road is None else road.end
            if choice is None:
                return CARRY
            # A hand-off off the preferred road lets the next holder decide
            # again at this intersection.
            if on_best:
                packet.decided_junction = junction
            return choice
        if packet.target_junction is None:
            target = dst
        else:
            target = self.road_map.intersection_position(packet.target_junction)
        return self._greedy_toward(holder, view, target)


class GpcrRouting(AbstractRoutingProtocol, strict=True):
    """Greedy forwarding along streets with coordinators at intersections.
    Packets stuck at a local optimum are dropped once the perimeter budget
    is spent.

    **Attributes:**

    `mode`: How coordinators are detected.

    `lobby_threshold`: Minimum lobby index of a coordinator in
    `lobby_index` mode.

    `correlation_threshold`: Largest absolute position correlation of a
    coordinator's neighborhood in `correlation` mode.

    `perimeter_budget`: Hops allowed in perimeter mode.
    """

    mode: CoordinatorMode = field(static=True, default="neighbor_table")
    lobby_threshold: Optional[int] = field(static=True, default=None)
    correlation_threshold: float = field(static=True, converter=float, default=0.9)
    perimeter_budget: int = field(static=True, default=8)

    name: ClassVar[str] = "gpcr"
    default_ttl: ClassVar[float] = 30.0
    delay_tolerant: ClassVar[bool] = False

    def __check_init__(self):
        if self.mode not in COORDINATOR_MODES:
            raise ConfigError(
                f"expected one of {COORDINATOR_MODES}, got {self.mode!r}", "gpcr_mode"
            )
        if self.mode == "lobby_index" and self.lobby_threshold is None:
            raise ConfigError("required by lobby_index mode", "lobby_threshold")
        if self.perimeter_budget < 0:
            raise ConfigError("must not be negative", "perimeter_budget")

    @override
    def next_hop(
        self, packet: PacketState, holder: int, view: TickView, dst: np.ndarray
    ) -> int:
        choice = gpcr_forward_step(
            packet,
            holder,
            view.snapshot,
            dst,
            coordinators=view.coordinators(
                self.mode, self.lobby_threshold, self.correlation_threshold
            ),
            neighbors=view.neighbors,
            perimeter_budget=self.perimeter_budget,
        )
        return DROP if choice is None else choice


def make_routing_protocol(
    protocol: str,
    *,
    road_map: Optional[RoadGrid] = None,
    transmission_range: Optional[float] = None,
    gpcr_mode: str = "neighbor_table",
    lobby_threshold: Optional[int] = None,
    hop_latency: float = 0.005,
) -> AbstractRoutingProtocol:
    """Build a routing protocol from its configuration values."""
    if protocol in ("vadd_baseline", "vadd_enhanced"):
        if road_map is None:
            raise ConfigError("VADD routing requires a road map", "protocol")
        if transmission_range is None:
            raise ConfigError("VADD routing requires the radio range", "range")
        return VaddRouting(
            road_map,
            transmission_range,
            enhanced=protocol == "vadd_enhanced",
            hop_latency=hop_latency,
        )
    elif protocol == "gpcr":
        return GpcrRouting(gpcr_mode, lobby_threshold)
    else:
        raise ConfigError(f"expected one of {PROTOCOLS}, got {protocol!r}", "protocol")
