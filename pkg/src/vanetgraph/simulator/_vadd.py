"""
Vehicle-assisted data delivery: road selection at intersections and the
graph-aware choice of a forwarder when the best road is empty.
"""

__all__ = [
    "enhanced_forwarder_select",
    "expected_road_delay",
    "rank_roads",
    "vadd_intersection_decision",
]

from typing import Optional, Sequence

import numpy as np
from jaxtyping import ArrayLike

from ..errors import DomainError
from ..mobility import HEADINGS, Road, RoadGrid
from ._beacon import GraphBeacon


def expected_road_delay(
    road: Road,
    forwarder_count: int,
    transmission_range: float,
    *,
    hop_latency: float = 0.005,
    mean_speed: float = 10.0,
    density_threshold: int = 1,
) -> float:
    """Expected time for a packet to cross `road`. With at least
    `density_threshold` forwarders on the road the packet travels in
    `length / range` wireless hops, otherwise it is carried at `mean_speed`.
    """
    if forwarder_count >= density_threshold:
        return road.length / transmission_range * hop_latency
    return road.length / mean_speed


def rank_roads(
    junction: int,
    candidate_positions: np.ndarray,
    dst: np.ndarray,
    road_map: RoadGrid,
    transmission_range: float,
    **delay_kwargs,
) -> list[tuple[Road, np.ndarray]]:
    """The outgoing roads of `junction` that lead toward `dst`, best first,
    each with the mask of the candidates on it.

    A road leads toward `dst` when its far intersection is closer to `dst`
    than the junction. When no road does, all roads are ranked. Roads are
    ordered by expected delay, then by the remaining distance from their far
    end to `dst`.
    """
    here = np.linalg.norm(road_map.intersection_position(junction) - dst)
    scored = []
    for road in road_map.roads_from(junction):
        end = road_map.intersection_position(road.end)
        remaining = float(np.linalg.norm(end - dst))
        on_road = road_map.on_road(candidate_positions, road)
        delay = expected_road_delay(
            road, int(on_road.sum()), transmission_range, **delay_kwargs
        )
        scored.append((delay, remaining, road.heading, road, on_road))
    toward = [s for s in scored if s[1] < here]
    ranked = sorted(toward or scored, key=lambda s: s[:3])
    return [(road, on_road) for _, _, _, road, on_road in ranked]


def enhanced_forwarder_select(
    candidates: Sequence[int], beacon: GraphBeacon
) -> Optional[int]:
    """The candidate with the largest lobby index, then the largest cluster
    coefficient, then the largest cluster. Remaining ties go to the smallest
    node id. `None` without candidates.
    """
    if len(candidates) == 0:
        return None
    lobby = np.asarray(beacon.lobby)
    coefficient = np.asarray(beacon.cluster_coefficient)
    size = np.asarray(beacon.cluster_size)
    ids = beacon.node_ids
    return min(
        (int(c) for c in candidates),
        key=lambda c: (-lobby[c], -coefficient[c], -size[c], ids[c]),
    )


def intersection_decision(
    holder: int,
    candidates: Sequence[int],
    dst: ArrayLike,
    road_map: RoadGrid,
    positions: ArrayLike,
    transmission_range: float,
    *,
    beacon: Optional[GraphBeacon] = None,
    enhanced: bool = False,
    hop_latency: float = 0.005,
    mean_speed: float = 10.0,
    density_threshold: int = 1,
) -> tuple[Optional[int], Optional[Road], bool]:
    """`vadd_intersection_decision`, also returning the preferred road and
    whether the choice lies on it."""
    positions = np.asarray(positions, dtype=float)
    dst = np.asarray(dst, dtype=float)
    junction = road_map.junction_at(positions[holder])
    if junction is None:
        raise DomainError(f"Node {holder} is not at an intersection.")
    candidates = np.asarray(candidates, dtype=np.int64).reshape(-1)
    ranked = rank_roads(
        junction,
        positions[candidates],
        dst,
        road_map,
        transmission_range,
        hop_latency=hop_latency,
        mean_speed=mean_speed,
        density_threshold=density_threshold,
    )
    if not ranked:
        return None, None, False
    best, on_best = ranked[0]
    if candidates.size == 0:
        return None, best, False
    if on_best.any():
        on_road = candidates[on_best]
        origin = road_map.intersection_position(junction)
        along = (positions[on_road] - origin) @ HEADINGS[best.heading]
        return int(on_road[along == along.max()].min()), best, True

    distances = np.linalg.norm(positions[candidates] - dst, axis=-1)
    closer = distances < np.linalg.norm(positions[holder] - dst)
    if enhanced:
        if beacon is None:
            raise ValueError("The enhanced decision needs the graph beacons.")
        choice = enhanced_forwarder_select(candidates[closer].tolist(), beacon)
        return choice, best, False
    if len(ranked) < 2:
        return None, best, False
    second_road, on_second = ranked[1]
    pool = on_second & closer
    if not pool.any():
        return None, best, False
    nearest = distances[pool].min()
    return int(candidates[pool & (distances == nearest)].min()), second_road, False


def vadd_intersection_decision(
    holder: int,
    candidates: Sequence[int],
    dst: ArrayLike,
    road_map: RoadGrid,
    positions: ArrayLike,
    transmission_range: float,
    *,
    beacon: Optional[GraphBeacon] = None,
    enhanced: bool = False,
    hop_latency: float = 0.005,
    mean_speed: float = 10.0,
    density_threshold: int = 1,
) -> Optional[int]:
    """Choose the next holder of a packet at an intersection, or `None` to
    keep carrying it.

    The road with the smallest expected delay toward `dst` is selected and
    the candidate farthest along it receives the packet. If that road has no
    candidate, only candidates strictly closer to `dst` than the holder are
    considered. The baseline hands the packet to the one of them on the
    second-best road that is closest to `dst`. The enhanced variant picks
    among all of them with `enhanced_forwarder_select`. Without such a
    candidate the holder keeps the packet.

    **Arguments:**

    `holder`: Node index of the current holder. It must be within the
    junction zone of an intersection.

    `candidates`: Node indices of the holder's neighbors.

    `dst`: Position of the destination.

    `road_map`: The static street map.

    `positions`: Positions of all nodes of the snapshot.

    `transmission_range`: Radio range in meters.

    `beacon`: Beacons of the snapshot, required by the enhanced variant.

    `enhanced`: Whether to use the graph-aware fallback.
    """
    choice, _, _ = intersection_decision(
        holder,
        candidates,
        dst,
        road_map,
        positions,
        transmission_range,
        beacon=beacon,
        enhanced=enhanced,
        hop_latency=hop_latency,
        mean_speed=mean_speed,
        density_threshold=density_threshold,
    )
    return choice
