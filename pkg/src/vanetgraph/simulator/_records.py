"""
Per-packet records and the statistics of routing runs.
"""

__all__ = [
    "DROP_REASONS",
    "PacketRecord",
    "RoutingComparison",
    "RoutingStats",
    "average_routing_stats",
    "routing_comparison",
    "routing_stats",
]

from typing import Literal, Optional, Sequence

import equinox as eqx
import numpy as np
from equinox import field

from ..errors import ValidationError


DropReason = Literal["ttl_expired", "local_optimum", "no_carrier"]
DROP_REASONS = ("ttl_expired", "local_optimum", "no_carrier")


class PacketRecord(eqx.Module, strict=True):
    """The fate of one packet.

    **Attributes:**

    `packet_id`: Sequence number, in order of creation.

    `src`, `dst`: Source node id and destination. Geographic destinations
    read `geo:<x>:<y>`.

    `created_t`: Creation instant in seconds.

    `delivered_t`: Delivery instant, absent unless delivered.

    `hop_count`: Wireless hops travelled.

    `drop_reason`: Why the packet was dropped, absent unless dropped.

    A packet with neither `delivered_t` nor `drop_reason` was still in flight
    at the end of the run.
    """

    packet_id: int = field(static=True)
    src: str = field(static=True)
    dst: str = field(static=True)
    created_t: float = field(static=True, converter=float)
    delivered_t: Optional[float] = field(static=True, default=None)
    hop_count: int = field(static=True, default=0)
    drop_reason: Optional[DropReason] = field(static=True, default=None)

    def __check_init__(self):
        if self.delivered_t is not None and self.drop_reason is not None:
            raise ValidationError(
                f"Packet {self.packet_id} is both delivered and dropped."
            )
        if self.delivered_t is not None and self.delivered_t < self.created_t:
            raise ValidationError(
                f"Packet {self.packet_id} is delivered before its creation."
            )
        if self.drop_reason is not None and self.drop_reason not in DROP_REASONS:
            raise ValidationError(f"Unknown drop reason {self.drop_reason!r}.")

    @property
    def delay(self) -> Optional[float]:
        if self.delivered_t is None:
            return None
        return self.delivered_t - self.created_t

    @property
    def in_flight(self) -> bool:
        return self.delivered_t is None and self.drop_reason is None


class RoutingStats(eqx.Module, strict=True):
    """Delivery statistics of a routing run, or their average over runs.

    **Attributes:**

    `created`, `delivered`, `dropped`, `in_flight`: Packet counts, with
    `created = delivered + dropped + in_flight`.

    `delivery_rate`: `delivered / created`, absent without packets.

    `mean_delay`, `median_delay`: Delivery delay in seconds over delivered
    packets.

    `mean_hops`: Mean hop count over delivered packets.

    `drops_by_reason`: Number of dropped packets per reason.
    """

    created: float = field(static=True)
    delivered: float = field(static=True)
    dropped: float = field(static=True)
    in_flight: float = field(static=True)
    delivery_rate: Optional[float] = field(static=True, default=None)
    mean_delay: Optional[float] = field(static=True, default=None)
    median_delay: Optional[float] = field(static=True, default=None)
    mean_hops: Optional[float] = field(static=True, default=None)
    drops_by_reason: dict[str, float] = field(static=True, default=None)


def routing_stats(records: Sequence[PacketRecord]) -> RoutingStats:
    """Summarize the packets of one run."""
    delivered = [r for r in records if r.delivered_t is not None]
    drops = {reason: 0 for reason in DROP_REASONS}
    for record in records:
        if record.drop_reason is not None:
            drops[record.drop_reason] += 1
    delays = np.asarray([r.delay for r in delivered], dtype=float)
    hops = np.asarray([r.hop_count for r in delivered], dtype=float)
    created = len(records)
    return RoutingStats(
        created=created,
        delivered=len(delivered),
        dropped=sum(drops.values()),
        in_flight=sum(r.in_flight for r in records),
        delivery_rate=len(delivered) / created if created else None,
        mean_delay=float(delays.mean()) if delays.size else None,
        median_delay=float(np.median(delays)) if delays.size else None,
        mean_hops=float(hops.mean()) if hops.size else None,
        drops_by_reason=drops,
    )


def _mean(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def average_routing_stats(stats: Sequence[RoutingStats]) -> RoutingStats:
    """The run-by-run average of routing statistics. Absent values are left
    out of their average."""
    if len(stats) == 0:
        raise ValueError("Cannot average an empty sequence of routing stats.")
    return RoutingStats(
        created=_mean([s.created for s in stats]),
        delivered=_mean([s.delivered for s in stats]),
        dropped=_mean([s.dropped for s in stats]),
        in_flight=_mean([s.in_flight for s in stats]),
        delivery_rate=_mean([s.delivery_rate for s in stats]),
        mean_delay=_mean([s.mean_delay for s in stats]),
        median_delay=_mean([s.median_delay for s in stats]),
        mean_hops=_mean([s.mean_hops for s in stats]),
        drops_by_reason={
            reason: _mean([s.drops_by_reason[reason] for s in stats])
            for reason in DROP_REASONS
        },
    )


class RoutingComparison(eqx.Module, strict=True):
    """Mean delivery delay of a candidate protocol against a reference one,
    run by run over the same seeds.

    **Attributes:**

    `delay_deltas`: Reference minus candidate mean delay per run. Positive
    values mean the candidate is faster. Absent where either run delivered
    nothing.

    `mean_delta`: Mean of the present deltas.

    `relative_improvement`: `mean_delta` over the reference's averaged mean
    delay.
    """

    delay_deltas: tuple[Optional[float], ...] = field(static=True, converter=tuple)
    mean_delta: Optional[float] = field(static=True)
    relative_improvement: Optional[float] = field(static=True)


def routing_comparison(
    candidate: Sequence[RoutingStats], reference: Sequence[RoutingStats]
) -> RoutingComparison:
    if len(candidate) != len(reference):
        raise ValueError(
            f"Expected as many candidate as reference runs, got {len(candidate)} "
            f"and {len(reference)}."
        )
    deltas = tuple(
        None
        if c.mean_delay is None or r.mean_delay is None
        else r.mean_delay - c.mean_delay
        for c, r in zip(candidate, reference)
    )
    mean_delta = _mean(deltas)
    reference_delay = _mean([r.mean_delay for r in reference])
    relative = (
        None
        if mean_delta is None or not reference_delay
        else mean_delta / reference_delay
    )
    return RoutingComparison(deltas, mean_delta, relative)
