"""
Mutable state of a packet while it travels.
"""

__all__ = ["PacketState"]

import dataclasses
from typing import Optional

from ._records import DropReason, PacketRecord


@dataclasses.dataclass
class PacketState:
    """A packet in the network. Node references are ids, since node indices
    change from one snapshot to the next."""

    packet_id: int
    src: str
    dst: str
    created_t: float
    holder: str
    dst_point: Optional[tuple[float, float]] = None
    hop_count: int = 0
    previous: Optional[str] = None
    delivered_t: Optional[float] = None
    drop_reason: Optional[DropReason] = None
    # VADD: the intersection of the last decision and the road end it chose.
    decided_junction: Optional[int] = None
    target_junction: Optional[int] = None
    # GPCR: distance to the destination on entering perimeter mode.
    perimeter_entry: Optional[float] = None
    perimeter_hops_left: int = 0

    @property
    def done(self) -> bool:
        return self.delivered_t is not None or self.drop_reason is not None

    def record(self) -> PacketRecord:
        return PacketRecord(
            packet_id=self.packet_id,
            src=self.src,
            dst=self.dst,
            created_t=self.created_t,
            delivered_t=self.delivered_t,
            hop_count=self.hop_count,
            drop_reason=self.drop_reason,
        )
