from ._radio import (
    AbstractRadioModel as AbstractRadioModel,
    LosMode as LosMode,
    UnitDiskRadio as UnitDiskRadio,
    ManhattanLosRadio as ManhattanLosRadio,
    make_radio_model as make_radio_model,
)
from ._spatial_hash import SpatialHash as SpatialHash
from ._snapshot import (
    NodeKind as NodeKind,
    Snapshot as Snapshot,
    build_snapshot as build_snapshot,
    build_snapshot_from_arrays as build_snapshot_from_arrays,
    snapshot_series as snapshot_series,
    window_ticks as window_ticks,
)
