from ._format import format_number as format_number
from ._traces import (
    parse_trace as parse_trace,
    read_trace as read_trace,
    write_trace as write_trace,
)
from ._rsus import (
    load_rsus as load_rsus,
    read_rsus as read_rsus,
    write_rsus as write_rsus,
)
from ._snapshot_dump import (
    read_snapshot_dump as read_snapshot_dump,
    write_snapshot_dump as write_snapshot_dump,
)
