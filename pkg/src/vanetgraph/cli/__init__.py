from ._config import (
    ScenarioConfig as ScenarioConfig,
    load_config_file as load_config_file,
)
from ._parallel import (
    ordered_map as ordered_map,
    resolve_worker_count as resolve_worker_count,
)
from ._report import METRIC_COLUMNS as METRIC_COLUMNS
from ._commands import (
    Scenario as Scenario,
    cmd_analyze as cmd_analyze,
    cmd_convert as cmd_convert,
    cmd_links as cmd_links,
    cmd_route as cmd_route,
    cmd_synth as cmd_synth,
)
from ._main import main as main
