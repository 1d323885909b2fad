from ._trajectory import (
    Trajectory as Trajectory,
    clip_and_resample as clip_and_resample,
)
from ._penetration import (
    PenetrationSample as PenetrationSample,
    sample_penetration as sample_penetration,
)
from ._road_grid import (
    HEADINGS as HEADINGS,
    Road as Road,
    RoadGrid as RoadGrid,
)
from ._grid_scenario import (
    GridScenarioConfig as GridScenarioConfig,
    generate_grid_scenario as generate_grid_scenario,
)
from ._rsus import (
    RsuSet as RsuSet,
    place_rsus as place_rsus,
)
