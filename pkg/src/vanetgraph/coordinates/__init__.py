from ._projection import (
    EARTH_RADIUS as EARTH_RADIUS,
    project_gps as project_gps,
)
from ._region import Region as Region
