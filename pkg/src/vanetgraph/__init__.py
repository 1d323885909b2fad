from . import (
    typing as typing,
    errors as errors,
    coordinates as coordinates,
    io as io,
    mobility as mobility,
    graph as graph,
    metrics as metrics,
    links as links,
    simulator as simulator,
    cli as cli,
)

try:
    from .vanetgraph_version import __version__
except ImportError:  # source tree without a build
    __version__ = "0.0.0+unknown"
