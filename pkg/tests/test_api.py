import importlib
import pkgutil

import pytest

import vanetgraph
import vanetgraph.graph as vg
import vanetgraph.simulator as vs


SUBPACKAGES = (
    "cli",
    "coordinates",
    "graph",
    "io",
    "links",
    "metrics",
    "mobility",
    "simulator",
)


@pytest.mark.parametrize("name", SUBPACKAGES)
def test_private_modules_export_what_the_package_reexports(name):
    package = importlib.import_module(f"vanetgraph.{name}")
    exported = set()
    for info in pkgutil.iter_modules(package.__path__):
        module = importlib.import_module(f"vanetgraph.{name}.{info.name}")
        assert len(set(module.__all__)) == len(module.__all__)
        for public in module.__all__:
            assert getattr(package, public) is getattr(module, public)
        exported.update(module.__all__)
    public_names = {n for n in vars(package) if not n.startswith("_")}
    assert exported == public_names


def test_concrete_modules_are_final():
    with pytest.raises(TypeError):

        class WiderDisk(vg.UnitDiskRadio, strict=True):
            pass

    with pytest.raises(TypeError):

        class LoudGpcr(vs.GpcrRouting, strict=True):
            pass


def test_top_level_modules_declare_exports():
    assert set(vanetgraph.errors.__all__) == {
        "VanetGraphError",
        "TraceParseError",
        "ValidationError",
        "DomainError",
        "ConfigError",
    }
    for name in vanetgraph.typing.__all__:
        assert hasattr(vanetgraph.typing, name)
