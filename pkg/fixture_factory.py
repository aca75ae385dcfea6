import os
from logger import get_logger
from fixtures.graphs import (GenusThreeGraphBuilder, InclinedGraphBuilder,
                             PathGraphBuilder, RandomGraphBuilder,
                             VerticalGraphBuilder)
from fixtures.grid import GridTorusBuilder, MonkeySaddleBuilder, RandomTorusBuilder
from fixtures.octahedron import OctahedronBuilder, SphereBuilder
from fixtures.torus import (GenusThreeBuilder, InclinedTorusBuilder,
                            VerticalTorusBuilder)

logger = get_logger(__name__)

SEED_ENV = "FIXTURE_SEED"
GRID_SIZE_ENV = "FIXTURE_GRID_SIZE"
DEFAULT_GRID_SIZE = 16

# Registry of available fixtures; "kind" is the document they emit
FIXTURE_REGISTRY = {
    "vertical-torus": {"class": VerticalTorusBuilder, "kind": "mesh"},
    "inclined-torus": {"class": InclinedTorusBuilder, "kind": "mesh"},
    "sphere": {"class": SphereBuilder, "kind": "mesh"},
    "octahedron": {"class": OctahedronBuilder, "kind": "mesh"},
    "monkey-saddle": {"class": MonkeySaddleBuilder, "kind": "mesh"},
    "random-torus": {"class": RandomTorusBuilder, "kind": "mesh"},
    "grid-torus": {"class": GridTorusBuilder, "kind": "mesh"},
    "genus3-surface": {"class": GenusThreeBuilder, "kind": "mesh"},
    "vertical-graph": {"class": VerticalGraphBuilder, "kind": "graph"},
    "inclined-graph": {"class": InclinedGraphBuilder, "kind": "graph"},
    "path-graph": {"class": PathGraphBuilder, "kind": "graph"},
    "random-graph": {"class": RandomGraphBuilder, "kind": "graph"},
    "genus3-graph": {"class": GenusThreeGraphBuilder, "kind": "graph"},
}


def _int_from_env(name, default):
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ValueError(
            f"Environment variable '{name}' must be an integer, got {raw!r}") from e


def get_fixture(fixture_name, seed=None, grid_size=None):
    """
    Factory function to get a fixture builder from the registry.

    seed and grid_size fall back to FIXTURE_SEED and FIXTURE_GRID_SIZE.
    """
    fixture_name = fixture_name.lower()
    fixture_config = FIXTURE_REGISTRY.get(fixture_name)

    if not fixture_config:
        raise ValueError(
            f"Unsupported fixture. Choose from: {list(FIXTURE_REGISTRY.keys())}"
        )

    if seed is None:
        seed = _int_from_env(SEED_ENV, 0)
    if grid_size is None:
        grid_size = _int_from_env(GRID_SIZE_ENV, DEFAULT_GRID_SIZE)
    logger.debug("Fixture %s with seed %d, grid size %d", fixture_name, seed,
                 grid_size)

    builder_class = fixture_config["class"]
    return builder_class(seed=seed, grid_size=grid_size)
