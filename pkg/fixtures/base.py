"""Abstract base class for a named fixture builder."""
from abc import ABC, abstractmethod
from typing import Union

from data_models import MeasuredReebGraph, SurfaceComplex
from logger import get_logger

logger = get_logger(__name__)

Fixture = Union[SurfaceComplex, MeasuredReebGraph]


class FixtureBuilder(ABC):
    """Abstract base class for a named fixture builder.

    Builders are deterministic: the same seed and grid size give the same
    document.
    """

    def __init__(self, seed: int = 0, grid_size: int = 16):
        self.seed = seed
        self.grid_size = grid_size

    @abstractmethod
    def get_fixture_name(self) -> str:
        """Returns the registry name of the fixture."""
        pass

    @abstractmethod
    def build(self) -> Fixture:
        """Builds the mesh or graph."""
        pass

    def to_json(self) -> str:
        """Builds the fixture and serializes it."""
        fixture = self.build()
        logger.info("Built fixture %s (seed %d)", self.get_fixture_name(),
                    self.seed)
        return fixture.to_json()
