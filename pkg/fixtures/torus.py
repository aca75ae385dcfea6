"""Torus and higher-genus double covers realized from their Reeb graphs."""
from fixtures.base import FixtureBuilder
from fixtures.graphs import (genus_three_graph, inclined_torus_graph,
                             vertical_torus_graph)
from realization import realize_graph

TORUS_REFINEMENT = 1


class VerticalTorusBuilder(FixtureBuilder):
    """Height on a vertical torus; no fixed points on the graph."""

    def get_fixture_name(self):
        return "vertical-torus"

    def build(self):
        return realize_graph(vertical_torus_graph(), TORUS_REFINEMENT)


class InclinedTorusBuilder(FixtureBuilder):
    """Height on an inclined torus; two fixed points on the graph."""

    def get_fixture_name(self):
        return "inclined-torus"

    def build(self):
        return realize_graph(inclined_torus_graph(), TORUS_REFINEMENT)


class GenusThreeBuilder(FixtureBuilder):
    """Genus-3 double cover of the non-orientable surface with chi = -2."""

    def get_fixture_name(self):
        return "genus3-surface"

    def build(self):
        return realize_graph(genus_three_graph(), TORUS_REFINEMENT)
