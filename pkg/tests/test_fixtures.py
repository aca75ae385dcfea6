import unittest
import sys
import os
import json
from unittest.mock import patch

# Add the project root to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__),
                                                '..')))

from circulation import primitive_of_density, solve_circulation_space
from data_models import (CirculationGraph, DiscreteOneForm, MeasuredReebGraph,
                         SurfaceComplex)
from fixture_factory import FIXTURE_REGISTRY, get_fixture
from fixtures.graphs import (RandomGraphBuilder, VerticalGraphBuilder,
                             inclined_torus_graph)
from fixtures.octahedron import sphere_octahedron
from fixtures.grid import (GridTorusBuilder, RandomTorusBuilder, grid_involution,
                           grid_torus, grid_triangles, random_torus)
from fixtures.torus import (GenusThreeBuilder, InclinedTorusBuilder,
                            VerticalTorusBuilder)
from graph_topology import graph_first_betti, orbit_moduli_dimension
from mesh_core import topology_invariants, validate_surface
from reeb_build import compute_reeb


class TestFixtureFactory(unittest.TestCase):

    def test_registry_builds_named_builders(self):
        for name, config in FIXTURE_REGISTRY.items():
            builder = get_fixture(name, seed=1, grid_size=8)
            self.assertIsInstance(builder, config["class"])
            self.assertEqual(builder.get_fixture_name(), name)

    def test_unknown_fixture_raises(self):
        with self.assertRaisesRegex(ValueError, "Unsupported fixture"):
            get_fixture("klein-bottle")

    def test_name_is_case_insensitive(self):
        self.assertIsInstance(get_fixture("Vertical-Torus"), VerticalTorusBuilder)

    @patch.dict(os.environ, {"FIXTURE_SEED": "42", "FIXTURE_GRID_SIZE": "12"})
    def test_environment_defaults(self):
        builder = get_fixture("random-torus")
        self.assertEqual((builder.seed, builder.grid_size), (42, 12))
        builder = get_fixture("random-torus", seed=3, grid_size=8)
        self.assertEqual((builder.seed, builder.grid_size), (3, 8))

    @patch.dict(os.environ, {"FIXTURE_SEED": "many"})
    def test_bad_environment_value_raises(self):
        with self.assertRaisesRegex(ValueError, "FIXTURE_SEED"):
            get_fixture("random-graph")

    @patch.dict(os.environ, {}, clear=True)
    def test_built_in_defaults(self):
        builder = get_fixture("grid-torus")
        self.assertEqual((builder.seed, builder.grid_size), (0, 16))

    def test_documents_parse_back_exactly(self):
        for name in ("sphere", "octahedron", "random-torus", "vertical-graph",
                     "random-graph", "genus3-graph"):
            fixture = get_fixture(name, seed=2, grid_size=8).build()
            text = fixture.to_json()
            self.assertIsInstance(json.loads(text), dict)
            if FIXTURE_REGISTRY[name]["kind"] == "mesh":
                self.assertEqual(SurfaceComplex.from_json(text), fixture, name)
            else:
                self.assertEqual(MeasuredReebGraph.from_json(text), fixture, name)
            self.assertEqual(get_fixture(name, seed=2, grid_size=8).to_json(),
                             text)

    def test_computed_graph_keeps_its_cellmap(self):
        g = compute_reeb(GridTorusBuilder(grid_size=8).build())
        self.assertTrue(g.cellmap)
        parsed = MeasuredReebGraph.from_json(g.to_json())
        self.assertEqual(parsed, g)
        self.assertEqual(parsed.cellmap, g.cellmap)

    def test_circulation_graph_parses_back_exactly(self):
        g = inclined_torus_graph()
        space = solve_circulation_space(g)
        cg = CirculationGraph(g, dict(space.particular))
        self.assertEqual(CirculationGraph.from_json(cg.to_json()), cg)

    def test_one_form_parses_back_exactly(self):
        alpha = primitive_of_density(sphere_octahedron())
        self.assertEqual(DiscreteOneForm.from_json(alpha.to_json()), alpha)


class TestGridTorus(unittest.TestCase):

    def test_sizes_must_be_even(self):
        with self.assertRaises(ValueError):
            grid_torus(6, 5, lambda phi, theta: 0.0)
        with self.assertRaises(ValueError):
            grid_torus(2, 8, lambda phi, theta: 0.0)

    def test_involution_is_free_and_simplicial(self):
        m = n = 8
        involution = grid_involution(m, n)
        self.assertTrue(all(involution[involution[v]] == v for v in involution))
        self.assertTrue(all(involution[v] != v for v in involution))
        triangles = {frozenset(t) for t in grid_triangles(m, n)}
        for tri in triangles:
            self.assertIn(frozenset(involution[v] for v in tri), triangles)

    def test_random_torus_is_valid_and_deterministic(self):
        s = random_torus(5, 8, 8)
        self.assertTrue(validate_surface(s).ok, validate_surface(s).to_json())
        self.assertEqual(s.f, random_torus(5, 8, 8).f)
        self.assertEqual(RandomTorusBuilder(seed=5, grid_size=8).build().f, s.f)

    def test_wave_torus_has_one_free_parameter(self):
        g = compute_reeb(GridTorusBuilder(grid_size=8).build())
        self.assertEqual(orbit_moduli_dimension(g), 1)


class TestTorusFixtures(unittest.TestCase):

    def test_vertical_and_inclined_dimensions(self):
        vertical = compute_reeb(VerticalTorusBuilder().build())
        inclined = compute_reeb(InclinedTorusBuilder().build())
        self.assertEqual(orbit_moduli_dimension(vertical, b1_n=1), 0)
        self.assertEqual(orbit_moduli_dimension(inclined, b1_n=1), 1)

    def test_genus_three_surface(self):
        s = GenusThreeBuilder().build()
        self.assertTrue(validate_surface(s).ok, validate_surface(s).to_json())
        inv = topology_invariants(s)
        # real first Betti number of the quotient, 1 - chi
        self.assertEqual((inv.chi_m, inv.b1_m, inv.chi_n, inv.b1_n),
                         (-4, 6, -2, 3))
        g = compute_reeb(s)
        self.assertEqual(graph_first_betti(g), inv.b1_n)
        self.assertEqual(orbit_moduli_dimension(g, b1_n=inv.b1_n), 1)

    def test_graph_builders(self):
        self.assertEqual(len(VerticalGraphBuilder().build().edges), 4)
        self.assertEqual(RandomGraphBuilder(seed=4).build().to_json(),
                         RandomGraphBuilder(seed=4).build().to_json())

from absl.testing import absltest

if __name__ == '__main__':
    absltest.main()
