import unittest
import sys
import os
from fractions import Fraction

# Add the project root to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__),
                                                '..')))

from circulation import edge_flux
from fixtures.graphs import (genus_three_graph, inclined_torus_graph,
                             random_reeb_graph, vertical_torus_graph)
from fixtures.grid import random_torus, wave_torus
from fixtures.octahedron import NORTH, SOUTH, height_octahedron, sphere_octahedron
from graph_topology import count_fixed_points, graph_first_betti
from mesh_core import topology_invariants
from realization import realize_graph
from reeb_build import (compare_with_oracle, compute_reeb, graph_violations,
                        reeb_oracle, triangle_area_below)

ORACLE_SEEDS = 50
ORACLE_GRID = 6
REALIZED_ORACLE_SEEDS = 10


def _oracle_levels(s, limit=100):
    values = sorted(set(s.f.values()))
    mids = [(a + b) / 2 for a, b in zip(values, values[1:])]
    step = max(1, len(mids) // limit)
    return mids[::step]


class TestTriangleAreaBelow(unittest.TestCase):

    def test_quadratic_pieces(self):
        values = (Fraction(0), Fraction(1), Fraction(2))
        self.assertEqual(triangle_area_below(values, 1, 0), 0)
        self.assertEqual(triangle_area_below(values, 1, 1), Fraction(1, 2))
        self.assertEqual(triangle_area_below(values, 1, Fraction(1, 2)),
                         Fraction(1, 8))
        self.assertEqual(triangle_area_below(values, 1, Fraction(3, 2)),
                         Fraction(7, 8))
        self.assertEqual(triangle_area_below(values, 1, 5), 1)


class TestComputeReeb(unittest.TestCase):

    def test_sphere_is_a_path(self):
        g = compute_reeb(sphere_octahedron())
        self.assertEqual(sorted(g.nodes), [NORTH, SOUTH])
        self.assertEqual(len(g.edges), 1)
        edge = g.edges[0]
        self.assertEqual((edge.tail, edge.head), (SOUTH, NORTH))
        self.assertEqual(g.edge_involution, {0: 0})
        self.assertEqual(edge.mass, 8)
        self.assertEqual(edge.profile.mirror(), edge.profile)
        self.assertEqual(graph_violations(g), [])

    def test_rejects_non_simple_function(self):
        with self.assertRaisesRegex(ValueError, "not simple Morse odd"):
            compute_reeb(height_octahedron())

    def test_vertical_torus_shape(self):
        g = compute_reeb(realize_graph(vertical_torus_graph(), 1))
        self.assertEqual(len(g.nodes), 4)
        self.assertEqual(len(g.edges), 4)
        self.assertEqual(graph_first_betti(g), 1)
        self.assertEqual(count_fixed_points(g), 0)
        self.assertEqual(graph_violations(g), [])

    def test_inclined_torus_has_two_fixed_edges(self):
        g = compute_reeb(realize_graph(inclined_torus_graph(), 1))
        self.assertEqual(count_fixed_points(g), 2)
        self.assertEqual(len(g.fixed_edges()), 2)

    def test_wave_torus_fixes_both_parallel_edges(self):
        g = compute_reeb(wave_torus(8, 8))
        parallel = [e.id for e in g.edges.values()
                    if g.nodes[e.tail].f < 0 < g.nodes[e.head].f]
        self.assertEqual(len(parallel), 2)
        self.assertEqual(g.fixed_edges(), sorted(parallel))

    def test_measure_is_conserved(self):
        for seed in range(3):
            s = random_torus(seed, 8, 8)
            g = compute_reeb(s)
            self.assertEqual(g.total_mass(), s.total_area())
            self.assertEqual(sum(edge_flux(e.profile) for e in g.edges.values()),
                             0)
            self.assertEqual(2 * graph_first_betti(g),
                             topology_invariants(s).b1_m)
            self.assertEqual(graph_violations(g), [])

    def test_cellmap_covers_every_triangle(self):
        s = wave_torus(8, 8)
        g = compute_reeb(s)
        covered = {ti for ti, _ in g.cellmap}
        self.assertEqual(covered, set(range(len(s.triangles))))


class TestOracle(unittest.TestCase):

    def test_random_tori_match_oracle(self):
        for seed in range(ORACLE_SEEDS):
            s = random_torus(seed, ORACLE_GRID, ORACLE_GRID)
            g = compute_reeb(s)
            oracle = reeb_oracle(s, _oracle_levels(s))
            self.assertEqual(compare_with_oracle(g, oracle), [],
                             f"seed {seed}")

    def test_realized_higher_genus_meshes_match_oracle(self):
        graphs = [genus_three_graph()]
        graphs += [random_reeb_graph(seed) for seed in range(REALIZED_ORACLE_SEEDS)]
        for index, g in enumerate(graphs):
            s = realize_graph(g, 1)
            computed = compute_reeb(s)
            self.assertEqual(graph_first_betti(computed), graph_first_betti(g))
            oracle = reeb_oracle(s, _oracle_levels(s))
            self.assertEqual(compare_with_oracle(computed, oracle), [],
                             f"graph {index}")
        self.assertEqual(graph_first_betti(graphs[0]), 3)

    def test_wave_torus_counts(self):
        s = wave_torus(8, 8)
        oracle = reeb_oracle(s, [Fraction(-1), Fraction(0), Fraction(1)])
        self.assertEqual(oracle.counts, [1, 2, 1])
        self.assertEqual(compare_with_oracle(compute_reeb(s), oracle), [])

    def test_level_at_vertex_value_raises(self):
        with self.assertRaises(ValueError):
            reeb_oracle(sphere_octahedron(), [Fraction(1, 10)])


class TestGraphViolations(unittest.TestCase):

    def test_figure_graphs_are_valid(self):
        self.assertEqual(graph_violations(vertical_torus_graph()), [])
        self.assertEqual(graph_violations(inclined_torus_graph()), [])

    def test_broken_mirror_is_reported(self):
        g = vertical_torus_graph()
        g.edge_involution = {0: 3, 3: 0, 1: 1, 2: 2}
        self.assertEqual(graph_violations(g), [])
        g.node_involution = {0: 0, 1: 2, 2: 1, 3: 3}
        violations = graph_violations(g)
        self.assertIn("node 0 is fixed by the involution", violations)
        self.assertIn("f is not odd at node 0", violations)


if __name__ == '__main__':
    unittest.main()
