import unittest
import sys
import os
from fractions import Fraction

# Add the project root to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__),
                                                '..')))

from circulation import solve_circulation_space
from classify import (casimir_moments, classification_report,
                      compatibility_check, invariant_vector,
                      iso_circulation_graph, iso_measured_reeb, profile_distance)
from data_models import (CirculationGraph, MeasuredReebGraph, ReebEdge,
                         ReebNode, SurfaceComplex)
from fixtures.graphs import inclined_torus_graph, path_graph, vertical_torus_graph
from fixtures.octahedron import sphere_octahedron
from measure_profile import EdgeMeasureProfile
from realization import realize_graph
from reeb_build import compute_reeb

F = Fraction


def _bent_vertical_graph():
    """The vertical figure graph with a quadratic profile on the outer edges."""
    g = vertical_torus_graph()
    bent = EdgeMeasureProfile.from_unit_polynomial(-2, -1, 1, (F(1, 2), F(1, 2)))
    edges = dict(g.edges)
    edges[0] = ReebEdge(0, 0, 1, bent)
    edges[3] = ReebEdge(3, 2, 3, bent.mirror())
    g.edges = edges
    return g


class TestIsoMeasuredReeb(unittest.TestCase):

    def test_relabeled_graph_is_isomorphic(self):
        g = vertical_torus_graph()
        node_map = {0: 10, 1: 11, 2: 12, 3: 13}
        h = g.relabeled(node_map, {0: 7, 1: 5, 2: 6, 3: 4})
        result = iso_measured_reeb(g, h)
        self.assertTrue(result.isomorphic)
        self.assertEqual(result.node_map, node_map)
        self.assertEqual(result.edge_map[0], 7)
        self.assertEqual(result.edge_map[3], 4)
        self.assertEqual({result.edge_map[1], result.edge_map[2]}, {5, 6})
        self.assertTrue(iso_measured_reeb(h, g).isomorphic)

    def test_vertical_and_inclined_differ(self):
        result = iso_measured_reeb(vertical_torus_graph(), inclined_torus_graph())
        self.assertFalse(result.isomorphic)
        self.assertIn("fixed point count", result.reason)

    def test_sizes_differ(self):
        result = iso_measured_reeb(vertical_torus_graph(), path_graph())
        self.assertFalse(result.isomorphic)

    def test_profiles_compared_within_tolerance(self):
        g, h = vertical_torus_graph(), _bent_vertical_graph()
        self.assertEqual(profile_distance(g.edges[0].profile, h.edges[0].profile),
                         F(1, 8))
        self.assertFalse(iso_measured_reeb(g, h).isomorphic)
        self.assertFalse(iso_measured_reeb(g, h, F(1, 10)).isomorphic)
        self.assertTrue(iso_measured_reeb(g, h, F(1, 8)).isomorphic)

    def test_invariant_vector(self):
        b1, fix, values, masses = invariant_vector(inclined_torus_graph())
        self.assertEqual((b1, fix), (1, 2))
        self.assertEqual(values, (-2, -1, 1, 2))
        self.assertEqual(masses, (1, 1, 2, 2))

    def test_realized_graph_matches_source(self):
        g = vertical_torus_graph()
        computed = compute_reeb(realize_graph(g, 2))
        self.assertTrue(iso_measured_reeb(g, computed,
                                          g.total_mass() / 4).isomorphic)


class TestIsoCirculationGraph(unittest.TestCase):

    def setUp(self):
        self.g = inclined_torus_graph()
        space = solve_circulation_space(self.g)
        self.particular = space.particular
        self.basis = space.basis[0]

    def test_swapping_fixed_parallel_edges(self):
        p = self.particular
        swapped = dict(p)
        swapped[1], swapped[2] = p[2], p[1]
        result = iso_circulation_graph(CirculationGraph(self.g, p),
                                       CirculationGraph(self.g, swapped))
        self.assertTrue(result.isomorphic)
        self.assertEqual(result.edge_map[1], 2)

    def test_shift_along_basis_changes_orbit(self):
        p = self.particular
        p_shift = p[2] - p[1]
        kappa = F(1) if p_shift != 1 else F(2)
        shifted = {eid: p[eid] + kappa * self.basis[eid] for eid in p}
        result = iso_circulation_graph(CirculationGraph(self.g, p),
                                       CirculationGraph(self.g, shifted))
        self.assertFalse(result.isomorphic)
        self.assertEqual(result.reason, "no equivariant isomorphism")

    def test_circulation_tolerance(self):
        p = self.particular
        nudged = {eid: value + F(1, 100) * self.basis[eid]
                  for eid, value in p.items()}
        c1, c2 = CirculationGraph(self.g, p), CirculationGraph(self.g, nudged)
        self.assertFalse(iso_circulation_graph(c1, c2).isomorphic)
        self.assertTrue(iso_circulation_graph(c1, c2, F(1, 50)).isomorphic)


class TestCasimirs(unittest.TestCase):

    def test_path_graph_moments(self):
        table = casimir_moments(path_graph(), [0, 1, 2])
        self.assertEqual(table.total, {0: 4, 1: 0, 2: F(4, 3)})
        self.assertEqual(table.quotient, {0: 2, 2: F(2, 3)})
        self.assertEqual(table.to_dict()["total"]["2"], "4/3")

    def test_odd_moments_vanish(self):
        table = casimir_moments(vertical_torus_graph(), [1, 3])
        self.assertEqual(table.total, {1: 0, 3: 0})
        self.assertEqual(table.per_edge[0][1], F(-3, 2))

    def test_negative_order_raises(self):
        with self.assertRaises(ValueError):
            casimir_moments(path_graph(), [-2])


class TestCompatibility(unittest.TestCase):

    def test_realized_torus_is_compatible(self):
        g = vertical_torus_graph()
        self.assertTrue(compatibility_check(g, realize_graph(g, 1)).ok)

    def test_mismatches_are_reported(self):
        report = compatibility_check(path_graph(), realize_graph(
            vertical_torus_graph(), 1))
        self.assertEqual(report.codes, {"betti_mismatch",
                                        "total_measure_mismatch"})

    def test_sphere_and_path(self):
        report = compatibility_check(path_graph(mass=8), sphere_octahedron())
        self.assertTrue(report.ok, report.to_json())

    def test_disconnected_graph_is_reported(self):
        profile = EdgeMeasureProfile.uniform(-1, 1, 4)
        nodes = {n: ReebNode(n, F(f)) for n, f in enumerate((-1, 1, -1, 1))}
        edges = {0: ReebEdge(0, 0, 1, profile), 1: ReebEdge(1, 2, 3, profile)}
        g = MeasuredReebGraph(nodes, edges, {0: 1, 1: 0, 2: 3, 3: 2},
                              {0: 0, 1: 1})
        report = compatibility_check(g, sphere_octahedron())
        self.assertEqual(report.codes, {"graph_disconnected"})

    def test_odd_euler_characteristic_is_reported(self):
        s = SurfaceComplex({0: F(1), 1: F(-1), 2: F(1, 2)}, ((0, 1, 2),),
                           (F(8),), {})
        report = compatibility_check(path_graph(mass=8), s)
        self.assertEqual(report.codes, {"odd_euler_characteristic"})


class TestClassificationReport(unittest.TestCase):

    def test_report_fields(self):
        g = inclined_torus_graph()
        others = {"vertical": iso_measured_reeb(g, vertical_torus_graph())}
        report = classification_report(g, (0, 2), others)
        self.assertEqual(report["d"], 1)
        self.assertEqual(report["invariants"]["fix"], 2)
        self.assertEqual(report["casimirs"]["total"]["0"], "6/1")
        self.assertFalse(report["iso"]["vertical"]["isomorphic"])


if __name__ == '__main__':
    unittest.main()
