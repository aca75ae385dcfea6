"""Isomorphism of measured Reeb graphs and circulation graphs, Casimirs."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from data_models import (CirculationGraph, MeasuredReebGraph, SurfaceComplex,
                         ValidationReport, format_rational)
from graph_topology import (count_fixed_points, graph_first_betti,
                            orbit_moduli_dimension)
from logger import get_logger
from measure_profile import EdgeMeasureProfile
from mesh_core import topology_invariants

logger = get_logger(__name__)


@dataclass
class IsoResult:
    isomorphic: bool
    node_map: dict[int, int] = field(default_factory=dict)
    edge_map: dict[int, int] = field(default_factory=dict)
    reason: str = ""

    def to_dict(self) -> dict:
        data = {"isomorphic": self.isomorphic}
        if self.isomorphic:
            data["nodes"] = [[a, b] for a, b in sorted(self.node_map.items())]
            data["edges"] = [[a, b] for a, b in sorted(self.edge_map.items())]
        else:
            data["reason"] = self.reason
        return data


def profile_distance(p: EdgeMeasureProfile, q: EdgeMeasureProfile) -> Fraction:
    return p.distance(q)


def invariant_vector(g: MeasuredReebGraph) -> tuple:
    """(b1, #Fix, sorted node values, sorted edge masses)."""
    return (graph_first_betti(g), count_fixed_points(g),
            tuple(sorted(n.f for n in g.nodes.values())),
            tuple(sorted(e.mass for e in g.edges.values())))


def _close(a: Fraction, b: Fraction, tol: Optional[Fraction]) -> bool:
    return a == b if tol is None else abs(a - b) <= tol


def _invariant_mismatch(g1, g2, tol) -> str:
    b1a, fixa, nodesa, massesa = invariant_vector(g1)
    b1b, fixb, nodesb, massesb = invariant_vector(g2)
    if b1a != b1b:
        return f"b1 differs: {b1a} != {b1b}"
    if fixa != fixb:
        return f"fixed point count differs: {fixa} != {fixb}"
    if nodesa != nodesb:
        return "node values differ"
    if len(massesa) != len(massesb) or not all(
            _close(a, b, tol) for a, b in zip(massesa, massesb)):
        return "edge masses differ"
    return ""


class _Matcher:
    """Backtracking search for an involution-equivariant isomorphism."""

    def __init__(self, g1: MeasuredReebGraph, g2: MeasuredReebGraph,
                 tol: Optional[Fraction], edge_ok=None):
        self.g1, self.g2, self.tol = g1, g2, tol
        self.edge_ok = edge_ok or (lambda e1, e2: True)
        self.node_orbits = sorted(
            {min(n, g1.node_involution[n], key=lambda x: (g1.nodes[x].f, x))
             for n in g1.nodes},
            key=lambda n: (g1.nodes[n].f, n))
        self.edge_orbits = sorted({min(e, g1.edge_involution[e]) for e in g1.edges})
        self.steps = 0

    def _degree(self, g, n):
        return (len(g.incoming(n)), len(g.outgoing(n)))

    def _node_options(self, n, used) -> Iterator[int]:
        g1, g2 = self.g1, self.g2
        for m in sorted(g2.nodes):
            if m in used or g2.nodes[m].f != g1.nodes[n].f:
                continue
            if self._degree(g1, n) == self._degree(g2, m):
                yield m

    def _edge_matches(self, e1: int, e2: int, node_map) -> bool:
        a, b = self.g1.edges[e1], self.g2.edges[e2]
        if node_map[a.tail] != b.tail or node_map[a.head] != b.head:
            return False
        if self.tol is None:
            same = a.profile.distance(b.profile) == 0
        else:
            same = a.profile.distance(b.profile) <= self.tol
        return same and self.edge_ok(e1, e2)

    def search(self) -> Optional[tuple[dict, dict]]:
        return self._nodes(0, {}, set())

    def _nodes(self, idx, node_map, used):
        if idx == len(self.node_orbits):
            return self._edges(0, node_map, {}, set())
        n = self.node_orbits[idx]
        image = self.g1.node_involution[n]
        for m in self._node_options(n, used):
            partner = self.g2.node_involution[m]
            if partner in used or partner == m:
                continue
            if self._degree(self.g1, image) != self._degree(self.g2, partner):
                continue
            self.steps += 1
            node_map[n], node_map[image] = m, partner
            used.update((m, partner))
            found = self._nodes(idx + 1, node_map, used)
            if found:
                return found
            used.difference_update((m, partner))
            del node_map[n], node_map[image]
        return None

    def _edges(self, idx, node_map, edge_map, used):
        if idx == len(self.edge_orbits):
            return dict(node_map), dict(edge_map)
        e = self.edge_orbits[idx]
        image = self.g1.edge_involution[e]
        for f in sorted(self.g2.edges):
            if f in used or not self._edge_matches(e, f, node_map):
                continue
            partner = self.g2.edge_involution[f]
            if (image == e) != (partner == f):
                continue
            if image != e and (partner in used or
                               not self._edge_matches(image, partner, node_map)):
                continue
            self.steps += 1
            edge_map[e], edge_map[image] = f, partner
            used.update((f, partner))
            found = self._edges(idx + 1, node_map, edge_map, used)
            if found:
                return found
            used.difference_update((f, partner))
            del edge_map[e]
            edge_map.pop(image, None)
        return None


def _iso(g1, g2, tol, edge_ok=None) -> IsoResult:
    tol = None if tol is None else Fraction(tol)
    if len(g1.nodes) != len(g2.nodes) or len(g1.edges) != len(g2.edges):
        return IsoResult(False, reason="sizes differ")
    reason = _invariant_mismatch(g1, g2, tol)
    if reason:
        logger.debug("Pruned by invariants: %s", reason)
        return IsoResult(False, reason=reason)
    matcher = _Matcher(g1, g2, tol, edge_ok)
    found = matcher.search()
    logger.debug("Isomorphism search took %d steps", matcher.steps)
    if found is None:
        return IsoResult(False, reason="no equivariant isomorphism")
    return IsoResult(True, found[0], found[1])


def iso_measured_reeb(g1: MeasuredReebGraph, g2: MeasuredReebGraph,
                      tol=None) -> IsoResult:
    """Decides isomorphism preserving f, the involution and the profiles.

    Profiles must agree exactly, or within tol in sup norm when given.
    """
    return _iso(g1, g2, tol)


def iso_circulation_graph(c1: CirculationGraph, c2: CirculationGraph,
                          tol=None) -> IsoResult:
    """As iso_measured_reeb, additionally matching cref edge by edge."""
    tol_value = None if tol is None else Fraction(tol)
    return _iso(c1.base, c2.base, tol,
                lambda e1, e2: _close(c1.cref[e1], c2.cref[e2], tol_value))


@dataclass
class CasimirTable:
    orders: list[int]
    per_edge: dict[int, dict[int, Fraction]]
    total: dict[int, Fraction]
    quotient: dict[int, Fraction]

    def to_dict(self) -> dict:
        return {
            "orders": self.orders,
            "edges": {str(eid): {str(k): format_rational(v) for k, v in row.items()}
                      for eid, row in sorted(self.per_edge.items())},
            "total": {str(k): format_rational(v) for k, v in self.total.items()},
            "quotient": {str(k): format_rational(v)
                         for k, v in self.quotient.items()},
        }


def casimir_moments(g: MeasuredReebGraph, ks) -> CasimirTable:
    """Moments of the measure per edge and in total.

    The quotient surface carries half of every even moment; odd moments of
    the double cover vanish and have no quotient counterpart.

    Raises:
        ValueError: For a negative order.
    """
    ks = [int(k) for k in ks]
    for k in ks:
        if k < 0:
            raise ValueError(f"Moment order must be non-negative, got {k}")
    per_edge = {eid: {k: e.profile.moment(k) for k in ks}
                for eid, e in sorted(g.edges.items())}
    total = {k: sum((row[k] for row in per_edge.values()), Fraction(0))
             for k in ks}
    quotient = {k: total[k] / 2 for k in ks if k % 2 == 0}
    return CasimirTable(ks, per_edge, total, quotient)


def compatibility_check(g: MeasuredReebGraph, s: SurfaceComplex) -> ValidationReport:
    """Checks 2 b1(graph) = b1(M) and total mass = total area; never raises."""
    report = ValidationReport()
    b1_graph = b1_m = None
    try:
        b1_graph = graph_first_betti(g)
    except ValueError as e:
        report.add("graph_disconnected", str(e))
    try:
        b1_m = topology_invariants(s).b1_m
    except ValueError as e:
        report.add("odd_euler_characteristic", str(e))
    if None not in (b1_graph, b1_m) and 2 * b1_graph != b1_m:
        report.add("betti_mismatch", f"2 b1(graph) = {2 * b1_graph} but "
                   f"b1(M) = {b1_m}")
    mass, area = g.total_mass(), s.total_area()
    if mass != area:
        report.add("total_measure_mismatch", f"total measure mismatch: "
                   f"mass {mass} != area {area}")
    return report


def classification_report(g: MeasuredReebGraph, ks=(0, 2, 4),
                          others: Optional[dict[str, IsoResult]] = None) -> dict:
    """JSON-ready summary: invariants, moduli dimension, Casimirs, verdicts."""
    b1, fix, values, masses = invariant_vector(g)
    report = {
        "invariants": {
            "b1": b1,
            "fix": fix,
            "node_values": [format_rational(v) for v in values],
            "masses": [format_rational(m) for m in masses],
        },
        "d": orbit_moduli_dimension(g),
        "casimirs": casimir_moments(g, ks).to_dict(),
    }
    if others:
        report["iso"] = {name: result.to_dict() for name, result in others.items()}
    return report
