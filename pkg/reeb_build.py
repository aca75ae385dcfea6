"""Measured Reeb graph with involution of an odd simple PL Morse function.

The sweep cuts every triangle into pieces (T, k), one per open level
interval (c_k, c_{k+1}) between consecutive critical values it meets.
Pieces are merged with a disjoint-set forest; each class is one edge.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from data_models import MeasuredReebGraph, ReebEdge, ReebNode, SurfaceComplex
from logger import get_logger
from measure_profile import ZERO, Quadratic, profile_from_polys, sub_polys
from mesh_core import (check_simple_morse_odd, classify_critical_vertices,
                       directed_edges, image_triangle, level_components)
from union_find import DisjointSet

logger = get_logger(__name__)

Piece = tuple[int, int]


def _sorted_values(s: SurfaceComplex, ti: int) -> tuple[Fraction, Fraction, Fraction]:
    a, b, c = sorted(s.f[v] for v in s.triangles[ti])
    return a, b, c


def triangle_poly(values, area, t: Fraction) -> Quadratic:
    """Quadratic of the cumulative area of a triangle on the piece holding t.

    For vertex values a < b < c the area below t is A(t-a)^2/((b-a)(c-a)) on
    [a, b] and A - A(c-t)^2/((c-a)(c-b)) on [b, c].
    """
    a, b, c = sorted(values)
    area = Fraction(area)
    if t <= a:
        return (ZERO, ZERO, ZERO)
    if t >= c:
        return (ZERO, ZERO, area)
    if t <= b:
        k = area / ((b - a) * (c - a))
        return (k, -2 * a * k, a * a * k)
    k = area / ((c - a) * (c - b))
    return (-k, 2 * c * k, area - c * c * k)


def triangle_area_below(values, area, t) -> Fraction:
    """Exact area of {f <= t} inside a triangle with linear f."""
    t = Fraction(t)
    a2, a1, a0 = triangle_poly(values, area, t)
    return (a2 * t + a1) * t + a0


def _piece_range(crit: list[Fraction], lo: Fraction, hi: Fraction) -> range:
    """Intervals k with (c_k, c_{k+1}) meeting the open range (lo, hi)."""
    return range(max(bisect_right(crit, lo) - 1, 0), bisect_left(crit, hi))


def _singular_triangles(s: SurfaceComplex, w: int) -> set[int]:
    """Triangles met by the level component through the critical vertex w."""
    t = s.f[w]
    stack = []
    visited: set[int] = set()
    for ti in s.vertex_triangles[w]:
        a, b, c = sorted(s.triangles[ti], key=s.order_key)
        if b == w:
            visited.add(ti)
            stack.append(tuple(sorted((a, c))))
    while stack:
        edge = stack.pop()
        for ti in s.edge_triangles[edge]:
            if ti in visited:
                continue
            visited.add(ti)
            if w in s.triangles[ti]:
                continue
            for u, v in directed_edges(s.triangles[ti]):
                other = tuple(sorted((u, v)))
                if other != edge and min(s.f[u], s.f[v]) < t < max(s.f[u], s.f[v]):
                    stack.append(other)
    return visited


def compute_reeb(s: SurfaceComplex) -> MeasuredReebGraph:
    """Sweeps the critical levels and returns the measured Reeb graph.

    Raises:
        ValueError: If the function is not simple Morse odd or a node of the
            resulting graph is neither 1- nor 3-valent.
    """
    simplicity = check_simple_morse_odd(s)
    if not simplicity.passed:
        raise ValueError("Function is not simple Morse odd: " +
                         "; ".join(simplicity.violations))
    report = classify_critical_vertices(s)
    critical = sorted(report.critical_vertices, key=s.order_key)
    crit = [s.f[w] for w in critical]
    if len(critical) < 2:
        raise ValueError("A closed surface needs at least two critical points")

    pieces = DisjointSet()
    ranges = {}
    for ti in range(len(s.triangles)):
        a, _, c = _sorted_values(s, ti)
        ranges[ti] = _piece_range(crit, a, c)
        for k in ranges[ti]:
            pieces.add((ti, k))

    for (u, v), tris in s.edge_triangles.items():
        lo, hi = sorted((s.f[u], s.f[v]))
        t1, t2 = tris
        for k in _piece_range(crit, lo, hi):
            pieces.union((t1, k), (t2, k))

    singular = {k: _singular_triangles(s, critical[k])
                for k in range(1, len(critical) - 1)}
    for ti, span in ranges.items():
        for k in span[1:]:
            if ti not in singular[k]:
                pieces.union((ti, k - 1), (ti, k))

    classes = []
    for members in pieces.groups():
        k_lo = min(k for _, k in members)
        k_hi = max(k for _, k in members)
        classes.append(((crit[k_lo], crit[k_hi + 1], members[0]),
                        critical[k_lo], critical[k_hi + 1], members))
    classes.sort(key=lambda item: item[0])

    nodes = {w: ReebNode(w, s.f[w]) for w in critical}
    edges = {}
    cellmap: dict[Piece, int] = {}
    for eid, (_, tail, head, members) in enumerate(classes):
        edges[eid] = ReebEdge(eid, tail, head)
        for piece in members:
            cellmap[piece] = eid
    skeleton = MeasuredReebGraph(nodes, edges, cellmap=cellmap)
    for w in critical:
        valence = skeleton.valence(w)
        if valence not in (1, 3):
            raise ValueError(f"Reeb node {w} has valence {valence}")
    logger.info("Reeb graph: %d nodes, %d edges from %d triangles",
                len(nodes), len(edges), len(s.triangles))
    return pushforward_measure(s, induce_involution(s, skeleton))


def _critical_levels(g: MeasuredReebGraph) -> list[Fraction]:
    return sorted(n.f for n in g.nodes.values())


def induce_involution(s: SurfaceComplex,
                      g: MeasuredReebGraph) -> MeasuredReebGraph:
    """Pushes nodes and level components through I.

    Raises:
        ValueError: If I does not map the pieces of an edge into one edge.
    """
    crit = _critical_levels(g)
    last = len(crit) - 2
    node_involution = {}
    for n in g.nodes:
        image = s.involution[n]
        if image not in g.nodes:
            raise ValueError(f"Image {image} of node {n} is not a node")
        node_involution[n] = image

    members: dict[int, list[Piece]] = {}
    for piece, eid in g.cellmap.items():
        members.setdefault(eid, []).append(piece)
    edge_involution = {}
    for eid, pieces in sorted(members.items()):
        images = set()
        for ti, k in pieces:
            try:
                image = (image_triangle(s, ti), last - k)
            except KeyError as e:
                raise ValueError(f"Image of triangle {ti} is not a triangle") from e
            if image not in g.cellmap:
                raise ValueError(f"Piece {image} has no edge")
            images.add(g.cellmap[image])
        if len(images) != 1:
            raise ValueError(f"I does not permute level components consistently: "
                             f"edge {eid} maps to {sorted(images)}")
        edge_involution[eid] = images.pop()

    for eid, image in edge_involution.items():
        if edge_involution.get(image) != eid:
            raise ValueError(f"Edge involution is not involutive at {eid}")
        if node_involution[g.edges[eid].tail] != g.edges[image].head:
            raise ValueError(f"Involution does not reverse edge {eid}")
    logger.debug("Edge involution: %s", edge_involution)
    return MeasuredReebGraph(dict(g.nodes), dict(g.edges), node_involution,
                             edge_involution, dict(g.cellmap))


def _piece_events(values, area, lo: Fraction, hi: Fraction):
    """Coefficient jumps of t -> Q(clamp(t, lo, hi)) - Q(lo)."""
    base = triangle_area_below(values, area, lo)
    knots = [lo] + sorted(x for x in values if lo < x < hi) + [hi]
    previous = (ZERO, ZERO, ZERO)
    events = []
    for p, q in zip(knots, knots[1:]):
        poly = sub_polys(triangle_poly(values, area, (p + q) / 2),
                         (ZERO, ZERO, base))
        events.append((p, sub_polys(poly, previous)))
        previous = poly
    final = (ZERO, ZERO, triangle_area_below(values, area, hi) - base)
    events.append((hi, sub_polys(final, previous)))
    return events


def pushforward_measure(s: SurfaceComplex,
                        g: MeasuredReebGraph) -> MeasuredReebGraph:
    """Exact cumulative profiles of the pushforward of the area density."""
    crit = _critical_levels(g)
    events: dict[int, list] = {eid: [] for eid in g.edges}
    for (ti, k), eid in g.cellmap.items():
        values = [s.f[v] for v in s.triangles[ti]]
        events[eid].extend(_piece_events(values, s.areas[ti], crit[k], crit[k + 1]))
    edges = {}
    for eid, edge in g.edges.items():
        lo, hi = g.nodes[edge.tail].f, g.nodes[edge.head].f
        edges[eid] = ReebEdge(eid, edge.tail, edge.head,
                              profile_from_polys(lo, hi, events[eid]))
    return MeasuredReebGraph(dict(g.nodes), edges, dict(g.node_involution),
                             dict(g.edge_involution), dict(g.cellmap))


def graph_violations(g: MeasuredReebGraph) -> list[str]:
    """Lists every broken invariant of a measured Reeb graph with involution."""
    violations = []
    for e in g.edges.values():
        if e.tail not in g.nodes or e.head not in g.nodes:
            violations.append(f"edge {e.id} has an unknown endpoint")
            return violations
        if not g.nodes[e.tail].f < g.nodes[e.head].f:
            violations.append(f"f does not increase along edge {e.id}")
        if e.profile is None or not e.profile.is_monotone():
            violations.append(f"edge {e.id} has an invalid profile")
    for n in g.nodes:
        if g.valence(n) not in (1, 3):
            violations.append(f"node {n} has valence {g.valence(n)}")
    ni, ei = g.node_involution, g.edge_involution
    if set(ni) != set(g.nodes) or set(ni.values()) != set(g.nodes):
        violations.append("node involution is not a permutation")
        return violations
    if set(ei) != set(g.edges) or set(ei.values()) != set(g.edges):
        violations.append("edge involution is not a permutation")
        return violations
    for n, image in ni.items():
        if image == n:
            violations.append(f"node {n} is fixed by the involution")
        if ni[image] != n:
            violations.append(f"node involution is not involutive at {n}")
        if g.nodes[image].f != -g.nodes[n].f:
            violations.append(f"f is not odd at node {n}")
    for eid, image in ei.items():
        if ei[image] != eid:
            violations.append(f"edge involution is not involutive at {eid}")
        edge, mirror = g.edges[eid], g.edges[image]
        if ni[edge.tail] != mirror.head or ni[edge.head] != mirror.tail:
            violations.append(f"involution does not reverse edge {eid}")
        elif (edge.profile is not None and mirror.profile is not None
              and edge.profile.mirror() != mirror.profile):
            violations.append(f"profile of edge {image} is not the mirror of "
                              f"edge {eid}")
    return violations


@dataclass
class OracleResult:
    levels: list[Fraction]
    components: list[list[list[int]]]
    adjacency: list[list[tuple[int, int]]]

    @property
    def counts(self) -> list[int]:
        return [len(c) for c in self.components]


def reeb_oracle(s: SurfaceComplex, levels) -> OracleResult:
    """Brute-force level-set components and their adjacency across slabs.

    Raises:
        ValueError: If a level equals a vertex value.
    """
    levels = sorted(Fraction(t) for t in levels)
    components = [level_components(s, t) for t in levels]
    adjacency = []
    for (t1, comps1), (t2, comps2) in zip(zip(levels, components),
                                          zip(levels[1:], components[1:])):
        slab = nx.Graph()
        for ti in range(len(s.triangles)):
            a, _, c = _sorted_values(s, ti)
            if a < t2 and c > t1:
                slab.add_node(ti)
        for (u, v), (ta, tb) in s.edge_triangles.items():
            lo, hi = sorted((s.f[u], s.f[v]))
            if lo < t2 and hi > t1:
                slab.add_edge(ta, tb)
        label = {}
        for idx, part in enumerate(nx.connected_components(slab)):
            for ti in part:
                label[ti] = idx
        adjacency.append(sorted(
            (i, j) for i, c1 in enumerate(comps1) for j, c2 in enumerate(comps2)
            if label[c1[0]] == label[c2[0]]))
    return OracleResult(levels, components, adjacency)


def edge_of_component(g: MeasuredReebGraph, triangles: list[int], t) -> int:
    """The Reeb edge carrying a level component at the regular level t."""
    crit = _critical_levels(g)
    k = bisect_left(crit, Fraction(t)) - 1
    found = {g.cellmap[(ti, k)] for ti in triangles}
    if len(found) != 1:
        raise ValueError(f"Level component at {t} spans edges {sorted(found)}")
    return found.pop()


def _slab_labels(g: MeasuredReebGraph, t1: Fraction, t2: Fraction) -> dict[int, int]:
    slab = nx.Graph()
    for e in g.edges.values():
        lo, hi = g.nodes[e.tail].f, g.nodes[e.head].f
        if lo < t2 and hi > t1:
            slab.add_node(("e", e.id))
            for n in (e.tail, e.head):
                if t1 < g.nodes[n].f < t2:
                    slab.add_edge(("e", e.id), ("n", n))
    labels = {}
    for idx, part in enumerate(nx.connected_components(slab)):
        for kind, ident in part:
            if kind == "e":
                labels[ident] = idx
    return labels


def compare_with_oracle(g: MeasuredReebGraph, oracle: OracleResult) -> list[str]:
    """Mismatches between a computed graph and the brute-force oracle."""
    mismatches = []
    edge_maps = []
    for t, comps in zip(oracle.levels, oracle.components):
        alive = sorted(e.id for e in g.edges.values()
                       if g.nodes[e.tail].f < t < g.nodes[e.head].f)
        mapped = sorted(edge_of_component(g, c, t) for c in comps)
        if mapped != alive:
            mismatches.append(f"level {t}: components map to {mapped}, "
                              f"edges alive are {alive}")
        edge_maps.append([edge_of_component(g, c, t) for c in comps])
    for idx, pairs in enumerate(oracle.adjacency):
        t1, t2 = oracle.levels[idx], oracle.levels[idx + 1]
        labels = _slab_labels(g, t1, t2)
        expected = sorted(
            (i, j) for i, e1 in enumerate(edge_maps[idx])
            for j, e2 in enumerate(edge_maps[idx + 1])
            if labels[e1] == labels[e2])
        if expected != pairs:
            mismatches.append(f"adjacency between {t1} and {t2} differs")
    return mismatches
