"""Equivariant meshes realizing a measured Reeb graph with involution.

The negative half {f < 0} is assembled from templates: a disk cap for each
extremum, a pair of pants for each saddle and a stack of rings per edge.
Each ring has RING_SIZE vertices listed so that f grows to the left of the
walk. The positive half is the mirror copy, with f negated and triangle
orientation reversed. Bands across f = 0 join each crossing edge to the
mirror of its partner; an invariant edge gets a half-turn symmetric band.
"""

from collections import Counter
from fractions import Fraction

from data_models import MeasuredReebGraph, SurfaceComplex
from logger import get_logger
from mesh_core import check_simple_morse_odd
from reeb_build import graph_violations, triangle_area_below

logger = get_logger(__name__)

RING_SIZE = 4
JITTER_PRIME = 1000003
MAX_JITTER_ATTEMPTS = 20
SQUARE_STEPS = "LU"
SYMMETRIC_BAND = "LU" * (RING_SIZE // 2) + "UL" * (RING_SIZE // 2)


def _mirror_ref(ref: int) -> int:
    return -ref - 1


def zip_rings(lower: list[int], upper: list[int], pattern: str = None):
    """Triangulates the annulus between two rings of equal size.

    Each 'L' advances along the lower ring, each 'U' along the upper one.
    """
    n = len(lower)
    pattern = pattern or SQUARE_STEPS * n
    i = j = 0
    triangles = []
    for step in pattern:
        if step == "L":
            triangles.append((lower[i % n], lower[(i + 1) % n], upper[j % n]))
            i += 1
        else:
            triangles.append((lower[i % n], upper[(j + 1) % n], upper[j % n]))
            j += 1
    return triangles


def _split_levels(profile, lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    """Bisects [lo, hi] until every piece carries at most step of mass."""
    points = [lo]
    stack = [(lo, hi)]
    while stack:
        p, q = stack.pop()
        if profile.value(q) - profile.value(p) <= step:
            points.append(q)
        else:
            mid = (p + q) / 2
            stack.append((mid, q))
            stack.append((p, mid))
    return points


class _HalfBuilder:
    """Vertices and triangles of the negative half, before jitter and areas."""

    def __init__(self):
        self.levels: list[Fraction] = []
        self.ring_vertex: list[bool] = []
        self.triangles: list[tuple] = []
        self.groups: list[tuple] = []

    def vertex(self, level: Fraction, ring: bool) -> int:
        self.levels.append(level)
        self.ring_vertex.append(ring)
        return len(self.levels) - 1

    def ring(self, level: Fraction) -> list[int]:
        return [self.vertex(level, True) for _ in range(RING_SIZE)]

    def add(self, triangles, group):
        for tri in triangles:
            self.triangles.append(tri)
            self.groups.append(group)


def _half_edges(g: MeasuredReebGraph):
    negative, crossing = [], []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        tail, head = g.nodes[e.tail].f, g.nodes[e.head].f
        if head < 0:
            negative.append(eid)
        elif tail < 0:
            crossing.append(eid)
    return negative, crossing


def realize_graph(g: MeasuredReebGraph, refinement: int) -> SurfaceComplex:
    """Builds an equivariant mesh whose Reeb graph is g.

    Node values and edge masses are reproduced exactly; each profile is
    matched within total_mass / 2**refinement.

    Raises:
        ValueError: If g is not a valid measured Reeb graph with involution or
            a profile is flat on a stretch the construction must cut.
    """
    violations = graph_violations(g)
    if violations:
        raise ValueError("Cannot realize an invalid graph: " + "; ".join(violations))
    if refinement < 0:
        raise ValueError(f"refinement must be non-negative, got {refinement}")
    negative, crossing = _half_edges(g)
    half = negative + crossing
    step = g.total_mass() / 2 ** refinement / 8

    upper_end = {}
    points = {}
    for eid in half:
        e = g.edges[eid]
        lo = g.nodes[e.tail].f
        upper_end[eid] = g.nodes[e.head].f if eid in negative else Fraction(0)
        points[eid] = _split_levels(e.profile, lo, upper_end[eid], step)
    delta = min(q - p for pts in points.values() for p, q in zip(pts, pts[1:])) / 8
    levels = {eid: [pts[0] + delta, *pts[1:-1], pts[-1] - delta]
              for eid, pts in points.items()}

    builder = _HalfBuilder()
    rings = {eid: [builder.ring(level) for level in levels[eid]] for eid in half}
    _add_node_templates(g, builder, rings)
    for eid in half:
        for j, (r1, r2) in enumerate(zip(rings[eid], rings[eid][1:])):
            builder.add(zip_rings(r1, r2), ("band", eid, j))
    symmetric = []
    for eid in crossing:
        partner = g.edge_involution[eid]
        ring = rings[eid][-1]
        if partner == eid:
            shift = RING_SIZE // 2
            image = [_mirror_ref(ring[(i + shift) % RING_SIZE])
                     for i in range(RING_SIZE)]
            symmetric.extend(zip_rings(ring, image, SYMMETRIC_BAND))
        elif eid < partner:
            image = [_mirror_ref(v) for v in rings[partner][-1]]
            builder.add(zip_rings(ring, image), ("cross", eid))

    f_half = _jittered_values(builder, delta)
    areas = _areas(g, builder, f_half, levels, negative, crossing, delta)
    return _assemble(g, builder, f_half, areas, symmetric, crossing, delta)


def _add_node_templates(g, builder, rings):
    for n in sorted(g.nodes):
        f = g.nodes[n].f
        if f > 0:
            continue
        incoming, outgoing = g.incoming(n), g.outgoing(n)
        center = builder.vertex(f, False)
        if not incoming and len(outgoing) == 1:
            (e,) = outgoing
            r = rings[e][0]
            builder.add([(center, r[(i + 1) % RING_SIZE], r[i])
                         for i in range(RING_SIZE)], ("node", n, None, e))
        elif len(incoming) == 1 and not outgoing:
            (e,) = incoming
            r = rings[e][-1]
            builder.add([(r[i], r[(i + 1) % RING_SIZE], center)
                         for i in range(RING_SIZE)], ("node", n, e, None))
        elif len(incoming) == 2 and len(outgoing) == 1:
            e1, e2 = incoming
            (e3,) = outgoing
            c = rings[e3][0]
            half = RING_SIZE // 2
            first = [center] + c[:half + 1]
            second = [center] + c[half:] + [c[0]]
            builder.add(zip_rings(rings[e1][-1], first), ("node", n, e1, e3))
            builder.add(zip_rings(rings[e2][-1], second), ("node", n, e2, e3))
        elif len(incoming) == 1 and len(outgoing) == 2:
            (e1,) = incoming
            e2, e3 = outgoing
            c = rings[e1][-1]
            half = RING_SIZE // 2
            first = c[:half + 1] + [center]
            second = c[half:] + [c[0], center]
            builder.add(zip_rings(first, rings[e2][0]), ("node", n, e1, e2))
            builder.add(zip_rings(second, rings[e3][0]), ("node", n, e1, e3))
        else:
            raise ValueError(f"Node {n} has {len(incoming)} incoming and "
                             f"{len(outgoing)} outgoing edges")


def _jittered_values(builder: _HalfBuilder, delta: Fraction) -> list[Fraction]:
    """Spreads ring vertices slightly so that all values are distinct."""
    scale = delta / 4
    for _ in range(MAX_JITTER_ATTEMPTS):
        values = []
        u = 0
        for level, ring in zip(builder.levels, builder.ring_vertex):
            if ring:
                u += 1
                values.append(level + scale * u / JITTER_PRIME)
            else:
                values.append(level)
        if len(set(values)) == len(values):
            return values
        logger.warning("Jittered ring values collide; shrinking the jitter")
        scale /= 2
    raise ValueError("Could not make the ring values distinct")


def _areas(g, builder, f_half, levels, negative, crossing, delta):
    """Triangle areas reproducing every edge mass exactly."""
    targets = {}
    for eid in negative + crossing:
        profile = g.edges[eid].profile
        cumulative = [profile.value(t) for t in levels[eid]]
        cumulative[0] = Fraction(0)
        if eid in negative:
            cumulative[-1] = profile.mass
        targets[eid] = cumulative
    gaps = [q - p for cum in targets.values() for p, q in zip(cum, cum[1:])]
    if min(gaps) <= 0:
        raise ValueError("Profile is flat on a stretch between ring levels")
    eta = min(gaps) / 32

    tail_part = Counter()
    head_part = Counter()
    for tri, group in zip(builder.triangles, builder.groups):
        if group[0] != "node":
            continue
        _, n, below, above = group
        values = [f_half[v] for v in tri]
        lower = triangle_area_below(values, eta, g.nodes[n].f)
        if below is not None:
            head_part[below] += lower
        if above is not None:
            tail_part[above] += eta - lower

    band_area = {}
    for eid, cumulative in targets.items():
        cumulative = list(cumulative)
        cumulative[0] = tail_part[eid]
        if eid in negative:
            cumulative[-1] -= head_part[eid]
        for j, (p, q) in enumerate(zip(cumulative, cumulative[1:])):
            if q <= p:
                raise ValueError(f"Edge {eid} leaves no mass for band {j}")
            band_area[("band", eid, j)] = (q - p) / (2 * RING_SIZE)
    for eid in crossing:
        profile = g.edges[eid].profile
        mass = profile.value(delta) - profile.value(-delta)
        if mass <= 0:
            raise ValueError(f"Profile of edge {eid} is flat across 0")
        band_area[("cross", eid)] = mass / (2 * RING_SIZE)
    return [eta if group[0] == "node" else band_area[group]
            for group in builder.groups]


def _assemble(g, builder, f_half, areas, symmetric, crossing, delta):
    n = len(f_half)

    def to_id(ref):
        return ref if ref >= 0 else n + _mirror_ref(ref)

    def image(ref):
        return _mirror_ref(ref)

    f = {v: value for v, value in enumerate(f_half)}
    f.update({n + v: -value for v, value in enumerate(f_half)})
    involution = {v: n + v for v in range(n)}
    involution.update({n + v: v for v in range(n)})

    triangles, tri_areas = [], []
    for tri, area in zip(builder.triangles, areas):
        triangles.append(tuple(to_id(r) for r in tri))
        tri_areas.append(area)
    for tri, area in zip(builder.triangles, areas):
        a, b, c = (image(r) for r in tri)
        triangles.append((to_id(c), to_id(b), to_id(a)))
        tri_areas.append(area)
    fixed_mass = {eid: (g.edges[eid].profile.value(delta) -
                        g.edges[eid].profile.value(-delta)) / (2 * RING_SIZE)
                  for eid in crossing if g.edge_involution[eid] == eid}
    fixed_crossing = [eid for eid in crossing if eid in fixed_mass]
    per_band = 2 * RING_SIZE
    for idx, tri in enumerate(symmetric):
        triangles.append(tuple(to_id(r) for r in tri))
        tri_areas.append(fixed_mass[fixed_crossing[idx // per_band]])

    s = SurfaceComplex(f, tuple(triangles), tuple(tri_areas), involution)
    simplicity = check_simple_morse_odd(s)
    if not simplicity.passed:
        raise ValueError("Realized function is not simple: " +
                         "; ".join(simplicity.violations))
    logger.info("Realized graph with %d vertices and %d triangles",
                len(f), len(triangles))
    return s
