"""Validation, topology and PL critical points of equivariant surface meshes."""

from collections import Counter
from fractions import Fraction
import random

import networkx as nx

from data_models import (CriticalReport, CriticalTag, SimplicityReport,
                         SurfaceComplex, TopologyInvariants, ValidationReport)
from logger import get_logger

logger = get_logger(__name__)

PERTURBATION_DENOMINATOR = 1000
MAX_PERTURBATION_ATTEMPTS = 100


def directed_edges(tri):
    a, b, c = tri
    return ((a, b), (b, c), (c, a))


def same_cyclic_order(t1, t2) -> bool:
    return tuple(t2) in (tuple(t1), (t1[1], t1[2], t1[0]), (t1[2], t1[0], t1[1]))


def image_triangle(s: SurfaceComplex, ti: int) -> int:
    """Index of the triangle I(T); raises KeyError when I is not simplicial."""
    return s.triangle_index[frozenset(s.involution[v] for v in s.triangles[ti])]


def link_graph(s: SurfaceComplex, v: int) -> nx.Graph:
    """Undirected link of v: the opposite edge of every triangle at v."""
    graph = nx.Graph()
    for ti in s.vertex_triangles.get(v, ()):
        tri = s.triangles[ti]
        k = tri.index(v)
        graph.add_edge(tri[(k + 1) % 3], tri[(k + 2) % 3])
    return graph


def vertex_link(s: SurfaceComplex, v: int) -> list[int]:
    """Link of v as a cycle, in the order induced by the orientation.

    Raises:
        ValueError: If the link is not a single cycle.
    """
    successor: dict[int, int] = {}
    for ti in s.vertex_triangles.get(v, ()):
        tri = s.triangles[ti]
        k = tri.index(v)
        a, b = tri[(k + 1) % 3], tri[(k + 2) % 3]
        if a in successor:
            raise ValueError(f"Vertex {v} has a non-manifold link")
        successor[a] = b
    if not successor:
        raise ValueError(f"Vertex {v} is in no triangle")
    start = min(successor)
    cycle = [start]
    while True:
        nxt = successor.get(cycle[-1])
        if nxt is None:
            raise ValueError(f"Vertex {v} has an open link")
        if nxt == start:
            break
        cycle.append(nxt)
        if len(cycle) > len(successor):
            raise ValueError(f"Vertex {v} has a non-manifold link")
    if len(cycle) != len(successor):
        raise ValueError(f"Vertex {v} has a link with several cycles")
    return cycle


def validate_surface(s: SurfaceComplex) -> ValidationReport:
    """Lists every violated invariant of a SurfaceComplex; never raises."""
    report = ValidationReport()
    vertices = set(s.f)

    good_triangles = []
    for i, tri in enumerate(s.triangles):
        if len(set(tri)) != 3 or not set(tri) <= vertices:
            report.add("bad_triangle",
                       f"triangle {i} has repeated or unknown vertices", [i])
        else:
            good_triangles.append(i)
    if len(s.areas) != len(s.triangles):
        report.add("area_count", f"{len(s.areas)} areas for "
                   f"{len(s.triangles)} triangles")
    for i, area in enumerate(s.areas):
        if area <= 0:
            report.add("nonpositive_area", f"triangle {i} has area {area}", [i])

    directed: dict[tuple[int, int], list[int]] = {}
    for i in good_triangles:
        for u, v in directed_edges(s.triangles[i]):
            directed.setdefault((u, v), []).append(i)
    for (u, v), tris in sorted(s.edge_triangles.items()):
        if not {u, v} <= vertices or u == v:
            continue
        if len(tris) == 1:
            report.add("boundary_edge", f"edge ({u},{v}) lies in one triangle",
                       [u, v])
        elif len(tris) > 2:
            report.add("non_manifold_edge", f"non-manifold edge ({u},{v}) lies "
                       f"in {len(tris)} triangles", [u, v])
        elif len(directed.get((u, v), [])) != 1:
            report.add("inconsistent_orientation", f"edge ({u},{v}) is "
                       "traversed twice in the same direction", [u, v])

    used = set()
    for i in good_triangles:
        used.update(s.triangles[i])
    for v in sorted(vertices):
        if v not in used:
            report.add("non_manifold_vertex", f"vertex {v} is in no triangle", [v])
            continue
        try:
            vertex_link(s, v)
        except ValueError as e:
            report.add("non_manifold_vertex", str(e), [v])

    dual = nx.Graph()
    dual.add_nodes_from(good_triangles)
    for tris in s.edge_triangles.values():
        for a, b in zip(tris, tris[1:]):
            dual.add_edge(a, b)
    if good_triangles and not nx.is_connected(dual):
        report.add("disconnected", f"triangle adjacency has "
                   f"{nx.number_connected_components(dual)} components")

    _validate_involution(s, report, vertices, good_triangles)

    counts = Counter(s.f.values())
    for value, count in sorted(counts.items()):
        if count > 1:
            ids = sorted(v for v in vertices if s.f[v] == value)
            report.add("duplicate_f_values",
                       f"duplicate f-value {value} at {count} vertices", ids)
    for v in sorted(vertices):
        if s.f[v] == 0:
            report.add("zero_f_value", f"vertex {v} has f-value 0", [v])
    return report


def _validate_involution(s, report, vertices, good_triangles):
    inv = s.involution
    if set(inv) != vertices or set(inv.values()) != vertices:
        report.add("involution_not_permutation",
                   "involution is not a permutation of the vertex ids")
    for v in sorted(vertices & set(inv)):
        w = inv[v]
        if w == v:
            report.add("involution_fixed_vertex", f"vertex {v} is fixed", [v])
        if inv.get(w) != v:
            report.add("involution_not_involutive",
                       f"I(I({v})) != {v}", [v])
        if v <= w and w in s.f and s.f[w] != -s.f[v]:
            report.add("function_not_odd",
                       f"f({w}) != -f({v})", [v, w])
    for i in good_triangles:
        tri = s.triangles[i]
        if not all(v in inv for v in tri):
            continue
        image = tuple(inv[v] for v in tri)
        j = s.triangle_index.get(frozenset(image))
        if j is None:
            report.add("involution_not_simplicial",
                       f"image of triangle {i} is not a triangle", [i])
            continue
        if same_cyclic_order(image, s.triangles[j]):
            report.add("involution_preserves_orientation",
                       f"involution preserves the orientation of triangle {i}",
                       [i, j])
        if (i < len(s.areas) and j < len(s.areas)
                and s.areas[i] != s.areas[j]):
            report.add("area_not_even",
                       f"area of triangle {i} differs from its image {j}", [i, j])


def topology_invariants(s: SurfaceComplex) -> TopologyInvariants:
    """Euler characteristics and real first Betti numbers of M and N = M/I."""
    v, e, f = len(s.f), len(s.edge_triangles), len(s.triangles)
    chi_m = v - e + f
    if chi_m % 2:
        raise ValueError(f"Euler characteristic {chi_m} is odd; "
                         "a free involution is impossible")
    chi_n = chi_m // 2
    return TopologyInvariants(chi_m=chi_m, b1_m=2 - chi_m, chi_n=chi_n,
                              b1_n=1 - chi_n)


def lower_link_components(s: SurfaceComplex, v: int) -> tuple[int, int]:
    """Returns (#lower components, #upper vertices) of the link of v."""
    key = s.order_key(v)
    link = link_graph(s, v)
    lower = [w for w in link if s.order_key(w) < key]
    upper = len(link) - len(lower)
    return nx.number_connected_components(link.subgraph(lower)), upper


def classify_critical_vertices(s: SurfaceComplex) -> CriticalReport:
    tags: dict[int, CriticalTag] = {}
    for v in s.vertex_ids:
        lower, upper = lower_link_components(s, v)
        if lower == 0:
            tag = CriticalTag.MIN
        elif lower == 1:
            tag = CriticalTag.MAX if upper == 0 else CriticalTag.REGULAR
        elif lower == 2:
            tag = CriticalTag.SADDLE
        else:
            tag = CriticalTag.DEGENERATE
        tags[v] = tag
    critical = sorted(v for v, tag in tags.items() if tag.is_critical)
    values = sorted(s.f[v] for v in critical)
    violations = [f"link-degenerate vertex {v}" for v in critical
                  if tags[v] is CriticalTag.DEGENERATE]
    for value, count in sorted(Counter(values).items()):
        if count > 1:
            violations.append(f"duplicate critical value {value} at {count} vertices")
    if 0 in values:
        violations.append("critical value 0")
    logger.debug("Critical vertices: %d min, %d max, %d saddle, %d degenerate",
                 *(sum(1 for t in tags.values() if t is tag)
                   for tag in (CriticalTag.MIN, CriticalTag.MAX,
                               CriticalTag.SADDLE, CriticalTag.DEGENERATE)))
    return CriticalReport(tags, values, violations)


def check_simple_morse_odd(s: SurfaceComplex) -> SimplicityReport:
    """Simple-Morse-odd genericity, enforced on every vertex value."""
    report = classify_critical_vertices(s)
    violations = [v for v in report.violations
                  if v.startswith("link-degenerate")]
    counts = Counter(s.f.values())
    for value, count in sorted(counts.items()):
        if count > 1:
            ids = [v for v in s.vertex_ids if s.f[v] == value]
            kind = ("critical value" if any(report.tags[v].is_critical for v in ids)
                    else "f-value")
            violations.append(f"duplicate {kind} {value} at {count} vertices")
    for v in s.vertex_ids:
        if s.f[v] == 0:
            kind = "critical value" if report.tags[v].is_critical else "f-value"
            violations.append(f"zero {kind} at vertex {v}")
    return SimplicityReport(violations)


def perturb_to_simple(s: SurfaceComplex, eps, seed: int = 0) -> SurfaceComplex:
    """Moves each orbit {v, I(v)} by (+d, -d), 0 < |d| < eps, until simple.

    Returns the input unchanged when it already passes.

    Raises:
        ValueError: On a link-degenerate vertex, a non-positive eps, or when
            no attempt produced a simple function.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if check_simple_morse_odd(s).passed:
        return s
    degenerate = classify_critical_vertices(s).vertices_with(CriticalTag.DEGENERATE)
    if degenerate:
        raise ValueError(f"link-degenerate vertex {degenerate[0]}: value "
                         "perturbation cannot remove it")
    representatives = [v for v in s.vertex_ids if v < s.involution[v]]
    for attempt in range(MAX_PERTURBATION_ATTEMPTS):
        rng = random.Random(seed * MAX_PERTURBATION_ATTEMPTS + attempt)
        f = dict(s.f)
        for v in representatives:
            k = rng.randint(1, PERTURBATION_DENOMINATOR - 1)
            delta = eps * Fraction(k * rng.choice((-1, 1)),
                                   PERTURBATION_DENOMINATOR)
            f[v] = s.f[v] + delta
            f[s.involution[v]] = -f[v]
        candidate = s.with_values(f)
        if check_simple_morse_odd(candidate).passed:
            logger.info("Perturbation succeeded after %d attempt(s)", attempt + 1)
            return candidate
        logger.warning("Perturbation attempt %d did not give a simple function",
                       attempt + 1)
    raise ValueError(f"No simple perturbation found in "
                     f"{MAX_PERTURBATION_ATTEMPTS} attempts")


def crossing_lambda(s: SurfaceComplex, u: int, v: int, t: Fraction) -> Fraction:
    """Barycentric weight of u at the point of edge (u, v) where f = t."""
    return (s.f[v] - t) / (s.f[v] - s.f[u])


def level_segments(s: SurfaceComplex, t) -> list[tuple[int, tuple, tuple]]:
    """Per crossing triangle, the directed edges holding the chord ends.

    The chord runs from the crossing on the edge where f increases along the
    triangle orientation to the crossing on the edge where it decreases, so
    the superlevel side lies on its right.

    Raises:
        ValueError: If t equals a vertex value.
    """
    t = Fraction(t)
    if t in set(s.f.values()):
        raise ValueError(f"Level {t} equals a vertex value")
    segments = []
    for i, tri in enumerate(s.triangles):
        start = end = None
        for u, v in directed_edges(tri):
            if s.f[u] < t < s.f[v]:
                start = (u, v)
            elif s.f[v] < t < s.f[u]:
                end = (u, v)
        if start is not None:
            segments.append((i, start, end))
    return segments


def level_components(s: SurfaceComplex, t) -> list[list[int]]:
    """Components of the level set {f = t} as sorted triangle lists.

    Components are ordered by their smallest crossing edge.
    """
    graph = nx.Graph()
    owner: dict = {}
    for i, start, end in level_segments(s, t):
        a, b = tuple(sorted(start)), tuple(sorted(end))
        graph.add_edge(a, b)
        owner.setdefault(a, []).append(i)
    components = []
    for crossing in nx.connected_components(graph):
        tris = sorted({i for edge in crossing for i in owner.get(edge, [])})
        components.append((min(crossing), tris))
    return [tris for _, tris in sorted(components)]


def triangle_mean(s: SurfaceComplex, ti: int) -> Fraction:
    return sum((s.f[v] for v in s.triangles[ti]), Fraction(0)) / 3
