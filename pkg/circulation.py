"""Circulation functions on Reeb graphs and their mesh-level counterpart.

Graph side: the affine space of even circulation functions, solved exactly.
Mesh side: discrete 1-forms, their curl, and the circulation of the Whitney
interpolant along level curves.
"""

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from data_models import (CirculationGraph, DiscreteOneForm, MeasuredReebGraph,
                         SurfaceComplex)
from linalg import solve
from logger import get_logger
from measure_profile import EdgeMeasureProfile
from mesh_core import (crossing_lambda, directed_edges, level_components,
                       level_segments, triangle_mean)
from reeb_build import triangle_area_below

logger = get_logger(__name__)


def edge_flux(profile: EdgeMeasureProfile) -> Fraction:
    """Integral of f over the edge, i.e. of t dm(t)."""
    return profile.flux()


@dataclass
class CirculationSpace:
    particular: dict[int, Fraction]
    basis: list[dict[int, Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _equations(g: MeasuredReebGraph):
    """Rows (coefficients per edge id, rhs) of Kirchhoff and evenness."""
    flux = {eid: edge_flux(e.profile) for eid, e in g.edges.items()}
    rows = []
    for n in sorted(g.nodes):
        coeffs = {}
        rhs = Fraction(0)
        for eid in g.incoming(n):
            coeffs[eid] = coeffs.get(eid, 0) + 1
            rhs -= flux[eid]
        for eid in g.outgoing(n):
            coeffs[eid] = coeffs.get(eid, 0) - 1
        rows.append((coeffs, rhs))
    for eid in sorted(g.edges):
        image = g.edge_involution[eid]
        if eid < image:
            rows.append(({image: 1, eid: -1}, flux[eid]))
    return rows


def circulation_residuals(g: MeasuredReebGraph,
                          cref: dict[int, Fraction]) -> list[Fraction]:
    """Kirchhoff residual per node followed by evenness residual per orbit."""
    return [sum((c * cref[eid] for eid, c in coeffs.items()), Fraction(0)) - rhs
            for coeffs, rhs in _equations(g)]


def solve_circulation_space(g: MeasuredReebGraph) -> CirculationSpace:
    """Particular even circulation function plus the homogeneous basis.

    Raises:
        InconsistentSystemError: If no circulation function exists.
    """
    order = sorted(g.edges)
    column = {eid: i for i, eid in enumerate(order)}
    rows, rhs = [], []
    for coeffs, value in _equations(g):
        row = [Fraction(0)] * len(order)
        for eid, c in coeffs.items():
            row[column[eid]] += c
        rows.append(row)
        rhs.append(value)
    x, null = solve(rows, rhs, len(order))
    space = CirculationSpace(
        particular={eid: x[column[eid]] for eid in order},
        basis=[{eid: vec[column[eid]] for eid in order} for vec in null])
    logger.info("Circulation space: %d equations, %d unknowns, dimension %d",
                len(rows), len(order), space.dimension)
    return space


def circulation_at(cg: CirculationGraph, edge: int, t) -> Fraction:
    """C at the point of an edge where f = t."""
    return cg.cref[edge] + cg.base.edges[edge].profile.partial_flux(t)


def recover_function(cg: CirculationGraph, edge: int, t) -> Fraction:
    """dC/dm at f = t, from the cubic C and quadratic m on the piece at t.

    Raises:
        ZeroDivisionError: Where the measure has zero density.
    """
    t = Fraction(t)
    profile = cg.base.edges[edge].profile
    a, b, _ = profile.poly_at(t)
    # C is the antiderivative of s * m'(s); differentiate its cubic directly.
    dc = 2 * a * t * t + b * t
    return dc / profile.density(t)


def recover_from_samples(profile: EdgeMeasureProfile, samples) -> list[Fraction]:
    """Difference quotients dC/dm between consecutive (t, C) samples.

    The samples may come from anywhere, e.g. level circulations measured on a
    mesh; quotient i approximates f on [t_i, t_i+1].

    Raises:
        ValueError: If the levels do not increase or a step carries no mass.
    """
    samples = [(Fraction(t), Fraction(c)) for t, c in samples]
    quotients = []
    for (t1, c1), (t2, c2) in zip(samples, samples[1:]):
        if not t1 < t2:
            raise ValueError(f"Sample levels must increase: {t1} then {t2}")
        dm = profile.value(t2) - profile.value(t1)
        if dm == 0:
            raise ValueError(f"No mass between levels {t1} and {t2}")
        quotients.append((c2 - c1) / dm)
    return quotients


def exact_form(s: SurfaceComplex, h: dict[int, Fraction]) -> DiscreteOneForm:
    """Discrete differential of a vertex function."""
    return DiscreteOneForm({(u, v): Fraction(h[v]) - Fraction(h[u])
                            for (u, v) in s.edge_triangles})


def is_even(s: SurfaceComplex, alpha: DiscreteOneForm) -> bool:
    inv = s.involution
    return all(alpha.value(inv[u], inv[v]) == alpha.value(u, v)
               for (u, v) in s.edge_triangles)


def symmetrize(s: SurfaceComplex, alpha: DiscreteOneForm) -> DiscreteOneForm:
    """Even part (alpha + I*alpha)/2."""
    inv = s.involution
    return DiscreteOneForm({(u, v): (alpha.value(u, v) +
                                     alpha.value(inv[u], inv[v])) / 2
                            for (u, v) in s.edge_triangles})


def _boundary_sum(s: SurfaceComplex, alpha: DiscreteOneForm, ti: int) -> Fraction:
    return sum((alpha.value(u, v) for u, v in directed_edges(s.triangles[ti])),
               Fraction(0))


def discrete_curl(s: SurfaceComplex, alpha: DiscreteOneForm) -> list[Fraction]:
    """Circulation around each oriented triangle divided by its area."""
    return [_boundary_sum(s, alpha, ti) / s.areas[ti]
            for ti in range(len(s.triangles))]


def solve_primitive(s: SurfaceComplex, beta: list[Fraction]) -> DiscreteOneForm:
    """A 1-form whose boundary sums are beta, along a dual spanning tree.

    Off-tree edges get 0; tree edges are fixed from the leaves inwards.

    Raises:
        ValueError: If beta does not sum to zero.
    """
    if sum(beta, Fraction(0)) != 0:
        raise ValueError("A 2-cochain on a closed surface needs zero total")
    parent_edge: dict[int, tuple[int, int]] = {0: None}
    order = [0]
    queue = deque([0])
    while queue:
        ti = queue.popleft()
        for u, v in directed_edges(s.triangles[ti]):
            key = (min(u, v), max(u, v))
            for other in s.edge_triangles[key]:
                if other not in parent_edge:
                    parent_edge[other] = key
                    order.append(other)
                    queue.append(other)
    values: dict[tuple[int, int], Fraction] = {}
    for ti in reversed(order[1:]):
        key = parent_edge[ti]
        rest = Fraction(0)
        sign = 0
        for u, v in directed_edges(s.triangles[ti]):
            if (min(u, v), max(u, v)) == key:
                sign = 1 if u < v else -1
            elif u < v:
                rest += values.get((u, v), 0)
            else:
                rest -= values.get((v, u), 0)
        values[key] = sign * (beta[ti] - rest)
    return DiscreteOneForm(values)


def primitive_of_density(s: SurfaceComplex) -> DiscreteOneForm:
    """An even 1-form whose curl is the triangle mean of f."""
    beta = [triangle_mean(s, ti) * s.areas[ti] for ti in range(len(s.triangles))]
    return symmetrize(s, solve_primitive(s, beta))


def _chord_integral(s: SurfaceComplex, alpha: DiscreteOneForm, ti: int,
                    start, end, t: Fraction) -> Fraction:
    p = {start[0]: crossing_lambda(s, start[0], start[1], t)}
    p[start[1]] = 1 - p[start[0]]
    q = {end[0]: crossing_lambda(s, end[0], end[1], t)}
    q[end[1]] = 1 - q[end[0]]
    total = Fraction(0)
    for a, b in directed_edges(s.triangles[ti]):
        total += alpha.value(a, b) * (p.get(a, 0) * q.get(b, 0) -
                                      p.get(b, 0) * q.get(a, 0))
    return total


def level_cycle_circulation(s: SurfaceComplex, alpha: DiscreteOneForm, t,
                            component: int) -> Fraction:
    """Circulation of alpha around one component of {f = t}.

    The curve keeps the sublevel set on its left. component indexes the list
    returned by level_components.

    Raises:
        ValueError: If t is a vertex value or the component does not exist.
    """
    t = Fraction(t)
    components = level_components(s, t)
    if not 0 <= component < len(components):
        raise ValueError(f"Level {t} has {len(components)} components, "
                         f"no component {component}")
    members = set(components[component])
    return sum((_chord_integral(s, alpha, ti, start, end, t)
                for ti, start, end in level_segments(s, t) if ti in members),
               Fraction(0))


def _edge_triangles_at(g: MeasuredReebGraph, edge: int, t: Fraction) -> set[int]:
    crit = sorted(n.f for n in g.nodes.values())
    k = bisect_left(crit, t) - 1
    return {ti for (ti, kk), eid in g.cellmap.items() if kk == k and eid == edge}


def edge_level_circulation(s: SurfaceComplex, alpha: DiscreteOneForm,
                           g: MeasuredReebGraph, edge: int, t) -> Fraction:
    """Circulation around the level circle of an edge at f = t."""
    t = Fraction(t)
    e = g.edges[edge]
    if not g.nodes[e.tail].f < t < g.nodes[e.head].f:
        raise ValueError(f"Level {t} is not inside edge {edge}")
    members = _edge_triangles_at(g, edge, t)
    if not members:
        raise ValueError("Graph carries no cellmap for its source mesh")
    return sum((_chord_integral(s, alpha, ti, start, end, t)
                for ti, start, end in level_segments(s, t) if ti in members),
               Fraction(0))


def band_vorticity(s: SurfaceComplex, alpha: DiscreteOneForm,
                   g: MeasuredReebGraph, edge: int, x, y) -> Fraction:
    """Sum of curl times area over the part of an edge with x <= f <= y."""
    x, y = Fraction(x), Fraction(y)
    crit = sorted(n.f for n in g.nodes.values())
    curl = discrete_curl(s, alpha)
    total = Fraction(0)
    for (ti, k), eid in g.cellmap.items():
        if eid != edge:
            continue
        lo, hi = crit[k], crit[k + 1]
        values = [s.f[v] for v in s.triangles[ti]]
        band = (triangle_area_below(values, s.areas[ti], min(max(y, lo), hi)) -
                triangle_area_below(values, s.areas[ti], min(max(x, lo), hi)))
        total += curl[ti] * band
    return total


def stokes_defect_bound(s: SurfaceComplex) -> Fraction:
    """Sum over triangles of area times the largest |f - mean f|."""
    total = Fraction(0)
    for ti, tri in enumerate(s.triangles):
        mean = triangle_mean(s, ti)
        total += s.areas[ti] * max(abs(s.f[v] - mean) for v in tri)
    return total


@dataclass
class CosetCirculation:
    graph: CirculationGraph
    defect: Fraction
    bound: Fraction


def coset_to_circulation_graph(s: SurfaceComplex, alpha: DiscreteOneForm,
                               g: MeasuredReebGraph) -> CosetCirculation:
    """Reads the circulation graph of the coset of alpha off the mesh.

    cref of an edge is the level circulation just above its tail, moved to the
    tail with the edge rule of the graph.

    Raises:
        ValueError: If the curl of alpha is not the triangle mean of f, or
            the graph residuals exceed the discrete Stokes bound.
    """
    curl = discrete_curl(s, alpha)
    for ti, value in enumerate(curl):
        if value != triangle_mean(s, ti):
            raise ValueError(f"curl of alpha on triangle {ti} is {value}, "
                             f"expected {triangle_mean(s, ti)}")
    values = sorted(set(s.f.values()))
    cref = {}
    for eid, e in sorted(g.edges.items()):
        lo, hi = g.nodes[e.tail].f, g.nodes[e.head].f
        above = values[bisect_left(values, lo) + 1:]
        t = (lo + min(above[0], hi)) / 2 if above else (lo + hi) / 2
        circulation = edge_level_circulation(s, alpha, g, eid, t)
        cref[eid] = circulation - e.profile.partial_flux(t)
    residuals = circulation_residuals(g, cref)
    defect = max((abs(r) for r in residuals), default=Fraction(0))
    bound = stokes_defect_bound(s)
    if defect > bound:
        raise ValueError(f"Circulation residual {defect} exceeds the discrete "
                         f"Stokes bound {bound}")
    logger.info("Coset circulation graph: defect %s within bound %s",
                defect, bound)
    return CosetCirculation(CirculationGraph(g, cref), defect, bound)
