"""Measured Reeb graphs built directly, without a mesh."""
from fractions import Fraction
import random

from data_models import MeasuredReebGraph, ReebEdge, ReebNode
from fixtures.base import FixtureBuilder
from graph_topology import graph_first_betti
from logger import get_logger
from measure_profile import EdgeMeasureProfile

logger = get_logger(__name__)

HALF = Fraction(1, 2)
MAX_RANDOM_EVENTS = 6
MAX_RANDOM_BETTI = 6
MAX_RANDOM_ATTEMPTS = 500


def _torus_graph(swap_parallel: bool) -> MeasuredReebGraph:
    """min -> lower saddle => upper saddle -> max, with two parallel edges.

    Node values are -2, -1, 1, 2; the outer edges carry mass 1 and the
    parallel ones mass 2, all uniform.
    """
    values = [Fraction(-2), Fraction(-1), Fraction(1), Fraction(2)]
    nodes = {i: ReebNode(i, f) for i, f in enumerate(values)}
    ends = [(0, 1, 1), (1, 2, 2), (1, 2, 2), (2, 3, 1)]
    edges = {eid: ReebEdge(eid, tail, head,
                           EdgeMeasureProfile.uniform(values[tail], values[head],
                                                      mass))
             for eid, (tail, head, mass) in enumerate(ends)}
    node_involution = {0: 3, 3: 0, 1: 2, 2: 1}
    edge_involution = {0: 3, 3: 0}
    if swap_parallel:
        edge_involution.update({1: 2, 2: 1})
    else:
        edge_involution.update({1: 1, 2: 2})
    return MeasuredReebGraph(nodes, edges, node_involution, edge_involution)


def vertical_torus_graph() -> MeasuredReebGraph:
    """Height on a vertical torus: the involution swaps the parallel edges."""
    return _torus_graph(swap_parallel=True)


def inclined_torus_graph() -> MeasuredReebGraph:
    """Height on an inclined torus: each parallel edge is reversed in place."""
    return _torus_graph(swap_parallel=False)


def path_graph(mass=4) -> MeasuredReebGraph:
    """One edge from -1 to 1 with uniform mass, fixed by the involution."""
    lo, hi = Fraction(-1), Fraction(1)
    nodes = {0: ReebNode(0, lo), 1: ReebNode(1, hi)}
    edges = {0: ReebEdge(0, 0, 1, EdgeMeasureProfile.uniform(lo, hi, mass))}
    return MeasuredReebGraph(nodes, edges, {0: 1, 1: 0}, {0: 0})


def genus_three_graph() -> MeasuredReebGraph:
    """Reeb graph of a genus-3 double cover, b1 = 3 and no fixed points.

    The negative half runs min -> split -> merge -> split; the two strands
    leaving the last split cross level 0 and are swapped by the involution.
    """
    values = [Fraction(-4), Fraction(-3), Fraction(-2), Fraction(-1)]
    half = len(values)

    def mirror(n):
        return n + half

    nodes = {i: ReebNode(i, f) for i, f in enumerate(values)}
    nodes.update({mirror(i): ReebNode(mirror(i), -f) for i, f in enumerate(values)})
    node_involution = {i: mirror(i) for i in range(half)}
    node_involution.update({mirror(i): i for i in range(half)})

    edges: dict[int, ReebEdge] = {}
    edge_involution: dict[int, int] = {}
    for tail, head, mass in ((0, 1, 1), (1, 2, 1), (1, 2, 2), (2, 3, 1)):
        eid, image = len(edges), len(edges) + 1
        profile = EdgeMeasureProfile.uniform(values[tail], values[head], mass)
        edges[eid] = ReebEdge(eid, tail, head, profile)
        edges[image] = ReebEdge(image, mirror(head), mirror(tail),
                                profile.mirror())
        edge_involution[eid], edge_involution[image] = image, eid
    first, second = len(edges), len(edges) + 1
    for eid in (first, second):
        edges[eid] = ReebEdge(eid, 3, mirror(3),
                              EdgeMeasureProfile.uniform(-1, 1, 2))
    edge_involution[first], edge_involution[second] = second, first
    return MeasuredReebGraph(nodes, edges, node_involution, edge_involution)


def _random_half(rng: random.Random, count: int):
    """Sweeps count events upwards; returns node values, edges, open tails."""
    levels = [Fraction(-(count - i)) + Fraction(rng.randint(0, 3), 8)
              for i in range(count)]
    open_tails: list[int] = []
    ends: list[tuple[int, int]] = []
    for node in range(count):
        choices = ["min"]
        if open_tails:
            choices.append("split")
        if len(open_tails) >= 2:
            choices.extend(("merge", "max"))
        kind = rng.choice(choices)
        if kind == "min":
            open_tails.append(node)
        elif kind == "split":
            ends.append((open_tails.pop(rng.randrange(len(open_tails))), node))
            open_tails.extend((node, node))
        elif kind == "merge":
            for _ in range(2):
                ends.append((open_tails.pop(rng.randrange(len(open_tails))), node))
            open_tails.append(node)
        else:
            ends.append((open_tails.pop(rng.randrange(len(open_tails))), node))
    return levels, ends, open_tails


def _random_pairing(rng: random.Random, size: int) -> list[int]:
    order = list(range(size))
    rng.shuffle(order)
    partner = list(range(size))
    idx = 0
    while idx < size:
        if idx + 1 < size and rng.random() < HALF:
            a, b = order[idx], order[idx + 1]
            partner[a], partner[b] = b, a
            idx += 2
        else:
            idx += 1
    return partner


def _random_attempt(rng: random.Random, max_events: int):
    count = rng.randint(1, max_events)
    levels, ends, open_tails = _random_half(rng, count)
    partner = _random_pairing(rng, len(open_tails))

    def mirror(n):
        return n + count

    nodes = {i: ReebNode(i, f) for i, f in enumerate(levels)}
    nodes.update({mirror(i): ReebNode(mirror(i), -f) for i, f in enumerate(levels)})
    node_involution = {i: mirror(i) for i in range(count)}
    node_involution.update({mirror(i): i for i in range(count)})

    edges: dict[int, ReebEdge] = {}
    edge_involution: dict[int, int] = {}
    for tail, head in ends:
        eid, image = len(edges), len(edges) + 1
        mass = Fraction(rng.randint(1, 8), 2)
        profile = EdgeMeasureProfile.from_unit_polynomial(
            levels[tail], levels[head], mass, (HALF, HALF))
        edges[eid] = ReebEdge(eid, tail, head, profile)
        edges[image] = ReebEdge(image, mirror(head), mirror(tail),
                                profile.mirror())
        edge_involution[eid], edge_involution[image] = image, eid
    first_crossing = len(edges)
    masses = {}
    for x, tail in enumerate(open_tails):
        y = partner[x]
        if x <= y:
            masses[x] = masses[y] = Fraction(rng.randint(1, 8), 2)
        head = mirror(open_tails[y])
        eid = first_crossing + x
        edges[eid] = ReebEdge(eid, tail, head, EdgeMeasureProfile.uniform(
            levels[tail], -levels[open_tails[y]], masses[x]))
        edge_involution[eid] = first_crossing + y

    g = MeasuredReebGraph(nodes, edges, node_involution, edge_involution)
    try:
        b1 = graph_first_betti(g)
    except ValueError:
        return None
    return g if b1 <= MAX_RANDOM_BETTI else None


def random_reeb_graph(seed: int, max_events: int = MAX_RANDOM_EVENTS) -> MeasuredReebGraph:
    """A random connected measured Reeb graph with involution, b1 <= 6.

    The negative half is swept from random minima, merges, splits and maxima;
    its open strands are paired across level 0 by a random involution, and
    the positive half is the mirror image.

    Raises:
        ValueError: If no connected graph turned up.
    """
    rng = random.Random(seed)
    for attempt in range(MAX_RANDOM_ATTEMPTS):
        g = _random_attempt(rng, max_events)
        if g is not None:
            logger.debug("Random graph for seed %d after %d attempt(s)", seed,
                         attempt + 1)
            return g
    raise ValueError(f"No connected random graph for seed {seed}")


class VerticalGraphBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "vertical-graph"

    def build(self):
        return vertical_torus_graph()


class InclinedGraphBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "inclined-graph"

    def build(self):
        return inclined_torus_graph()


class PathGraphBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "path-graph"

    def build(self):
        return path_graph()


class GenusThreeGraphBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "genus3-graph"

    def build(self):
        return genus_three_graph()


class RandomGraphBuilder(FixtureBuilder):

    def get_fixture_name(self):
        return "random-graph"

    def build(self):
        return random_reeb_graph(self.seed)
