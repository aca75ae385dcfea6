"""First homology of a Reeb graph and the action of its involution."""

from fractions import Fraction

import networkx as nx

from data_models import InvolutionHomology, MeasuredReebGraph
from linalg import rank
from logger import get_logger
from union_find import DisjointSet

logger = get_logger(__name__)


def _multigraph(g: MeasuredReebGraph) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(g.nodes)
    for e in g.edges.values():
        graph.add_edge(e.tail, e.head, key=e.id)
    return graph


def graph_first_betti(g: MeasuredReebGraph) -> int:
    """E - V + 1 of a connected graph.

    Raises:
        ValueError: If the graph is disconnected.
    """
    graph = _multigraph(g)
    if not graph.nodes or not nx.is_connected(graph):
        raise ValueError("Reeb graph is disconnected")
    return len(g.edges) - len(g.nodes) + 1


def count_fixed_points(g: MeasuredReebGraph) -> int:
    """Number of edges mapped to themselves; each holds one fixed point.

    Raises:
        ValueError: If the involution fixes a node.
    """
    fixed_nodes = sorted(n for n, image in g.node_involution.items() if n == image)
    if fixed_nodes:
        raise ValueError(f"Involution fixes node {fixed_nodes[0]}")
    return len(g.fixed_edges())


def spanning_tree(g: MeasuredReebGraph) -> tuple[list[int], list[int]]:
    """Kruskal in ascending edge id; returns (tree edges, co-tree edges)."""
    forest = DisjointSet(g.nodes)
    tree, cotree = [], []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        (tree if forest.union(e.tail, e.head) else cotree).append(eid)
    return tree, cotree


def fundamental_cycles(g: MeasuredReebGraph, tree: list[int],
                       cotree: list[int]) -> list[dict[int, int]]:
    """One signed edge chain per co-tree edge, traversing it forwards."""
    tree_graph = nx.Graph()
    tree_graph.add_nodes_from(g.nodes)
    for eid in tree:
        e = g.edges[eid]
        tree_graph.add_edge(e.tail, e.head, id=eid)
    cycles = []
    for eid in cotree:
        e = g.edges[eid]
        chain = {eid: 1}
        path = nx.shortest_path(tree_graph, e.head, e.tail)
        for x, y in zip(path, path[1:]):
            step = tree_graph.edges[x, y]["id"]
            sign = 1 if g.edges[step].tail == x else -1
            chain[step] = chain.get(step, 0) + sign
        cycles.append(chain)
    return cycles


def involution_h1_action(g: MeasuredReebGraph) -> InvolutionHomology:
    """Matrix of the involution on H_1 and its eigenspace dimensions.

    The involution reverses every edge, so an edge e is sent to the chain
    -iota(e).
    """
    b1 = graph_first_betti(g)
    tree, cotree = spanning_tree(g)
    cycles = fundamental_cycles(g, tree, cotree)
    column_of = {eid: i for i, eid in enumerate(cotree)}
    action = [[Fraction(0)] * b1 for _ in range(b1)]
    for col, chain in enumerate(cycles):
        for eid, coeff in chain.items():
            image = g.edge_involution[eid]
            if image in column_of:
                action[column_of[image]][col] -= coeff
    identity = [[Fraction(int(i == j)) for j in range(b1)] for i in range(b1)]
    minus = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(action, identity)]
    plus = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(action, identity)]
    dim_even = b1 - rank(minus)
    dim_odd = b1 - rank(plus)
    fix = count_fixed_points(g)
    result = InvolutionHomology(b1=b1, dim_even=dim_even, dim_odd=dim_odd,
                                fix_count=fix, cycle_basis=cycles,
                                action=action, tree_edges=tree)
    logger.debug("H1 action: b1=%d even=%d odd=%d fix=%d", b1, dim_even,
                 dim_odd, fix)
    return result


def quotient_betti(g: MeasuredReebGraph) -> int:
    """First Betti number of the quotient graph by the involution.

    An invariant edge folds onto a half-edge ending at its fixed point.
    """
    quotient = nx.MultiGraph()
    orbit = {n: min(n, image) for n, image in g.node_involution.items()}
    quotient.add_nodes_from(set(orbit.values()))
    for eid, e in g.edges.items():
        image = g.edge_involution[eid]
        if image == eid:
            quotient.add_edge(orbit[e.tail], ("fixed", eid), key=eid)
        elif eid < image:
            quotient.add_edge(orbit[e.tail], orbit[e.head], key=eid)
    components = nx.number_connected_components(quotient)
    return (quotient.number_of_edges() - quotient.number_of_nodes() +
            components)


def orbit_moduli_dimension(g: MeasuredReebGraph, b1_n: int = None) -> int:
    """d = (#Fix + b1 - 1)/2, cross-checked against the odd eigenspace.

    Raises:
        ValueError: On a parity violation, when b1 differs from b1_n, or when
            the closed formula disagrees with the linear algebra.
    """
    homology = involution_h1_action(g)
    b1, fix = homology.b1, homology.fix_count
    if b1_n is not None and b1 != b1_n:
        raise ValueError(f"Graph has b1 = {b1} but the surface has b1 = {b1_n}")
    if (fix + b1 - 1) % 2:
        raise ValueError(f"Parity violation: #Fix = {fix}, b1 = {b1}")
    d = (fix + b1 - 1) // 2
    if d != homology.dim_odd:
        raise ValueError(f"Moduli dimension {d} differs from the odd "
                         f"eigenspace dimension {homology.dim_odd}")
    if not (b1 - 1 <= 2 * d and d <= b1):
        raise ValueError(f"Moduli dimension {d} out of bounds for b1 = {b1}")
    logger.info("Orbit moduli dimension d = %d (b1 = %d, #Fix = %d)", d, b1, fix)
    return d
