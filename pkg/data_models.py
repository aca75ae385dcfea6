from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
import json
from typing import Optional

from measure_profile import EdgeMeasureProfile
from rationals import MalformedInputError, format_rational, parse_rational

__all__ = [
    "CriticalTag", "SurfaceComplex", "ValidationEntry", "ValidationReport",
    "CriticalReport", "SimplicityReport", "TopologyInvariants", "ReebNode",
    "ReebEdge", "MeasuredReebGraph", "CirculationGraph", "DiscreteOneForm",
    "InvolutionHomology", "MalformedInputError", "format_rational",
    "parse_rational", "load_document",
]


class CriticalTag(Enum):
    REGULAR = "regular"
    MIN = "min"
    MAX = "max"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"

    @property
    def dual(self):
        if self is CriticalTag.MIN:
            return CriticalTag.MAX
        if self is CriticalTag.MAX:
            return CriticalTag.MIN
        return self

    @property
    def is_critical(self):
        return self is not CriticalTag.REGULAR


def load_document(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"Invalid JSON: {e}") from e
    if not isinstance(data, dict):
        raise MalformedInputError("Expected a JSON object at top level")
    return data


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedInputError(f"Expected an integer {what}, got {value!r}")
    return value


@dataclass(frozen=True)
class SurfaceComplex:
    """A triangulated double cover with its involution, density and function.

    Triangles are ordered vertex triples; the order carries the orientation.
    areas[i] is the density weight of triangles[i].
    """
    f: dict[int, Fraction]
    triangles: tuple[tuple[int, int, int], ...]
    areas: tuple[Fraction, ...]
    involution: dict[int, int]

    @property
    def vertex_ids(self) -> list[int]:
        return sorted(self.f)

    @cached_property
    def triangle_index(self) -> dict[frozenset, int]:
        return {frozenset(t): i for i, t in enumerate(self.triangles)}

    @cached_property
    def edge_triangles(self) -> dict[tuple[int, int], list[int]]:
        """Maps every unordered edge (u < v) to the triangles containing it."""
        result: dict[tuple[int, int], list[int]] = {}
        for i, tri in enumerate(self.triangles):
            for k in range(3):
                u, v = tri[k], tri[(k + 1) % 3]
                result.setdefault((min(u, v), max(u, v)), []).append(i)
        return result

    @cached_property
    def vertex_triangles(self) -> dict[int, list[int]]:
        result: dict[int, list[int]] = {}
        for i, tri in enumerate(self.triangles):
            for v in tri:
                result.setdefault(v, []).append(i)
        return result

    def order_key(self, v: int):
        return (self.f[v], v)

    def total_area(self) -> Fraction:
        return sum(self.areas, Fraction(0))

    def with_values(self, f: dict[int, Fraction]) -> "SurfaceComplex":
        return SurfaceComplex(dict(f), self.triangles, self.areas,
                              self.involution)

    def to_json(self) -> str:
        return json.dumps({
            "vertices": [{"id": v, "f": format_rational(self.f[v])}
                         for v in self.vertex_ids],
            "triangles": [list(t) for t in self.triangles],
            "areas": [format_rational(a) for a in self.areas],
            "involution": [[v, self.involution[v]]
                           for v in sorted(self.involution)],
        })

    @classmethod
    def from_json(cls, text: str) -> "SurfaceComplex":
        data = load_document(text)
        try:
            f = {}
            for entry in data["vertices"]:
                v = _int(entry["id"], "vertex id")
                if v in f:
                    raise MalformedInputError(f"Duplicate vertex id {v}")
                f[v] = parse_rational(entry["f"])
            triangles = []
            for tri in data["triangles"]:
                if not isinstance(tri, list) or len(tri) != 3:
                    raise MalformedInputError(f"Triangle must list 3 ids: {tri!r}")
                triangles.append(tuple(_int(v, "triangle vertex") for v in tri))
            areas = tuple(parse_rational(a) for a in data["areas"])
            involution: dict[int, int] = {}
            for pair in data["involution"]:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise MalformedInputError(f"Involution entry must be a pair: {pair!r}")
                u, v = (_int(x, "involution vertex") for x in pair)
                involution[u] = v
        except (KeyError, TypeError) as e:
            raise MalformedInputError(f"Malformed mesh document: {e}") from e
        # Orbits may be listed once; complete them with the inverse pairs.
        for u, v in list(involution.items()):
            involution.setdefault(v, u)
        return cls(f, tuple(triangles), areas, involution)


@dataclass
class ValidationEntry:
    code: str
    message: str
    ids: list = field(default_factory=list)


@dataclass
class ValidationReport:
    entries: list[ValidationEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.entries

    @property
    def codes(self) -> set[str]:
        return {entry.code for entry in self.entries}

    def add(self, code: str, message: str, ids=None):
        self.entries.append(ValidationEntry(code, message, list(ids or [])))

    def to_json(self) -> str:
        return json.dumps({
            "ok": self.ok,
            "violations": [{"code": e.code, "message": e.message,
                            "ids": e.ids} for e in self.entries],
        })


@dataclass
class CriticalReport:
    tags: dict[int, CriticalTag]
    critical_values: list[Fraction]
    violations: list[str] = field(default_factory=list)

    def vertices_with(self, tag: CriticalTag) -> list[int]:
        return sorted(v for v, t in self.tags.items() if t is tag)

    def count(self, tag: CriticalTag) -> int:
        return len(self.vertices_with(tag))

    @property
    def critical_vertices(self) -> list[int]:
        return sorted(v for v, t in self.tags.items() if t.is_critical)


@dataclass
class SimplicityReport:
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class TopologyInvariants:
    chi_m: int
    b1_m: int
    chi_n: int
    b1_n: int


@dataclass(frozen=True)
class ReebNode:
    id: int
    f: Fraction


@dataclass(frozen=True)
class ReebEdge:
    id: int
    tail: int
    head: int
    profile: Optional[EdgeMeasureProfile] = None

    @property
    def mass(self) -> Fraction:
        return self.profile.mass


@dataclass
class MeasuredReebGraph:
    """Reeb graph with per-edge measure profiles and the graph involution.

    cellmap maps (triangle index, level interval index) pieces of the source
    mesh to edge ids; it is empty for graphs not computed from a mesh.
    """
    nodes: dict[int, ReebNode]
    edges: dict[int, ReebEdge]
    node_involution: dict[int, int] = field(default_factory=dict)
    edge_involution: dict[int, int] = field(default_factory=dict)
    cellmap: dict[tuple[int, int], int] = field(default_factory=dict)

    def incoming(self, node: int) -> list[int]:
        return sorted(e.id for e in self.edges.values() if e.head == node)

    def outgoing(self, node: int) -> list[int]:
        return sorted(e.id for e in self.edges.values() if e.tail == node)

    def valence(self, node: int) -> int:
        return len(self.incoming(node)) + len(self.outgoing(node))

    def total_mass(self) -> Fraction:
        return sum((e.mass for e in self.edges.values()), Fraction(0))

    def fixed_edges(self) -> list[int]:
        return sorted(e for e, image in self.edge_involution.items()
                      if image == e)

    def relabeled(self, node_map: dict[int, int],
                  edge_map: dict[int, int]) -> "MeasuredReebGraph":
        """Returns a copy with node and edge ids renamed; cellmap is dropped."""
        nodes = {node_map[n.id]: ReebNode(node_map[n.id], n.f)
                 for n in self.nodes.values()}
        edges = {edge_map[e.id]: ReebEdge(edge_map[e.id], node_map[e.tail],
                                          node_map[e.head], e.profile)
                 for e in self.edges.values()}
        return MeasuredReebGraph(
            nodes, edges,
            {node_map[a]: node_map[b] for a, b in self.node_involution.items()},
            {edge_map[a]: edge_map[b] for a, b in self.edge_involution.items()},
        )

    def to_dict(self) -> dict:
        data = {
            "nodes": [{"id": n.id, "f": format_rational(n.f)}
                      for n in sorted(self.nodes.values(), key=lambda n: n.id)],
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head,
                       "mass": format_rational(e.mass),
                       "profile": e.profile.to_json()}
                      for e in sorted(self.edges.values(), key=lambda e: e.id)],
            "iota": {
                "nodes": [[a, b] for a, b in sorted(self.node_involution.items())],
                "edges": [[a, b] for a, b in sorted(self.edge_involution.items())],
            },
        }
        if self.cellmap:
            data["cells"] = [[t, k, e] for (t, k), e in sorted(self.cellmap.items())]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MeasuredReebGraph":
        try:
            nodes = {}
            for entry in data["nodes"]:
                n = _int(entry["id"], "node id")
                nodes[n] = ReebNode(n, parse_rational(entry["f"]))
            edges = {}
            for entry in data["edges"]:
                e = _int(entry["id"], "edge id")
                tail = _int(entry["tail"], "edge tail")
                head = _int(entry["head"], "edge head")
                if tail not in nodes or head not in nodes:
                    raise MalformedInputError(f"Edge {e} references an unknown node")
                profile = EdgeMeasureProfile.from_json(
                    entry["profile"], nodes[tail].f, nodes[head].f)
                if "mass" in entry and parse_rational(entry["mass"]) != profile.mass:
                    raise MalformedInputError(
                        f"Edge {e}: declared mass disagrees with its profile")
                edges[e] = ReebEdge(e, tail, head, profile)
            iota = data.get("iota", {})
            node_involution = {_int(a, "node id"): _int(b, "node id")
                               for a, b in iota.get("nodes", [])}
            edge_involution = {_int(a, "edge id"): _int(b, "edge id")
                               for a, b in iota.get("edges", [])}
            cellmap = {(_int(t, "triangle"), _int(k, "interval")): _int(e, "edge id")
                       for t, k, e in data.get("cells", [])}
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, MalformedInputError):
                raise
            raise MalformedInputError(f"Malformed graph document: {e}") from e
        return cls(nodes, edges, node_involution, edge_involution, cellmap)

    @classmethod
    def from_json(cls, text: str) -> "MeasuredReebGraph":
        return cls.from_dict(load_document(text))

    def to_dot(self) -> str:
        """Renders the graph for Graphviz, one rank per f-value."""
        lines = ["digraph reeb {", "  rankdir=BT;"]
        for n in sorted(self.nodes.values(), key=lambda n: (n.f, n.id)):
            lines.append(f'  {{ rank=same; n{n.id} [label="{n.id}\\nf={n.f}"]; }}')
        for e in sorted(self.edges.values(), key=lambda e: e.id):
            style = ("dashed" if self.edge_involution.get(e.id) == e.id
                     else "solid")
            lines.append(f'  n{e.tail} -> n{e.head} [label="e{e.id} '
                         f'm={e.mass}", style={style}];')
        for a, b in sorted(self.node_involution.items()):
            if a < b:
                lines.append(f"  n{a} -> n{b} [style=dotted, dir=none, "
                             f"constraint=false];")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class CirculationGraph:
    """A measured Reeb graph together with the circulation at edge tails."""
    base: MeasuredReebGraph
    cref: dict[int, Fraction]

    def to_json(self) -> str:
        data = self.base.to_dict()
        for entry in data["edges"]:
            entry["cref"] = format_rational(self.cref[entry["id"]])
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str) -> "CirculationGraph":
        data = load_document(text)
        base = MeasuredReebGraph.from_dict(data)
        try:
            cref = {entry["id"]: parse_rational(entry["cref"])
                    for entry in data["edges"]}
        except KeyError as e:
            raise MalformedInputError("Every edge needs a cref value") from e
        return cls(base, cref)


@dataclass(frozen=True)
class DiscreteOneForm:
    """Values on oriented mesh edges, stored for the orientation u < v."""
    values: dict[tuple[int, int], Fraction]

    def value(self, u: int, v: int) -> Fraction:
        if u < v:
            return self.values.get((u, v), Fraction(0))
        return -self.values.get((v, u), Fraction(0))

    def __add__(self, other: "DiscreteOneForm") -> "DiscreteOneForm":
        keys = set(self.values) | set(other.values)
        return DiscreteOneForm({k: self.value(*k) + other.value(*k)
                                for k in keys})

    def scaled(self, factor) -> "DiscreteOneForm":
        factor = Fraction(factor)
        return DiscreteOneForm({k: factor * v for k, v in self.values.items()})

    def to_json(self) -> str:
        return json.dumps({"edges": [[u, v, format_rational(x)]
                                     for (u, v), x in sorted(self.values.items())]})

    @classmethod
    def from_json(cls, text: str) -> "DiscreteOneForm":
        data = load_document(text)
        values: dict[tuple[int, int], Fraction] = {}
        try:
            for u, v, x in data["edges"]:
                u, v, x = _int(u, "vertex"), _int(v, "vertex"), parse_rational(x)
                if u > v:
                    u, v, x = v, u, -x
                values[(u, v)] = x
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, MalformedInputError):
                raise
            raise MalformedInputError(f"Malformed 1-form document: {e}") from e
        return cls(values)


@dataclass
class InvolutionHomology:
    b1: int
    dim_even: int
    dim_odd: int
    fix_count: int
    cycle_basis: list[dict[int, int]]
    action: list[list[Fraction]]
    tree_edges: Optional[list[int]] = None
