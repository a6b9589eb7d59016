# src/steinerminor/core/graph.py

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import cached_property
from typing import (
    TYPE_CHECKING,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx

from steinerminor.core.exceptions import InputError, MinorValidityError
from steinerminor.utils.logging_config import get_logger

if TYPE_CHECKING:
    from steinerminor.core.spr import SprProvenance

logger = get_logger("steinerminor.core.graph")

Edge = Tuple[int, int, float]
WEAK = "weak"
STRONG = "strong"


def _canonical_edges(edges: Iterable[Edge], n: int) -> Dict[Tuple[int, int], float]:
    canonical: Dict[Tuple[int, int], float] = {}
    for u, v, w in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"Edge ({u}, {v}) references a vertex outside 0..{n - 1}.")
        if u == v:
            raise InputError(f"Self-loop at vertex {u} is not allowed.")
        w = float(w)
        if not math.isfinite(w) or w <= 0:
            raise InputError(
                f"Edge ({u}, {v}) has weight {w}; weights must be finite and strictly positive."
            )
        key = (u, v) if u < v else (v, u)
        if key in canonical:
            logger.debug(f"Collapsing parallel edge {key} to its minimum weight.")
            w = min(w, canonical[key])
        canonical[key] = w
    return canonical


class WeightedGraph:
    """
    Immutable undirected graph with strictly positive edge weights on the dense
    vertex ids 0..n-1.

    The graph is backed by a frozen networkx.Graph carrying a ``weight``
    attribute on every edge, so networkx's shortest-path routines run on it
    directly. Edges are inserted in sorted order, which makes every adjacency
    list ascending by neighbor id.

    Attributes:
        n (int): Number of vertices.
        labels (Tuple[str, ...]): External label of every vertex id.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[Edge] = (),
        labels: Optional[Sequence[str]] = None,
    ):
        if n < 0:
            raise InputError(f"Vertex count must be nonnegative, got {n}.")
        self.n = n
        self.labels: Tuple[str, ...] = (
            tuple(str(label) for label in labels)
            if labels is not None
            else tuple(str(v) for v in range(n))
        )
        if len(self.labels) != n:
            raise InputError(f"Expected {n} labels, got {len(self.labels)}.")

        canonical = _canonical_edges(edges, n)
        self._edges: Tuple[Edge, ...] = tuple(
            (u, v, canonical[(u, v)]) for u, v in sorted(canonical)
        )
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_weighted_edges_from(self._edges)
        self._graph = nx.freeze(graph)

    @property
    def nx_graph(self) -> nx.Graph:
        """The frozen networkx view; read-only."""
        return self._graph

    @property
    def m(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> Tuple[Edge, ...]:
        """All edges as ``(u, v, w)`` with ``u < v``, sorted."""
        return self._edges

    def neighbors(self, v: int) -> Iterator[Tuple[int, float]]:
        for u, data in self._graph.adj[v].items():
            yield u, data["weight"]

    def degree(self, v: int) -> int:
        return self._graph.degree[v]

    def has_edge(self, u: int, v: int) -> bool:
        return self._graph.has_edge(u, v)

    def weight(self, u: int, v: int) -> float:
        try:
            return self._graph.adj[u][v]["weight"]
        except KeyError:
            raise InputError(f"No edge between {u} and {v}.") from None

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, numbers.Integral) or not 0 <= v < self.n:
            raise InputError(f"Invalid vertex id {v!r} for a graph on {self.n} vertices.")

    def label_of(self, v: int) -> str:
        return self.labels[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self._edges == other._edges
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class TerminalSet:
    """The terminals K, stored sorted and without duplicates."""

    terminals: Tuple[int, ...]

    def __post_init__(self):
        if not self.terminals:
            raise InputError("The terminal set must be nonempty.")

    @classmethod
    def of(cls, terminals: Iterable[int]) -> "TerminalSet":
        return cls(tuple(sorted(set(terminals))))

    @cached_property
    def as_set(self) -> FrozenSet[int]:
        return frozenset(self.terminals)

    def __contains__(self, v: object) -> bool:
        return v in self.as_set

    def __iter__(self) -> Iterator[int]:
        return iter(self.terminals)

    def __len__(self) -> int:
        return len(self.terminals)

    def validate(self, g: WeightedGraph) -> None:
        for t in self.terminals:
            g.check_vertex(t)

    def check_components(self, g: WeightedGraph) -> None:
        """Raise InputError unless every connected component of g holds a terminal."""
        self.validate(g)
        for component in nx.connected_components(g.nx_graph):
            if component.isdisjoint(self.as_set):
                witness = min(component)
                logger.error(f"Component containing vertex {witness} has no terminal.")
                raise InputError(
                    f"The connected component containing vertex {witness} "
                    f"({g.label_of(witness)}) contains no terminal."
                )


@dataclass(frozen=True)
class DistanceMap:
    """
    Shortest-path distances from a source vertex or a source set.

    Unreachable vertices are simply absent from ``distances``; ``distance``
    reports them as None.
    """

    sources: Tuple[int, ...]
    n: int
    distances: Mapping[int, float]

    def distance(self, v: int) -> Optional[float]:
        return self.distances.get(v)

    def is_reachable(self, v: int) -> bool:
        return v in self.distances

    def reachable(self) -> List[Tuple[int, float]]:
        return sorted(self.distances.items())

    def max_distance(self) -> float:
        return max(self.distances.values(), default=0.0)


@dataclass(frozen=True)
class Path:
    vertices: Tuple[int, ...]
    length: float
    max_edge_weight: float

    @classmethod
    def from_vertices(cls, g: WeightedGraph, vertices: Sequence[int]) -> "Path":
        """
        Build a path from a vertex sequence of ``g``.

        Raises:
            InputError: If the sequence is empty or two consecutive vertices are
                not adjacent in ``g``.
        """
        if not vertices:
            raise InputError("A path needs at least one vertex.")
        length = 0.0
        heaviest = 0.0
        for u, v in zip(vertices, vertices[1:]):
            w = g.weight(u, v)
            length += w
            heaviest = max(heaviest, w)
        return cls(tuple(vertices), length, heaviest)

    @property
    def hops(self) -> int:
        return len(self.vertices) - 1

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]


def sssp(g: WeightedGraph, source: int, cutoff: Optional[float] = None) -> DistanceMap:
    """
    Exact single-source shortest-path distances (Dijkstra).

    Args:
        g (WeightedGraph): The host graph.
        source (int): The source vertex.
        cutoff (Optional[float]): Only report vertices within this distance.

    Returns:
        DistanceMap: Distances of every reachable vertex.

    Raises:
        InputError: If ``source`` is not a vertex of ``g``.
    """
    g.check_vertex(source)
    lengths = nx.single_source_dijkstra_path_length(
        g.nx_graph, source, cutoff=cutoff, weight="weight"
    )
    return DistanceMap((source,), g.n, lengths)


def dist_to_set(g: WeightedGraph, terminals: Iterable[int]) -> DistanceMap:
    """Distance from every vertex to its nearest vertex of ``terminals`` (one multi-source pass)."""
    sources = sorted(set(terminals))
    if not sources:
        raise InputError("Distance to an empty vertex set is undefined.")
    for s in sources:
        g.check_vertex(s)
    lengths = nx.multi_source_dijkstra_path_length(g.nx_graph, sources, weight="weight")
    return DistanceMap(tuple(sources), g.n, lengths)


def shortest_path(g: WeightedGraph, u: int, v: int) -> Optional[Path]:
    g.check_vertex(u)
    g.check_vertex(v)
    try:
        vertices = nx.dijkstra_path(g.nx_graph, u, v, weight="weight")
    except nx.NetworkXNoPath:
        return None
    return Path.from_vertices(g, vertices)


def prune_heavy_edges(g: WeightedGraph, delta: float) -> WeightedGraph:
    """Return G' holding exactly the edges of ``g`` with weight at most ``delta``."""
    if not delta > 0:
        raise InputError(f"The pruning threshold must be positive, got {delta}.")
    kept = [(u, v, w) for u, v, w in g.edges() if w <= delta]
    return WeightedGraph(g.n, kept, g.labels)


@dataclass(frozen=True)
class VertexMapping:
    """Bidirectional id mapping between an induced subgraph and its host."""

    to_host: Tuple[int, ...]

    @cached_property
    def to_sub(self) -> Dict[int, int]:
        return {host: sub for sub, host in enumerate(self.to_host)}

    def host(self, sub_vertex: int) -> int:
        return self.to_host[sub_vertex]

    def sub(self, host_vertex: int) -> int:
        return self.to_sub[host_vertex]


def induced_subgraph(
    g: WeightedGraph, vertices: Iterable[int]
) -> Tuple[WeightedGraph, VertexMapping]:
    """
    Subgraph of ``g`` induced on ``vertices``, renumbered densely.

    Sub-ids follow ascending host ids, so the mapping is monotone.

    Returns:
        Tuple[WeightedGraph, VertexMapping]: The subgraph and the id mapping.
    """
    members = sorted(set(vertices))
    for v in members:
        g.check_vertex(v)
    mapping = VertexMapping(tuple(members))
    to_sub = mapping.to_sub
    edges = [
        (to_sub[u], to_sub[v], w)
        for u, v, w in g.nx_graph.subgraph(members).edges(data="weight")
    ]
    sub = WeightedGraph(len(members), edges, [g.labels[v] for v in members])
    return sub, mapping


def set_diameter(g: WeightedGraph, vertices: Iterable[int], mode: str = WEAK) -> Optional[float]:
    """
    Weak or strong diameter of a vertex set.

    Weak mode measures distances in ``g``; strong mode measures them inside the
    subgraph induced on the set.

    Returns:
        Optional[float]: The diameter, or None when some pair is unreachable.

    Raises:
        InputError: If the set is empty or the mode is unknown.
    """
    members = sorted(set(vertices))
    if not members:
        raise InputError("The diameter of an empty vertex set is undefined.")
    if mode not in (WEAK, STRONG):
        raise InputError(f"Unknown diameter mode {mode!r}; use 'weak' or 'strong'.")
    for v in members:
        g.check_vertex(v)

    host = g.nx_graph if mode == WEAK else g.nx_graph.subgraph(members)
    diameter = 0.0
    for s in members:
        lengths = nx.single_source_dijkstra_path_length(host, s, weight="weight")
        for t in members:
            if t not in lengths:
                return None
            diameter = max(diameter, lengths[t])
    return diameter


def normalize_scale(g: WeightedGraph, terminals: TerminalSet) -> Tuple[WeightedGraph, float]:
    """
    Rescale ``g`` so that its minimum pairwise distance is 1.

    With strictly positive weights the closest pair of distinct vertices is
    always the endpoints of a lightest edge, so the minimum pairwise distance is
    the minimum edge weight; disconnected pairs never enter it.

    Returns:
        Tuple[WeightedGraph, float]: The rescaled graph and the factor applied
        to every weight.
    """
    terminals.validate(g)
    if g.m == 0:
        return g, 1.0
    d_min = min(w for _, _, w in g.edges())
    if d_min == 1.0:
        return g, 1.0
    scaled = WeightedGraph(g.n, [(u, v, w / d_min) for u, v, w in g.edges()], g.labels)
    logger.debug(f"Normalized weights by 1/{d_min}.")
    return scaled, 1.0 / d_min


def check_planarity(g: WeightedGraph) -> bool:
    """
    Report whether ``g`` is planar; logs a warning when it is not.

    Planarity only backs the theoretical guarantees, so callers keep going
    either way.
    """
    if g.n >= 3 and g.m > 3 * g.n - 6:
        logger.warning(f"Graph fails the Euler bound (m={g.m} > 3n-6={3 * g.n - 6}); not planar.")
        return False
    is_planar, _ = nx.check_planarity(g.nx_graph)
    if not is_planar:
        logger.warning("Graph is not planar; distortion guarantees do not apply.")
    return is_planar


@dataclass(frozen=True)
class SprMinor:
    """
    A minor M of a host graph on its terminal set.

    Minor vertex ``i`` stands for host terminal ``terminals[i]``; every M-edge
    weight is the host shortest-path distance between its terminals.

    Attributes:
        graph (WeightedGraph): M itself, labelled with the host terminal labels.
        terminals (Tuple[int, ...]): Host id of every minor vertex.
        assignment (Tuple[int, ...]): f, the host terminal of every host vertex.
        branch_sets (Dict[int, Tuple[int, ...]]): f^-1(t) for every terminal t.
        provenance (Optional[SprProvenance]): Run details, when built by run_spr.
    """

    graph: WeightedGraph
    terminals: Tuple[int, ...]
    assignment: Tuple[int, ...]
    branch_sets: Dict[int, Tuple[int, ...]]
    provenance: Optional["SprProvenance"] = None

    @cached_property
    def minor_ids(self) -> Dict[int, int]:
        return {t: i for i, t in enumerate(self.terminals)}

    def edge_list(self) -> List[Tuple[int, int, float]]:
        """M-edges in host terminal ids, sorted."""
        return sorted(
            (self.terminals[a], self.terminals[b], w) for a, b, w in self.graph.edges()
        )


AssignmentLike = Union[Mapping[int, int], Sequence[int]]


def _total_assignment(g: WeightedGraph, terminals: TerminalSet, f: AssignmentLike) -> Tuple[int, ...]:
    if isinstance(f, Mapping):
        missing = [v for v in g.vertices() if v not in f]
        if missing:
            raise InputError(f"Assignment is not total; vertex {missing[0]} is unassigned.")
        assignment = tuple(f[v] for v in g.vertices())
    else:
        assignment = tuple(f)
        if len(assignment) != g.n:
            raise InputError(
                f"Assignment covers {len(assignment)} vertices, graph has {g.n}."
            )
    for v, t in enumerate(assignment):
        if t is None:
            raise InputError(f"Assignment is not total; vertex {v} is unassigned.")
        if t not in terminals:
            raise InputError(f"Vertex {v} is assigned to {t}, which is not a terminal.")
    for t in terminals:
        if assignment[t] != t:
            raise InputError(f"Terminal {t} must be assigned to itself, not {assignment[t]}.")
    return assignment


def contract_assignment(
    g: WeightedGraph, terminals: TerminalSet, f: AssignmentLike
) -> SprMinor:
    """
    Contract every branch set f^-1(t) into its terminal t.

    M has an edge (t, t') iff some edge of ``g`` joins f^-1(t) to f^-1(t'), and
    its weight is dist_G(t, t').

    Args:
        g (WeightedGraph): The host graph.
        terminals (TerminalSet): The terminals K.
        f: The host terminal of every vertex, as a mapping or a sequence.

    Returns:
        SprMinor: The contracted minor, without provenance.

    Raises:
        InputError: If f is not total or maps outside K or moves a terminal.
        MinorValidityError: If a branch set is disconnected; the witness is a
            pair of its vertices lying in different components.
    """
    terminals.validate(g)
    assignment = _total_assignment(g, terminals, f)

    members: Dict[int, List[int]] = {t: [] for t in terminals}
    for v, t in enumerate(assignment):
        members[t].append(v)
    branch_sets = {t: tuple(vs) for t, vs in members.items()}

    for t, vs in branch_sets.items():
        sub = g.nx_graph.subgraph(vs)
        if not nx.is_connected(sub):
            components = sorted(nx.connected_components(sub), key=min)
            witness = (min(components[0]), min(components[1]))
            logger.error(f"Branch set of terminal {t} is disconnected; witness {witness}.")
            raise MinorValidityError(
                f"Branch set of terminal {t} is disconnected: "
                f"{witness[0]} and {witness[1]} lie in different components.",
                witness=witness,
            )

    crossing = sorted(
        {
            (min(assignment[u], assignment[v]), max(assignment[u], assignment[v]))
            for u, v, _ in g.edges()
            if assignment[u] != assignment[v]
        }
    )
    distances: Dict[int, DistanceMap] = {}
    minor_ids = {t: i for i, t in enumerate(terminals)}
    minor_edges = []
    for a, b in crossing:
        if a not in distances:
            distances[a] = sssp(g, a)
        minor_edges.append((minor_ids[a], minor_ids[b], distances[a].distance(b)))

    minor = WeightedGraph(
        len(terminals), minor_edges, [g.labels[t] for t in terminals]
    )
    return SprMinor(minor, terminals.terminals, assignment, branch_sets)
