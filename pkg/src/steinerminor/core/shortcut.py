# src/steinerminor/core/shortcut.py

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from steinerminor.core.exceptions import InputError
from steinerminor.core.graph import STRONG, WeightedGraph, set_diameter, sssp
from steinerminor.utils.logging_config import get_logger
from steinerminor.utils.randomness import substream

logger = get_logger("steinerminor.core.shortcut")


@dataclass(frozen=True)
class Clustering:
    """
    A partition of the host vertex set into clusters that each induce a
    connected subgraph.

    Clusters are numbered by ascending minimum vertex id. The strong diameter
    of every cluster is computed on first access and cached.

    Attributes:
        host (WeightedGraph): The graph being clustered.
        members (Tuple[Tuple[int, ...], ...]): Sorted vertices of every cluster.
    """

    host: WeightedGraph
    members: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        seen: Set[int] = set()
        for index, cluster in enumerate(self.members):
            if not cluster:
                raise InputError(f"Cluster {index} is empty.")
            overlap = seen.intersection(cluster)
            if overlap:
                raise InputError(f"Vertex {min(overlap)} belongs to more than one cluster.")
            seen.update(cluster)
            if not nx.is_connected(self.host.nx_graph.subgraph(cluster)):
                raise InputError(f"Cluster {index} (min vertex {cluster[0]}) is disconnected.")
        if len(seen) != self.host.n:
            missing = min(set(self.host.vertices()) - seen)
            raise InputError(f"Vertex {missing} is not covered by any cluster.")

    @classmethod
    def from_clusters(cls, host: WeightedGraph, clusters: Iterable[Iterable[int]]) -> "Clustering":
        members = sorted((tuple(sorted(int(v) for v in c)) for c in clusters), key=lambda c: c[:1])
        return cls(host, tuple(members))

    @classmethod
    def singletons(cls, host: WeightedGraph) -> "Clustering":
        return cls(host, tuple((v,) for v in host.vertices()))

    @cached_property
    def cluster_of(self) -> Tuple[int, ...]:
        owner = [0] * self.host.n
        for index, cluster in enumerate(self.members):
            for v in cluster:
                owner[v] = index
        return tuple(owner)

    @cached_property
    def diameters(self) -> Tuple[Optional[float], ...]:
        return tuple(set_diameter(self.host, cluster, STRONG) for cluster in self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    def max_diameter(self) -> Optional[float]:
        if any(d is None for d in self.diameters):
            return None
        return max(self.diameters, default=0.0)


@dataclass(frozen=True)
class ClusterGraph:
    """
    The contraction of a clustering: one supernode per cluster, adjacent iff a
    host edge crosses the two clusters.

    ``crossing[(a, b)]`` is the lexicographically smallest host edge ``(x, y)``
    with ``x`` in cluster ``a`` and ``y`` in cluster ``b``.
    """

    graph: nx.Graph
    crossing: Dict[Tuple[int, int], Tuple[int, int]]
    _predecessors: Dict[int, Dict[int, List[int]]] = field(
        default_factory=dict, compare=False, repr=False
    )

    @property
    def size(self) -> int:
        return self.graph.number_of_nodes()

    def check_supernode(self, a: int) -> None:
        if a not in self.graph:
            raise InputError(f"Invalid cluster id {a!r}.")

    def predecessors(self, source: int) -> Dict[int, List[int]]:
        if source not in self._predecessors:
            self._predecessors[source] = nx.predecessor(self.graph, source)
        return self._predecessors[source]


def cluster_graph(g: WeightedGraph, clustering: Clustering) -> ClusterGraph:
    """
    Contract every cluster of ``clustering`` into a supernode.

    Raises:
        InputError: If the clustering does not cover exactly the vertices of ``g``.
    """
    if clustering.host.n != g.n:
        raise InputError(
            f"Clustering covers {clustering.host.n} vertices but the graph has {g.n}."
        )
    owner = clustering.cluster_of
    crossing: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for u, v, _ in g.edges():
        a, b = owner[u], owner[v]
        if a == b:
            continue
        if (a, b) not in crossing or (u, v) < crossing[(a, b)]:
            crossing[(a, b)] = (u, v)
        if (b, a) not in crossing or (v, u) < crossing[(b, a)]:
            crossing[(b, a)] = (v, u)

    graph = nx.Graph()
    graph.add_nodes_from(range(clustering.size))
    # Sorted insertion keeps every adjacency list ascending by cluster id
    graph.add_edges_from(sorted((a, b) for a, b in crossing if a < b))
    return ClusterGraph(nx.freeze(graph), crossing)


def hop_distance(cg: ClusterGraph, a: int, b: int) -> Optional[int]:
    """BFS hop count between two supernodes; None when they are disconnected."""
    cg.check_supernode(a)
    cg.check_supernode(b)
    try:
        return nx.shortest_path_length(cg.graph, a, b)
    except nx.NetworkXNoPath:
        return None


def hop_path(cg: ClusterGraph, a: int, b: int) -> Optional[List[int]]:
    """
    A hop-shortest supernode path from ``a`` to ``b``.

    Among all hop-shortest paths, each step back from ``b`` takes the smallest
    predecessor id, so the result is deterministic.
    """
    cg.check_supernode(a)
    cg.check_supernode(b)
    predecessors = cg.predecessors(a)
    if b not in predecessors:
        return None
    path = [b]
    while path[-1] != a:
        path.append(min(predecessors[path[-1]]))
    path.reverse()
    return path


def _carve(
    g: WeightedGraph,
    vertices: Set[int],
    order: Sequence[int],
    radius: float,
    delta: float,
) -> List[Set[int]]:
    remaining = set(vertices)
    pieces: List[Set[int]] = []
    for center in order:
        if center not in remaining:
            continue
        view = nx.subgraph_view(g.nx_graph, filter_node=remaining.__contains__)
        ball = set(
            nx.single_source_dijkstra_path_length(view, center, cutoff=radius, weight="weight")
        )
        remaining -= ball
        if radius > delta / 2:
            diameter = set_diameter(g, ball, STRONG)
            if diameter is None or diameter > delta:
                logger.debug(
                    f"Ball around {center} has strong diameter {diameter} > {delta}; splitting."
                )
                inner_order = [v for v in order if v in ball]
                pieces.extend(_carve(g, ball, inner_order, radius / 2, delta))
                continue
        pieces.append(ball)
    return pieces


def _fits_whole(g: WeightedGraph, component: Set[int], start: int, delta: float) -> bool:
    eccentricity = sssp(g, start).max_distance() if len(component) > 1 else 0.0
    if eccentricity <= delta / 2:
        return True
    if eccentricity > delta:
        return False
    diameter = set_diameter(g, component, STRONG)
    return diameter is not None and diameter <= delta


def ball_carving(
    g: WeightedGraph,
    delta: float,
    seed: Optional[int] = 0,
    radius_fraction: float = 0.5,
) -> Clustering:
    """
    Greedy ball-carving clustering with strong diameter at most ``delta``.

    Vertices are visited in a seed-derived pseudorandom order (ascending ids
    when ``seed`` is None). Each still-unclustered vertex grows a
    shortest-path ball of radius ``radius_fraction * delta`` in the graph
    induced on the unclustered vertices, and the ball becomes a cluster. Balls
    whose strong diameter exceeds ``delta`` (possible only for fractions above
    one half) are re-carved inside with half the radius. A connected component
    whose strong diameter already fits ``delta`` is emitted whole.

    Args:
        g (WeightedGraph): The graph to cluster.
        delta (float): Strong-diameter budget.
        seed (Optional[int]): Seed of the carving order.
        radius_fraction (float): Ball radius as a fraction of ``delta``.

    Returns:
        Clustering: The carved clustering.
    """
    if not delta > 0:
        raise InputError(f"The diameter budget must be positive, got {delta}.")
    if not radius_fraction > 0:
        raise InputError(f"The radius fraction must be positive, got {radius_fraction}.")

    if seed is None:
        order = list(g.vertices())
    else:
        order = [int(v) for v in substream(seed, "ball-carving").permutation(g.n)]
    position = {v: i for i, v in enumerate(order)}

    clusters: List[Set[int]] = []
    components = sorted(
        nx.connected_components(g.nx_graph), key=lambda c: min(position[v] for v in c)
    )
    for component in components:
        component_order = sorted(component, key=position.__getitem__)
        if _fits_whole(g, component, component_order[0], delta):
            clusters.append(set(component))
            continue
        clusters.extend(_carve(g, component, component_order, radius_fraction * delta, delta))

    clustering = Clustering.from_clusters(g, clusters)
    logger.debug(f"Ball carving with delta={delta} produced {clustering.size} clusters.")
    return clustering


@dataclass
class ShortcutReport:
    delta: float
    max_strong_diameter: Optional[float]
    worst_hop: int
    worst_pair: Optional[Tuple[int, int]]
    realized_kappa: float
    pairs_checked: int
    violations: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "max_strong_diameter": self.max_strong_diameter,
            "worst_hop": self.worst_hop,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "realized_kappa": self.realized_kappa,
            "pairs_checked": self.pairs_checked,
            "violations": self.violations,
        }


def verify_shortcut(
    g: WeightedGraph,
    clustering: Clustering,
    delta: float,
    sources: Optional[Iterable[int]] = None,
    jobs: int = 1,
) -> ShortcutReport:
    """
    Measure the shortcut-partition hop property of a clustering.

    Checks every cluster's strong diameter against ``delta`` and, for every
    vertex pair connected in ``g``, the ratio
    ``hop(C_u, C_v) * delta / max(dist(u, v), delta)``; the largest ratio is
    the realized kappa. Violations are recorded, never raised.

    Args:
        g (WeightedGraph): The clustered graph.
        clustering (Clustering): The clustering to check.
        delta (float): The diameter budget.
        sources (Optional[Iterable[int]]): Restrict the pair scan to these
            source vertices (pairs with every other vertex). Defaults to
            all unordered pairs.
        jobs (int): Worker threads for the pair scan.

    Returns:
        ShortcutReport: The measured quantities and any violations.
    """
    if not delta > 0:
        raise InputError(f"The diameter budget must be positive, got {delta}.")
    cg = cluster_graph(g, clustering)
    owner = clustering.cluster_of
    violations: List[Dict[str, Any]] = []

    for index, diameter in enumerate(clustering.diameters):
        if diameter is None or diameter > delta:
            violations.append(
                {
                    "cluster": index,
                    "reason": f"strong diameter {diameter} exceeds delta {delta}",
                }
            )

    exhaustive = sources is None
    source_list = list(g.vertices()) if exhaustive else sorted(set(sources))
    hops: Dict[int, Dict[int, int]] = {}
    for a in sorted({owner[u] for u in source_list}):
        hops[a] = nx.single_source_shortest_path_length(cg.graph, a)

    def scan(u: int) -> Tuple[float, int, Optional[Tuple[int, int]], int, List[Dict[str, Any]]]:
        best_ratio, best_hop, best_pair, count, found = 0.0, 0, None, 0, []
        from_u = hops[owner[u]]
        for v, d in sssp(g, u).reachable():
            if v == u or (exhaustive and v < u):
                continue
            count += 1
            hop = from_u.get(owner[v])
            if hop is None:
                found.append({"u": u, "v": v, "reason": "clusters disconnected in cluster graph"})
                continue
            ratio = hop * delta / max(d, delta)
            if ratio > best_ratio or best_pair is None:
                best_ratio, best_pair = max(best_ratio, ratio), (u, v)
            best_hop = max(best_hop, hop)
        return best_ratio, best_hop, best_pair, count, found

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(scan, source_list))
    else:
        results = [scan(u) for u in source_list]

    realized_kappa, worst_hop, worst_pair, pairs_checked = 0.0, 0, None, 0
    for ratio, hop, pair, count, found in results:
        pairs_checked += count
        violations.extend(found)
        if pair is not None and (worst_pair is None or ratio > realized_kappa):
            realized_kappa, worst_pair = ratio, pair
        worst_hop = max(worst_hop, hop)

    report = ShortcutReport(
        delta=delta,
        max_strong_diameter=clustering.max_diameter(),
        worst_hop=worst_hop,
        worst_pair=worst_pair,
        realized_kappa=realized_kappa,
        pairs_checked=pairs_checked,
        violations=violations,
    )
    logger.debug(
        f"Shortcut check at delta={delta}: kappa={realized_kappa}, worst hop={worst_hop}, "
        f"{len(violations)} violations."
    )
    return report
