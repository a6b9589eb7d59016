# src/steinerminor/core/scattering.py

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple, Union

from steinerminor.config.settings import DEFAULT_PAIR_SAMPLE, DEFAULT_SAMPLE_THRESHOLD
from steinerminor.core.exceptions import InputError, ScatterInfeasibleError
from steinerminor.core.graph import (
    Path,
    VertexMapping,
    WeightedGraph,
    induced_subgraph,
    prune_heavy_edges,
    shortest_path,
    sssp,
)
from steinerminor.core.shortcut import ClusterGraph, Clustering, cluster_graph, hop_path
from steinerminor.providers import ShortcutProvider, get_provider, provide_clustering
from steinerminor.utils.logging_config import get_logger
from steinerminor.utils.randomness import substream

logger = get_logger("steinerminor.core.scattering")

PairMode = Union[str, int]
ALL_PAIRS = "all"
AUTO_PAIRS = "auto"


def parse_pair_mode(text: str) -> PairMode:
    """Parse ``all``, ``auto`` or ``sample:N``."""
    if text in (ALL_PAIRS, AUTO_PAIRS):
        return text
    if text.startswith("sample:"):
        try:
            budget = int(text.split(":", 1)[1])
        except ValueError:
            raise InputError(f"Invalid pair budget in {text!r}.") from None
        if budget <= 0:
            raise InputError(f"The pair budget must be positive, got {budget}.")
        return budget
    raise InputError(f"Unknown pair mode {text!r}; use all, auto or sample:N.")


@dataclass(frozen=True)
class ScatteringPartition:
    """
    A clustering of the pruned graph G' wrapped as an approximate scattering
    partition of G.

    Attributes:
        graph (WeightedGraph): The input graph G.
        pruned (WeightedGraph): G', the edges of G with weight at most ``delta``.
        clustering (Clustering): The provider's clustering of G'.
        delta (float): The diameter budget.
        beta_emp (Optional[float]): Measured beta, once verified.
        tau_emp (Optional[int]): Measured tau, once verified.
    """

    graph: WeightedGraph
    pruned: WeightedGraph
    clustering: Clustering
    delta: float
    beta_emp: Optional[float] = None
    tau_emp: Optional[int] = None
    _cluster_views: Dict[int, Tuple[WeightedGraph, VertexMapping]] = field(default_factory=dict, compare=False, repr=False)

    @cached_property
    def cluster_graph(self) -> ClusterGraph:
        return cluster_graph(self.pruned, self.clustering)

    def cluster_of(self, v: int) -> int:
        return self.clustering.cluster_of[v]

    def inner_path(self, cluster: int, x: int, y: int) -> List[int]:
        """Shortest x-y path inside G'[cluster]."""
        if x == y:
            return [x]
        if cluster not in self._cluster_views:
            self._cluster_views[cluster] = induced_subgraph(
                self.pruned, self.clustering.members[cluster]
            )
        sub, mapping = self._cluster_views[cluster]
        path = shortest_path(sub, mapping.sub(x), mapping.sub(y))
        if path is None:
            raise ScatterInfeasibleError(f"Cluster {cluster} does not connect {x} and {y}.")
        return [mapping.host(v) for v in path.vertices]

    def with_measurements(self, report: "ScatteringReport") -> "ScatteringPartition":
        return replace(self, beta_emp=report.beta_emp, tau_emp=report.tau_emp)


@dataclass(frozen=True)
class ScatteredPath:
    path: Path
    clusters: Tuple[int, ...]

    @property
    def length(self) -> float:
        return self.path.length

    @property
    def max_edge_weight(self) -> float:
        return self.path.max_edge_weight

    def violations(self, sp: ScatteringPartition) -> List[str]:
        """Reasons this path fails the construction's guarantees (empty when it holds)."""
        problems = []
        t = len(self.clusters)
        if self.length > 2 * t * sp.delta:
            problems.append(f"length {self.length} exceeds 2*{t}*{sp.delta}")
        if self.max_edge_weight > sp.delta:
            problems.append(f"edge of weight {self.max_edge_weight} exceeds {sp.delta}")
        if self.clusters[0] != sp.cluster_of(self.path.source):
            problems.append("first cluster does not contain the source")
        if self.clusters[-1] != sp.cluster_of(self.path.target):
            problems.append("last cluster does not contain the target")
        if len(set(self.clusters)) != t:
            problems.append("cluster sequence repeats a cluster")
        return problems


def build_scattering_partition(
    g: WeightedGraph,
    delta: float,
    provider: Union[str, ShortcutProvider] = "ball-carving",
    seed: Optional[int] = 0,
) -> ScatteringPartition:
    """
    Turn a strong-diameter clustering of the pruned graph into a scattering
    partition of ``g``.

    Edges heavier than ``delta`` are removed first; the provider then clusters
    the remaining graph G' with diameter budget ``delta``. Isolated vertices of
    G' end up as singleton clusters.

    Raises:
        InputError: If ``delta`` is not positive.
        ProviderError: If the provider breaks its contract.
    """
    if not delta > 0:
        raise InputError(f"The diameter budget must be positive, got {delta}.")
    if isinstance(provider, str):
        provider = get_provider(provider)
    pruned = prune_heavy_edges(g, delta)
    clustering = provide_clustering(provider, pruned, delta, seed)
    logger.debug(
        f"Scattering partition at delta={delta}: {clustering.size} clusters, "
        f"{g.m - pruned.m} heavy edges pruned."
    )
    return ScatteringPartition(g, pruned, clustering, delta)


def scattered_path(sp: ScatteringPartition, u: int, v: int) -> ScatteredPath:
    """
    Build the scattered path between ``u`` and ``v``.

    Follows a hop-shortest cluster path (C_1, ..., C_t) in the cluster graph of
    G', crossing from C_i to C_(i+1) over their smallest crossing edge and
    joining entry and exit vertices inside each cluster by a shortest path of
    G'[C_i].

    Raises:
        ScatterInfeasibleError: If ``u`` and ``v`` lie in different components of G'.
    """
    sp.pruned.check_vertex(u)
    sp.pruned.check_vertex(v)
    if u == v:
        return ScatteredPath(Path((u,), 0.0, 0.0), (sp.cluster_of(u),))

    route = hop_path(sp.cluster_graph, sp.cluster_of(u), sp.cluster_of(v))
    if route is None:
        raise ScatterInfeasibleError(
            f"Vertices {u} and {v} are disconnected in the pruned graph at delta={sp.delta}."
        )

    vertices: List[int] = []
    entry = u
    for a, b in zip(route, route[1:]):
        exit_vertex, next_entry = sp.cluster_graph.crossing[(a, b)]
        vertices.extend(sp.inner_path(a, entry, exit_vertex))
        entry = next_entry
    vertices.extend(sp.inner_path(route[-1], entry, v))
    return ScatteredPath(Path.from_vertices(sp.pruned, vertices), tuple(route))


@dataclass
class ScatteringReport:
    delta: float
    beta_emp: float
    tau_emp: int
    max_hops: int
    pairs_checked: int
    sampled: bool
    violations: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "beta_emp": self.beta_emp,
            "tau_emp": self.tau_emp,
            "max_hops": self.max_hops,
            "pairs_checked": self.pairs_checked,
            "sampled": self.sampled,
            "violations": self.violations,
        }


def _diameter_violations(g: WeightedGraph, sp: ScatteringPartition) -> List[Dict[str, Any]]:
    found = []
    for cluster in sp.clustering.members:
        if len(cluster) == 1:
            continue
        for s in cluster:
            reach = sssp(g, s, cutoff=sp.delta)
            far = [t for t in cluster if not reach.is_reachable(t)]
            if far:
                found.append(
                    {"u": s, "v": far[0], "reason": f"weak diameter of cluster exceeds {sp.delta}"}
                )
                break
    return found


def verify_scattering(
    g: WeightedGraph,
    sp: ScatteringPartition,
    pairs: PairMode = AUTO_PAIRS,
    seed: int = 0,
    jobs: int = 1,
) -> ScatteringReport:
    """
    Check the scattering property over pairs at distance at most delta.

    For every such pair the scattered path is built and its length (as a
    multiple of delta) and cluster count are recorded; beta_emp and tau_emp
    are the maxima. The weak diameter of every cluster is re-checked in ``g``.
    Nothing is raised; failures become violations.

    Args:
        g (WeightedGraph): The graph G the partition was built for.
        sp (ScatteringPartition): The partition to verify.
        pairs (PairMode): ``"all"`` for every qualifying pair, an int for a
            seeded sample of that many pairs, ``"auto"`` to sample only when
            the graph exceeds DEFAULT_SAMPLE_THRESHOLD vertices.
        seed (int): Seed of the pair sample.
        jobs (int): Worker threads for the exhaustive scan.

    Returns:
        ScatteringReport: Measured beta, tau, and violations.
    """
    delta = sp.delta
    if pairs == AUTO_PAIRS:
        pairs = DEFAULT_PAIR_SAMPLE if g.n > DEFAULT_SAMPLE_THRESHOLD else ALL_PAIRS
    sampled = pairs != ALL_PAIRS

    def check(u: int, v: int, out: Dict[str, Any]) -> None:
        out["count"] += 1
        try:
            path = scattered_path(sp, u, v)
        except ScatterInfeasibleError as e:
            out["violations"].append({"u": u, "v": v, "reason": str(e)})
            return
        for reason in path.violations(sp):
            out["violations"].append({"u": u, "v": v, "reason": reason})
        out["beta"] = max(out["beta"], path.length / delta)
        out["tau"] = max(out["tau"], len(path.clusters))
        out["hops"] = max(out["hops"], len(path.clusters) - 1)

    def fresh() -> Dict[str, Any]:
        return {"count": 0, "beta": 0.0, "tau": 1 if g.n else 0, "hops": 0, "violations": []}

    def scan(u: int) -> Dict[str, Any]:
        out = fresh()
        for v, _ in sssp(g, u, cutoff=delta).reachable():
            if v > u:
                check(u, v, out)
        return out

    if not sampled:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(scan, g.vertices()))
        else:
            results = [scan(u) for u in g.vertices()]
    else:
        rng = substream(seed, "scattering-sample")
        out = fresh()
        for _ in range(int(pairs)):
            if g.n == 0:
                break
            u = int(rng.integers(g.n))
            candidates = [v for v, _ in sssp(g, u, cutoff=delta).reachable() if v != u]
            if not candidates:
                continue
            check(u, candidates[int(rng.integers(len(candidates)))], out)
        results = [out]

    violations = _diameter_violations(g, sp)
    total = fresh()
    for out in results:
        total["count"] += out["count"]
        total["beta"] = max(total["beta"], out["beta"])
        total["tau"] = max(total["tau"], out["tau"])
        total["hops"] = max(total["hops"], out["hops"])
        violations.extend(out["violations"])

    report = ScatteringReport(
        delta=delta,
        beta_emp=total["beta"],
        tau_emp=total["tau"],
        max_hops=total["hops"],
        pairs_checked=total["count"],
        sampled=sampled,
        violations=violations,
    )
    if violations:
        logger.warning(f"Scattering check at delta={delta} found {len(violations)} violations.")
    return report
