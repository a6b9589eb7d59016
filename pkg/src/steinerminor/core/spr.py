# src/steinerminor/core/spr.py

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from steinerminor.config.settings import (
    DEFAULT_BETA,
    DEFAULT_MAX_ESCALATIONS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_PROVIDER,
    DEFAULT_SEED,
    DEFAULT_STRICT_INVARIANTS,
    DEFAULT_TAU,
)
from steinerminor.core.exceptions import (
    ConfigError,
    InputError,
    InvariantError,
    LevelAssignmentError,
    NonTerminationError,
)
from steinerminor.core.graph import (
    DistanceMap,
    SprMinor,
    TerminalSet,
    WeightedGraph,
    check_planarity,
    contract_assignment,
    dist_to_set,
    induced_subgraph,
    normalize_scale,
    sssp,
)
from steinerminor.core.scattering import (
    AUTO_PAIRS,
    PairMode,
    ScatteringPartition,
    ScatteringReport,
    build_scattering_partition,
    verify_scattering,
)
from steinerminor.providers import ShortcutProvider, get_provider
from steinerminor.utils.logging_config import get_logger
from steinerminor.utils.randomness import derive_seed

logger = get_logger("steinerminor.core.spr")


def derive_zeta(beta: float, tau: float, c_override: Optional[float] = None) -> float:
    """
    Scale base of the iterative assignment.

    Without an override this is the smallest value meeting every condition the
    distortion argument relies on: zeta >= 4 and zeta >= (tau + 2) * beta + 4.
    With an override, zeta = c * beta * tau, validated against the same
    conditions.

    Raises:
        ConfigError: If beta or tau is below 1, or the override is too small.
    """
    if beta < 1 or tau < 1:
        raise ConfigError(f"beta and tau must be at least 1, got beta={beta}, tau={tau}.")
    floor = max(4.0, (tau + 2) * beta + 4)
    if c_override is None:
        return floor
    zeta = c_override * beta * tau
    if zeta < floor:
        raise ConfigError(
            f"c={c_override} gives zeta={zeta}, below the required minimum {floor} "
            f"for beta={beta}, tau={tau}."
        )
    return zeta


@dataclass(frozen=True)
class SprConfig:
    """
    Parameters of a run.

    Attributes:
        beta (float): Target beta used to derive zeta.
        tau (float): Target tau used to derive zeta.
        c_override (Optional[float]): Fix zeta = c * beta * tau instead.
        max_iterations (int): Non-termination guard.
        provider (str): Registered shortcut provider name.
        seed (int): Root seed; every random choice derives from it.
        strict (bool): Raise InvariantError on any violated runtime check.
        measure (Optional[bool]): Verify every iteration's partition to obtain
            tau_emp and beta_emp. Defaults to ``strict``.
        pairs (PairMode): Pair mode for those verifications.
        max_escalations (int): Restarts allowed when tau_emp exceeds tau.
    """

    beta: float = DEFAULT_BETA
    tau: float = DEFAULT_TAU
    c_override: Optional[float] = None
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    provider: str = DEFAULT_PROVIDER
    seed: int = DEFAULT_SEED
    strict: bool = DEFAULT_STRICT_INVARIANTS
    measure: Optional[bool] = None
    pairs: PairMode = AUTO_PAIRS
    max_escalations: int = DEFAULT_MAX_ESCALATIONS

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be positive, got {self.max_iterations}.")
        if self.max_escalations < 0:
            raise ConfigError(f"max_escalations must be nonnegative, got {self.max_escalations}.")
        derive_zeta(self.beta, self.tau, self.c_override)

    @property
    def zeta(self) -> float:
        return derive_zeta(self.beta, self.tau, self.c_override)

    @property
    def measures(self) -> bool:
        return self.strict if self.measure is None else self.measure

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["zeta"] = self.zeta
        return payload


def relevant_vertices(
    g: WeightedGraph,
    terminals: TerminalSet,
    zeta: float,
    i: int,
    dist_k: Optional[DistanceMap] = None,
) -> FrozenSet[int]:
    """R_i: vertices with zeta^(i-1) <= dist(v, K) < zeta^i; R_0 is K itself."""
    if i < 0:
        raise InputError(f"Iteration index must be nonnegative, got {i}.")
    if i == 0:
        return terminals.as_set
    if dist_k is None:
        dist_k = dist_to_set(g, terminals)
    low, high = zeta ** (i - 1), zeta ** i
    return frozenset(v for v, d in dist_k.reachable() if low <= d < high)


@dataclass(frozen=True)
class LevelLink:
    level: int
    linking_vertex: int
    attach_vertex: int


def level_and_link(
    g: WeightedGraph,
    clusters: Sequence[Sequence[int]],
    assigned: Iterable[int],
    threshold: float,
) -> List[LevelLink]:
    """
    Assign every cluster a level and a linking vertex.

    The already-assigned vertices form level 0. A cluster is at level j when j
    is the smallest index such that an edge of weight at most ``threshold``
    joins it to a level-(j-1) vertex; among all such edges (v, x) with v
    outside and x inside the cluster, the lexicographically smallest is
    kept and v becomes the linking vertex.

    Args:
        g (WeightedGraph): The full host graph.
        clusters (Sequence[Sequence[int]]): Clusters in host ids.
        assigned (Iterable[int]): V_(i-1), the level-0 vertices.
        threshold (float): Maximum linking-edge weight.

    Returns:
        List[LevelLink]: One entry per cluster, in input order.

    Raises:
        LevelAssignmentError: If some cluster cannot be reached; the witness
            is the index of the first such cluster.
    """
    owner = {v: index for index, cluster in enumerate(clusters) for v in cluster}
    links: Dict[int, LevelLink] = {}
    frontier = sorted(set(assigned))
    level = 1
    while frontier and len(links) < len(clusters):
        candidates: Dict[int, Tuple[int, int]] = {}
        for v in frontier:
            for x, w in g.neighbors(v):
                if w > threshold:
                    continue
                c = owner.get(x)
                if c is None or c in links:
                    continue
                if c not in candidates or (v, x) < candidates[c]:
                    candidates[c] = (v, x)
        for c, (v, x) in candidates.items():
            links[c] = LevelLink(level, v, x)
        frontier = sorted(u for c in candidates for u in clusters[c])
        level += 1

    if len(links) < len(clusters):
        witness = min(c for c in range(len(clusters)) if c not in links)
        logger.error(f"Cluster {witness} has no linking vertex at threshold {threshold}.")
        raise LevelAssignmentError(
            f"Cluster {witness} (min vertex {clusters[witness][0]}) cannot be linked "
            f"through edges of weight at most {threshold}.",
            witness=witness,
        )
    return [links[c] for c in range(len(clusters))]


@dataclass(frozen=True)
class TraceRecord:
    vertex: int
    iteration: int
    terminal: int
    level: int


@dataclass(frozen=True)
class AssignmentState:
    """
    State after an iteration.

    Attributes:
        iteration (int): i.
        assignment (Tuple[Optional[int], ...]): f_i; None marks unassigned.
        assigned (FrozenSet[int]): V_i.
        relevant (FrozenSet[int]): R_i.
        covered (FrozenSet[int]): The union of R_0..R_i.
        clusters (Tuple[Tuple[int, ...], ...]): Clusters selected in iteration i.
        links (Tuple[LevelLink, ...]): Level and linking vertex of each of them.
        trace (Tuple[TraceRecord, ...]): Every assignment made so far.
    """

    iteration: int
    assignment: Tuple[Optional[int], ...]
    assigned: FrozenSet[int]
    relevant: FrozenSet[int]
    covered: FrozenSet[int]
    clusters: Tuple[Tuple[int, ...], ...] = ()
    links: Tuple[LevelLink, ...] = ()
    trace: Tuple[TraceRecord, ...] = ()

    @classmethod
    def initial(cls, g: WeightedGraph, terminals: TerminalSet) -> "AssignmentState":
        assignment = tuple(v if v in terminals else None for v in g.vertices())
        trace = tuple(TraceRecord(t, 0, t, 0) for t in terminals)
        return cls(0, assignment, terminals.as_set, terminals.as_set, terminals.as_set, trace=trace)

    def unassigned(self) -> List[int]:
        return [v for v, t in enumerate(self.assignment) if t is None]

    @property
    def is_complete(self) -> bool:
        return len(self.assigned) == len(self.assignment)


@dataclass
class IterationStats:
    iteration: int
    delta: float
    threshold: float
    relevant: int
    partition_clusters: int
    selected_clusters: int
    assigned: int
    max_level: int
    scattering: Optional[ScatteringReport] = None
    partition: Optional[ScatteringPartition] = field(default=None, compare=False, repr=False)

    @property
    def tau_emp(self) -> Optional[int]:
        return self.scattering.tau_emp if self.scattering else None

    @property
    def beta_emp(self) -> Optional[float]:
        return self.scattering.beta_emp if self.scattering else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "i": self.iteration,
            "delta": self.delta,
            "threshold": self.threshold,
            "relevant": self.relevant,
            "partition_clusters": self.partition_clusters,
            "clusters": self.selected_clusters,
            "assigned": self.assigned,
            "max_level": self.max_level,
            "tau_emp": self.tau_emp,
            "beta_emp": self.beta_emp,
        }


def _branch_set_witnesses(g: WeightedGraph, assignment: Sequence[Optional[int]]) -> List[Dict[str, Any]]:
    groups: Dict[int, List[int]] = {}
    for v, t in enumerate(assignment):
        if t is not None:
            groups.setdefault(t, []).append(v)
    found = []
    for t in sorted(groups):
        sub = g.nx_graph.subgraph(groups[t])
        if not nx.is_connected(sub):
            components = sorted(nx.connected_components(sub), key=min)
            found.append({"terminal": t, "witness": [min(components[0]), min(components[1])]})
    return found


def _check_iteration(
    g: WeightedGraph, before: AssignmentState, after: AssignmentState, strict: bool
) -> None:
    problems: List[Dict[str, Any]] = []
    if not before.assigned <= after.assigned:
        lost = min(before.assigned - after.assigned)
        problems.append({"check": "monotonicity", "vertex": lost})
    if not after.covered <= after.assigned:
        missed = min(after.covered - after.assigned)
        problems.append({"check": "coverage", "vertex": missed})
    for v, t in enumerate(after.assignment):
        if (t is not None) != (v in after.assigned):
            problems.append({"check": "assigned-iff-defined", "vertex": v})
            break
    if strict:
        for witness in _branch_set_witnesses(g, after.assignment):
            problems.append({"check": "branch-connectivity", **witness})
    if not problems:
        return
    if strict:
        logger.error(f"Iteration {after.iteration} violates {problems[0]['check']}.")
        raise InvariantError(
            f"Iteration {after.iteration} violates {len(problems)} invariant(s); "
            f"first: {problems[0]}",
            witnesses=problems,
        )
    logger.warning(f"Iteration {after.iteration} violates invariants: {problems}")


def spr_iteration(
    g: WeightedGraph,
    terminals: TerminalSet,
    state: AssignmentState,
    config: SprConfig,
    dist_k: Optional[DistanceMap] = None,
    provider: Optional[ShortcutProvider] = None,
) -> Tuple[AssignmentState, IterationStats]:
    """
    Run iteration i = state.iteration + 1.

    Partitions the graph induced on the unassigned vertices at scale
    zeta^(i-1), keeps the clusters meeting R_i, levels them through edges of
    weight at most zeta^i, and hands every vertex of every kept cluster the
    terminal of its cluster's linking vertex, lowest levels first.

    Args:
        g (WeightedGraph): The normalized host graph.
        terminals (TerminalSet): K.
        state (AssignmentState): The state after iteration i - 1.
        config (SprConfig): Run parameters.
        dist_k (Optional[DistanceMap]): Precomputed dist(v, K).
        provider (Optional[ShortcutProvider]): Defaults to ``config.provider``.

    Returns:
        Tuple[AssignmentState, IterationStats]: The new state and its statistics.

    Raises:
        InputError: If every vertex is already assigned.
        LevelAssignmentError: If a kept cluster cannot be linked.
        InvariantError: If a runtime check fails in strict mode.
    """
    unassigned = state.unassigned()
    if not unassigned:
        raise InputError("Every vertex is already assigned; no iteration left to run.")
    if dist_k is None:
        dist_k = dist_to_set(g, terminals)
    if provider is None:
        provider = get_provider(config.provider)

    i = state.iteration + 1
    zeta = config.zeta
    delta, threshold = zeta ** (i - 1), zeta ** i

    g_i, mapping = induced_subgraph(g, unassigned)
    partition = build_scattering_partition(
        g_i, delta, provider, seed=derive_seed(config.seed, "spr", "iteration", i)
    )
    relevant = relevant_vertices(g, terminals, zeta, i, dist_k)
    selected = []
    for cluster in partition.clustering.members:
        host_cluster = tuple(mapping.host(x) for x in cluster)
        if not relevant.isdisjoint(host_cluster):
            selected.append(host_cluster)

    links = level_and_link(g, selected, state.assigned, threshold)
    assignment = list(state.assignment)
    trace = list(state.trace)
    for c in sorted(range(len(selected)), key=lambda c: (links[c].level, selected[c][0])):
        terminal = assignment[links[c].linking_vertex]
        if terminal is None:
            raise InvariantError(
                f"Linking vertex {links[c].linking_vertex} is unassigned when read.",
                witnesses=[{"cluster": selected[c][0]}],
            )
        for u in selected[c]:
            assignment[u] = terminal
            trace.append(TraceRecord(u, i, terminal, links[c].level))

    newly = {u for cluster in selected for u in cluster}
    after = AssignmentState(
        iteration=i,
        assignment=tuple(assignment),
        assigned=state.assigned | newly,
        relevant=relevant,
        covered=state.covered | relevant,
        clusters=tuple(selected),
        links=tuple(links),
        trace=tuple(trace),
    )
    _check_iteration(g, state, after, config.strict)

    report = None
    if config.measures:
        report = verify_scattering(g_i, partition, pairs=config.pairs, seed=config.seed)
        partition = partition.with_measurements(report)
    stats = IterationStats(
        iteration=i,
        delta=delta,
        threshold=threshold,
        relevant=len(relevant),
        partition_clusters=partition.clustering.size,
        selected_clusters=len(selected),
        assigned=len(newly),
        max_level=max((link.level for link in links), default=0),
        scattering=report,
        partition=partition,
    )
    logger.info(
        f"Iteration {i}: delta={delta}, {len(selected)}/{partition.clustering.size} clusters kept, "
        f"{len(newly)} vertices assigned, {len(unassigned) - len(newly)} left."
    )
    return after, stats


def check_assignment_window(
    trace: Iterable[TraceRecord],
    g: WeightedGraph,
    terminals: TerminalSet,
    zeta: float,
    dist_k: Optional[DistanceMap] = None,
) -> List[Dict[str, Any]]:
    """Vertices assigned in iteration i >= 1 whose dist(v, K) is outside [zeta^(i-1), zeta^(i+1))."""
    if dist_k is None:
        dist_k = dist_to_set(g, terminals)
    violations = []
    for record in trace:
        if record.iteration == 0:
            continue
        d = dist_k.distance(record.vertex)
        low, high = zeta ** (record.iteration - 1), zeta ** (record.iteration + 1)
        if d is None or not low <= d < high:
            violations.append(
                {
                    "vertex": record.vertex,
                    "iteration": record.iteration,
                    "distance": d,
                    "window": [low, high],
                }
            )
    return violations


def check_assignment_radius(
    f: Sequence[Optional[int]],
    g: WeightedGraph,
    terminals: TerminalSet,
    zeta: float,
    tau: float,
    dist_k: Optional[DistanceMap] = None,
) -> List[Dict[str, Any]]:
    """Vertices with dist(v, f(v)) > 3 * tau * zeta^2 * dist(v, K)."""
    if dist_k is None:
        dist_k = dist_to_set(g, terminals)
    factor = 3 * tau * zeta ** 2
    violations = []
    for t in terminals:
        from_t = sssp(g, t)
        for v, assigned_to in enumerate(f):
            if assigned_to != t:
                continue
            d_vf = from_t.distance(v)
            bound = factor * dist_k.distance(v)
            if d_vf is None or d_vf > bound:
                violations.append(
                    {"vertex": v, "terminal": t, "distance": d_vf, "bound": bound}
                )
    return violations


def termination_bound(max_distance: float, zeta: float) -> int:
    """ceil(log_zeta(max_v dist(v, K))) + 1, or 0 when every vertex is a terminal."""
    if max_distance <= 0:
        return 0
    return max(0, math.ceil(math.log(max_distance, zeta))) + 1


@dataclass
class SprProvenance:
    config: SprConfig
    zeta: float
    scale_factor: float
    iterations: List[IterationStats]
    trace: Tuple[TraceRecord, ...]
    escalations: int
    tau_checked: float
    termination_bound: int
    window_violations: List[Dict[str, Any]]
    radius_violations: List[Dict[str, Any]]

    @property
    def iteration_count(self) -> int:
        return len(self.iterations)

    @property
    def tau_emp(self) -> Optional[int]:
        measured = [s.tau_emp for s in self.iterations if s.tau_emp is not None]
        return max(measured) if measured else None

    @property
    def beta_emp(self) -> Optional[float]:
        measured = [s.beta_emp for s in self.iterations if s.beta_emp is not None]
        return max(measured) if measured else None

    @property
    def passed(self) -> bool:
        return (
            not self.window_violations
            and not self.radius_violations
            and self.iteration_count <= self.termination_bound
        )

    def trace_payload(self) -> List[Dict[str, Any]]:
        return [asdict(record) for record in self.trace]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "zeta": self.zeta,
            "scale_factor": self.scale_factor,
            "escalations": self.escalations,
            "tau_checked": self.tau_checked,
            "iterations": [s.to_dict() for s in self.iterations],
            "termination_bound": self.termination_bound,
            "window_violations": self.window_violations,
            "radius_violations": self.radius_violations,
        }


def _assign(
    g: WeightedGraph,
    terminals: TerminalSet,
    config: SprConfig,
    dist_k: DistanceMap,
    provider: ShortcutProvider,
) -> Tuple[AssignmentState, List[IterationStats]]:
    state = AssignmentState.initial(g, terminals)
    stats: List[IterationStats] = []
    # Widely spread weights need more iterations than the configured cap.
    limit = max(config.max_iterations, termination_bound(dist_k.max_distance(), config.zeta) + 1)
    while not state.is_complete:
        if state.iteration >= limit:
            logger.error(f"No termination after {limit} iterations.")
            raise NonTerminationError(
                f"{len(state.unassigned())} vertices still unassigned after {limit} iterations."
            )
        state, iteration_stats = spr_iteration(g, terminals, state, config, dist_k, provider)
        stats.append(iteration_stats)
    return state, stats


def run_spr(
    g: WeightedGraph, terminals: TerminalSet, config: Optional[SprConfig] = None
) -> SprMinor:
    """
    Solve Steiner point removal on ``g`` for the terminals ``terminals``.

    Normalizes the scale, runs iterations until every vertex is assigned,
    contracts the branch sets, and checks the assignment window, the
    assignment radius, and the iteration count. When measurement is on and
    the measured tau exceeds the configured one, zeta is re-derived with the
    measured value and the run restarts (at most ``max_escalations`` times).

    Args:
        g (WeightedGraph): The input graph.
        terminals (TerminalSet): K; every component of ``g`` needs one.
        config (Optional[SprConfig]): Run parameters.

    Returns:
        SprMinor: The minor, with weights in the units of ``g`` and full provenance.

    Raises:
        InputError: If the terminals do not cover every component.
        NonTerminationError: If the iteration guard trips.
        InvariantError: On any violated check in strict mode.
    """
    config = config or SprConfig()
    terminals.check_components(g)
    check_planarity(g)
    scaled, scale_factor = normalize_scale(g, terminals)
    dist_k = dist_to_set(scaled, terminals)
    provider = get_provider(config.provider)

    escalations = 0
    while True:
        state, stats = _assign(scaled, terminals, config, dist_k, provider)
        measured = [s.tau_emp for s in stats if s.tau_emp is not None]
        tau_emp = max(measured) if measured else None
        if tau_emp is None or tau_emp <= config.tau:
            break
        if escalations >= config.max_escalations:
            logger.warning(
                f"Measured tau {tau_emp} exceeds configured tau {config.tau}; "
                f"escalation budget exhausted."
            )
            break
        logger.warning(
            f"Measured tau {tau_emp} exceeds configured tau {config.tau}; "
            f"re-deriving zeta and restarting."
        )
        config = replace(config, tau=float(tau_emp), c_override=None)
        escalations += 1

    zeta = config.zeta
    tau_checked = float(tau_emp) if tau_emp is not None else config.tau
    window = check_assignment_window(state.trace, scaled, terminals, zeta, dist_k)
    radius = check_assignment_radius(
        state.assignment, scaled, terminals, zeta, tau_checked, dist_k
    )
    bound = termination_bound(dist_k.max_distance(), zeta)

    problems = []
    if window:
        problems.append(f"{len(window)} assignment-window violations")
    if radius:
        problems.append(f"{len(radius)} assignment-radius violations")
    if state.iteration > bound:
        problems.append(f"{state.iteration} iterations exceed the bound {bound}")
    if problems:
        if config.strict:
            logger.error(f"Run violates invariants: {'; '.join(problems)}")
            raise InvariantError(
                f"Run violates invariants: {'; '.join(problems)}",
                witnesses={"window": window, "radius": radius},
            )
        logger.warning(f"Run violates invariants: {'; '.join(problems)}")

    minor = contract_assignment(g, terminals, state.assignment)
    provenance = SprProvenance(
        config=config,
        zeta=zeta,
        scale_factor=scale_factor,
        iterations=stats,
        trace=state.trace,
        escalations=escalations,
        tau_checked=tau_checked,
        termination_bound=bound,
        window_violations=window,
        radius_violations=radius,
    )
    logger.info(
        f"Minor built: {len(terminals)} terminals, {minor.graph.m} edges, "
        f"{state.iteration} iterations, zeta={zeta}."
    )
    return replace(minor, provenance=provenance)
