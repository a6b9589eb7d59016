# src/steinerminor/core/harness.py

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.spatial import Delaunay

from steinerminor.core.exceptions import InputError, SpecError, StructuralError
from steinerminor.core.graph import (
    SprMinor,
    TerminalSet,
    WeightedGraph,
    check_planarity,
    sssp,
)
from steinerminor.core.spr import SprConfig, run_spr
from steinerminor.utils.logging_config import get_logger
from steinerminor.utils.randomness import substream

logger = get_logger("steinerminor.core.harness")

FAMILIES = ("grid", "tree", "random-planar", "outerplanar", "path", "star")
DEFAULT_TERMINALS = {
    "grid": "corners",
    "tree": "leaves",
    "random-planar": "random:sqrt",
    "outerplanar": "random:sqrt",
    "path": "ends",
    "star": "leaves",
}
RATIO_TOLERANCE = 1e-9
REPORT_SCHEMA = 1


@dataclass(frozen=True)
class InstanceSpec:
    """
    A reproducible instance description.

    Attributes:
        family (str): One of FAMILIES.
        size (Tuple[int, ...]): (w, h) for grids, (n,) otherwise; for stars n
            counts the leaves.
        weights (str): ``unit``, ``uniform:LO:HI``, ``exponential`` or, for
            random-planar only, ``euclidean`` (its default).
        terminals (str): ``corners``, ``ends``, ``leaves``, ``all``,
            ``random:K``, ``random:sqrt`` or ``random:quarter``.
        seed (int): Root seed of every draw.
    """

    family: str
    size: Tuple[int, ...]
    weights: str = "unit"
    terminals: str = "corners"
    seed: int = 0

    @classmethod
    def parse(
        cls,
        generator: str,
        terminals: Optional[str] = None,
        weights: Optional[str] = None,
        seed: int = 0,
    ) -> "InstanceSpec":
        """Parse ``grid:10x10``, ``tree:500``, ``random-planar:1000`` and the like."""
        family, _, args = generator.partition(":")
        if family not in FAMILIES:
            raise SpecError(f"Unknown family {family!r}; choose from {', '.join(FAMILIES)}.")
        try:
            if family == "grid":
                w, h = (int(part) for part in args.lower().split("x"))
                size: Tuple[int, ...] = (w, h)
            else:
                size = (int(args),)
        except ValueError:
            raise SpecError(f"Invalid size {args!r} for family {family}.") from None
        if any(s < 1 for s in size):
            raise SpecError(f"Sizes must be positive, got {size}.")
        if weights is None:
            weights = "euclidean" if family == "random-planar" else "unit"
        return cls(family, size, weights, terminals or DEFAULT_TERMINALS[family], seed)

    @property
    def label(self) -> str:
        dims = "x".join(str(s) for s in self.size)
        return f"{self.family}:{dims}"

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["size"] = list(self.size)
        return payload


def _grid(w: int, h: int) -> List[Tuple[int, int]]:
    edges = []
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x < w - 1:
                edges.append((v, v + 1))
            if y < h - 1:
                edges.append((v, v + w))
    return edges


def _random_tree(n: int, rng: np.random.Generator) -> List[Tuple[int, int]]:
    return [(int(rng.integers(v)), v) for v in range(1, n)]


def _outerplanar(n: int, rng: np.random.Generator) -> List[Tuple[int, int]]:
    if n < 3:
        return [(v, v + 1) for v in range(n - 1)]
    edges = [(v, (v + 1) % n) for v in range(n)]
    polygons = [list(range(n))]
    while polygons:
        polygon = polygons.pop()
        if len(polygon) < 4 or rng.random() < 0.3:
            continue
        k = int(rng.integers(2, len(polygon) - 1))
        edges.append((polygon[0], polygon[k]))
        polygons.append(polygon[: k + 1])
        polygons.append([polygon[0]] + polygon[k:])
    return edges


def _delaunay(n: int, rng: np.random.Generator) -> Tuple[List[Tuple[int, int]], np.ndarray]:
    points = rng.random((n, 2))
    if n < 4:
        return [(u, v) for u in range(n) for v in range(u + 1, n)], points
    triangulation = Delaunay(points)
    edges = set()
    for simplex in triangulation.simplices:
        a, b, c = sorted(int(x) for x in simplex)
        edges.update({(a, b), (a, c), (b, c)})
    return sorted(edges), points


def _draw_weights(
    mode: str,
    edges: List[Tuple[int, int]],
    rng: np.random.Generator,
    points: Optional[np.ndarray] = None,
) -> List[float]:
    if mode == "unit":
        return [1.0] * len(edges)
    if mode == "euclidean":
        if points is None:
            raise SpecError("Euclidean weights need point coordinates (random-planar only).")
        return [float(np.linalg.norm(points[u] - points[v])) for u, v in edges]
    if mode == "exponential":
        return [1.0 + float(x) for x in rng.exponential(4.0, size=len(edges))]
    if mode.startswith("uniform:"):
        try:
            low, high = (float(part) for part in mode.split(":")[1:])
        except ValueError:
            raise SpecError(f"Invalid weight mode {mode!r}; use uniform:LO:HI.") from None
        if not 0 < low <= high:
            raise SpecError(f"Uniform weights need 0 < LO <= HI, got {low}, {high}.")
        return [float(x) for x in rng.uniform(low, high, size=len(edges))]
    raise SpecError(f"Unknown weight mode {mode!r}.")


def _choose_terminals(spec: InstanceSpec, g: WeightedGraph) -> TerminalSet:
    mode = spec.terminals
    n = g.n
    if mode == "all":
        return TerminalSet.of(g.vertices())
    if mode == "ends":
        return TerminalSet.of({0, n - 1})
    if mode == "corners":
        if spec.family != "grid":
            raise SpecError("Corner terminals need a grid.")
        w, h = spec.size
        return TerminalSet.of({0, w - 1, (h - 1) * w, h * w - 1})
    if mode == "leaves":
        leaves = [v for v in g.vertices() if g.degree(v) <= 1]
        if not leaves:
            raise SpecError(f"A {spec.family} instance has no leaves to use as terminals.")
        return TerminalSet.of(leaves)
    if mode.startswith("random:"):
        arg = mode.split(":", 1)[1]
        if arg == "sqrt":
            k = math.ceil(math.sqrt(n))
        elif arg == "quarter":
            k = math.ceil(n / 4)
        else:
            try:
                k = int(arg)
            except ValueError:
                raise SpecError(f"Invalid terminal count in {mode!r}.") from None
        if k < 1:
            raise SpecError(f"At least one terminal is needed, got {k}.")
        if k > n:
            raise SpecError(f"Cannot pick {k} terminals from {n} vertices.")
        rng = substream(spec.seed, "terminals")
        return TerminalSet.of(int(v) for v in rng.permutation(n)[:k])
    raise SpecError(f"Unknown terminal mode {mode!r}.")


def generate(spec: InstanceSpec) -> Tuple[WeightedGraph, TerminalSet]:
    """
    Build the instance described by ``spec``; identical specs give identical instances.

    Grid vertex (x, y) gets id y * w + x. Trees are random recursive trees,
    random-planar instances are Delaunay triangulations of uniform points in
    the unit square, and outerplanar instances are a cycle with random
    non-crossing chords.

    Raises:
        SpecError: On an unknown family, weight mode or terminal mode, or when
            more terminals than vertices are requested.
    """
    rng = substream(spec.seed, "generate", spec.family)
    points = None
    if spec.family == "grid":
        w, h = spec.size
        n, edges = w * h, _grid(w, h)
    elif spec.family == "tree":
        n = spec.size[0]
        edges = _random_tree(n, rng)
    elif spec.family == "random-planar":
        n = spec.size[0]
        edges, points = _delaunay(n, rng)
    elif spec.family == "outerplanar":
        n = spec.size[0]
        edges = _outerplanar(n, rng)
    elif spec.family == "path":
        n = spec.size[0]
        edges = [(v, v + 1) for v in range(n - 1)]
    elif spec.family == "star":
        n = spec.size[0] + 1
        edges = [(0, v) for v in range(1, n)]
    else:
        raise SpecError(f"Unknown family {spec.family!r}.")

    weights = _draw_weights(spec.weights, edges, substream(spec.seed, "weights"), points)
    g = WeightedGraph(n, [(u, v, w) for (u, v), w in zip(edges, weights)])
    terminals = _choose_terminals(spec, g)
    logger.debug(f"Generated {spec.label}: n={g.n}, m={g.m}, k={len(terminals)}.")
    return g, terminals


@dataclass
class MinorReport:
    passed: bool
    violations: List[Dict[str, Any]]

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "violations": self.violations}


def validate_minor(g: WeightedGraph, terminals: TerminalSet, minor: SprMinor) -> MinorReport:
    """
    Check that ``minor`` really is a minor of ``g`` on ``terminals``.

    Checks V(M) = K, that the branch sets partition V and agree with the
    assignment, that each holds its terminal and induces a connected subgraph,
    and that M-edges are exactly the pairs of branch sets joined by a G-edge,
    weighted by dist_G. Never raises; every failure is a violation with a
    witness.
    """
    violations: List[Dict[str, Any]] = []

    def fail(check: str, witness: Any) -> None:
        violations.append({"check": check, "witness": witness})

    if tuple(minor.terminals) != terminals.terminals:
        fail("vertex-set", {"expected": list(terminals), "found": list(minor.terminals)})
    if len(minor.assignment) != g.n:
        fail("assignment-size", {"expected": g.n, "found": len(minor.assignment)})
        return MinorReport(False, violations)

    owner: Dict[int, int] = {}
    for t, members in sorted(minor.branch_sets.items()):
        if t not in terminals:
            fail("branch-set-key", t)
            continue
        if t not in members:
            fail("terminal-membership", t)
        for v in members:
            if v in owner:
                fail("overlap", {"vertex": v, "terminals": [owner[v], t]})
            owner[v] = t
        if members:
            sub = g.nx_graph.subgraph(members)
            if not nx.is_connected(sub):
                components = sorted(nx.connected_components(sub), key=min)
                fail("connectivity", {"terminal": t, "pair": [min(components[0]), min(components[1])]})
    for t in terminals:
        if t not in minor.branch_sets:
            fail("missing-branch-set", t)
    for v in g.vertices():
        if v not in owner:
            fail("coverage", v)
        elif minor.assignment[v] != owner[v]:
            fail("assignment-mismatch", {"vertex": v, "assignment": minor.assignment[v], "branch_set": owner[v]})

    crossing = set()
    for u, v, _ in g.edges():
        a, b = owner.get(u), owner.get(v)
        if a is not None and b is not None and a != b:
            crossing.add((min(a, b), max(a, b)))
    distances: Dict[int, Any] = {}
    found = set()
    for a, b, w in minor.edge_list():
        pair = (min(a, b), max(a, b))
        found.add(pair)
        if pair not in crossing:
            fail("phantom-edge", list(pair))
            continue
        if a not in distances:
            distances[a] = sssp(g, a)
        expected = distances[a].distance(b)
        if expected is None or not math.isclose(w, expected, rel_tol=RATIO_TOLERANCE):
            fail("edge-weight", {"edge": list(pair), "weight": w, "distance": expected})
    for pair in sorted(crossing - found):
        fail("missing-edge", list(pair))

    if violations:
        logger.warning(f"Minor validation found {len(violations)} violations.")
    return MinorReport(not violations, violations)


def audit_bound(zeta: float, tau: float, beta: float) -> float:
    """
    Closed-form distortion ceiling for the given scale base and measured parameters.

    1 + 2 * (24 zeta^4 tau (tau+3) beta g + 4 zeta^2 (tau+2) beta) + 48 zeta^4 tau (tau+3) beta,
    where g = tau (tau+2) counts detours per interval.
    """
    g = tau * (tau + 2)
    core = 24 * zeta ** 4 * tau * (tau + 3) * beta
    return 1 + 2 * (core * g + 4 * zeta ** 2 * (tau + 2) * beta) + 2 * core


@dataclass(frozen=True)
class PairDistortion:
    t1: int
    t2: int
    dg: float
    dm: float
    ratio: float


@dataclass
class DistortionReport:
    alpha: float
    mean: float
    pairs: List[PairDistortion]
    iterations: List[Dict[str, Any]] = field(default_factory=list)
    audit_bound: Optional[float] = None
    flags: List[str] = field(default_factory=list)
    instance: Dict[str, Any] = field(default_factory=dict)
    schema: int = REPORT_SCHEMA

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": self.schema,
            "instance": self.instance,
            "alpha": self.alpha,
            "mean": self.mean,
            "pairs": [asdict(pair) for pair in self.pairs],
            "iterations": self.iterations,
            "audit_bound": self.audit_bound,
            "flags": self.flags,
        }


def measure_distortion(
    g: WeightedGraph,
    terminals: TerminalSet,
    minor: SprMinor,
    instance: Optional[Dict[str, Any]] = None,
) -> DistortionReport:
    """
    Compare dist_M with dist_G over every terminal pair.

    Pairs in different components of ``g`` are skipped. When the minor carries
    provenance, the report also lists the per-iteration measurements and the
    audit bound evaluated with the measured tau and beta.

    Raises:
        StructuralError: If M disconnects a pair that G connects.
    """
    pairs: List[PairDistortion] = []
    flags: List[str] = []
    ids = minor.minor_ids
    for index, t1 in enumerate(terminals.terminals):
        in_g = sssp(g, t1)
        in_m = sssp(minor.graph, ids[t1])
        for t2 in terminals.terminals[index + 1 :]:
            dg = in_g.distance(t2)
            if dg is None:
                continue
            dm = in_m.distance(ids[t2])
            if dm is None:
                logger.error(f"Minor disconnects terminals {t1} and {t2}.")
                raise StructuralError(
                    f"Terminals {t1} and {t2} are connected in G but not in the minor."
                )
            pairs.append(PairDistortion(t1, t2, dg, dm, dm / dg))

    ratios = [pair.ratio for pair in pairs]
    alpha = max(ratios, default=1.0)
    mean = sum(ratios) / len(ratios) if ratios else 1.0
    if any(r < 1 - RATIO_TOLERANCE for r in ratios):
        flags.append("contraction")

    iterations: List[Dict[str, Any]] = []
    bound = None
    provenance = minor.provenance
    if provenance is not None:
        iterations = [
            {
                "i": s.iteration,
                "delta": s.delta,
                "tau_emp": s.tau_emp,
                "beta_emp": s.beta_emp,
                "clusters": s.selected_clusters,
            }
            for s in provenance.iterations
        ]
        tau = provenance.tau_emp if provenance.tau_emp is not None else provenance.config.tau
        beta = provenance.beta_emp if provenance.beta_emp is not None else provenance.config.beta
        bound = audit_bound(provenance.zeta, max(tau, 1.0), max(beta, 1.0))
        if provenance.tau_emp is not None and provenance.tau_emp > provenance.config.tau:
            flags.append("tau-unmet")
        if alpha > bound:
            flags.append("audit-bound-exceeded")
            logger.warning(f"Distortion {alpha} exceeds the audit bound {bound}.")

    logger.info(f"Distortion over {len(pairs)} terminal pairs: alpha={alpha}, mean={mean}.")
    return DistortionReport(
        alpha=alpha,
        mean=mean,
        pairs=pairs,
        iterations=iterations,
        audit_bound=bound,
        flags=flags,
        instance=dict(instance or {}),
    )


def brute_force_distances(g: WeightedGraph, cap: int = 10) -> List[List[Optional[float]]]:
    """All-pairs distances by enumerating every simple path; refuses graphs above ``cap`` vertices."""
    if g.n > cap:
        raise InputError(f"Brute force is limited to {cap} vertices, graph has {g.n}.")
    graph = g.nx_graph
    matrix: List[List[Optional[float]]] = [[None] * g.n for _ in range(g.n)]
    for u in g.vertices():
        matrix[u][u] = 0.0
        for v in range(u + 1, g.n):
            lengths = [
                nx.path_weight(graph, path, weight="weight")
                for path in nx.all_simple_paths(graph, u, v)
            ]
            best = min(lengths, default=None)
            matrix[u][v] = matrix[v][u] = best
    return matrix


def run_instance(spec: InstanceSpec, config: Optional[SprConfig] = None) -> Dict[str, Any]:
    """Generate, solve, validate and measure one instance; returns one benchmark row."""
    config = config or SprConfig(seed=spec.seed)
    g, terminals = generate(spec)
    start = time.perf_counter()
    minor = run_spr(g, terminals, config)
    wall_time = time.perf_counter() - start
    validity = validate_minor(g, terminals, minor)
    report = measure_distortion(g, terminals, minor, instance=spec.to_dict())
    provenance = minor.provenance
    return {
        "instance": spec.label,
        "n": g.n,
        "m": g.m,
        "k": len(terminals),
        "planar": check_planarity(g),
        "iterations": provenance.iteration_count,
        "alpha": report.alpha,
        "tau_emp": provenance.tau_emp,
        "beta_emp": provenance.beta_emp,
        "valid": validity.passed,
        "wall_time": round(wall_time, 6),
    }
