# src/steinerminor/steinerminor.py

import os
from dataclasses import replace
from typing import Any, Dict, List, Optional, Tuple

from steinerminor.config.settings import (
    DEFAULT_BETA,
    DEFAULT_MAX_ESCALATIONS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_PROVIDER,
    DEFAULT_SAMPLE_THRESHOLD,
    DEFAULT_SEED,
    DEFAULT_STRICT_INVARIANTS,
    DEFAULT_TAU,
)
from steinerminor.core.exceptions import InputError
from steinerminor.core.graph import (
    SprMinor,
    TerminalSet,
    WeightedGraph,
    dist_to_set,
    normalize_scale,
)
from steinerminor.core.harness import (
    DistortionReport,
    InstanceSpec,
    generate,
    measure_distortion,
    validate_minor,
)
from steinerminor.core.scattering import AUTO_PAIRS, PairMode, verify_scattering
from steinerminor.core.shortcut import verify_shortcut
from steinerminor.core.spr import (
    SprConfig,
    TraceRecord,
    check_assignment_radius,
    check_assignment_window,
    run_spr,
    termination_bound,
)
from steinerminor.utils.file_operations import (
    get_file_hash,
    parse_graph,
    read_graph_file,
    read_json,
    write_graph_file,
    write_json,
)
from steinerminor.utils.logging_config import get_logger
from steinerminor.utils.randomness import substream

INPUT_FILE = "input.graph"
MINOR_FILE = "minor.edges"
BRANCH_SETS_FILE = "branch_sets.json"
TRACE_FILE = "trace.json"
REPORT_FILE = "report.json"
MANIFEST_FILE = "manifest.json"
SHORTCUT_SOURCES = 32


class SteinerMinor:
    """Entry point bundling a run configuration with solving, verification and artifact I/O."""

    def __init__(
        self,
        beta: float = DEFAULT_BETA,
        tau: float = DEFAULT_TAU,
        c_override: Optional[float] = None,
        seed: int = DEFAULT_SEED,
        provider: str = DEFAULT_PROVIDER,
        strict: bool = DEFAULT_STRICT_INVARIANTS,
        pairs: PairMode = AUTO_PAIRS,
        max_iterations: int = DEFAULT_MAX_ITERATIONS,
        max_escalations: int = DEFAULT_MAX_ESCALATIONS,
        jobs: int = 1,
    ):
        self.logger = get_logger("steinerminor.SteinerMinor")
        self.config = SprConfig(
            beta=beta,
            tau=tau,
            c_override=c_override,
            max_iterations=max_iterations,
            provider=provider,
            seed=seed,
            strict=strict,
            pairs=pairs,
            max_escalations=max_escalations,
        )
        self.jobs = jobs
        self.logger.info(f"SteinerMinor initialized with zeta={self.config.zeta}.")

    def load_instance(
        self, input_path: Optional[str] = None, spec: Optional[InstanceSpec] = None
    ) -> Tuple[WeightedGraph, TerminalSet]:
        """Read a graph file or generate an instance; exactly one source must be given."""
        if (input_path is None) == (spec is None):
            raise InputError("Give exactly one of an input file and a generator spec.")
        if input_path is not None:
            g, terminals = read_graph_file(input_path)
            self.logger.info(f"Loaded {input_path}: n={g.n}, m={g.m}, k={len(terminals)}.")
        else:
            g, terminals = generate(spec)
            self.logger.info(f"Generated {spec.label}: n={g.n}, m={g.m}, k={len(terminals)}.")
        return g, terminals

    def solve(self, g: WeightedGraph, terminals: TerminalSet, measure: Optional[bool] = None) -> SprMinor:
        config = self.config
        if measure is not None:
            config = replace(config, measure=measure)
        return run_spr(g, terminals, config)

    def distortion(
        self,
        g: WeightedGraph,
        terminals: TerminalSet,
        minor: SprMinor,
        instance: Optional[Dict[str, Any]] = None,
    ) -> DistortionReport:
        return measure_distortion(g, terminals, minor, instance)

    def verify(self, g: WeightedGraph, terminals: TerminalSet, minor: SprMinor) -> Dict[str, Any]:
        """
        Re-check a fresh run end to end.

        Validates the minor, then every iteration's partition against both the
        scattering and the shortcut properties, and collects the run's window,
        radius and termination checks.

        Returns:
            Dict[str, Any]: The verification report; ``passed`` summarizes it.
        """
        report: Dict[str, Any] = {"schema": 1}
        validity = validate_minor(g, terminals, minor)
        report["minor"] = validity.to_dict()
        passed = validity.passed

        provenance = minor.provenance
        if provenance is not None:
            iterations = []
            for stats in provenance.iterations:
                partition = stats.partition
                if partition is None:
                    continue
                scattering = stats.scattering or verify_scattering(
                    partition.graph, partition, self.config.pairs, self.config.seed, self.jobs
                )
                sources = None
                if partition.pruned.n > DEFAULT_SAMPLE_THRESHOLD:
                    rng = substream(self.config.seed, "shortcut-sources", stats.iteration)
                    sources = [int(v) for v in rng.choice(partition.pruned.n, SHORTCUT_SOURCES, replace=False)]
                shortcut = verify_shortcut(
                    partition.pruned, partition.clustering, partition.delta, sources, self.jobs
                )
                passed = passed and scattering.passed and shortcut.passed
                iterations.append(
                    {"i": stats.iteration, "scattering": scattering.to_dict(), "shortcut": shortcut.to_dict()}
                )
            report["iterations"] = iterations
            report["window_violations"] = provenance.window_violations
            report["radius_violations"] = provenance.radius_violations
            report["termination"] = {
                "iterations": provenance.iteration_count,
                "bound": provenance.termination_bound,
            }
            passed = passed and provenance.passed

        report["passed"] = passed
        if not passed:
            self.logger.warning("Verification failed.")
        return report

    def save_artifacts(
        self,
        out_dir: str,
        g: WeightedGraph,
        terminals: TerminalSet,
        minor: SprMinor,
        report: DistortionReport,
        manifest: Optional[Dict[str, Any]] = None,
    ) -> List[str]:
        """Write the instance, minor, branch sets, trace, report and manifest into ``out_dir``."""
        os.makedirs(out_dir, exist_ok=True)
        paths = {name: os.path.join(out_dir, name) for name in (
            INPUT_FILE, MINOR_FILE, BRANCH_SETS_FILE, TRACE_FILE, REPORT_FILE, MANIFEST_FILE
        )}
        write_graph_file(paths[INPUT_FILE], g, terminals)
        write_graph_file(paths[MINOR_FILE], minor.graph, range(len(minor.terminals)))
        write_json(
            paths[BRANCH_SETS_FILE],
            {g.label_of(t): [g.label_of(v) for v in members] for t, members in minor.branch_sets.items()},
        )
        provenance = minor.provenance
        trace = []
        run: Dict[str, Any] = {}
        if provenance is not None:
            trace = [
                {**record, "vertex": g.label_of(record["vertex"]), "terminal": g.label_of(record["terminal"])}
                for record in provenance.trace_payload()
            ]
            run = provenance.to_dict()
        write_json(paths[TRACE_FILE], trace)
        write_json(paths[REPORT_FILE], {**report.to_dict(), "run": run})
        write_json(paths[MANIFEST_FILE], {**(manifest or {}), "input_md5": get_file_hash(paths[INPUT_FILE])})
        self.logger.info(f"Artifacts written to {out_dir}.")
        return list(paths.values())

    def verify_artifacts(self, out_dir: str) -> Dict[str, Any]:
        """
        Reload a solve's artifacts and re-validate them.

        The minor is rebuilt from the branch-set and edge files as written, so
        any edit that breaks minor validity, the assignment window or radius,
        or agreement with the recorded trace shows up as a violation.

        Raises:
            InputError: If an artifact is missing or unreadable.
        """
        try:
            g, terminals = read_graph_file(os.path.join(out_dir, INPUT_FILE))
            with open(os.path.join(out_dir, MINOR_FILE), "r", encoding="utf-8") as file:
                minor_graph, _ = parse_graph(file.read())
            branch_payload = read_json(os.path.join(out_dir, BRANCH_SETS_FILE))
            trace_payload = read_json(os.path.join(out_dir, TRACE_FILE))
            run = read_json(os.path.join(out_dir, REPORT_FILE)).get("run", {})
            recorded_md5 = read_json(os.path.join(out_dir, MANIFEST_FILE)).get("input_md5")
        except (OSError, ValueError) as e:
            self.logger.error(f"Cannot load artifacts from {out_dir}: {e}")
            raise InputError(f"Cannot load artifacts from {out_dir}: {e}") from e

        ids = {label: v for v, label in enumerate(g.labels)}
        try:
            branch_sets = {
                ids[t]: tuple(sorted(ids[v] for v in members)) for t, members in branch_payload.items()
            }
            trace = [
                TraceRecord(ids[r["vertex"]], r["iteration"], ids[r["terminal"]], r["level"])
                for r in trace_payload
            ]
            minor_ids = {t: i for i, t in enumerate(terminals)}
            minor_edges = [
                (minor_ids[ids[minor_graph.label_of(a)]], minor_ids[ids[minor_graph.label_of(b)]], w)
                for a, b, w in minor_graph.edges()
            ]
        except KeyError as e:
            raise InputError(f"Artifacts reference unknown vertex label {e}.") from None

        assignment: List[Optional[int]] = [None] * g.n
        for t, members in sorted(branch_sets.items()):
            for v in members:
                if assignment[v] is None:
                    assignment[v] = t
        minor = SprMinor(
            graph=WeightedGraph(len(terminals), minor_edges, [g.label_of(t) for t in terminals]),
            terminals=terminals.terminals,
            assignment=tuple(assignment),
            branch_sets=branch_sets,
        )

        report: Dict[str, Any] = {"schema": 1}
        validity = validate_minor(g, terminals, minor)
        report["minor"] = validity.to_dict()
        passed = validity.passed
        if recorded_md5 is not None and recorded_md5 != get_file_hash(os.path.join(out_dir, INPUT_FILE)):
            report["input_modified"] = True
            passed = False

        final = {record.vertex: record.terminal for record in trace}
        mismatched = [v for v in g.vertices() if final.get(v) != assignment[v]]
        report["trace_mismatches"] = mismatched
        passed = passed and not mismatched

        if run and not mismatched:
            scaled, _ = normalize_scale(g, terminals)
            dist_k = dist_to_set(scaled, terminals)
            zeta = run["zeta"]
            report["window_violations"] = check_assignment_window(trace, scaled, terminals, zeta, dist_k)
            report["radius_violations"] = check_assignment_radius(
                assignment, scaled, terminals, zeta, run["tau_checked"], dist_k
            )
            iterations = max((record.iteration for record in trace), default=0)
            bound = termination_bound(dist_k.max_distance(), zeta)
            report["termination"] = {"iterations": iterations, "bound": bound}
            passed = (
                passed
                and not report["window_violations"]
                and not report["radius_violations"]
                and iterations <= bound
            )

        report["passed"] = passed
        if not passed:
            self.logger.warning(f"Artifacts in {out_dir} failed verification.")
        return report
