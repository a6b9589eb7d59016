# src/steinerminor/cli.py

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence

from steinerminor.config.settings import (
    DEFAULT_BETA,
    DEFAULT_LOG_LEVEL,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_PROVIDER,
    DEFAULT_SEED,
    DEFAULT_TAU,
)
from steinerminor.core.exceptions import (
    ConfigError,
    InputError,
    InvariantError,
    MinorValidityError,
    SteinerMinorError,
    StructuralError,
)
from steinerminor.core.harness import InstanceSpec, run_instance, validate_minor
from steinerminor.core.scattering import parse_pair_mode
from steinerminor.core.spr import SprConfig
from steinerminor.steinerminor import SteinerMinor
from steinerminor.utils.file_operations import write_csv, write_json
from steinerminor.utils.logging_config import get_logger, set_log_level

logger = get_logger("steinerminor.cli")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2

BENCH_FIELDS = [
    "instance", "n", "m", "k", "planar", "iterations", "alpha",
    "tau_emp", "beta_emp", "valid", "wall_time",
]


class _Parser(argparse.ArgumentParser):
    # Usage errors are input errors (exit 1); argparse would exit 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


@dataclass
class RunManifest:
    subcommand: str
    input: Optional[str]
    gen: Optional[str]
    terminals: Optional[str]
    weights: Optional[str]
    config: Dict[str, Any]
    out: Optional[str]
    timestamp: str = field(default="", compare=False)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunManifest":
        return cls(
            subcommand=args.command,
            input=getattr(args, "input", None),
            gen=getattr(args, "gen", None),
            terminals=getattr(args, "terminals", None),
            weights=getattr(args, "weights", None),
            config={
                "beta": args.beta,
                "tau": args.tau,
                "c_override": args.c,
                "seed": args.seed,
                "strict": args.strict,
                "provider": args.provider,
                "pairs": args.pairs,
            },
            out=getattr(args, "out", None),
            timestamp=datetime.now(timezone.utc).isoformat(),
        )

    @property
    def spec(self) -> Optional[InstanceSpec]:
        if self.gen is None:
            return None
        return InstanceSpec.parse(self.gen, self.terminals, self.weights, self.config["seed"])

    def instance(self) -> Dict[str, Any]:
        spec = self.spec
        return {"input": self.input} if spec is None else spec.to_dict()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", type=float, default=DEFAULT_BETA, help="target beta for zeta")
    parser.add_argument("--tau", type=float, default=DEFAULT_TAU, help="target tau for zeta")
    parser.add_argument("--c", type=float, default=None, help="fix zeta = c * beta * tau")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--strict", action="store_true", help="raise on any invariant violation")
    parser.add_argument("--provider", default=DEFAULT_PROVIDER, help="shortcut provider name")
    parser.add_argument("--pairs", default="auto", help="all | auto | sample:N")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads or processes")
    parser.add_argument("--log-level", default=DEFAULT_LOG_LEVEL)


def _add_instance_args(parser: argparse.ArgumentParser, sources: argparse._MutuallyExclusiveGroup) -> None:
    sources.add_argument("--input", help="graph file")
    sources.add_argument("--gen", help="generator spec, e.g. grid:10x10 or tree:500")
    parser.add_argument("--terminals", default=None, help="corners | ends | leaves | all | random:K|sqrt|quarter")
    parser.add_argument("--weights", default=None, help="unit | uniform:LO:HI | exponential | euclidean")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="steinerminor", description="Steiner point removal on weighted planar graphs")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="compute a terminal minor and its distortion")
    _add_instance_args(solve, solve.add_mutually_exclusive_group(required=True))
    solve.add_argument("--out", default=DEFAULT_OUTPUT_DIR, help="artifact directory")
    _add_config_args(solve)

    verify = commands.add_parser("verify", help="re-check a run or saved artifacts")
    sources = verify.add_mutually_exclusive_group(required=True)
    _add_instance_args(verify, sources)
    sources.add_argument("--artifacts", help="directory written by solve")
    verify.add_argument("--out", default=None, help="write the verification report here")
    _add_config_args(verify)

    bench = commands.add_parser("bench", help="sweep a generator family and emit CSV")
    bench.add_argument("--family", required=True)
    bench.add_argument("--sizes", required=True, help="comma-separated sizes; N means NxN for grids")
    bench.add_argument("--terminals", default=None)
    bench.add_argument("--weights", default=None)
    bench.add_argument("--out", default=None, help="CSV path; stdout when omitted")
    _add_config_args(bench)
    bench.set_defaults(jobs=os.cpu_count() or 1)
    return parser


def _steiner_minor(args: argparse.Namespace) -> SteinerMinor:
    return SteinerMinor(
        beta=args.beta,
        tau=args.tau,
        c_override=args.c,
        seed=args.seed,
        provider=args.provider,
        strict=args.strict,
        pairs=parse_pair_mode(args.pairs),
        jobs=args.jobs,
    )


def cmd_solve(args: argparse.Namespace) -> int:
    manifest = RunManifest.from_args(args)
    sm = _steiner_minor(args)
    g, terminals = sm.load_instance(manifest.input, manifest.spec)
    minor = sm.solve(g, terminals)
    report = sm.distortion(g, terminals, minor, instance=manifest.instance())
    validity = validate_minor(g, terminals, minor)
    sm.save_artifacts(args.out, g, terminals, minor, report, manifest.to_dict())
    print(json.dumps(
        {
            "alpha": report.alpha,
            "iterations": minor.provenance.iteration_count,
            "edges": minor.graph.m,
            "valid": validity.passed,
            "out": args.out,
        },
        sort_keys=True,
    ))
    return EXIT_OK if validity.passed else EXIT_VIOLATION


def cmd_verify(args: argparse.Namespace) -> int:
    sm = _steiner_minor(args)
    if args.artifacts:
        report = sm.verify_artifacts(args.artifacts)
    else:
        manifest = RunManifest.from_args(args)
        g, terminals = sm.load_instance(manifest.input, manifest.spec)
        minor = sm.solve(g, terminals, measure=True)
        report = sm.verify(g, terminals, minor)
    if args.out:
        write_json(args.out, report)
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if report["passed"] else EXIT_VIOLATION


def _bench_spec(args: argparse.Namespace, size: str) -> InstanceSpec:
    if args.family == "grid" and "x" not in size:
        size = f"{size}x{size}"
    return InstanceSpec.parse(f"{args.family}:{size}", args.terminals, args.weights, args.seed)


def cmd_bench(args: argparse.Namespace) -> int:
    specs = [_bench_spec(args, size.strip()) for size in args.sizes.split(",") if size.strip()]
    config = SprConfig(
        beta=args.beta,
        tau=args.tau,
        c_override=args.c,
        seed=args.seed,
        provider=args.provider,
        strict=args.strict,
        measure=True,
        pairs=parse_pair_mode(args.pairs),
    )
    configs = [config] * len(specs)
    if args.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows: List[Dict[str, Any]] = list(pool.map(run_instance, specs, configs))
    else:
        rows = [run_instance(spec, config) for spec in specs]

    if args.out:
        write_csv(args.out, rows, BENCH_FIELDS)
        logger.info(f"Benchmark of {len(rows)} instances written to {args.out}.")
    else:
        print(",".join(BENCH_FIELDS))
        for row in rows:
            print(",".join(str(row[name]) for name in BENCH_FIELDS))
    return EXIT_OK if all(row["valid"] for row in rows) else EXIT_VIOLATION


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "bench": cmd_bench}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        set_log_level(args.log_level)
        return COMMANDS[args.command](args)
    except (InputError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, MinorValidityError, StructuralError) as e:
        print(f"violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except SteinerMinorError as e:
        logger.error(f"Run failed: {e}", exc_info=True)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
