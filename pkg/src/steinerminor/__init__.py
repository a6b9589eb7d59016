# src/steinerminor/__init__.py

from .core.graph import SprMinor, TerminalSet, WeightedGraph, contract_assignment
from .core.shortcut import Clustering, ball_carving, verify_shortcut
from .core.scattering import build_scattering_partition, verify_scattering
from .core.spr import SprConfig, derive_zeta, run_spr
from .core.harness import InstanceSpec, generate, measure_distortion, validate_minor
from .steinerminor import SteinerMinor

__all__ = [
    "SteinerMinor",
    "WeightedGraph",
    "TerminalSet",
    "SprMinor",
    "contract_assignment",
    "Clustering",
    "ball_carving",
    "verify_shortcut",
    "build_scattering_partition",
    "verify_scattering",
    "SprConfig",
    "derive_zeta",
    "run_spr",
    "InstanceSpec",
    "generate",
    "measure_distortion",
    "validate_minor",
]
