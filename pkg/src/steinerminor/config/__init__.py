# src/steinerminor/config/__init__.py
from .settings import *

__all__ = [
    "DEFAULT_BETA",
    "DEFAULT_TAU",
    "DEFAULT_SEED",
    "DEFAULT_PROVIDER",
    "DEFAULT_MAX_ITERATIONS",
    "DEFAULT_MAX_ESCALATIONS",
    "DEFAULT_STRICT_INVARIANTS",
    "DEFAULT_SAMPLE_THRESHOLD",
    "DEFAULT_PAIR_SAMPLE",
    "DEFAULT_OUTPUT_DIR",
    "DEFAULT_LOG_LEVEL",
    "DEFAULT_LOG_FILE",
]
