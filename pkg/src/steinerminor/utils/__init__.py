# src/steinerminor/utils/__init__.py

from .logging_config import get_logger, set_log_level
from .randomness import derive_seed, substream

__all__ = [
    "get_logger",
    "set_log_level",
    "derive_seed",
    "substream",
]
