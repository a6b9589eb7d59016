# src/steinerminor/providers/__init__.py

from .base import ShortcutProvider, provide_clustering
from .ball_carving import BallCarvingProvider
from .trivial import ComponentProvider, SingletonProvider
from .registry import available_providers, get_provider, register_provider

__all__ = [
    "ShortcutProvider",
    "provide_clustering",
    "BallCarvingProvider",
    "ComponentProvider",
    "SingletonProvider",
    "available_providers",
    "get_provider",
    "register_provider",
]
