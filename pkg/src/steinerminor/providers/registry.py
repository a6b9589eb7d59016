# src/steinerminor/providers/registry.py

from typing import Callable, Dict, List

from steinerminor.core.exceptions import ConfigError
from steinerminor.providers.ball_carving import BallCarvingProvider
from steinerminor.providers.base import ShortcutProvider
from steinerminor.providers.trivial import ComponentProvider, SingletonProvider
from steinerminor.utils.logging_config import get_logger

logger = get_logger("steinerminor.providers.registry")

_REGISTRY: Dict[str, Callable[[], ShortcutProvider]] = {
    BallCarvingProvider.name: BallCarvingProvider,
    SingletonProvider.name: SingletonProvider,
    ComponentProvider.name: ComponentProvider,
}


def register_provider(name: str, factory: Callable[[], ShortcutProvider]) -> None:
    """
    Register a shortcut provider under ``name``.

    Args:
        name (str): Lookup name used by SprConfig and the CLI.
        factory (Callable[[], ShortcutProvider]): Zero-argument constructor.

    Raises:
        ConfigError: If the name is already taken.
    """
    if name in _REGISTRY:
        raise ConfigError(f"A shortcut provider named {name!r} is already registered.")
    _REGISTRY[name] = factory
    logger.info(f"Registered shortcut provider: {name}")


def get_provider(name: str) -> ShortcutProvider:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise ConfigError(
            f"Unknown shortcut provider {name!r}; available: {', '.join(available_providers())}."
        ) from None
    return factory()


def available_providers() -> List[str]:
    return sorted(_REGISTRY)
