# src/steinerminor/providers/base.py

from abc import ABC, abstractmethod
from typing import Optional

from steinerminor.core.exceptions import InputError, ProviderError
from steinerminor.core.graph import WeightedGraph
from steinerminor.core.shortcut import Clustering
from steinerminor.utils.logging_config import get_logger

logger = get_logger("steinerminor.providers.base")


class ShortcutProvider(ABC):
    """
    Source of strong-diameter clusterings.

    Implementations return a clustering of ``g`` whose clusters have strong
    diameter at most ``delta``. Callers go through ``provide_clustering``,
    which enforces that contract.
    """

    name: str = "abstract"

    @abstractmethod
    def cluster(self, g: WeightedGraph, delta: float, seed: Optional[int] = None) -> Clustering:
        ...


def provide_clustering(
    provider: ShortcutProvider, g: WeightedGraph, delta: float, seed: Optional[int] = None
) -> Clustering:
    """
    Ask ``provider`` for a clustering and validate it.

    Raises:
        ProviderError: If the provider fails, returns clusters that overlap,
            miss vertices, are disconnected, or exceed the diameter budget.
    """
    try:
        clustering = provider.cluster(g, delta, seed)
    except InputError as e:
        logger.error(f"Provider {provider.name!r} returned an invalid clustering: {e}")
        raise ProviderError(f"Provider {provider.name!r}: {e}") from e

    if not isinstance(clustering, Clustering) or clustering.host.n != g.n:
        raise ProviderError(f"Provider {provider.name!r} did not return a clustering of the graph.")
    for index, diameter in enumerate(clustering.diameters):
        if diameter is None or diameter > delta:
            logger.error(
                f"Provider {provider.name!r}: cluster {index} has strong diameter {diameter} > {delta}."
            )
            raise ProviderError(
                f"Provider {provider.name!r} returned cluster {index} with strong diameter "
                f"{diameter}, above the budget {delta}."
            )
    return clustering
