# src/steinerminor/providers/trivial.py

from typing import Optional

import networkx as nx

from steinerminor.core.graph import WeightedGraph
from steinerminor.core.shortcut import Clustering
from steinerminor.providers.base import ShortcutProvider


class SingletonProvider(ShortcutProvider):
    """Every vertex is its own cluster; valid for any budget."""

    name = "singletons"

    def cluster(self, g: WeightedGraph, delta: float, seed: Optional[int] = None) -> Clustering:
        return Clustering.singletons(g)


class ComponentProvider(ShortcutProvider):
    """One cluster per connected component; valid only when every component fits the budget."""

    name = "components"

    def cluster(self, g: WeightedGraph, delta: float, seed: Optional[int] = None) -> Clustering:
        return Clustering.from_clusters(g, nx.connected_components(g.nx_graph))
