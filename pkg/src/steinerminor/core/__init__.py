# src/steinerminor/core/__init__.py

from .exceptions import SteinerMinorError
from .graph import SprMinor, TerminalSet, WeightedGraph
from .shortcut import ClusterGraph, Clustering

__all__ = [
    "SteinerMinorError",
    "SprMinor",
    "TerminalSet",
    "WeightedGraph",
    "ClusterGraph",
    "Clustering",
]
