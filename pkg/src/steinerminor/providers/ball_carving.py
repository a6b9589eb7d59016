# src/steinerminor/providers/ball_carving.py

from typing import Optional

from steinerminor.core.graph import WeightedGraph
from steinerminor.core.shortcut import Clustering, ball_carving
from steinerminor.providers.base import ShortcutProvider


class BallCarvingProvider(ShortcutProvider):
    name = "ball-carving"

    def __init__(self, radius_fraction: float = 0.5):
        self.radius_fraction = radius_fraction

    def cluster(self, g: WeightedGraph, delta: float, seed: Optional[int] = None) -> Clustering:
        return ball_carving(g, delta, seed=seed, radius_fraction=self.radius_fraction)
