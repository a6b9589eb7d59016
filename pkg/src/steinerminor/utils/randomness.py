# src/steinerminor/utils/randomness.py

import hashlib
from typing import Union

import numpy as np

Key = Union[str, int]


def _key_to_int(key: Key) -> int:
    # Python's hash() is salted per process, so names are digested instead
    digest = hashlib.sha256(str(key).encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "little")


def seed_sequence(seed: int, *names: Key) -> np.random.SeedSequence:
    """
    Derive the seed sequence of a named substream.

    Every component draws from its own substream keyed by a path of names
    (for example ``("spr", "iteration", 3)``), so adding draws in one component
    never shifts the numbers another component sees.

    Args:
        seed (int): The run's root seed.
        *names: The substream path.

    Returns:
        np.random.SeedSequence: The substream's seed sequence.
    """
    return np.random.SeedSequence(
        entropy=int(seed), spawn_key=tuple(_key_to_int(n) for n in names)
    )


def substream(seed: int, *names: Key) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *names))


def derive_seed(seed: int, *names: Key) -> int:
    """Integer seed for a named substream, for APIs that take plain ints."""
    return int(seed_sequence(seed, *names).generate_state(1)[0])
