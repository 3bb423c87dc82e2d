"""
Seed derivation for reproducible Monte-Carlo runs.

Every random draw in the toolkit comes from a generator derived from a
master seed plus a tuple of integer keys, so the draws of one candidate,
trial or method never depend on how many others ran before it or in
which thread.
"""

import hashlib
from typing import Union

import numpy as np

Key = Union[int, str]


def stable_key(name: str) -> int:
    """Map a label (e.g. a method name) to a 32-bit integer, stable across runs and platforms"""
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def derive_rng(master_seed: int, *keys: Key) -> np.random.Generator:
    """
    Build an independent generator for (master_seed, *keys).

    Args:
        master_seed: Non-negative experiment seed
        *keys: Non-negative integers or labels identifying the stream

    Returns:
        numpy Generator seeded from SeedSequence(master_seed, spawn_key=keys)
    """
    spawn_key = tuple(stable_key(k) if isinstance(k, str) else int(k) for k in keys)
    if int(master_seed) < 0 or any(k < 0 for k in spawn_key):
        raise ValueError("seeds and seed keys must be non-negative")
    return np.random.default_rng(np.random.SeedSequence(int(master_seed), spawn_key=spawn_key))
