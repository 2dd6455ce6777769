"""Labeled, counter-based random substreams.

Every consumer of randomness asks for ``substream(seed, label, entity)``.
The Philox key is derived from ``(seed, label)`` by hashing and the entity
id selects a disjoint counter block, so streams never depend on the order
in which entities are processed, and adding a new label never perturbs an
existing one.
"""
from __future__ import annotations

import hashlib

import numpy as np

SEED_MAX = 2**64 - 1


def parse_seed(text: str | int) -> int:
    """Accept a 64-bit unsigned seed as an int, decimal or ``0x`` hex string."""
    value = text if isinstance(text, int) else int(str(text), 0)
    if not 0 <= value <= SEED_MAX:
        raise ValueError(f"seed {text!r} is not a 64-bit unsigned integer")
    return value


def _key(seed: int, label: str) -> np.ndarray:
    digest = hashlib.sha256(f"{label}\x00{parse_seed(seed)}".encode()).digest()
    return np.frombuffer(digest[:16], dtype=np.uint64).copy()


def substream(seed: int, label: str, entity: int = 0) -> np.random.Generator:
    if entity < 0:
        raise ValueError("entity id must be non-negative")
    # entity lives in the third counter word; draws advance the first
    counter = np.array([0, 0, entity, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=_key(seed, label), counter=counter))
