"""Deterministic seeding and stream splitting.

Every stochastic routine in this package draws from a counter-based
Philox4x64-10 generator (numpy's implementation), keyed by a 64-bit
integer.  Independent streams for Monte Carlo replications are obtained
by hashing the canonical text form of a label tuple with BLAKE2b, so
distinct (seed, model, s, N, method, replication) tuples map to distinct
keys in a way that is stable across platforms and processes.
"""

from __future__ import annotations

import hashlib

import numpy as np

GENERATOR_NAME = "philox4x64-10"


def _canonical(part) -> str:
    # repr() keeps float labels exact (shortest round-trip form)
    if isinstance(part, float):
        return repr(part)
    return str(part)


def derive_seed(*parts) -> int:
    """Map a tuple of labels to a 64-bit stream key."""
    text = "|".join(_canonical(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator for one stream; same seed, same draws."""
    if not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**64 - 1)))
