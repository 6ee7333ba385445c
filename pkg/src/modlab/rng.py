"""Deterministic random streams.

All randomness in the package flows through ``seed_stream``, which wraps
numpy's Philox 4x64 counter-based generator.  Philox produces identical byte
streams for identical 64-bit seeds on every platform and numpy build, which
is what makes repeated ``verify`` runs byte-identical.

Substreams are derived by combining the base seed with a stream label, so
independent corpora (states, probes, sample vectors) never share draws.
"""

from __future__ import annotations

import hashlib

import numpy as np


def seed_stream(seed: int, label: str = "") -> np.random.Generator:
    """Counter-based generator for a 64-bit seed and an optional substream label."""
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    if label:
        digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
        key = int.from_bytes(digest[:16], "little")
    else:
        key = seed
    return np.random.Generator(np.random.Philox(key=key))
