"""Named, counter-keyed RNG streams.

Every random draw in an experiment comes from a stream keyed by
(master seed, purpose tag, indices...), so shots, states and circuits are
reproducible independently of worker count or execution order.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["stream"]


def stream(master_seed: int, *key) -> np.random.Generator:
    parts = tuple(
        zlib.crc32(p.encode("utf-8")) if isinstance(p, str) else int(p) for p in key
    )
    return np.random.default_rng(np.random.SeedSequence(entropy=int(master_seed), spawn_key=parts))
