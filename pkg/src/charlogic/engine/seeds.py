"""Splittable random substreams.

Each program segment draws from its own stream, keyed by the full
(base_seed, scene_id, run_index, segment_id) tuple through SHA-256, so
editing one segment never perturbs another segment's draws and any
single draw is reproducible from the key alone.
"""

from __future__ import annotations

import hashlib
import random

from .types import RunSeed

# components are joined with the unit separator; ids never contain it
_SEP = "\x1f"


def substream_seed(seed: RunSeed, segment_id: str) -> int:
    key = _SEP.join((str(seed.base_seed), seed.scene_id,
                     str(seed.run_index), segment_id))
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def segment_stream(seed: RunSeed, segment_id: str) -> random.Random:
    return random.Random(substream_seed(seed, segment_id))
