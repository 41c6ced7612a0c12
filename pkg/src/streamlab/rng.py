"""Counter-based random streams.

Every stream is a pure function of (master seed, key path), so independent
work units (trials, channels, coefficient draws) can be replayed or fanned
out without shared RNG state.
"""

from __future__ import annotations

import numpy as np


def generator(seed: int, *key: int) -> np.random.Generator:
    """Return a Philox generator keyed by ``seed`` and an optional key path."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
