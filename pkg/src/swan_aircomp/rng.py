"""Deterministic seeding built on the Philox counter-based bit generator.

Every random draw in this package flows through a Philox stream keyed by a
64-bit seed.  Derived seeds (one per Monte-Carlo drop, one per restart) are
produced by the splitmix64 mixer so that parallel and serial executions of
the same experiment see identical streams.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# splitmix64 constants (Steele/Lea/Flood; standard public-domain mixer).
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _splitmix64(x: int) -> int:
    x = (x + _GAMMA) & _MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Mix a master seed with any number of stream indices into a 64-bit seed.

    The mix is a splitmix64 chain: each index is xor-folded into the running
    state and remixed.  Distinct (master_seed, indices) tuples map to distinct
    streams for all practical purposes.
    """
    state = _splitmix64(master_seed & _MASK64)
    for ix in indices:
        state = _splitmix64(state ^ (int(ix) & _MASK64))
    return state


def philox_stream(seed: int) -> np.random.Generator:
    """Return a Generator over a Philox bit generator keyed by ``seed``."""
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))
