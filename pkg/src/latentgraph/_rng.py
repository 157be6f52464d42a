"""Counter-based randomness for edge generation.

Every unordered pair (i, j), i < j, gets its own uniform draw from a Philox
stream keyed by (seed, i), at counter position j - i - 1.  The outcome for a
pair therefore depends only on (seed, i, j), never on iteration order or
thread count.
"""

from __future__ import annotations

import numpy as np

__all__ = ["pair_uniform_row"]


def pair_uniform_row(seed: int, i: int, n: int) -> np.ndarray:
    """Uniforms in [0, 1) for the pairs (i, i+1), ..., (i, n-1)."""
    bitgen = np.random.Philox(key=(int(seed) << 64) + int(i))
    return np.random.Generator(bitgen).random(n - 1 - i)
