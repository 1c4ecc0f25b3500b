"""Deterministic, portable pseudo-random streams for data generation.

Generated datasets are part of the package contract, so the generator is
pinned exactly rather than delegated to a platform library:

* state advances by the odd constant 0x9E3779B97F4A7C15 modulo 2**64;
* each output is the state finalized by ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
  z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64);
* ``uniform`` takes the top 53 bits as a double in [0, 1);
* ``normals`` applies the Box-Muller transform to consecutive uniform pairs,
  with the radius uniform shifted into (0, 1] so log never sees zero;
* ``signs`` maps the top output bit to +1 (clear) or -1 (set).

Any implementation following these rules reproduces the streams bit-for-bit.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


class SplitMix64:
    """64-bit mixing generator with the streams documented above."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return (self.u64() >> 11) * _INV_2_53

    def normals(self, count: int) -> np.ndarray:
        """count standard normal variates via Box-Muller."""
        out = np.empty(count)
        pairs = (count + 1) // 2
        idx = 0
        for _ in range(pairs):
            u1 = ((self.u64() >> 11) + 1) * _INV_2_53  # (0, 1]
            u2 = (self.u64() >> 11) * _INV_2_53  # [0, 1)
            r = math.sqrt(-2.0 * math.log(u1))
            angle = 2.0 * math.pi * u2
            out[idx] = r * math.cos(angle)
            idx += 1
            if idx < count:
                out[idx] = r * math.sin(angle)
                idx += 1
        return out

    def signs(self, count: int) -> np.ndarray:
        """count labels drawn uniformly from {-1.0, +1.0}."""
        return np.array(
            [1.0 if (self.u64() >> 63) == 0 else -1.0 for _ in range(count)]
        )
