"""Deterministic 64-bit linear congruential generator.

x_{n+1} = a * x_n + c (mod 2**64). Uniform floats take the top 53 bits.
Vector draws advance a whole block at once through precomputed jump-ahead
coefficients, and match scalar draws value for value.
"""

import hashlib
from typing import Optional, Sequence, TypeVar, Union

import numpy as np

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1
BLOCK = 4096

T = TypeVar("T")


def _jump_tables(size: int):
    a_pow = np.empty(size, dtype=np.uint64)
    c_sum = np.empty(size, dtype=np.uint64)
    a, c = 1, 0
    for k in range(size):
        # (a, c) after k + 1 steps
        a = (a * MULTIPLIER) & MASK
        c = (c * MULTIPLIER + INCREMENT) & MASK
        a_pow[k] = a
        c_sum[k] = c
    return a_pow, c_sum


_A_POW, _C_SUM = _jump_tables(BLOCK)


def derive_seed(*parts: Union[str, int]) -> int:
    """64-bit seed from a tuple of labels, stable across runs and platforms."""
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha1(text.encode("utf-8")).digest()[:8], "little")


class Lcg64:
    """Seeded generator for synthetic fixtures."""

    def __init__(self, seed: int = 0):
        self.state = int(seed) & MASK

    @classmethod
    def derive(cls, *parts: Union[str, int]) -> "Lcg64":
        return cls(derive_seed(*parts))

    def next_uint64(self, n: Optional[int] = None):
        """One raw 64-bit value, or an array of ``n`` values."""
        if n is None:
            self.state = (self.state * MULTIPLIER + INCREMENT) & MASK
            return self.state

        out = np.empty(n, dtype=np.uint64)
        filled = 0
        while filled < n:
            m = min(BLOCK, n - filled)
            x = np.uint64(self.state)
            out[filled: filled + m] = _A_POW[:m] * x + _C_SUM[:m]
            self.state = int(out[filled + m - 1])
            filled += m
        return out

    def uniform(self, low: float = 0.0, high: float = 1.0, n: Optional[int] = None):
        """Floats in [low, high)."""
        if n is None:
            return low + (high - low) * ((self.next_uint64() >> 11) * 2.0 ** -53)
        unit = (self.next_uint64(n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
        return low + (high - low) * unit

    def integers(self, low: int, high: int, n: Optional[int] = None):
        """Integers in [low, high)."""
        if n is None:
            return low + int(self.uniform() * (high - low))
        return low + np.floor(self.uniform(n=n) * (high - low)).astype(np.int64)

    def noise(self, n: int) -> np.ndarray:
        """Zero-mean, unit-variance uniform noise."""
        return self.uniform(-np.sqrt(3.0), np.sqrt(3.0), n)

    def choice(self, options: Sequence[T]) -> T:
        return options[self.integers(0, len(options))]
