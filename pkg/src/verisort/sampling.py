"""Deterministic winner sampling from a seed.

A SHA-256 counter stream feeds rejection sampling for unbiased uniform draws,
which drive a partial Fisher-Yates shuffle: k draws select k distinct indices
out of n with equal probability for every subset.  Same seed, same winners,
in any implementation that follows the same byte recipe.
"""
from __future__ import annotations

import hashlib
import struct


class HashStream:
    """Byte stream of SHA-256(seed || LE64(counter)) blocks."""

    def __init__(self, seed: bytes):
        self.seed = seed
        self.counter = 0
        self.buf = b""

    def take(self, n: int) -> bytes:
        while len(self.buf) < n:
            self.buf += hashlib.sha256(self.seed + struct.pack("<Q", self.counter)).digest()
            self.counter += 1
        out, self.buf = self.buf[:n], self.buf[n:]
        return out


def uniform(stream: HashStream, m: int) -> int:
    """Unbiased draw from [0, m) by masked rejection sampling."""
    if m < 1:
        raise ValueError("range must be positive")
    if m == 1:
        return 0
    nbits = (m - 1).bit_length()
    nbytes = (nbits + 7) // 8
    mask = (1 << nbits) - 1
    while True:
        v = int.from_bytes(stream.take(nbytes), "big") & mask
        if v < m:
            return v


def sample_indices(seed: bytes, n: int, k: int) -> list[int]:
    """k distinct indices from range(n), sorted ascending."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    stream = HashStream(seed)
    arr = list(range(n))
    for i in range(k):
        j = i + uniform(stream, n - i)
        arr[i], arr[j] = arr[j], arr[i]
    return sorted(arr[:k])
