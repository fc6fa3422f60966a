"""Deterministic hash-to-prime with a publishable iteration count.

The search walks candidates expand(seed, 0), expand(seed, 1), ... and returns
the first one passing Miller-Rabin, together with its 1-based index i.  A
party that already knows i can skip every failed primality test: recompute
the candidates by hashing alone and run a single test on the i-th one.

Everything here is bit-pinned -- candidate derivation and Miller-Rabin bases
are both derived from SHA-256 -- so independent implementations reproduce the
same (prime, i) for the same seed.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

from gmpy2 import mpz, powmod

DEFAULT_MR_ROUNDS = 50
MAX_ITERATIONS = 1 << 20


class InvalidHint(ValueError):
    """The candidate at the hinted iteration is composite."""


class SearchLimitExceeded(RuntimeError):
    """No prime found within the iteration cap; the derivation is broken."""


@dataclass(frozen=True)
class HashPrimeParams:
    bits: int = 1024
    congruence: tuple[int, int] | None = None  # (residue, power-of-two modulus)
    mr_rounds: int = DEFAULT_MR_ROUNDS

    def __post_init__(self):
        if self.bits < 16:
            raise ValueError(f"bits must be >= 16, got {self.bits}")
        if self.congruence is not None:
            r, m = self.congruence
            if m < 2 or m > 256 or m & (m - 1):
                raise ValueError(f"congruence modulus must be a power of two <= 256, got {m}")
            if not 0 <= r < m:
                raise ValueError(f"congruence residue {r} out of range for modulus {m}")
        if self.mr_rounds < 1:
            raise ValueError("mr_rounds must be positive")


@dataclass(frozen=True)
class HashPrimeResult:
    prime: int
    iterations: int  # 1-based index of the successful candidate


@dataclass
class SearchStats:
    """Injectable instrumentation; counts Miller-Rabin invocations."""

    primality_tests: int = 0


def expand(seed: bytes, j: int, bits: int, congruence: tuple[int, int] | None = None) -> int:
    """Deterministic j-th candidate for this seed.

    Concatenates SHA-256(seed || LE64(j) || byte(k)) blocks for k = 0, 1, ...,
    truncates to `bits` bits (big-endian), forces the top bit, then forces the
    low bits to the congruence residue if one is configured.
    """
    if bits < 16:
        raise ValueError(f"bits must be >= 16, got {bits}")
    nbytes = (bits + 7) // 8
    prefix = seed + struct.pack("<Q", j)
    buf = b""
    k = 0
    while len(buf) < nbytes:
        buf += hashlib.sha256(prefix + bytes([k])).digest()
        k += 1
    x = int.from_bytes(buf[:nbytes], "big") >> (8 * nbytes - bits)
    x |= 1 << (bits - 1)
    if congruence is not None:
        r, m = congruence
        x = (x & ~(m - 1)) | r
    return x


def miller_rabin(n: int, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Probabilistic primality test with deterministic bases.

    Round t uses base 2 + (SHA-256(bytes(n) || LE32(t)) mod (n - 3)), so every
    party computes the identical verdict and hence the identical iteration
    counts in the prime search.
    """
    if n < 2:
        raise ValueError(f"primality test needs n >= 2, got {n}")
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    n_bytes = n.to_bytes((n.bit_length() + 7) // 8, "big")
    n = mpz(n)
    d = mpz(d)
    for t in range(rounds):
        h = hashlib.sha256(n_bytes + struct.pack("<I", t)).digest()
        a = 2 + int.from_bytes(h, "big") % (n - 3)
        x = powmod(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = powmod(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


def hash_to_prime(seed: bytes, params: HashPrimeParams, stats: SearchStats | None = None) -> HashPrimeResult:
    """Full search: test every candidate until one passes."""
    for j in range(MAX_ITERATIONS):
        cand = expand(seed, j, params.bits, params.congruence)
        if stats is not None:
            stats.primality_tests += 1
        if miller_rabin(cand, params.mr_rounds):
            return HashPrimeResult(prime=cand, iterations=j + 1)
    raise SearchLimitExceeded(f"no prime within {MAX_ITERATIONS} candidates")


def hash_to_prime_with_hint(
    seed: bytes, params: HashPrimeParams, hint_i: int, stats: SearchStats | None = None
) -> int:
    """Hint path: rebuild candidates by hashing only, test just the hinted one.

    Raises InvalidHint if the candidate at iteration hint_i is composite,
    which means the published hint (or the transcript carrying it) is bogus.
    """
    if hint_i < 1:
        raise ValueError(f"iteration hint must be >= 1, got {hint_i}")
    if hint_i > MAX_ITERATIONS:
        raise ValueError(f"iteration hint {hint_i} exceeds the search cap")
    cand = None
    for j in range(hint_i):
        cand = expand(seed, j, params.bits, params.congruence)
    if stats is not None:
        stats.primality_tests += 1
    if not miller_rabin(cand, params.mr_rounds):
        raise InvalidHint(f"candidate at iteration {hint_i} is composite")
    return cand
