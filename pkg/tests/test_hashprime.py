import hashlib
import math
import random
import struct

import gmpy2
import pytest

import verisort.hashprime as hp
from verisort.hashprime import (
    HashPrimeParams,
    InvalidHint,
    SearchLimitExceeded,
    SearchStats,
    expand,
    hash_to_prime,
    hash_to_prime_with_hint,
    miller_rabin,
)

# frozen by the independent oracle script (SHA-256 assembly + gmpy2 primality)
EXPAND_ZEROS_256 = 0x9E1736C43D19118E6CE4302118AF337109491ECC52757DFB949BAD6A7940B0C7
REGRESSION_PRIME = 0xDCF48B9E31AAF9AE09A241D50AF053CF
REGRESSION_ITERATIONS = 13
COMPOSITE_AFTER_PRIME_SEED = b"hint-scan-0"  # true i = 12, candidate 13 composite


def expand_oracle(seed, j, bits, congruence=None):
    # independent re-assembly of the candidate derivation
    nbytes = (bits + 7) // 8
    buf = b""
    k = 0
    while len(buf) < nbytes:
        buf += hashlib.sha256(seed + struct.pack("<Q", j) + bytes([k])).digest()
        k += 1
    x = int.from_bytes(buf[:nbytes], "big") >> (8 * nbytes - bits)
    x |= 1 << (bits - 1)
    if congruence is not None:
        r, m = congruence
        x = (x & ~(m - 1)) | r
    return x


# -- expand --------------------------------------------------------------------


def test_expand_range_and_top_bit():
    for seed in (b"", b"a", b"zz"):
        x = expand(seed, 0, 16)
        assert 1 << 15 <= x < 1 << 16


def test_expand_depends_on_iteration():
    assert expand(b"a", 0, 128) != expand(b"a", 1, 128)
    assert expand(b"a", 0, 128) == expand(b"a", 0, 128)


def test_expand_against_independent_assembly():
    assert expand(bytes(32), 0, 256, (7, 8)) == EXPAND_ZEROS_256
    rng = random.Random(1)
    for _ in range(25):
        seed = rng.randbytes(rng.randrange(0, 40))
        j = rng.randrange(0, 1000)
        bits = rng.choice([16, 64, 128, 256, 1024])
        cong = rng.choice([None, (7, 8), (1, 2), (3, 4)])
        assert expand(seed, j, bits, cong) == expand_oracle(seed, j, bits, cong)


def test_expand_congruence_forcing():
    for j in range(20):
        x = expand(b"congr", j, 256, (7, 8))
        assert x % 8 == 7
        assert 1 << 255 <= x < 1 << 256


def test_expand_rejects_tiny_bits():
    with pytest.raises(ValueError):
        expand(b"x", 0, 8)


# -- miller_rabin --------------------------------------------------------------


def test_miller_rabin_known_values():
    assert miller_rabin(7, 50)
    assert not miller_rabin(561, 50)  # Carmichael number
    assert miller_rabin(104729, 50)  # 10000th prime
    assert miller_rabin(2, 50)
    assert miller_rabin(3, 50)
    assert not miller_rabin(4, 50)


def test_miller_rabin_rejects_below_two():
    with pytest.raises(ValueError):
        miller_rabin(1, 50)
    with pytest.raises(ValueError):
        miller_rabin(0, 50)


def test_miller_rabin_agrees_with_independent_oracle():
    for n in range(2, 2000):
        assert miller_rabin(n, 20) == bool(gmpy2.is_prime(n, 40)), n
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randrange(1 << 63, 1 << 64) | 1
        assert miller_rabin(n, 20) == bool(gmpy2.is_prime(n, 40)), n


# -- hash_to_prime -------------------------------------------------------------


def test_hash_to_prime_range_and_primality():
    for seed in (b"x", b"y", b"z"):
        res = hash_to_prime(seed, HashPrimeParams(bits=256))
        assert 1 << 255 <= res.prime < 1 << 256
        assert gmpy2.is_prime(res.prime, 50)
        assert res.iterations >= 1


def test_hash_to_prime_deterministic():
    params = HashPrimeParams(bits=128, congruence=(7, 8))
    assert hash_to_prime(b"again", params) == hash_to_prime(b"again", params)


def test_hash_to_prime_regression_vector():
    res = hash_to_prime(b"test-seed-1", HashPrimeParams(bits=128, congruence=(7, 8)))
    assert res.prime == REGRESSION_PRIME
    assert res.iterations == REGRESSION_ITERATIONS


def test_hash_to_prime_congruence_holds():
    params = HashPrimeParams(bits=128, congruence=(7, 8))
    for i in range(10):
        res = hash_to_prime(b"c%d" % i, params)
        assert res.prime % 8 == 7


def test_search_cap_raises(monkeypatch):
    monkeypatch.setattr(hp, "MAX_ITERATIONS", 4)
    # candidates forced even can never be prime
    with pytest.raises(SearchLimitExceeded):
        hash_to_prime(b"never", HashPrimeParams(bits=64, congruence=(0, 4)))


def test_params_validation():
    with pytest.raises(ValueError):
        HashPrimeParams(bits=8)
    with pytest.raises(ValueError):
        HashPrimeParams(bits=64, congruence=(1, 3))  # modulus not a power of two
    with pytest.raises(ValueError):
        HashPrimeParams(bits=64, congruence=(9, 8))  # residue out of range
    with pytest.raises(ValueError):
        HashPrimeParams(bits=64, mr_rounds=0)


# -- hint path -----------------------------------------------------------------


def test_hint_consistency_over_random_seeds():
    rng = random.Random(3)
    params = HashPrimeParams(bits=128, congruence=(7, 8))
    for _ in range(100):
        seed = rng.randbytes(16)
        full = hash_to_prime(seed, params)
        assert hash_to_prime_with_hint(seed, params, full.iterations) == full.prime


def test_primality_test_counters():
    params = HashPrimeParams(bits=128, congruence=(7, 8))
    full_stats = SearchStats()
    res = hash_to_prime(b"counted", params, full_stats)
    assert full_stats.primality_tests == res.iterations
    hint_stats = SearchStats()
    hash_to_prime_with_hint(b"counted", params, res.iterations, hint_stats)
    assert hint_stats.primality_tests == 1


def test_dishonest_hint_rejected():
    params = HashPrimeParams(bits=128, congruence=(7, 8))
    res = hash_to_prime(COMPOSITE_AFTER_PRIME_SEED, params)
    assert res.iterations == 12
    with pytest.raises(InvalidHint):
        hash_to_prime_with_hint(COMPOSITE_AFTER_PRIME_SEED, params, res.iterations + 1)


def test_hint_validation():
    params = HashPrimeParams(bits=64)
    with pytest.raises(ValueError):
        hash_to_prime_with_hint(b"x", params, 0)
    with pytest.raises(ValueError):
        hash_to_prime_with_hint(b"x", params, hp.MAX_ITERATIONS + 1)


# -- density sanity -------------------------------------------------------------


def test_mean_iterations_in_density_window():
    bits = 256
    params = HashPrimeParams(bits=bits, congruence=(7, 8))
    rng = random.Random(4)
    total = 0
    samples = 100
    for _ in range(samples):
        total += hash_to_prime(rng.randbytes(16), params).iterations
    mean = total / samples
    assert bits * math.log(2) / 8 <= mean <= bits * math.log(2) * 2
