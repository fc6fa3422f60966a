import hashlib
import random
import struct

import pytest

from verisort.classgroup import QuadraticForm, generator
from verisort.sampling import HashStream, sample_indices, uniform
from verisort.sortition import select_winners, winner_seed


def sample_indices_oracle(seed, n, k):
    """Independent reference: materialized-array partial Fisher-Yates over the
    same hash-counter stream."""
    stream = HashStream(seed)
    arr = list(range(n))
    for i in range(k):
        j = i + uniform(stream, n - i)
        arr[i], arr[j] = arr[j], arr[i]
    return sorted(arr[:k])


def test_stream_blocks_are_counter_hashes():
    s = HashStream(b"seed")
    first = s.take(32)
    assert first == hashlib.sha256(b"seed" + struct.pack("<Q", 0)).digest()
    second = s.take(32)
    assert second == hashlib.sha256(b"seed" + struct.pack("<Q", 1)).digest()


def test_uniform_in_range():
    s = HashStream(b"u")
    for m in (1, 2, 3, 10, 100, 1000, 1 << 20):
        for _ in range(50):
            assert 0 <= uniform(s, m) < m
    with pytest.raises(ValueError):
        uniform(s, 0)


def test_sample_matches_array_oracle():
    rng = random.Random(41)
    for _ in range(200):
        n = rng.randrange(1, 200)
        k = rng.randrange(1, n + 1)
        seed = rng.randbytes(32)
        assert sample_indices(seed, n, k) == sample_indices_oracle(seed, n, k)


def test_sample_full_selection():
    assert sample_indices(b"all", 10, 10) == list(range(10))
    assert sample_indices(b"one", 1, 1) == [0]


def test_sample_validation():
    with pytest.raises(ValueError):
        sample_indices(b"x", 10, 11)
    with pytest.raises(ValueError):
        sample_indices(b"x", 10, 0)
    with pytest.raises(ValueError):
        sample_indices(b"x", 0, 0)


def test_sample_distinct_sorted():
    rng = random.Random(43)
    for _ in range(100):
        n = rng.randrange(2, 500)
        k = rng.randrange(1, n + 1)
        out = sample_indices(rng.randbytes(16), n, k)
        assert out == sorted(set(out))
        assert all(0 <= i < n for i in out)
        assert len(out) == k


def test_select_winners_deterministic():
    y = generator(-23)
    first = select_winners(y, 10, 3)
    assert select_winners(y, 10, 3) == first
    assert winner_seed(y) == hashlib.sha256(b"seed" + y.encode()).digest()


def test_select_winners_invariant_under_reencoding():
    d, y = -23, generator(-23).square()
    again = QuadraticForm.decode(y.encode(), d)
    assert select_winners(again, 50, 5) == select_winners(y, 50, 5)


def test_select_winners_all():
    y = generator(-23)
    assert select_winners(y, 7, 7) == list(range(7))
