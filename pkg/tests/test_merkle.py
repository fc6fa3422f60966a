import hashlib
import random

import pytest

from verisort.merkle import (
    EMPTY_ROOT,
    MAX_ENTRY_BYTES,
    MerkleAuditPath,
    audit_path,
    leaf_hash,
    node_hash,
    root,
    verify_inclusion,
)

# frozen by independent hashlib chains
EMPTY_ROOT_HEX = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
LEAF_EMPTY_HEX = "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d"
ROOT_ABC_HEX = "36642e73c2540ab121e3a6bf9545b0a24982cd830eb13d3cd19de3ce6c021ec1"


def leaves(n):
    return [b"entry-%d" % i for i in range(n)]


def test_leaf_hash_empty_entry():
    assert leaf_hash(b"") == hashlib.sha256(b"\x00").digest()
    assert leaf_hash(b"").hex() == LEAF_EMPTY_HEX


def test_leaf_and_node_domains_distinct():
    x = bytes(32)
    assert leaf_hash(x + x) != node_hash(x, x)
    assert leaf_hash(b"abc") == leaf_hash(b"abc")


def test_leaf_hash_rejects_oversized():
    leaf_hash(b"x" * MAX_ENTRY_BYTES)
    with pytest.raises(ValueError):
        leaf_hash(b"x" * (MAX_ENTRY_BYTES + 1))
    with pytest.raises(ValueError):
        root([b"ok", b"x" * (MAX_ENTRY_BYTES + 1)])


def test_root_empty_and_single():
    assert root([]) == EMPTY_ROOT
    assert root([]).hex() == EMPTY_ROOT_HEX
    assert root([b"a"]) == leaf_hash(b"a")


def test_root_abc_pinned_vector():
    assert root([b"a", b"b", b"c"]).hex() == ROOT_ABC_HEX
    # same value from the 5-hash manual chain
    manual = hashlib.sha256(
        b"\x01"
        + hashlib.sha256(
            b"\x01" + hashlib.sha256(b"\x00a").digest() + hashlib.sha256(b"\x00b").digest()
        ).digest()
        + hashlib.sha256(b"\x00c").digest()
    ).digest()
    assert root([b"a", b"b", b"c"]) == manual


def test_audit_path_shapes():
    assert audit_path(leaves(1), 0).siblings == ()
    p = audit_path(leaves(2), 0)
    assert p.siblings == (leaf_hash(b"entry-1"),)
    assert len(audit_path(leaves(5), 3).siblings) == 3


def test_audit_path_rejects_bad_index():
    with pytest.raises(IndexError):
        audit_path(leaves(5), 5)
    with pytest.raises(IndexError):
        audit_path(leaves(5), -1)
    with pytest.raises(IndexError):
        audit_path([], 0)


def test_round_trip_exhaustive():
    for n in range(1, 65):
        ls = leaves(n)
        r = root(ls)
        for i in range(n):
            path = audit_path(ls, i)
            assert path.leaf_index == i and path.tree_size == n
            assert verify_inclusion(ls[i], path, r), (n, i)


def test_path_length_bound():
    for n in range(1, 65):
        ls = leaves(n)
        longest = max(len(audit_path(ls, i).siblings) for i in range(n))
        assert longest == (n - 1).bit_length()  # == ceil(log2 n)


def split_shape(index, size):
    # sequence of left/right decisions the reconstruction takes
    shape = []
    while size > 1:
        k = 1 << ((size - 1).bit_length() - 1)
        if index < k:
            shape.append("L")
            size = k
        else:
            shape.append("R")
            index -= k
            size -= k
    return "".join(shape)


def test_soundness_fuzz():
    rng = random.Random(9)
    ls = leaves(21)
    r = root(ls)
    for i in range(21):
        path = audit_path(ls, i)
        assert not verify_inclusion(b"other-entry", path, r)
        if path.siblings:
            k = rng.randrange(len(path.siblings))
            sibs = list(path.siblings)
            sibs[k] = bytes(32)
            assert not verify_inclusion(
                ls[i], MerkleAuditPath(i, 21, tuple(sibs)), r
            )
            assert not verify_inclusion(
                ls[i], MerkleAuditPath(i, 21, path.siblings[:-1]), r
            )
        wrong_index = (i + 1) % 21
        assert not verify_inclusion(ls[i], MerkleAuditPath(wrong_index, 21, path.siblings), r)


def test_soundness_tree_size_mutations():
    # A size lie is detectable from the path alone exactly when it changes the
    # leaf's split shape; shape-preserving lies are caught one layer up, where
    # the tree size is pinned against the signed transcript.
    ls = leaves(21)
    r = root(ls)
    for i in range(21):
        path = audit_path(ls, i)
        for wrong in (5, 20, 22, 24, 43):
            mutated = MerkleAuditPath(i, wrong, path.siblings)
            ok = verify_inclusion(ls[i], mutated, r)
            if wrong <= i:
                assert not ok
            else:
                assert ok == (split_shape(i, wrong) == split_shape(i, 21))
    # the last leaf's shape is always size-sensitive
    last = audit_path(ls, 20)
    for wrong in (20, 22, 24, 43):
        assert not verify_inclusion(ls[20], MerkleAuditPath(20, wrong, last.siblings), r)


def test_verify_rejects_out_of_range_index():
    ls = leaves(4)
    path = audit_path(ls, 0)
    assert not verify_inclusion(ls[0], MerkleAuditPath(4, 4, path.siblings), root(ls))
    assert not verify_inclusion(ls[0], MerkleAuditPath(0, 0, ()), root(ls))


def test_order_sensitivity():
    rng = random.Random(10)
    base = leaves(12)
    r = root(base)
    for _ in range(10):
        shuffled = base[:]
        rng.shuffle(shuffled)
        if shuffled != base:
            assert root(shuffled) != r


def test_duplicate_leaves_allowed():
    ls = [b"same", b"same", b"same"]
    r = root(ls)
    for i in range(3):
        assert verify_inclusion(b"same", audit_path(ls, i), r)
    assert audit_path(ls, 0).siblings != audit_path(ls, 2).siblings


def test_audit_path_json_round_trip():
    path = audit_path(leaves(7), 4)
    obj = path.to_json()
    assert set(obj) == {"leaf_index", "tree_size", "siblings"}
    assert MerkleAuditPath.from_json(obj) == path
    with pytest.raises(ValueError):
        MerkleAuditPath.from_json({"leaf_index": 0, "tree_size": 1, "siblings": ["abcd"]})
