"""Append-ordered Merkle tree over registration entries, with audit paths.

Tree shape: a list of n leaves splits at the largest power of two strictly
below n; leaves hash with a 0x00 prefix and interior nodes with 0x01, so leaf
and node preimages can never collide.  Audit paths are sibling hashes in
leaf-to-root order and grow as ceil(log2 n).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

HASH_SIZE = 32
MAX_ENTRY_BYTES = 1024

_LEAF_PREFIX = b"\x00"
_NODE_PREFIX = b"\x01"

EMPTY_ROOT = hashlib.sha256(b"").digest()


@dataclass(frozen=True)
class MerkleAuditPath:
    leaf_index: int
    tree_size: int
    siblings: tuple[bytes, ...]  # leaf-to-root order

    def to_json(self) -> dict:
        return {
            "leaf_index": self.leaf_index,
            "tree_size": self.tree_size,
            "siblings": [s.hex() for s in self.siblings],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MerkleAuditPath":
        siblings = tuple(bytes.fromhex(s) for s in obj["siblings"])
        if any(len(s) != HASH_SIZE for s in siblings):
            raise ValueError("sibling hashes must be 32 bytes")
        return cls(int(obj["leaf_index"]), int(obj["tree_size"]), siblings)


def leaf_hash(entry: bytes) -> bytes:
    if len(entry) > MAX_ENTRY_BYTES:
        raise ValueError(f"entry of {len(entry)} bytes exceeds the {MAX_ENTRY_BYTES}-byte cap")
    return hashlib.sha256(_LEAF_PREFIX + entry).digest()


def node_hash(left: bytes, right: bytes) -> bytes:
    return hashlib.sha256(_NODE_PREFIX + left + right).digest()


def _split(n: int) -> int:
    # largest power of two strictly less than n (n >= 2)
    return 1 << ((n - 1).bit_length() - 1)


def root(leaves: Sequence[bytes]) -> bytes:
    """Root hash of the append-ordered tree; SHA-256("") for zero leaves."""
    n = len(leaves)
    if n == 0:
        return EMPTY_ROOT
    if n == 1:
        return leaf_hash(leaves[0])
    k = _split(n)
    return node_hash(root(leaves[:k]), root(leaves[k:]))


def audit_path(leaves: Sequence[bytes], index: int) -> MerkleAuditPath:
    """Sibling hashes proving leaves[index] under root(leaves)."""
    n = len(leaves)
    if not 0 <= index < n:
        raise IndexError(f"leaf index {index} out of range for {n} leaves")
    siblings: list[bytes] = []
    lo, hi, i = 0, n, index
    stack: list[bytes] = []
    # walk down the split structure, recording the off-path subtree roots
    while hi - lo > 1:
        k = _split(hi - lo)
        if i < lo + k:
            stack.append(root(leaves[lo + k : hi]))
            hi = lo + k
        else:
            stack.append(root(leaves[lo : lo + k]))
            lo = lo + k
    siblings = list(reversed(stack))  # collected root-to-leaf; emit leaf-to-root
    return MerkleAuditPath(leaf_index=index, tree_size=n, siblings=tuple(siblings))


def _reconstruct(leaf: bytes, index: int, size: int, siblings: Sequence[bytes]) -> bytes | None:
    # rebuild the subtree root; None on any structural mismatch
    if size == 1:
        return leaf if len(siblings) == 0 else None
    if not siblings:
        return None
    k = _split(size)
    top = siblings[-1]
    rest = siblings[:-1]
    if index < k:
        sub = _reconstruct(leaf, index, k, rest)
        return None if sub is None else node_hash(sub, top)
    sub = _reconstruct(leaf, index - k, size - k, rest)
    return None if sub is None else node_hash(top, sub)


def verify_inclusion(entry: bytes, path: MerkleAuditPath, expected_root: bytes) -> bool:
    """True iff the path proves entry at path.leaf_index under expected_root."""
    if path.tree_size < 1 or not 0 <= path.leaf_index < path.tree_size:
        return False
    if len(entry) > MAX_ENTRY_BYTES:
        return False
    computed = _reconstruct(leaf_hash(entry), path.leaf_index, path.tree_size, path.siblings)
    return computed is not None and computed == expected_root
