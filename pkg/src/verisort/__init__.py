"""Publicly verifiable electronic sortition.

Registration entries are rooted in a Merkle tree; the root seeds a
delay-function evaluation over a class group of unknown order; the output
seeds deterministic winner selection.  Anyone can verify the whole run from
the published transcript in time independent of the delay parameter, and
each registrant can check their own inclusion with a log-size audit path.
"""

from .classgroup import QuadraticForm, generator, identity
from .hashprime import (
    HashPrimeParams,
    HashPrimeResult,
    hash_to_prime,
    hash_to_prime_with_hint,
    miller_rabin,
)
from .merkle import MerkleAuditPath, audit_path, leaf_hash, root, verify_inclusion
from .sortition import (
    Receipt,
    Sortition,
    SortitionConfig,
    Transcript,
    calibrate,
    select_winners,
    verify_receipt_inclusion,
    verify_transcript,
)
from .vdf import VdfOutput, VdfParams, derive_discriminant, evaluate, verify

__version__ = "0.1.0"

__all__ = [
    "QuadraticForm",
    "generator",
    "identity",
    "HashPrimeParams",
    "HashPrimeResult",
    "hash_to_prime",
    "hash_to_prime_with_hint",
    "miller_rabin",
    "MerkleAuditPath",
    "audit_path",
    "leaf_hash",
    "root",
    "verify_inclusion",
    "Receipt",
    "Sortition",
    "SortitionConfig",
    "Transcript",
    "calibrate",
    "select_winners",
    "verify_receipt_inclusion",
    "verify_transcript",
    "VdfOutput",
    "VdfParams",
    "derive_discriminant",
    "evaluate",
    "verify",
    "__version__",
]
