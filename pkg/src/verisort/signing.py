"""Ed25519 signing helpers for receipts and transcripts.

Keys persist as a hex-encoded 32-byte seed in a plain text file, so the
server's key survives restarts and the published key endpoint stays stable.
"""
from __future__ import annotations

from pathlib import Path

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.serialization import (
    Encoding,
    NoEncryption,
    PrivateFormat,
    PublicFormat,
)


def generate_key() -> Ed25519PrivateKey:
    return Ed25519PrivateKey.generate()


def key_bytes(key: Ed25519PrivateKey) -> bytes:
    return key.private_bytes(Encoding.Raw, PrivateFormat.Raw, NoEncryption())


def public_key_bytes(key: Ed25519PrivateKey) -> bytes:
    return key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)


def save_key(key: Ed25519PrivateKey, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(key_bytes(key).hex() + "\n")


def load_key(path: Path) -> Ed25519PrivateKey:
    raw = bytes.fromhex(path.read_text().strip())
    if len(raw) != 32:
        raise ValueError(f"signing key file {path} must hold 32 hex-encoded bytes")
    return Ed25519PrivateKey.from_private_bytes(raw)


def ensure_key(path: Path) -> Ed25519PrivateKey:
    """Load the key at path, generating and persisting one if absent."""
    if path.exists():
        return load_key(path)
    key = generate_key()
    save_key(key, path)
    return key


def sign(key: Ed25519PrivateKey, message: bytes) -> bytes:
    return key.sign(message)


def verify_signature(public_key: bytes, signature: bytes, message: bytes) -> bool:
    if len(public_key) != 32 or len(signature) != 64:
        return False
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, message)
        return True
    except (InvalidSignature, ValueError):
        return False
