"""Three-phase sortition protocol: registration, result generation, verification.

Registration appends entries to a durable log and hands out signed receipts.
Finalization roots the entries in a Merkle tree, derives the delay-function
discriminant from the root, runs the sequential evaluation, and selects the
winners from the output -- all published as one signed transcript that anyone
can re-check offline in time independent of the delay parameter.
"""
from __future__ import annotations

import base64
import hashlib
import json
import math
import os
import struct
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey

from . import merkle, vdf
from .classgroup import DecodeError, QuadraticForm, generator, identity
from .hashprime import HashPrimeParams, InvalidHint, hash_to_prime, hash_to_prime_with_hint
from .sampling import sample_indices
from .signing import public_key_bytes, sign, verify_signature

TRANSCRIPT_VERSION = 1
RECEIPT_TAG = b"verisort-receipt-v1"
WINNER_SEED_TAG = b"seed"

ENTRY_LOG_NAME = "entries.log"
TRANSCRIPT_NAME = "transcript.json"
EVALUATING_MARKER_NAME = "evaluating"


class WindowClosed(ValueError):
    """Registration attempted outside the open window (or after finalize)."""


class OversizedEntry(ValueError):
    """Entry exceeds the per-entry byte cap."""


class WindowStillOpen(ValueError):
    """Finalize attempted before the window closes."""


class EmptyRegistry(ValueError):
    """Finalize attempted with zero registrations."""


@dataclass(frozen=True)
class SortitionConfig:
    sortition_id: str
    window_open: int  # UTC seconds
    window_close: int
    T: int
    winner_count: int
    discriminant_bits: int = 1024

    def __post_init__(self):
        if self.window_close <= self.window_open:
            raise ValueError("window must close after it opens")
        if self.winner_count < 1:
            raise ValueError("winner_count must be >= 1")
        if self.T < 0:
            raise ValueError("T must be nonnegative")

    def to_json(self) -> dict:
        return {
            "sortition_id": self.sortition_id,
            "window_open": self.window_open,
            "window_close": self.window_close,
            "T": self.T,
            "winner_count": self.winner_count,
            "discriminant_bits": self.discriminant_bits,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SortitionConfig":
        return cls(
            sortition_id=str(obj["sortition_id"]),
            window_open=int(obj["window_open"]),
            window_close=int(obj["window_close"]),
            T=int(obj["T"]),
            winner_count=int(obj["winner_count"]),
            discriminant_bits=int(obj.get("discriminant_bits", 1024)),
        )


@dataclass(frozen=True)
class RegistrationEntry:
    index: int
    x_u: bytes
    received_at: int


@dataclass(frozen=True)
class Receipt:
    sortition_id: str
    leaf_index: int
    entry_hash: bytes  # leaf hash of x_u
    received_at: int
    signature: bytes

    def signed_bytes(self) -> bytes:
        sid = self.sortition_id.encode()
        return (
            RECEIPT_TAG
            + struct.pack("<I", len(sid))
            + sid
            + struct.pack("<Q", self.leaf_index)
            + self.entry_hash
            + struct.pack("<Q", self.received_at)
        )

    def to_json(self) -> dict:
        return {
            "sortition_id": self.sortition_id,
            "leaf_index": self.leaf_index,
            "entry_hash": self.entry_hash.hex(),
            "received_at": self.received_at,
            "signature": self.signature.hex(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Receipt":
        return cls(
            sortition_id=str(obj["sortition_id"]),
            leaf_index=int(obj["leaf_index"]),
            entry_hash=bytes.fromhex(obj["entry_hash"]),
            received_at=int(obj["received_at"]),
            signature=bytes.fromhex(obj["signature"]),
        )


@dataclass(frozen=True)
class Transcript:
    """The published, self-contained sortition result."""

    sortition_id: str
    T: int
    discriminant_bits: int
    k: int
    n: int
    x_root: bytes
    d_magnitude: bytes  # big-endian |d|, no leading zero byte
    d_iterations: int
    y: bytes  # encoded forms
    proof: bytes
    challenge_iterations: int
    winners: tuple[int, ...]
    signature: bytes
    server_pubkey: bytes
    version: int = TRANSCRIPT_VERSION

    @property
    def d(self) -> int:
        return -int.from_bytes(self.d_magnitude, "big")

    def _fields(self, with_signature: bool) -> dict:
        obj = {
            "version": self.version,
            "sortition_id": self.sortition_id,
            "T": self.T,
            "discriminant_bits": self.discriminant_bits,
            "k": self.k,
            "n": self.n,
            "x_root": self.x_root.hex(),
            "d_magnitude": self.d_magnitude.hex(),
            "d_iterations": self.d_iterations,
            "y": self.y.hex(),
            "proof": self.proof.hex(),
            "challenge_iterations": self.challenge_iterations,
            "winners": list(self.winners),
        }
        if with_signature:
            obj["signature"] = self.signature.hex()
        obj["server_pubkey"] = self.server_pubkey.hex()
        return obj

    def signed_bytes(self) -> bytes:
        # canonical serialization with the signature field omitted
        return json.dumps(self._fields(False), separators=(",", ":")).encode()

    def to_json_bytes(self) -> bytes:
        return json.dumps(self._fields(True), separators=(",", ":")).encode() + b"\n"

    @classmethod
    def from_json_bytes(cls, data: bytes) -> "Transcript":
        obj = json.loads(data)
        if not isinstance(obj, dict):
            raise ValueError("transcript must be a JSON object")
        if obj.get("version") != TRANSCRIPT_VERSION:
            raise ValueError(f"unsupported transcript version {obj.get('version')!r}")
        winners = obj["winners"]
        if not isinstance(winners, list) or not all(isinstance(w, int) for w in winners):
            raise ValueError("winners must be a list of integers")
        t = cls(
            sortition_id=str(obj["sortition_id"]),
            T=int(obj["T"]),
            discriminant_bits=int(obj["discriminant_bits"]),
            k=int(obj["k"]),
            n=int(obj["n"]),
            x_root=bytes.fromhex(obj["x_root"]),
            d_magnitude=bytes.fromhex(obj["d_magnitude"]),
            d_iterations=int(obj["d_iterations"]),
            y=bytes.fromhex(obj["y"]),
            proof=bytes.fromhex(obj["proof"]),
            challenge_iterations=int(obj["challenge_iterations"]),
            winners=tuple(winners),
            signature=bytes.fromhex(obj["signature"]),
            server_pubkey=bytes.fromhex(obj["server_pubkey"]),
        )
        if len(t.x_root) != 32:
            raise ValueError("x_root must be 32 bytes")
        if len(t.d_magnitude) == 0 or t.d_magnitude[0] == 0:
            raise ValueError("d_magnitude must be minimal big-endian bytes")
        return t


def winner_seed(y: QuadraticForm) -> bytes:
    return hashlib.sha256(WINNER_SEED_TAG + y.encode()).digest()


def select_winners(y: QuadraticForm, n: int, k: int) -> list[int]:
    """k distinct winner indices from range(n), derived deterministically from y."""
    return sample_indices(winner_seed(y), n, k)


class Sortition:
    """Protocol state machine bound to a data directory.

    Registration entries live in an append-only JSON-lines log that is
    replayed on startup; the finalized transcript is a flat file served
    byte-for-byte.  Index assignment is serialized through one lock, so
    arrival order is total even under concurrent submissions.
    """

    def __init__(self, config: SortitionConfig, data_dir: Path, signing_key: Ed25519PrivateKey):
        self.config = config
        self.data_dir = Path(data_dir)
        self.signing_key = signing_key
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._entries: list[RegistrationEntry] = []
        self._transcript: Transcript | None = None
        self._finalizing = False
        self._replay_log()
        self._load_transcript()

    # -- paths ------------------------------------------------------------

    @property
    def entry_log_path(self) -> Path:
        return self.data_dir / ENTRY_LOG_NAME

    @property
    def transcript_path(self) -> Path:
        return self.data_dir / TRANSCRIPT_NAME

    @property
    def evaluating_marker_path(self) -> Path:
        return self.data_dir / EVALUATING_MARKER_NAME

    # -- persistence ------------------------------------------------------

    def _replay_log(self) -> None:
        if not self.entry_log_path.exists():
            return
        with self.entry_log_path.open("rb") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                entry = RegistrationEntry(
                    index=int(obj["index"]),
                    x_u=base64.b64decode(obj["x_u"]),
                    received_at=int(obj["received_at"]),
                )
                if entry.index != len(self._entries):
                    raise ValueError(
                        f"entry log corrupt: index {entry.index} at position {len(self._entries)}"
                    )
                self._entries.append(entry)

    def _append_entry(self, entry: RegistrationEntry) -> None:
        line = json.dumps(
            {
                "index": entry.index,
                "x_u": base64.b64encode(entry.x_u).decode(),
                "received_at": entry.received_at,
            },
            separators=(",", ":"),
        )
        with self.entry_log_path.open("ab") as fh:
            fh.write(line.encode() + b"\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _load_transcript(self) -> None:
        if self.transcript_path.exists():
            self._transcript = Transcript.from_json_bytes(self.transcript_path.read_bytes())

    # -- introspection ----------------------------------------------------

    @property
    def entries(self) -> list[RegistrationEntry]:
        return list(self._entries)

    @property
    def entry_count(self) -> int:
        return len(self._entries)

    def transcript(self) -> Transcript | None:
        # lazy re-read so an externally run finalize becomes visible
        if self._transcript is None:
            self._load_transcript()
        return self._transcript

    def transcript_bytes(self) -> bytes | None:
        if self.transcript() is None:
            return None
        return self.transcript_path.read_bytes()

    def phase(self, now: int | None = None) -> str:
        now = int(time.time()) if now is None else now
        if self.transcript() is not None:
            return "published"
        if self._finalizing or self.evaluating_marker_path.exists():
            return "evaluating"
        if now < self.config.window_open:
            return "pending"
        if now < self.config.window_close:
            return "registration"
        return "closed"

    def audit_path(self, index: int) -> merkle.MerkleAuditPath:
        return merkle.audit_path([e.x_u for e in self._entries], index)

    # -- phase 1: registration --------------------------------------------

    def register(self, x_u: bytes, now: int | None = None) -> Receipt:
        now = int(time.time()) if now is None else now
        if len(x_u) > merkle.MAX_ENTRY_BYTES:
            raise OversizedEntry(
                f"entry of {len(x_u)} bytes exceeds the {merkle.MAX_ENTRY_BYTES}-byte cap"
            )
        with self._lock:
            if self._transcript is not None or self._finalizing:
                raise WindowClosed("sortition already finalized")
            if now < self.config.window_open:
                raise WindowClosed("registration window not yet open")
            if now >= self.config.window_close:
                raise WindowClosed("registration window has closed")
            entry = RegistrationEntry(index=len(self._entries), x_u=bytes(x_u), received_at=now)
            self._append_entry(entry)  # durable before the receipt goes out
            self._entries.append(entry)
        receipt = Receipt(
            sortition_id=self.config.sortition_id,
            leaf_index=entry.index,
            entry_hash=merkle.leaf_hash(entry.x_u),
            received_at=entry.received_at,
            signature=b"",
        )
        return replace(receipt, signature=sign(self.signing_key, receipt.signed_bytes()))

    # -- phase 2: result generation ----------------------------------------

    def finalize(
        self,
        now: int | None = None,
        progress: Callable[[int, int], None] | None = None,
        should_cancel: Callable[[], bool] | None = None,
    ) -> Transcript:
        now = int(time.time()) if now is None else now
        existing = self.transcript()
        if existing is not None:
            return existing
        with self._lock:
            if now < self.config.window_close:
                raise WindowStillOpen("registration window is still open")
            if not self._entries:
                raise EmptyRegistry("cannot finalize with zero registrations")
            if len(self._entries) < self.config.winner_count:
                raise ValueError(
                    f"cannot select {self.config.winner_count} winners "
                    f"from {len(self._entries)} entries"
                )
            if self._finalizing:
                raise RuntimeError("finalize already in progress")
            self._finalizing = True
            entries = list(self._entries)
        try:
            self.evaluating_marker_path.write_text(
                json.dumps({"started_at": now, "n": len(entries)}) + "\n"
            )
            transcript = self._generate(entries, progress, should_cancel)
            tmp = self.transcript_path.with_suffix(".tmp")
            tmp.write_bytes(transcript.to_json_bytes())
            os.replace(tmp, self.transcript_path)
            self._transcript = transcript
            return transcript
        finally:
            self._finalizing = False
            self.evaluating_marker_path.unlink(missing_ok=True)

    def _generate(self, entries, progress, should_cancel) -> Transcript:
        cfg = self.config
        x_root = merkle.root([e.x_u for e in entries])
        d, d_iterations = vdf.derive_discriminant(x_root, cfg.discriminant_bits)
        params = vdf.VdfParams(
            d=d, T=cfg.T, discriminant_bits=cfg.discriminant_bits, d_iterations=d_iterations
        )
        output = vdf.evaluate(params, progress=progress, should_cancel=should_cancel)
        winners = select_winners(output.y, len(entries), cfg.winner_count)
        unsigned = Transcript(
            sortition_id=cfg.sortition_id,
            T=cfg.T,
            discriminant_bits=cfg.discriminant_bits,
            k=cfg.winner_count,
            n=len(entries),
            x_root=x_root,
            d_magnitude=(-d).to_bytes(((-d).bit_length() + 7) // 8, "big"),
            d_iterations=d_iterations,
            y=output.y.encode(),
            proof=output.proof.encode(),
            challenge_iterations=output.challenge_iterations,
            winners=tuple(winners),
            signature=b"",
            server_pubkey=public_key_bytes(self.signing_key),
        )
        return replace(unsigned, signature=sign(self.signing_key, unsigned.signed_bytes()))


# -- phase 3: verification ---------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class TranscriptReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)


def verify_transcript(t: Transcript, strict: bool = False) -> TranscriptReport:
    """Re-check a published transcript: signature, discriminant derivation,
    delay-function proof, and winner selection.  Runtime does not grow with
    the delay parameter or the number of registrants.

    strict=True reruns both hash-to-prime searches in full instead of
    trusting the published iteration hints.
    """
    checks: list[CheckResult] = []

    sig_ok = verify_signature(t.server_pubkey, t.signature, t.signed_bytes())
    checks.append(CheckResult("signature", sig_ok, "" if sig_ok else "signature does not verify"))

    d_ok, d_detail = _check_discriminant(t, strict)
    checks.append(CheckResult("discriminant", d_ok, d_detail))

    y = proof = None
    try:
        y = QuadraticForm.decode(t.y, t.d)
        proof = QuadraticForm.decode(t.proof, t.d)
    except (DecodeError, ValueError) as exc:
        checks.append(CheckResult("vdf", False, f"bad-encoding: {exc}"))
        checks.append(CheckResult("winners", False, "output not decodable"))
        return TranscriptReport(tuple(checks))

    try:
        params = vdf.VdfParams(
            d=t.d, T=t.T, discriminant_bits=t.discriminant_bits, d_iterations=t.d_iterations
        )
        output = vdf.VdfOutput(
            y=y, proof=proof, d_iterations=t.d_iterations,
            challenge_iterations=t.challenge_iterations,
        )
        result = vdf.verify(params, output, strict=strict)
        checks.append(CheckResult("vdf", result.ok, result.reason or ""))
    except ValueError as exc:
        checks.append(CheckResult("vdf", False, f"bad-encoding: {exc}"))

    try:
        expected = select_winners(y, t.n, t.k)
        w_ok = list(t.winners) == expected
        checks.append(CheckResult("winners", w_ok, "" if w_ok else "winner set does not match output"))
    except ValueError as exc:
        checks.append(CheckResult("winners", False, str(exc)))

    return TranscriptReport(tuple(checks))


def _check_discriminant(t: Transcript, strict: bool) -> tuple[bool, str]:
    magnitude = int.from_bytes(t.d_magnitude, "big")
    params = HashPrimeParams(bits=t.discriminant_bits, congruence=vdf.DISCRIMINANT_CONGRUENCE)
    seed = vdf.DISCRIMINANT_TAG + t.x_root
    try:
        if strict:
            result = hash_to_prime(seed, params)
            if result.iterations != t.d_iterations:
                return False, f"hint-invalid: true iteration count is {result.iterations}"
            recomputed = result.prime
        else:
            recomputed = hash_to_prime_with_hint(seed, params, t.d_iterations)
    except InvalidHint as exc:
        return False, f"hint-invalid: {exc}"
    except ValueError as exc:
        return False, str(exc)
    if recomputed != magnitude:
        return False, "derived discriminant does not match transcript"
    return True, ""


@dataclass(frozen=True)
class InclusionResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_receipt_inclusion(
    receipt: Receipt, x_u: bytes, path: merkle.MerkleAuditPath, t: Transcript
) -> InclusionResult:
    """Check that a signed receipt's entry really sits in the published tree."""
    if receipt.sortition_id != t.sortition_id:
        return InclusionResult(False, "receipt is for a different sortition")
    if not verify_signature(t.server_pubkey, receipt.signature, receipt.signed_bytes()):
        return InclusionResult(False, "receipt signature does not verify")
    if merkle.leaf_hash(x_u) != receipt.entry_hash:
        return InclusionResult(False, "entry does not match the receipt's hash")
    if path.leaf_index != receipt.leaf_index:
        return InclusionResult(False, "audit path is for a different leaf index")
    if path.tree_size != t.n:
        return InclusionResult(False, "audit path tree size does not match transcript")
    if not merkle.verify_inclusion(x_u, path, t.x_root):
        return InclusionResult(False, "audit path does not reconstruct the root")
    return InclusionResult(True)


# -- operational helper -------------------------------------------------------


def measure_step_rate(discriminant_bits: int = 1024, min_burst: float = 0.25) -> float:
    """Evaluation-pipeline steps per second at this discriminant size.

    One step is what evaluate() pays per unit of T: an output-chain squaring
    plus a proof-accumulator step (squaring and conditional base multiply).
    """
    d, _ = vdf.derive_discriminant(b"calibration", discriminant_bits)
    g = generator(d)
    l, _ = vdf.challenge(d, g, 0)
    y = g
    pi = identity(d)
    r = 1
    steps = 0
    start = time.monotonic()
    while True:
        for _ in range(64):
            y = y.square()
            b, r = divmod(2 * r, l)
            pi = pi.square()
            if b:
                pi = pi.compose(g)
        steps += 64
        elapsed = time.monotonic() - start
        if elapsed >= min_burst:
            return steps / elapsed


def calibrate(target_duration: float, discriminant_bits: int = 1024, rate: float | None = None) -> int:
    """Recommend T so that a full evaluation takes about target_duration seconds,
    with a 10% safety margin over the measured step rate."""
    if target_duration <= 0:
        raise ValueError("target duration must be positive")
    if rate is None:
        rate = measure_step_rate(discriminant_bits)
    return math.ceil(rate * target_duration * 1.1)
