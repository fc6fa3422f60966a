"""Delay-function evaluation and fast verification over the class group.

evaluate() squares a fixed base T times in sequence (that is the delay) and
attaches a proof: with challenge prime l derived Fiat-Shamir style from the
output, the proof is g^floor(2^T / l), computed alongside by online long
division so only O(1) group elements are ever held.  verify() checks
proof^l * g^(2^T mod l) == y, whose cost does not grow with T.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Callable

from .classgroup import QuadraticForm, encode_int, generator, identity
from .hashprime import (
    HashPrimeParams,
    InvalidHint,
    SearchStats,
    hash_to_prime,
    hash_to_prime_with_hint,
)

DISCRIMINANT_TAG = b"discr"
CHALLENGE_TAG = b"chal"
CHALLENGE_BITS = 128
DISCRIMINANT_CONGRUENCE = (7, 8)  # |d| = 7 mod 8 makes d = -|d| = 1 mod 8

_PROGRESS_STEP = 1024


class EvaluationCancelled(RuntimeError):
    """Evaluation was stopped by the caller's cancellation signal."""


@dataclass(frozen=True)
class VdfParams:
    d: int  # negative prime discriminant
    T: int  # number of sequential squarings
    discriminant_bits: int = 1024
    d_iterations: int = 1  # hash-to-prime iteration hint for |d|

    def __post_init__(self):
        if self.T < 0:
            raise ValueError("T must be nonnegative")
        if self.d >= 0 or self.d % 8 != 1:
            raise ValueError(f"discriminant must be negative and 1 mod 8, got {self.d}")


@dataclass(frozen=True)
class VdfOutput:
    y: QuadraticForm
    proof: QuadraticForm
    d_iterations: int
    challenge_iterations: int


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str | None = None  # bad-encoding | hint-invalid | equation-failed

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class EvalStats:
    """Instrumentation: squarings is the length of the sequential output chain."""

    squarings: int = 0
    proof_steps: int = 0


def derive_discriminant(seed: bytes, bits: int, stats: SearchStats | None = None) -> tuple[int, int]:
    """Hash seed to a negative prime discriminant; returns (d, iteration hint)."""
    if not seed:
        raise ValueError("discriminant seed must be nonempty")
    params = HashPrimeParams(bits=bits, congruence=DISCRIMINANT_CONGRUENCE)
    result = hash_to_prime(DISCRIMINANT_TAG + seed, params, stats)
    return -result.prime, result.iterations


def params_from_seed(seed: bytes, T: int, bits: int = 1024) -> VdfParams:
    d, iterations = derive_discriminant(seed, bits)
    return VdfParams(d=d, T=T, discriminant_bits=bits, d_iterations=iterations)


def challenge_seed(d: int, y: QuadraticForm, T: int) -> bytes:
    g = generator(d)
    return CHALLENGE_TAG + encode_int(d) + g.encode() + y.encode() + struct.pack("<Q", T)


def challenge(d: int, y: QuadraticForm, T: int, stats: SearchStats | None = None) -> tuple[int, int]:
    """Fiat-Shamir challenge prime; returns (l, iteration hint)."""
    result = hash_to_prime(challenge_seed(d, y, T), HashPrimeParams(bits=CHALLENGE_BITS), stats)
    return result.prime, result.iterations


def challenge_with_hint(
    d: int, y: QuadraticForm, T: int, hint: int, stats: SearchStats | None = None
) -> int:
    return hash_to_prime_with_hint(
        challenge_seed(d, y, T), HashPrimeParams(bits=CHALLENGE_BITS), hint, stats
    )


def evaluate(
    params: VdfParams,
    progress: Callable[[int, int], None] | None = None,
    should_cancel: Callable[[], bool] | None = None,
    stats: EvalStats | None = None,
) -> VdfOutput:
    """Run the T sequential squarings and produce (y, proof).

    progress(done, total) fires every few thousand steps; should_cancel() is
    polled at the same cadence and raises EvaluationCancelled when true.
    """
    d, T = params.d, params.T
    g = generator(d)

    y = g
    for step in range(T):
        y = y.square()
        if stats is not None:
            stats.squarings += 1
        if (step + 1) % _PROGRESS_STEP == 0 or step + 1 == T:
            if should_cancel is not None and should_cancel():
                raise EvaluationCancelled(f"cancelled after {step + 1} of {T} squarings")
            if progress is not None:
                progress(step + 1, 2 * T)

    l, challenge_iterations = challenge(d, y, T)

    # proof = g^floor(2^T / l) by online long division: shift one bit of the
    # dividend in per step, emitting quotient bit b and keeping remainder r.
    proof = identity(d)
    r = 1
    for step in range(T):
        b, r = divmod(2 * r, l)
        proof = proof.square()
        if b:
            proof = proof.compose(g)
        if stats is not None:
            stats.proof_steps += 1
        if (step + 1) % _PROGRESS_STEP == 0 or step + 1 == T:
            if should_cancel is not None and should_cancel():
                raise EvaluationCancelled(f"cancelled in proof pass, step {step + 1} of {T}")
            if progress is not None:
                progress(T + step + 1, 2 * T)

    return VdfOutput(
        y=y,
        proof=proof,
        d_iterations=params.d_iterations,
        challenge_iterations=challenge_iterations,
    )


def verify(params: VdfParams, output: VdfOutput, strict: bool = False) -> VerifyResult:
    """Check the proof without redoing the squarings; cost is independent of T.

    strict=True ignores the published challenge hint and reruns the full
    prime search, rejecting a hint that is not the true iteration count.
    """
    d, T = params.d, params.T
    try:
        g = generator(d)
    except ValueError:
        return VerifyResult(False, "bad-encoding")
    y, proof = output.y, output.proof
    for form in (y, proof):
        if form.discriminant() != d or not form.is_reduced():
            return VerifyResult(False, "bad-encoding")

    try:
        if strict:
            l, iterations = challenge(d, y, T)
            if iterations != output.challenge_iterations:
                return VerifyResult(False, "hint-invalid")
        else:
            l = challenge_with_hint(d, y, T, output.challenge_iterations)
    except (InvalidHint, ValueError):
        return VerifyResult(False, "hint-invalid")

    r = pow(2, T, l)  # integer ops only; no group squarings proportional to T
    lhs = proof.pow(l).compose(g.pow(r))
    if lhs != y:
        return VerifyResult(False, "equation-failed")
    return VerifyResult(True)
