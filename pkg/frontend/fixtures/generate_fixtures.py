#!/usr/bin/env python3
"""Regenerate the shared native/browser fixture set.

Runs the native pipeline to produce five transcripts (three honest, two
tampered), records the native verifier's per-check verdicts for both modes
in manifest.json, and captures the native hash-to-prime iteration counts for
the benchmark sample scheme.  The browser core must reproduce every verdict
and every iteration count bit-for-bit.

Usage: python3 generate_fixtures.py   (writes into this directory)
"""
import dataclasses
import json
import pathlib
import tempfile

from verisort.hashprime import HashPrimeParams, SearchStats, hash_to_prime
from verisort.signing import generate_key, public_key_bytes, sign
from verisort.sortition import Sortition, SortitionConfig, Transcript, verify_transcript

HERE = pathlib.Path(__file__).parent
NOW = 1_700_000_000
BENCH_SAMPLES = 64
BENCH_BITS = 256


def build(sortition_id, n, t, k, bits, seed_prefix):
    config = SortitionConfig(
        sortition_id=sortition_id,
        window_open=NOW,
        window_close=NOW + 100,
        T=t,
        winner_count=k,
        discriminant_bits=bits,
    )
    with tempfile.TemporaryDirectory() as tmp:
        machine = Sortition(config, pathlib.Path(tmp), generate_key())
        for i in range(n):
            machine.register(f"{seed_prefix}-{i}".encode(), now=NOW + 1 + i)
        machine.finalize(now=NOW + 101)
        return machine.transcript(), machine.signing_key


def resign(t, key):
    t = dataclasses.replace(t, server_pubkey=public_key_bytes(key), signature=b"")
    return dataclasses.replace(t, signature=sign(key, t.signed_bytes()))


def verdicts(t):
    out = {}
    for mode, strict in (("default", False), ("strict", True)):
        report = verify_transcript(t, strict=strict)
        out[mode] = {
            "ok": report.ok,
            "checks": {c.name: c.passed for c in report.checks},
        }
    return out


def main():
    manifest = []

    honest = [
        ("honest-1", *build("fixture-honest-1", 12, 96, 3, 128, "alpha")),
        ("honest-2", *build("fixture-honest-2", 5, 300, 1, 128, "beta")),
        ("honest-3", *build("fixture-honest-3", 40, 512, 7, 256, "gamma")),
    ]

    t1, key1 = honest[0][1], honest[0][2]
    swapped = list(t1.winners)
    replacement = next(i for i in range(t1.n) if i not in swapped)
    tampered_winners = resign(
        dataclasses.replace(t1, winners=tuple(sorted([replacement] + swapped[1:]))), key1
    )

    t3 = honest[2][1]
    y_hex = t3.y.hex()
    flipped = "0" if y_hex[8] != "0" else "f"
    tampered_y = dataclasses.replace(t3, y=bytes.fromhex(y_hex[:8] + flipped + y_hex[9:]))

    cases = [(name, t) for name, t, _ in honest] + [
        ("tampered-winners", tampered_winners),
        ("tampered-y", tampered_y),
    ]
    for name, transcript in cases:
        path = HERE / f"{name}.json"
        path.write_bytes(transcript.to_json_bytes())
        manifest.append({"file": path.name, "verdicts": verdicts(transcript)})

    params = HashPrimeParams(bits=BENCH_BITS, congruence=(7, 8))
    lines = ["sample_index,iterations,primality_tests"]
    for idx in range(BENCH_SAMPLES):
        stats = SearchStats()
        result = hash_to_prime(b"sample-%08d" % idx, params, stats)
        lines.append(f"{idx},{result.iterations},{stats.primality_tests}")
    (HERE / "bench-iterations.csv").write_text("\n".join(lines) + "\n")

    (HERE / "manifest.json").write_text(
        json.dumps(
            {
                "transcripts": manifest,
                "bench": {"samples": BENCH_SAMPLES, "bits": BENCH_BITS, "congruence": [7, 8]},
            },
            indent=2,
        )
        + "\n"
    )
    print(f"wrote {len(cases)} transcripts + bench CSV + manifest into {HERE}")


if __name__ == "__main__":
    main()
