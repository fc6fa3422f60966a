"""Operator and verifier command line.

Exit codes: 0 success / result valid, 1 result invalid, 2 usage or IO error.
"""
from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click
import httpx

from . import service as service_mod
from .hashprime import HashPrimeParams, SearchStats, hash_to_prime, hash_to_prime_with_hint
from .merkle import MerkleAuditPath
from .sortition import (
    Receipt,
    Transcript,
    calibrate as calibrate_t,
    verify_receipt_inclusion,
    verify_transcript,
)

BENCH_SAMPLE_PATTERN = "sample-%08d"


def _fail_io(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _read_entry(spec: str) -> bytes:
    path = Path(spec)
    if path.exists():
        return path.read_bytes()
    try:
        return bytes.fromhex(spec)
    except ValueError:
        _fail_io(f"entry {spec!r} is neither a readable file nor a hex string")


def _load_transcript(path: str) -> Transcript:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        _fail_io(str(exc))
    try:
        return Transcript.from_json_bytes(data)
    except (ValueError, KeyError) as exc:
        click.echo(f"transcript invalid: {exc}", err=True)
        sys.exit(1)


@click.group()
def main():
    """Verifiable sortition: registration, evaluation, and public verification."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--bind", default=None, help="host:port (overrides env and config)")
@click.option("--data-dir", default=None)
@click.option("--key-path", default=None)
def serve(config_path, bind, data_dir, key_path):
    """Run the registration/verification HTTP service."""
    cfg = service_mod.ServiceConfig.load(Path(config_path), bind, data_dir, key_path)
    service_mod.serve(cfg)


@main.command()
@click.option("--url", required=True, help="service base URL, e.g. http://127.0.0.1:8080")
@click.option("--entry", required=True, help="entry file path or hex string")
@click.option("--out", default=None, type=click.Path(), help="write the receipt JSON here")
def register(url, entry, out):
    """Submit an entry and store the signed receipt."""
    x_u = _read_entry(entry)
    import base64

    try:
        resp = httpx.post(f"{url}/api/v1/register", json={"x": base64.b64encode(x_u).decode()})
    except httpx.HTTPError as exc:
        _fail_io(f"request failed: {exc}")
    if resp.status_code != 200:
        click.echo(f"registration rejected ({resp.status_code}): {resp.text}", err=True)
        sys.exit(1)
    receipt_json = json.dumps(resp.json(), indent=2)
    if out:
        Path(out).write_text(receipt_json + "\n")
    click.echo(receipt_json)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--bind", default=None)
@click.option("--data-dir", default=None)
@click.option("--key-path", default=None)
def finalize(config_path, bind, data_dir, key_path):
    """Close the window, run the evaluation, publish the transcript."""
    cfg = service_mod.ServiceConfig.load(Path(config_path), bind, data_dir, key_path)
    state = service_mod.open_sortition(cfg)
    last = -1

    def progress(done, total):
        nonlocal last
        pct = done * 100 // total
        if pct >= last + 5:
            last = pct
            click.echo(f"evaluating: {pct}% ({done}/{total})")

    try:
        transcript = state.finalize(progress=progress)
    except ValueError as exc:
        click.echo(f"cannot finalize: {exc}", err=True)
        sys.exit(1)
    click.echo(f"transcript published: {state.transcript_path}")
    click.echo(f"winners: {list(transcript.winners)}")


@main.command()
@click.option("--transcript", "transcript_path", required=True, type=click.Path())
@click.option("--strict", is_flag=True, help="recompute full prime searches, ignore hints")
def verify(transcript_path, strict):
    """Verify a published transcript; exit 0 iff every check passes."""
    t = _load_transcript(transcript_path)
    report = verify_transcript(t, strict=strict)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        detail = f"  ({check.detail})" if check.detail else ""
        click.echo(f"{check.name:<13} {status}{detail}")
    if report.ok:
        click.echo("transcript VALID")
        sys.exit(0)
    click.echo("transcript INVALID")
    sys.exit(1)


@main.command(name="verify-inclusion")
@click.option("--transcript", "transcript_path", required=True, type=click.Path())
@click.option("--receipt", "receipt_path", required=True, type=click.Path())
@click.option("--entry", required=True, help="entry file path or hex string")
@click.option("--url", required=True)
def verify_inclusion(transcript_path, receipt_path, entry, url):
    """Fetch the audit path for a receipt and check inclusion under the root."""
    t = _load_transcript(transcript_path)
    try:
        receipt = Receipt.from_json(json.loads(Path(receipt_path).read_text()))
    except OSError as exc:
        _fail_io(str(exc))
    except (ValueError, KeyError) as exc:
        click.echo(f"receipt invalid: {exc}", err=True)
        sys.exit(1)
    x_u = _read_entry(entry)
    try:
        resp = httpx.get(f"{url}/api/v1/proof/{receipt.leaf_index}")
    except httpx.HTTPError as exc:
        _fail_io(f"request failed: {exc}")
    if resp.status_code != 200:
        click.echo(f"audit path unavailable ({resp.status_code}): {resp.text}", err=True)
        sys.exit(1)
    path = MerkleAuditPath.from_json(resp.json())
    result = verify_receipt_inclusion(receipt, x_u, path, t)
    if result.ok:
        click.echo(f"entry included at index {receipt.leaf_index}")
        sys.exit(0)
    click.echo(f"inclusion INVALID: {result.reason}")
    sys.exit(1)


@main.command()
@click.option("--duration", required=True, type=float, help="target evaluation seconds")
@click.option("--bits", default=1024, type=int, help="discriminant size")
def calibrate(duration, bits):
    """Print a recommended T for the given evaluation duration."""
    try:
        click.echo(str(calibrate_t(duration, bits)))
    except ValueError as exc:
        _fail_io(str(exc))


@main.command(name="bench-hprime")
@click.option("--samples", default=1024, type=int)
@click.option("--bits", default=1024, type=int)
@click.option("--hint", is_flag=True, help="time the iteration-hint fast path")
@click.option("--out", default=None, type=click.Path(), help="write CSV here instead of stdout")
def bench_hprime(samples, bits, hint, out):
    """Time the hash-to-prime search over generated sample strings.

    Emits one CSV row per sample: sample_index, iterations, elapsed_ms,
    primality_tests.  With --hint, candidate recomputation is hash-only and
    exactly one primality test runs per sample.
    """
    try:
        params = HashPrimeParams(bits=bits, congruence=(7, 8))
    except ValueError as exc:
        _fail_io(str(exc))
    sink = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(sink)
        writer.writerow(["sample_index", "iterations", "elapsed_ms", "primality_tests"])
        for idx in range(samples):
            seed = (BENCH_SAMPLE_PATTERN % idx).encode()
            stats = SearchStats()
            if hint:
                iterations = hash_to_prime(seed, params).iterations
                start = time.monotonic()
                hash_to_prime_with_hint(seed, params, iterations, stats)
                elapsed = time.monotonic() - start
            else:
                start = time.monotonic()
                iterations = hash_to_prime(seed, params, stats).iterations
                elapsed = time.monotonic() - start
            writer.writerow([idx, iterations, f"{elapsed * 1000:.3f}", stats.primality_tests])
    finally:
        if out:
            sink.close()


if __name__ == "__main__":
    main()
