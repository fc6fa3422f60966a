/**
 * Transcript parsing and offline verification against the published wire
 * format: canonical compact JSON with fixed field order, Ed25519-signed with
 * the signature field omitted.  Check structure and verdicts mirror the
 * native verifier exactly.
 */
import { QuadraticForm } from "./classgroup.js";
import { ascii, bytesToBigInt, bytesToHex, concat, hexToBytes } from "./encoding.js";
import { HashPrimeParams, InvalidHint, hashToPrime, hashToPrimeWithHint } from "./hashprime.js";
import { DISCRIMINANT_CONGRUENCE, DISCRIMINANT_TAG, verify as vdfVerify } from "./vdf.js";
import { selectWinners } from "./winners.js";

export const TRANSCRIPT_VERSION = 1;

export interface Transcript {
  version: number;
  sortitionId: string;
  T: number;
  discriminantBits: number;
  k: number;
  n: number;
  xRoot: Uint8Array;
  dMagnitude: Uint8Array;
  dIterations: number;
  y: Uint8Array;
  proof: Uint8Array;
  challengeIterations: number;
  winners: number[];
  signature: Uint8Array;
  serverPubkey: Uint8Array;
}

export interface CheckResult {
  name: "signature" | "discriminant" | "vdf" | "winners";
  passed: boolean;
  detail: string;
}

export interface TranscriptReport {
  ok: boolean;
  checks: CheckResult[];
}

function asInt(obj: Record<string, unknown>, field: string): number {
  const v = obj[field];
  if (typeof v !== "number" || !Number.isInteger(v)) {
    throw new Error(`transcript field ${field} must be an integer`);
  }
  return v;
}

function asHex(obj: Record<string, unknown>, field: string): Uint8Array {
  const v = obj[field];
  if (typeof v !== "string") throw new Error(`transcript field ${field} must be a hex string`);
  return hexToBytes(v);
}

export function parseTranscript(data: string | Uint8Array): Transcript {
  const text = typeof data === "string" ? data : new TextDecoder().decode(data);
  const obj = JSON.parse(text) as Record<string, unknown>;
  if (typeof obj !== "object" || obj === null) throw new Error("transcript must be a JSON object");
  if (obj.version !== TRANSCRIPT_VERSION) {
    throw new Error(`unsupported transcript version ${String(obj.version)}`);
  }
  const winners = obj.winners;
  if (!Array.isArray(winners) || !winners.every((w) => Number.isInteger(w))) {
    throw new Error("winners must be a list of integers");
  }
  const t: Transcript = {
    version: TRANSCRIPT_VERSION,
    sortitionId: String(obj.sortition_id),
    T: asInt(obj, "T"),
    discriminantBits: asInt(obj, "discriminant_bits"),
    k: asInt(obj, "k"),
    n: asInt(obj, "n"),
    xRoot: asHex(obj, "x_root"),
    dMagnitude: asHex(obj, "d_magnitude"),
    dIterations: asInt(obj, "d_iterations"),
    y: asHex(obj, "y"),
    proof: asHex(obj, "proof"),
    challengeIterations: asInt(obj, "challenge_iterations"),
    winners: winners as number[],
    signature: asHex(obj, "signature"),
    serverPubkey: asHex(obj, "server_pubkey"),
  };
  if (t.xRoot.length !== 32) throw new Error("x_root must be 32 bytes");
  if (t.dMagnitude.length === 0 || t.dMagnitude[0] === 0) {
    throw new Error("d_magnitude must be minimal big-endian bytes");
  }
  return t;
}

export function discriminant(t: Transcript): bigint {
  return -bytesToBigInt(t.dMagnitude);
}

/** Canonical serialization with the signature omitted: the signed bytes. */
export function signedBytes(t: Transcript): Uint8Array {
  const obj = {
    version: t.version,
    sortition_id: t.sortitionId,
    T: t.T,
    discriminant_bits: t.discriminantBits,
    k: t.k,
    n: t.n,
    x_root: bytesToHex(t.xRoot),
    d_magnitude: bytesToHex(t.dMagnitude),
    d_iterations: t.dIterations,
    y: bytesToHex(t.y),
    proof: bytesToHex(t.proof),
    challenge_iterations: t.challengeIterations,
    winners: t.winners,
    server_pubkey: bytesToHex(t.serverPubkey),
  };
  return ascii(JSON.stringify(obj));
}

async function ed25519Verify(
  publicKey: Uint8Array,
  signature: Uint8Array,
  message: Uint8Array,
): Promise<boolean> {
  if (publicKey.length !== 32 || signature.length !== 64) return false;
  const subtle = globalThis.crypto?.subtle;
  if (!subtle) throw new Error("WebCrypto is unavailable in this context");
  try {
    const key = await subtle.importKey("raw", publicKey as BufferSource, "Ed25519", false, [
      "verify",
    ]);
    return await subtle.verify("Ed25519", key, signature as BufferSource, message as BufferSource);
  } catch {
    return false;
  }
}

function checkDiscriminantDerivation(t: Transcript, strict: boolean): CheckResult {
  const magnitude = bytesToBigInt(t.dMagnitude);
  const params: HashPrimeParams = {
    bits: t.discriminantBits,
    congruence: DISCRIMINANT_CONGRUENCE,
  };
  const seed = concat(DISCRIMINANT_TAG, t.xRoot);
  let recomputed: bigint;
  try {
    if (strict) {
      const result = hashToPrime(seed, params);
      if (result.iterations !== t.dIterations) {
        return {
          name: "discriminant",
          passed: false,
          detail: `hint-invalid: true iteration count is ${result.iterations}`,
        };
      }
      recomputed = result.prime;
    } else {
      recomputed = hashToPrimeWithHint(seed, params, t.dIterations);
    }
  } catch (err) {
    const detail = err instanceof InvalidHint ? `hint-invalid: ${err.message}` : String(err);
    return { name: "discriminant", passed: false, detail };
  }
  if (recomputed !== magnitude) {
    return {
      name: "discriminant",
      passed: false,
      detail: "derived discriminant does not match transcript",
    };
  }
  return { name: "discriminant", passed: true, detail: "" };
}

export async function verifyTranscript(t: Transcript, strict = false): Promise<TranscriptReport> {
  const checks: CheckResult[] = [];

  const sigOk = await ed25519Verify(t.serverPubkey, t.signature, signedBytes(t));
  checks.push({
    name: "signature",
    passed: sigOk,
    detail: sigOk ? "" : "signature does not verify",
  });

  checks.push(checkDiscriminantDerivation(t, strict));

  const d = discriminant(t);
  let y: QuadraticForm | null = null;
  let proof: QuadraticForm | null = null;
  try {
    y = QuadraticForm.decode(t.y, d);
    proof = QuadraticForm.decode(t.proof, d);
  } catch (err) {
    checks.push({ name: "vdf", passed: false, detail: `bad-encoding: ${err}` });
    checks.push({ name: "winners", passed: false, detail: "output not decodable" });
    return { ok: false, checks };
  }

  try {
    const result = vdfVerify(d, t.T, y, proof, t.challengeIterations, strict);
    checks.push({ name: "vdf", passed: result.ok, detail: result.reason ?? "" });
  } catch (err) {
    checks.push({ name: "vdf", passed: false, detail: `bad-encoding: ${err}` });
  }

  try {
    const expected = selectWinners(y, t.n, t.k);
    const match =
      expected.length === t.winners.length && expected.every((w, i) => w === t.winners[i]);
    checks.push({
      name: "winners",
      passed: match,
      detail: match ? "" : "winner set does not match output",
    });
  } catch (err) {
    checks.push({ name: "winners", passed: false, detail: String(err) });
  }

  return { ok: checks.every((c) => c.passed), checks };
}
