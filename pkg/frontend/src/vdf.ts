/** Delay-function verification (the browser never evaluates, only checks). */
import { QuadraticForm, generator } from "./classgroup.js";
import { ascii, concat, encodeInt, le64 } from "./encoding.js";
import {
  HashPrimeParams,
  InvalidHint,
  hashToPrime,
  hashToPrimeWithHint,
  modPow,
} from "./hashprime.js";

export const DISCRIMINANT_TAG = ascii("discr");
export const CHALLENGE_TAG = ascii("chal");
export const CHALLENGE_BITS = 128;
export const DISCRIMINANT_CONGRUENCE: [bigint, bigint] = [7n, 8n];

export interface VerifyResult {
  ok: boolean;
  reason?: string; // bad-encoding | hint-invalid | equation-failed
}

export function challengeSeed(d: bigint, y: QuadraticForm, T: number): Uint8Array {
  const g = generator(d);
  return concat(CHALLENGE_TAG, encodeInt(d), g.encode(), y.encode(), le64(T));
}

export function challenge(d: bigint, y: QuadraticForm, T: number): [bigint, number] {
  const result = hashToPrime(challengeSeed(d, y, T), { bits: CHALLENGE_BITS });
  return [result.prime, result.iterations];
}

export function challengeWithHint(d: bigint, y: QuadraticForm, T: number, hint: number): bigint {
  return hashToPrimeWithHint(challengeSeed(d, y, T), { bits: CHALLENGE_BITS }, hint);
}

export function verify(
  d: bigint,
  T: number,
  y: QuadraticForm,
  proof: QuadraticForm,
  challengeIterations: number,
  strict = false,
): VerifyResult {
  let g: QuadraticForm;
  try {
    g = generator(d);
  } catch {
    return { ok: false, reason: "bad-encoding" };
  }
  for (const form of [y, proof]) {
    if (form.discriminant() !== d || !form.isReduced()) {
      return { ok: false, reason: "bad-encoding" };
    }
  }
  let l: bigint;
  try {
    if (strict) {
      const [prime, iterations] = challenge(d, y, T);
      if (iterations !== challengeIterations) return { ok: false, reason: "hint-invalid" };
      l = prime;
    } else {
      l = challengeWithHint(d, y, T, challengeIterations);
    }
  } catch (err) {
    if (err instanceof InvalidHint || err instanceof RangeError) {
      return { ok: false, reason: "hint-invalid" };
    }
    throw err;
  }
  const r = modPow(2n, BigInt(T), l);
  const lhs = proof.pow(l).compose(g.pow(r));
  if (!lhs.equals(y)) return { ok: false, reason: "equation-failed" };
  return { ok: true };
}
