/**
 * Deterministic hash-to-prime, bit-identical to the native package: same
 * candidate derivation, same deterministic Miller-Rabin bases, hence the
 * same (prime, iteration count) for any seed.
 */
import { bigIntToBytes, bytesToBigInt, concat, le32, le64 } from "./encoding.js";
import { mod } from "./classgroup.js";
import { sha256 } from "./sha256.js";

export const DEFAULT_MR_ROUNDS = 50;
export const MAX_ITERATIONS = 1 << 20;

export class InvalidHint extends Error {}
export class SearchLimitExceeded extends Error {}

export interface HashPrimeParams {
  bits: number;
  congruence?: [bigint, bigint] | null; // [residue, power-of-two modulus]
  mrRounds?: number;
}

export interface HashPrimeResult {
  prime: bigint;
  iterations: number; // 1-based index of the successful candidate
}

export interface SearchStats {
  primalityTests: number;
}

export function expand(
  seed: Uint8Array,
  j: number,
  bits: number,
  congruence?: [bigint, bigint] | null,
): bigint {
  if (bits < 16) throw new RangeError(`bits must be >= 16, got ${bits}`);
  const nbytes = Math.ceil(bits / 8);
  const prefix = concat(seed, le64(j));
  const blocks: Uint8Array[] = [];
  let have = 0;
  for (let k = 0; have < nbytes; k++) {
    blocks.push(sha256(concat(prefix, Uint8Array.of(k))));
    have += 32;
  }
  const buf = concat(...blocks).subarray(0, nbytes);
  let x = bytesToBigInt(buf) >> BigInt(8 * nbytes - bits);
  x |= 1n << BigInt(bits - 1);
  if (congruence) {
    const [r, m] = congruence;
    x = (x & ~(m - 1n)) | r;
  }
  return x;
}

export function modPow(base: bigint, exponent: bigint, modulus: bigint): bigint {
  let result = 1n;
  base = mod(base, modulus);
  while (exponent > 0n) {
    if (exponent & 1n) result = (result * base) % modulus;
    exponent >>= 1n;
    if (exponent) base = (base * base) % modulus;
  }
  return result;
}

export function millerRabin(n: bigint, rounds: number = DEFAULT_MR_ROUNDS): boolean {
  if (n < 2n) throw new RangeError(`primality test needs n >= 2, got ${n}`);
  if (n === 2n || n === 3n) return true;
  if (n % 2n === 0n) return false;
  let d = n - 1n;
  let r = 0;
  while (d % 2n === 0n) {
    d >>= 1n;
    r += 1;
  }
  const nBytes = bigIntToBytes(n);
  for (let t = 0; t < rounds; t++) {
    const h = sha256(concat(nBytes, le32(t)));
    const a = 2n + mod(bytesToBigInt(h), n - 3n);
    let x = modPow(a, d, n);
    if (x === 1n || x === n - 1n) continue;
    let witness = true;
    for (let i = 0; i < r - 1; i++) {
      x = (x * x) % n;
      if (x === n - 1n) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

export function hashToPrime(
  seed: Uint8Array,
  params: HashPrimeParams,
  stats?: SearchStats,
): HashPrimeResult {
  const rounds = params.mrRounds ?? DEFAULT_MR_ROUNDS;
  for (let j = 0; j < MAX_ITERATIONS; j++) {
    const cand = expand(seed, j, params.bits, params.congruence);
    if (stats) stats.primalityTests += 1;
    if (millerRabin(cand, rounds)) return { prime: cand, iterations: j + 1 };
  }
  throw new SearchLimitExceeded(`no prime within ${MAX_ITERATIONS} candidates`);
}

export function hashToPrimeWithHint(
  seed: Uint8Array,
  params: HashPrimeParams,
  hint: number,
  stats?: SearchStats,
): bigint {
  if (hint < 1) throw new RangeError(`iteration hint must be >= 1, got ${hint}`);
  if (hint > MAX_ITERATIONS) throw new RangeError(`iteration hint ${hint} exceeds the search cap`);
  let cand = 0n;
  for (let j = 0; j < hint; j++) {
    cand = expand(seed, j, params.bits, params.congruence);
  }
  if (stats) stats.primalityTests += 1;
  if (!millerRabin(cand, params.mrRounds ?? DEFAULT_MR_ROUNDS)) {
    throw new InvalidHint(`candidate at iteration ${hint} is composite`);
  }
  return cand;
}
