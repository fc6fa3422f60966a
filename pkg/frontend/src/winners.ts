/** Deterministic winner sampling: hash-counter stream, rejection sampling,
 * partial Fisher-Yates -- the same byte recipe as the native package. */
import { QuadraticForm } from "./classgroup.js";
import { ascii, concat, le64 } from "./encoding.js";
import { sha256 } from "./sha256.js";

const WINNER_SEED_TAG = ascii("seed");
const MAX_N = 2 ** 31;

export class HashStream {
  private counter = 0;
  private buf: Uint8Array = new Uint8Array(0);

  constructor(private readonly seed: Uint8Array) {}

  take(n: number): Uint8Array {
    while (this.buf.length < n) {
      this.buf = concat(this.buf, sha256(concat(this.seed, le64(this.counter))));
      this.counter += 1;
    }
    const out = this.buf.subarray(0, n);
    this.buf = this.buf.subarray(n);
    return out;
  }
}

export function uniform(stream: HashStream, m: number): number {
  if (m < 1) throw new RangeError("range must be positive");
  if (m === 1) return 0;
  const nbits = 32 - Math.clz32(m - 1);
  const nbytes = Math.ceil(nbits / 8);
  const mask = 2 ** nbits - 1; // nbits <= 31 given the MAX_N bound
  for (;;) {
    const bytes = stream.take(nbytes);
    let v = 0;
    for (const b of bytes) v = v * 256 + b;
    v = (v & mask) >>> 0;
    if (v < m) return v;
  }
}

export function sampleIndices(seed: Uint8Array, n: number, k: number): number[] {
  if (!(1 <= k && k <= n)) throw new RangeError(`need 1 <= k <= n, got k=${k}, n=${n}`);
  if (n > MAX_N) throw new RangeError(`n must be <= 2^31, got ${n}`);
  const stream = new HashStream(seed);
  // partial Fisher-Yates over a sparse array: only displaced slots are stored
  const displaced = new Map<number, number>();
  const out: number[] = [];
  for (let i = 0; i < k; i++) {
    const j = i + uniform(stream, n - i);
    const vi = displaced.get(i) ?? i;
    const vj = displaced.get(j) ?? j;
    out.push(vj);
    displaced.set(j, vi);
  }
  return out.sort((a, b) => a - b);
}

export function winnerSeed(y: QuadraticForm): Uint8Array {
  return sha256(concat(WINNER_SEED_TAG, y.encode()));
}

export function selectWinners(y: QuadraticForm, n: number, k: number): number[] {
  return sampleIndices(winnerSeed(y), n, k);
}
