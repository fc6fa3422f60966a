/** Hash-to-prime timing over the generated sample scheme, full path vs the
 * iteration-hint path; rows match the native CLI's CSV schema. */
import { ascii } from "./encoding.js";
import {
  HashPrimeParams,
  SearchStats,
  hashToPrime,
  hashToPrimeWithHint,
} from "./hashprime.js";

export interface BenchRow {
  sampleIndex: number;
  iterations: number;
  elapsedMs: number;
  primalityTests: number;
}

export interface BenchSummary {
  rows: BenchRow[];
  maxMs: number;
  meanMs: number;
  hint: boolean;
  bits: number;
}

export function sampleString(index: number): string {
  return `sample-${index.toString().padStart(8, "0")}`;
}

export function benchSample(index: number, bits: number, hint: boolean): BenchRow {
  const seed = ascii(sampleString(index));
  const params: HashPrimeParams = { bits, congruence: [7n, 8n] };
  const stats: SearchStats = { primalityTests: 0 };
  let iterations: number;
  let elapsedMs: number;
  if (hint) {
    iterations = hashToPrime(seed, params).iterations;
    const start = performance.now();
    hashToPrimeWithHint(seed, params, iterations, stats);
    elapsedMs = performance.now() - start;
  } else {
    const start = performance.now();
    iterations = hashToPrime(seed, params, stats).iterations;
    elapsedMs = performance.now() - start;
  }
  return { sampleIndex: index, iterations, elapsedMs, primalityTests: stats.primalityTests };
}

export function summarize(rows: BenchRow[], hint: boolean, bits: number): BenchSummary {
  const times = rows.map((r) => r.elapsedMs);
  return {
    rows,
    maxMs: Math.max(...times),
    meanMs: times.reduce((a, b) => a + b, 0) / times.length,
    hint,
    bits,
  };
}

/** Same schema as the native CLI: sample_index, iterations, elapsed_ms, primality_tests. */
export function toCsv(rows: BenchRow[]): string {
  const lines = ["sample_index,iterations,elapsed_ms,primality_tests"];
  for (const r of rows) {
    lines.push(`${r.sampleIndex},${r.iterations},${r.elapsedMs.toFixed(3)},${r.primalityTests}`);
  }
  return lines.join("\n") + "\n";
}
