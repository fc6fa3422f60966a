import { describe, expect, it } from "vitest";

import { QuadraticForm } from "../src/classgroup.js";
import { hexToBytes } from "../src/encoding.js";
import { HashStream, sampleIndices, selectWinners, uniform } from "../src/winners.js";

// pinned alongside the native acceptance suite
const PINNED_Y_ENCODING = "00000000085f303fdcd263a35401000000080117ad4608041185";
const PINNED_D = -303027281193914014640031267584082736663n;
const PINNED_WINNERS_10_3 = [1, 4, 5];
const PINNED_WINNERS_1000_8 = [123, 129, 459, 502, 606, 724, 738, 801];

describe("winner sampling", () => {
  it("reproduces the native pinned winner sets", () => {
    const y = QuadraticForm.decode(hexToBytes(PINNED_Y_ENCODING), PINNED_D);
    expect(selectWinners(y, 10, 3)).toEqual(PINNED_WINNERS_10_3);
    expect(selectWinners(y, 1000, 8)).toEqual(PINNED_WINNERS_1000_8);
  });

  it("draws uniformly within range", () => {
    const stream = new HashStream(new TextEncoder().encode("u"));
    for (const m of [1, 2, 3, 10, 1000, 2 ** 20]) {
      for (let i = 0; i < 25; i++) {
        const v = uniform(stream, m);
        expect(v >= 0 && v < m).toBe(true);
      }
    }
  });

  it("selects k distinct sorted indices", () => {
    for (let trial = 0; trial < 50; trial++) {
      const seed = new TextEncoder().encode(`t-${trial}`);
      const n = 1 + (trial * 13) % 97;
      const k = 1 + (trial % n);
      const out = sampleIndices(seed, n, k);
      expect(out.length).toBe(k);
      expect(new Set(out).size).toBe(k);
      expect([...out].sort((a, b) => a - b)).toEqual(out);
      expect(out.every((i) => i >= 0 && i < n)).toBe(true);
    }
    expect(sampleIndices(new Uint8Array(1), 7, 7)).toEqual([0, 1, 2, 3, 4, 5, 6]);
    expect(() => sampleIndices(new Uint8Array(1), 5, 6)).toThrow();
  });
});
