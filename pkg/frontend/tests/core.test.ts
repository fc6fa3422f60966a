import { describe, expect, it } from "vitest";

import { QuadraticForm, generator, identity } from "../src/classgroup.js";
import { bytesToHex, decodeInt, encodeInt, hexToBytes } from "../src/encoding.js";
import { sha256 } from "../src/sha256.js";

const ascii = (s: string) => new TextEncoder().encode(s);

describe("sha256", () => {
  it("matches NIST vectors", () => {
    expect(bytesToHex(sha256(new Uint8Array(0)))).toBe(
      "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855",
    );
    expect(bytesToHex(sha256(ascii("abc")))).toBe(
      "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad",
    );
    // multi-block message
    expect(
      bytesToHex(sha256(ascii("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))),
    ).toBe("248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  });

  it("matches WebCrypto on random inputs", async () => {
    for (const len of [0, 1, 31, 32, 33, 55, 56, 64, 100, 1000]) {
      const data = new Uint8Array(len).map((_, i) => (i * 7 + len) & 0xff);
      const expected = new Uint8Array(await crypto.subtle.digest("SHA-256", data));
      expect(bytesToHex(sha256(data))).toBe(bytesToHex(expected));
    }
  });
});

describe("integer encoding", () => {
  it("matches the pinned wire format", () => {
    expect(bytesToHex(encodeInt(1n))).toBe("000000000101");
    expect(bytesToHex(encodeInt(0n))).toBe("0000000000");
    expect(bytesToHex(encodeInt(-23n))).toBe("010000000117");
    expect(bytesToHex(encodeInt(256n))).toBe("00000000020100");
  });

  it("round-trips and rejects non-canonical bytes", () => {
    for (const v of [0n, 1n, -1n, 255n, 256n, -65537n, 2n ** 128n]) {
      const [decoded, off] = decodeInt(encodeInt(v), 0);
      expect(decoded).toBe(v);
      expect(off).toBe(encodeInt(v).length);
    }
    expect(() => decodeInt(hexToBytes("02000000000101"), 0)).toThrow();
    expect(() => decodeInt(hexToBytes("00000000020001"), 0)).toThrow();
    expect(() => decodeInt(hexToBytes("0100000000"), 0)).toThrow();
  });
});

describe("class group", () => {
  it("reproduces the d=-23 table", () => {
    const e = identity(-23n);
    const g = generator(-23n);
    const gInv = new QuadraticForm(2n, -1n, 3n);
    expect([e.a, e.b, e.c]).toEqual([1n, 1n, 6n]);
    expect([g.a, g.b, g.c]).toEqual([2n, 1n, 3n]);
    expect(g.compose(g).equals(gInv)).toBe(true);
    expect(g.compose(gInv).equals(e)).toBe(true);
    expect(g.pow(3n).equals(e)).toBe(true);
    expect(e.compose(g).equals(g)).toBe(true);
    expect(g.square().equals(g.compose(g))).toBe(true);
  });

  it("reduces like the native package", () => {
    expect(new QuadraticForm(3n, 7n, 5n).reduced().equals(new QuadraticForm(1n, 1n, 3n))).toBe(true);
    expect(new QuadraticForm(6n, 1n, 1n).reduced().equals(new QuadraticForm(1n, 1n, 6n))).toBe(true);
    expect([...generator(-15n).encode()]).toEqual([...new QuadraticForm(2n, 1n, 2n).encode()]);
  });

  it("encodes canonically and rejects unreduced forms on decode", () => {
    expect(bytesToHex(identity(-23n).encode())).toBe("000000000101000000000101");
    const g2 = generator(-23n).square();
    expect(QuadraticForm.decode(g2.encode(), -23n).equals(g2)).toBe(true);
    const unreduced = new Uint8Array([...encodeInt(2n), ...encodeInt(5n)]);
    expect(() => QuadraticForm.decode(unreduced, -23n)).toThrow();
  });

  it("exponentiates by square-and-multiply", () => {
    const g = generator(-10007n * 8n + 1n); // -80055 = 1 mod 8
    let acc = identity(g.discriminant());
    for (let e = 0n; e <= 20n; e++) {
      expect(g.pow(e).equals(acc)).toBe(true);
      acc = acc.compose(g);
    }
  });
});
