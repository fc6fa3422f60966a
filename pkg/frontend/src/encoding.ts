/** Byte-level helpers shared with the native package's wire formats. */

export class DecodeError extends Error {}

export function concat(...parts: Uint8Array[]): Uint8Array {
  const out = new Uint8Array(parts.reduce((n, p) => n + p.length, 0));
  let off = 0;
  for (const p of parts) {
    out.set(p, off);
    off += p.length;
  }
  return out;
}

export function ascii(s: string): Uint8Array {
  return new TextEncoder().encode(s);
}

export function le64(n: number | bigint): Uint8Array {
  const out = new Uint8Array(8);
  new DataView(out.buffer).setBigUint64(0, BigInt(n), true);
  return out;
}

export function le32(n: number): Uint8Array {
  const out = new Uint8Array(4);
  new DataView(out.buffer).setUint32(0, n, true);
  return out;
}

export function hexToBytes(hex: string): Uint8Array {
  if (hex.length % 2 !== 0 || /[^0-9a-fA-F]/.test(hex)) {
    throw new DecodeError(`invalid hex string of length ${hex.length}`);
  }
  const out = new Uint8Array(hex.length / 2);
  for (let i = 0; i < out.length; i++) out[i] = parseInt(hex.slice(i * 2, i * 2 + 2), 16);
  return out;
}

export function bytesToHex(bytes: Uint8Array): string {
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}

export function bytesToBigInt(bytes: Uint8Array): bigint {
  let v = 0n;
  for (const b of bytes) v = (v << 8n) | BigInt(b);
  return v;
}

export function bigIntToBytes(v: bigint): Uint8Array {
  // minimal big-endian magnitude; empty for zero
  if (v < 0n) throw new RangeError("magnitude must be nonnegative");
  if (v === 0n) return new Uint8Array(0);
  let hex = v.toString(16);
  if (hex.length % 2) hex = "0" + hex;
  return hexToBytes(hex);
}

/** Sign byte (00/01), 4-byte BE length, minimal BE magnitude. */
export function encodeInt(x: bigint): Uint8Array {
  const mag = bigIntToBytes(x < 0n ? -x : x);
  const out = new Uint8Array(5 + mag.length);
  out[0] = x < 0n ? 1 : 0;
  new DataView(out.buffer).setUint32(1, mag.length);
  out.set(mag, 5);
  return out;
}

export function decodeInt(data: Uint8Array, offset: number): [bigint, number] {
  if (data.length < offset + 5) throw new DecodeError("truncated integer header");
  const sign = data[offset];
  if (sign !== 0 && sign !== 1) throw new DecodeError(`bad sign byte 0x${sign.toString(16)}`);
  const n = new DataView(data.buffer, data.byteOffset).getUint32(offset + 1);
  const start = offset + 5;
  if (data.length < start + n) throw new DecodeError("truncated integer magnitude");
  const body = data.subarray(start, start + n);
  if (n > 0 && body[0] === 0) throw new DecodeError("leading zero byte in magnitude");
  let value = bytesToBigInt(body);
  if (sign === 1) {
    if (value === 0n) throw new DecodeError("negative zero is not canonical");
    value = -value;
  }
  return [value, start + n];
}
