/**
 * Class-group arithmetic on reduced binary quadratic forms, mirroring the
 * native package operation for operation (same reduction convention, same
 * canonical encoding) so encodings and derived values agree byte-for-byte.
 *
 * BigInt division truncates toward zero; the algorithms below need floor
 * semantics throughout, hence floorDiv/mod helpers.
 */
import { DecodeError, concat, decodeInt, encodeInt } from "./encoding.js";

export function mod(a: bigint, m: bigint): bigint {
  const r = a % m;
  return r < 0n ? r + m : r;
}

export function floorDiv(a: bigint, b: bigint): bigint {
  const q = a / b;
  return (a % b !== 0n && (a < 0n) !== (b < 0n)) ? q - 1n : q;
}

export function gcd(a: bigint, b: bigint): bigint {
  a = a < 0n ? -a : a;
  b = b < 0n ? -b : b;
  while (b) [a, b] = [b, a % b];
  return a;
}

/** Extended gcd: returns [g, s, t] with g = gcd(a, m) >= 0 and a*s + m*t = g. */
export function egcd(a: bigint, b: bigint): [bigint, bigint, bigint] {
  let [oldR, r] = [a, b];
  let [oldS, s] = [1n, 0n];
  let [oldT, t] = [0n, 1n];
  while (r !== 0n) {
    const q = oldR / r;
    [oldR, r] = [r, oldR - q * r];
    [oldS, s] = [s, oldS - q * s];
    [oldT, t] = [t, oldT - q * t];
  }
  if (oldR < 0n) {
    oldR = -oldR;
    oldS = -oldS;
    oldT = -oldT;
  }
  return [oldR, oldS, oldT];
}

// solve a*x = b (mod m); returns [x0, step]
function solveCongruence(a: bigint, b: bigint, m: bigint): [bigint, bigint] {
  const [g, u] = egcd(a, m);
  if (mod(b, g) !== 0n) throw new Error("congruence has no solution");
  const q = floorDiv(b, g);
  return [mod(q * u, m), m / g];
}

export class QuadraticForm {
  constructor(
    readonly a: bigint,
    readonly b: bigint,
    readonly c: bigint,
  ) {
    if (a <= 0n) throw new RangeError(`form must have a > 0, got a = ${a}`);
    if (b * b - 4n * a * c >= 0n) throw new RangeError("form must be positive definite");
  }

  discriminant(): bigint {
    return this.b * this.b - 4n * this.a * this.c;
  }

  equals(other: QuadraticForm): boolean {
    return this.a === other.a && this.b === other.b && this.c === other.c;
  }

  isReduced(): boolean {
    const { a, b, c } = this;
    return -a < b && b <= a && (a < c || (a === c && b >= 0n));
  }

  normalized(): QuadraticForm {
    const { a, b, c } = this;
    if (-a < b && b <= a) return this;
    const r = floorDiv(a - b, 2n * a);
    return new QuadraticForm(a, b + 2n * r * a, a * r * r + b * r + c);
  }

  reduced(): QuadraticForm {
    let { a, b, c } = this.normalized();
    while (a > c || (a === c && b < 0n)) {
      const s = floorDiv(c + b, 2n * c);
      [a, b, c] = [c, -b + 2n * s * c, c * s * s - b * s + a];
    }
    return new QuadraticForm(a, b, c).normalized();
  }

  compose(other: QuadraticForm): QuadraticForm {
    const a1 = this.a, b1 = this.b, c1 = this.c;
    const a2 = other.a, b2 = other.b, c2 = other.c;
    if (b1 * b1 - 4n * a1 * c1 !== b2 * b2 - 4n * a2 * c2) {
      throw new Error("cannot compose forms of different discriminants");
    }
    const g = floorDiv(b1 + b2, 2n);
    const h = floorDiv(b2 - b1, 2n);
    const w = gcd(gcd(a1, a2), g);
    const j = w;
    const s = a1 / w;
    const t = a2 / w;
    const u = g / w;
    const [k0, step] = solveCongruence(t * u, h * u + s * c1, s * t);
    const [n] = solveCongruence(t * step, h - t * k0, s);
    const k = k0 + step * n;
    const l = floorDiv(t * k - h, s);
    const m = floorDiv(t * u * k - h * u - s * c1, s * t);
    return new QuadraticForm(s * t, j * u - (k * t + l * s), k * l - j * m).reduced();
  }

  square(): QuadraticForm {
    const { a, b, c } = this;
    const [mu] = solveCongruence(b, c, a);
    return new QuadraticForm(
      a * a,
      b - 2n * a * mu,
      mu * mu - floorDiv(b * mu - c, a),
    ).reduced();
  }

  pow(e: bigint): QuadraticForm {
    if (e < 0n) throw new RangeError("exponent must be nonnegative");
    let result = identity(this.discriminant());
    let base: QuadraticForm = this;
    while (e > 0n) {
      if (e & 1n) result = result.compose(base);
      e >>= 1n;
      if (e) base = base.square();
    }
    return result;
  }

  encode(): Uint8Array {
    return concat(encodeInt(this.a), encodeInt(this.b));
  }

  static decode(data: Uint8Array, d: bigint): QuadraticForm {
    const [a, off1] = decodeInt(data, 0);
    const [b, off2] = decodeInt(data, off1);
    if (off2 !== data.length) throw new DecodeError("trailing bytes after form");
    if (a <= 0n) throw new DecodeError("form must have a > 0");
    if (mod(b * b - d, 4n * a) !== 0n) {
      throw new DecodeError("coefficients do not match discriminant");
    }
    const c = floorDiv(b * b - d, 4n * a);
    let form: QuadraticForm;
    try {
      form = new QuadraticForm(a, b, c);
    } catch (err) {
      throw new DecodeError(String(err));
    }
    if (!form.isReduced()) throw new DecodeError("form is not reduced");
    if (gcd(gcd(form.a, form.b), form.c) !== 1n) throw new DecodeError("form is not primitive");
    return form;
  }
}

export function checkDiscriminant(d: bigint): void {
  if (d >= 0n) throw new RangeError(`discriminant must be negative, got ${d}`);
  if (mod(d, 4n) !== 1n) throw new RangeError(`discriminant must be 1 mod 4, got ${d}`);
}

export function identity(d: bigint): QuadraticForm {
  checkDiscriminant(d);
  return new QuadraticForm(1n, 1n, floorDiv(1n - d, 4n));
}

export function generator(d: bigint): QuadraticForm {
  if (d >= 0n) throw new RangeError(`discriminant must be negative, got ${d}`);
  if (mod(d, 8n) !== 1n) throw new RangeError(`base element needs d = 1 mod 8, got ${d}`);
  return new QuadraticForm(2n, 1n, floorDiv(1n - d, 8n)).reduced();
}
