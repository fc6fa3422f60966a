"""Arithmetic in the ideal class group of an imaginary quadratic field.

Group elements are reduced primitive binary quadratic forms (a, b, c) of
negative discriminant d = b^2 - 4ac.  For large prime |d| the group order is
unknown, so nobody can shortcut repeated squaring -- that is the delay
assumption the rest of the toolkit builds on.

All operations are pure; forms are immutable after construction.
"""
from __future__ import annotations

from gmpy2 import gcd, gcdext, mpz


class DecodeError(ValueError):
    """Bytes do not decode to a canonical reduced form."""


def check_discriminant(d: int) -> None:
    """Reject d unless it is negative and congruent to 1 mod 4."""
    if d >= 0:
        raise ValueError(f"discriminant must be negative, got {d}")
    if d % 4 != 1:
        raise ValueError(f"discriminant must be 1 mod 4, got {d} (mod 4 = {d % 4})")


def _solve_congruence(a, b, m):
    # Solve a*x = b (mod m).  Returns (x0, step): the solutions are x0 + k*step.
    g, u, _ = gcdext(a, m)
    q, r = divmod(b, g)
    if r != 0:
        raise ValueError("congruence has no solution")
    return q * u % m, m // g


class QuadraticForm:
    """A binary quadratic form a*x^2 + b*x*y + c*y^2 with b^2 - 4ac < 0, a > 0.

    Public constructors and group operations always return reduced forms;
    only a form built directly from raw coefficients can be unreduced
    (pass it through ``reduced()``).
    """

    __slots__ = ("a", "b", "c")

    def __init__(self, a, b, c):
        a, b, c = mpz(a), mpz(b), mpz(c)
        if a <= 0:
            raise ValueError(f"form must have a > 0, got a = {a}")
        if b * b - 4 * a * c >= 0:
            raise ValueError("form must be positive definite (b^2 - 4ac < 0)")
        self.a = a
        self.b = b
        self.c = c

    def __repr__(self):
        return f"QuadraticForm({self.a}, {self.b}, {self.c})"

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.c == other.c

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def discriminant(self) -> int:
        return int(self.b * self.b - 4 * self.a * self.c)

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return -a < b <= a and (a < c or (a == c and b >= 0))

    def normalized(self) -> "QuadraticForm":
        a, b, c = self.a, self.b, self.c
        if -a < b <= a:
            return self
        r = (a - b) // (2 * a)
        # (a, b, c) -> (a, b + 2ra, ar^2 + br + c) brings b into (-a, a]
        return QuadraticForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> "QuadraticForm":
        """Unique reduced representative: -a < b <= a <= c, b >= 0 on ties."""
        f = self.normalized()
        a, b, c = f.a, f.b, f.c
        while a > c or (a == c and b < 0):
            # rho step: swap outer coefficients, re-center b
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return QuadraticForm(a, b, c).normalized()

    def inverse(self) -> "QuadraticForm":
        return QuadraticForm(self.a, -self.b, self.c).reduced()

    def compose(self, other: "QuadraticForm") -> "QuadraticForm":
        """Gauss composition; returns the reduced product class."""
        if not isinstance(other, QuadraticForm):
            raise TypeError("can only compose with another QuadraticForm")
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2, c2 = other.a, other.b, other.c
        if b1 * b1 - 4 * a1 * c1 != b2 * b2 - 4 * a2 * c2:
            raise ValueError("cannot compose forms of different discriminants")
        g = (b1 + b2) // 2
        h = (b2 - b1) // 2
        w = gcd(gcd(a1, a2), g)
        j = w
        s = a1 // w
        t = a2 // w
        u = g // w
        # Solve k*t = h (mod s), k*u = c2 (mod s), l*u = c1 (mod t) jointly:
        # first k mod st from (tu)k = hu + s*c1, then refine modulo s.
        k0, step = _solve_congruence(t * u, h * u + s * c1, s * t)
        n, _ = _solve_congruence(t * step, h - t * k0, s)
        k = k0 + step * n
        l = (t * k - h) // s
        m = (t * u * k - h * u - s * c1) // (s * t)
        a3 = s * t
        b3 = j * u - (k * t + l * s)
        c3 = k * l - j * m
        return QuadraticForm(a3, b3, c3).reduced()

    def square(self) -> "QuadraticForm":
        """Specialized doubling; agrees with compose(self, self) exactly."""
        a, b, c = self.a, self.b, self.c
        mu, _ = _solve_congruence(b, c, a)
        a3 = a * a
        b3 = b - 2 * a * mu
        c3 = mu * mu - (b * mu - c) // a
        return QuadraticForm(a3, b3, c3).reduced()

    def pow(self, e: int) -> "QuadraticForm":
        """Square-and-multiply exponentiation; e must be >= 0."""
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        result = identity(self.discriminant())
        base = self
        while e > 0:
            if e & 1:
                result = result.compose(base)
            e >>= 1
            if e:
                base = base.square()
        return result

    __mul__ = compose
    __pow__ = pow

    def encode(self) -> bytes:
        """Canonical byte encoding of (a, b); c is implied by the discriminant."""
        return encode_int(self.a) + encode_int(self.b)

    @classmethod
    def decode(cls, data: bytes, d: int) -> "QuadraticForm":
        """Inverse of encode; rejects anything but a reduced form of discriminant d."""
        a, off = decode_int(data, 0)
        b, off = decode_int(data, off)
        if off != len(data):
            raise DecodeError(f"{len(data) - off} trailing bytes after form")
        if a <= 0:
            raise DecodeError("form must have a > 0")
        if (b * b - d) % (4 * a) != 0:
            raise DecodeError("b^2 != d (mod 4a): coefficients do not match discriminant")
        c = (b * b - d) // (4 * a)
        form = cls(a, b, c)
        if not form.is_reduced():
            raise DecodeError(f"form ({a}, {b}, {c}) is not reduced")
        if gcd(gcd(form.a, form.b), form.c) != 1:
            raise DecodeError("form is not primitive")
        return form


def identity(d: int) -> QuadraticForm:
    """The principal form (1, 1, (1-d)/4): neutral element of the class group."""
    check_discriminant(d)
    return QuadraticForm(1, 1, (1 - d) // 4)


def generator(d: int) -> QuadraticForm:
    """Fixed base element reduce((2, 1, (1-d)/8)); requires d = 1 (mod 8)."""
    if d >= 0:
        raise ValueError(f"discriminant must be negative, got {d}")
    if d % 8 != 1:
        raise ValueError(f"base element needs d = 1 mod 8, got {d} (mod 8 = {d % 8})")
    return QuadraticForm(2, 1, (1 - d) // 8).reduced()


def encode_int(x) -> bytes:
    """Sign byte (00 nonnegative / 01 negative), 4-byte BE length, BE magnitude.

    The magnitude carries no leading zero byte; zero encodes with length 0.
    """
    x = int(x)
    mag = abs(x)
    body = mag.to_bytes((mag.bit_length() + 7) // 8, "big")
    sign = b"\x01" if x < 0 else b"\x00"
    return sign + len(body).to_bytes(4, "big") + body


def decode_int(data: bytes, offset: int) -> tuple[int, int]:
    """Parse one encode_int value at offset; returns (value, next offset)."""
    if len(data) < offset + 5:
        raise DecodeError("truncated integer header")
    sign = data[offset]
    if sign not in (0, 1):
        raise DecodeError(f"bad sign byte 0x{sign:02x}")
    n = int.from_bytes(data[offset + 1 : offset + 5], "big")
    start = offset + 5
    if len(data) < start + n:
        raise DecodeError("truncated integer magnitude")
    body = data[start : start + n]
    if n > 0 and body[0] == 0:
        raise DecodeError("leading zero byte in magnitude")
    value = int.from_bytes(body, "big")
    if sign == 1:
        if value == 0:
            raise DecodeError("negative zero is not canonical")
        value = -value
    return value, start + n
