"""GF(2^m) arithmetic with log/antilog tables and the companion-matrix embedding.

Field elements are plain Python ints in ``[0, 2^m)``; the binary digits of an
element are the coefficients of its polynomial residue (bit i = coefficient of
x^i).  Arithmetic is performed modulo a fixed primitive polynomial per
extension degree, so constructions are reproducible across runs and machines.

The table below holds, for each m, the lowest-weight and among those the
numerically smallest primitive polynomial of degree m (coefficient bitmask,
verified at construction time by walking the powers of x).
"""

from __future__ import annotations

import numpy as np

# Primitive polynomial bitmasks, keyed by extension degree m.
PRIMITIVE_POLY = {
    1: 0b11,                 # x + 1
    2: 0b111,                # x^2 + x + 1
    3: 0b1011,               # x^3 + x + 1
    4: 0b10011,              # x^4 + x + 1
    5: 0b100101,             # x^5 + x^2 + 1
    6: 0b1000011,            # x^6 + x + 1
    7: 0b10000011,           # x^7 + x + 1
    8: 0b100011101,          # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,         # x^9 + x^4 + 1
    10: 0b10000001001,       # x^10 + x^3 + 1
    11: 0b100000000101,      # x^11 + x^2 + 1
    12: 0b1000001010011,     # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,    # x^13 + x^4 + x^3 + x + 1
    14: 0b100000000101011,   # x^14 + x^5 + x^3 + x + 1
    15: 0b1000000000000011,  # x^15 + x + 1
    16: 0b10000000000101101, # x^16 + x^5 + x^3 + x^2 + 1
}

MAX_M = 16


class GF2m:
    """The finite field GF(2^m) for 1 <= m <= 16.

    Immutable after construction; all operations are pure, so one instance
    can be shared freely across workers.

    Attributes:
        m: extension degree.
        q: field size 2^m.
        poly: primitive polynomial bitmask of degree m.
        exp: antilog table, ``exp[k] = alpha^k`` (doubled length so that
            ``exp[log[a] + log[b]]`` never wraps).
        log: discrete-log table for nonzero elements (``log[0]`` is a
            sentinel 0 and must be masked by callers of the raw tables).
    """

    def __init__(self, m: int, poly: int | None = None):
        if not 1 <= m <= MAX_M:
            raise ValueError(f"extension degree m={m} out of range [1, {MAX_M}]")
        self.m = m
        self.q = 1 << m
        self.poly = PRIMITIVE_POLY[m] if poly is None else poly

        # Walk the powers of x.  The walk closes after exactly q-1 distinct
        # values iff poly is primitive; anything else is a table-corruption
        # bug and must not pass silently.
        exp = np.zeros(2 * (self.q - 1), dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        seen = 0
        v = 1
        for k in range(self.q - 1):
            if log[v] != 0 and v != 1 or (v == 1 and k > 0):
                raise ValueError(f"polynomial {self.poly:#b} is not primitive for m={m}")
            exp[k] = v
            log[v] = k
            seen += 1
            v <<= 1
            if v & self.q:
                v ^= self.poly
        if v != 1 or seen != self.q - 1:
            raise ValueError(f"polynomial {self.poly:#b} is not primitive for m={m}")
        exp[self.q - 1:] = exp[: self.q - 1]
        self.exp = exp
        self.log = log
        self._mul_rows: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"GF2m(m={self.m}, poly={self.poly:#b})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF2m) and other.m == self.m and other.poly == self.poly

    def __hash__(self) -> int:
        return hash((self.m, self.poly))

    # -- scalar operations -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        """a + b (characteristic 2: bitwise XOR)."""
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """a * b modulo the field polynomial."""
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        """Multiplicative inverse; inversion of 0 is an error."""
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^m)")
        return int(self.exp[(self.q - 1) - self.log[a]])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a^e with e any integer (negative e inverts first); 0^e = 0 for e > 0."""
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 cannot be raised to a non-positive power")
            return 0
        return int(self.exp[(self.log[a] * e) % (self.q - 1)])

    # -- vectorized operations (numpy int arrays of element values) --------

    def mul_vec(self, a, b) -> np.ndarray:
        """Elementwise product of two arrays of field elements (broadcasts)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def mul_row(self, a: int) -> np.ndarray:
        """The length-q array ``[a*0, a*1, ..., a*(q-1)]``, cached per a.

        Row a of the multiplication table; used as a permutation of the
        nonzero elements when a != 0.
        """
        row = self._mul_rows.get(a)
        if row is None:
            row = self.mul_vec(a, np.arange(self.q))
            row.setflags(write=False)
            self._mul_rows[a] = row
        return row

    # -- binary expansion helpers ------------------------------------------

    def symbol_bits(self, a: int) -> np.ndarray:
        """Length-m bit vector of a; bit i is the coefficient of x^i."""
        return (a >> np.arange(self.m)) & 1

    def bits_symbol(self, bits) -> int:
        """Inverse of symbol_bits; rejects vectors of the wrong length."""
        bits = np.asarray(bits)
        if bits.shape != (self.m,):
            raise ValueError(f"expected {self.m} bits, got shape {bits.shape}")
        return int(((bits.astype(np.int64) & 1) << np.arange(self.m)).sum())

    def companion(self, a: int) -> np.ndarray:
        """m x m binary matrix of the map v -> a*v in the coefficient basis.

        Column j holds the bits of a*x^j, so the map is a ring homomorphism:
        companion(a+b) = companion(a) ^ companion(b) and
        companion(a*b) = companion(a) @ companion(b) mod 2.
        """
        cols = [self.symbol_bits(self.mul(a, 1 << j)) for j in range(self.m)]
        return np.stack(cols, axis=1).astype(np.uint8)
