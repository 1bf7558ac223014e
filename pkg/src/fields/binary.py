"""Finite fields GF(2^k), 1 <= k <= 16, with elements packed into ints.

Bit i of an element is the coefficient of g^i, where g is a root of the shipped
modulus for degree k. Addition is xor; zero and one are 0 and 1.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from src.exceptions import DivisionByZeroError, UnsupportedInputError
from src.fields.linalg import gf2_solve

# One irreducible polynomial per degree. Never change an entry: certificates and
# printed elements depend on the choice of g.
MODULI: dict[int, int] = {
    1: 0b11,  # x + 1
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10000011,  # x^7 + x + 1
    8: 0x11B,  # x^8 + x^4 + x^3 + x + 1
    9: 0x211,  # x^9 + x^4 + 1
    10: 0x409,  # x^10 + x^3 + 1
    11: 0x805,  # x^11 + x^2 + 1
    12: 0x1009,  # x^12 + x^3 + 1
    13: 0x201B,  # x^13 + x^4 + x^3 + x + 1
    14: 0x4021,  # x^14 + x^5 + 1
    15: 0x8003,  # x^15 + x + 1
    16: 0x1002B,  # x^16 + x^5 + x^3 + x + 1
}


@dataclass(frozen=True)
class BinaryField:
    """The field GF(2^k) with a fixed modulus."""

    k: int
    modulus: int

    @staticmethod
    def get(k: int) -> "BinaryField":
        """Return the shared field object of degree k."""
        return _binary_field(k)

    @property
    def order(self) -> int:
        return 1 << self.k

    @property
    def generator(self) -> int:
        """The element g (equal to 1 when k = 1)."""
        return self.reduce(0b10)

    def elements(self) -> Iterator[int]:
        """All elements in increasing integer order."""
        return iter(range(self.order))

    def reduce(self, value: int) -> int:
        """Reduce a carry-less product modulo the field modulus."""
        k = self.k
        modulus = self.modulus
        while value.bit_length() > k:
            value ^= modulus << (value.bit_length() - 1 - k)
        return value

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if a == 1:
            return b
        if b == 1:
            return a
        product = 0
        while b:
            if b & 1:
                product ^= a
            a <<= 1
            b >>= 1
        return self.reduce(product)

    def sqr(self, a: int) -> int:
        # Spread the bits: (sum a_i g^i)^2 = sum a_i g^(2i).
        spread = 0
        bit = 0
        while a:
            if a & 1:
                spread |= 1 << (2 * bit)
            a >>= 1
            bit += 1
        return self.reduce(spread)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.sqr(a)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        """Inverse by the extended Euclidean algorithm in GF(2)[x]."""
        if a == 0:
            raise DivisionByZeroError(f"zero has no inverse in GF(2^{self.k})")
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1 != 1:
            shift = r0.bit_length() - r1.bit_length()
            if shift < 0:
                r0, r1 = r1, r0
                s0, s1 = s1, s0
                continue
            r0 ^= r1 << shift
            s0 ^= s1 << shift
            if r0.bit_length() < r1.bit_length():
                r0, r1 = r1, r0
                s0, s1 = s1, s0
        return self.reduce(s1)

    def sqrt(self, a: int) -> int:
        """The unique square root; Frobenius is bijective on a finite field."""
        return self.pow(a, 1 << (self.k - 1)) if self.k > 1 else a

    def trace(self, a: int) -> int:
        """Absolute trace to GF(2): a + a^2 + ... + a^(2^(k-1))."""
        total = 0
        term = a
        for _ in range(self.k):
            total ^= term
            term = self.sqr(term)
        if total not in (0, 1):
            raise UnsupportedInputError(f"trace left GF(2): {total}")
        return total

    def artin_schreier(self, a: int) -> Optional[int]:
        """
        Smallest root of x^2 + x = a, or None when the trace of a is 1.

        The map x -> x^2 + x is GF(2)-linear with kernel {0, 1}; the linear solve
        fixes the coefficient of 1 to zero, which selects the smaller root.
        """
        if self.trace(a):
            return None
        columns = [self.sqr(1 << i) ^ (1 << i) for i in range(self.k)]
        combo = gf2_solve(columns, a)
        if combo is None:
            return None
        return combo & ~1

    def format(self, a: int) -> str:
        """Render an element as a polynomial in g, e.g. 'g^2 + 1'."""
        if a == 0:
            return "0"
        parts = []
        for bit in range(a.bit_length() - 1, -1, -1):
            if a >> bit & 1:
                if bit == 0:
                    parts.append("1")
                elif bit == 1:
                    parts.append("g")
                else:
                    parts.append(f"g^{bit}")
        return " + ".join(parts)


@lru_cache(maxsize=None)
def _binary_field(k: int) -> BinaryField:
    if k not in MODULI:
        raise UnsupportedInputError(f"GF(2^{k}) is not shipped; supported degrees are 1..16")
    return BinaryField(k=k, modulus=MODULI[k])
