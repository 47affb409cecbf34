"""Exact arithmetic in the cyclotomic fields Q(zeta_N) with N a power of 3.

Values are stored over the power basis 1, z, ..., z^(phi(N)-1) with rational
coefficients, using the reduction z^(2k) = -z^k - 1 for k = N/3 (the minimal
polynomial of a primitive 3^v-th root is x^(2*3^(v-1)) + x^(3^(v-1)) + 1).
After every operation the conductor is lowered as far as possible, so two
values are equal exactly when their stored forms coincide; no Zumbroich-style
basis is needed at these sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def _phi(N: int) -> int:
    return 1 if N == 1 else 2 * (N // 3)


def _is_power_of_3(n: int) -> bool:
    while n % 3 == 0:
        n //= 3
    return n == 1


@dataclass(frozen=True)
class Cyclotomic:
    """An element of Q(zeta_N), canonicalised to the minimal conductor."""

    conductor: int
    coeffs: tuple  # Fractions over the power basis, length phi(conductor)

    # -- construction -------------------------------------------------------

    @staticmethod
    def _make(N: int, table: dict) -> "Cyclotomic":
        """Build from an exponent -> Fraction dict, reducing and descending."""
        if N == 1:
            total = sum(table.values(), Fraction(0))
            return Cyclotomic(1, (total,))
        folded: dict = {}
        for e, c in table.items():
            folded[e % N] = folded.get(e % N, Fraction(0)) + c
        third = N // 3
        phi = 2 * third
        out = [Fraction(0)] * phi
        for e, c in folded.items():
            if c == 0:
                continue
            if e < phi:
                out[e] += c
            else:
                out[e - third] -= c
                out[e - 2 * third] -= c
        # descend while the support lies in the subfield
        coeffs = out
        while N > 1:
            phi = _phi(N)
            if any(coeffs[e] != 0 for e in range(phi) if e % 3 != 0):
                break
            N //= 3
            if N == 1:
                coeffs = [coeffs[0]]
            else:
                coeffs = [coeffs[3 * k] for k in range(_phi(N))]
        return Cyclotomic(N, tuple(Fraction(c) for c in coeffs))

    @staticmethod
    def rational(q) -> "Cyclotomic":
        return Cyclotomic(1, (Fraction(q),))

    @staticmethod
    def zero() -> "Cyclotomic":
        return Cyclotomic.rational(0)

    @staticmethod
    def one() -> "Cyclotomic":
        return Cyclotomic.rational(1)

    @staticmethod
    def root_of_unity(N: int, k: int = 1) -> "Cyclotomic":
        """zeta_N^k for N a power of 3."""
        if not (N >= 1 and _is_power_of_3(N)):
            raise ValueError("conductor must be a power of 3")
        if N == 1 or k % N == 0:
            return Cyclotomic.one()
        return Cyclotomic._make(N, {k % N: Fraction(1)})

    @staticmethod
    def from_phase(s: Fraction) -> "Cyclotomic":
        """exp(2*pi*I*s) for a rational s with 3-power denominator."""
        s = Fraction(s) % 1
        return Cyclotomic.root_of_unity(s.denominator, s.numerator)

    # -- structure ----------------------------------------------------------

    def promote(self, N: int) -> tuple:
        """Exponent dict of this value viewed inside Q(zeta_N)."""
        assert N % self.conductor == 0
        step = N // self.conductor
        return {e * step: c for e, c in enumerate(self.coeffs) if c != 0}

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return self.conductor == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational value")
        return self.coeffs[0]

    def sort_key(self):
        return (self.conductor, self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        return Cyclotomic.rational(x)

    def __add__(self, other):
        other = Cyclotomic._coerce(other)
        N = max(self.conductor, other.conductor)
        table = self.promote(N)
        for e, c in other.promote(N).items():
            table[e] = table.get(e, Fraction(0)) + c
        return Cyclotomic._make(N, table)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-Cyclotomic._coerce(other))

    def __rsub__(self, other):
        return Cyclotomic._coerce(other) - self

    def __mul__(self, other):
        other = Cyclotomic._coerce(other)
        if self.is_rational:
            q = self.coeffs[0]
            if q == 0:
                return Cyclotomic.zero()
            if q == 1:
                return other
            return Cyclotomic(other.conductor, tuple(q * c for c in other.coeffs))
        if other.is_rational:
            return other * self
        N = max(self.conductor, other.conductor)
        a, b = self.promote(N), other.promote(N)
        table: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = (e1 + e2) % N
                table[e] = table.get(e, Fraction(0)) + c1 * c2
        return Cyclotomic._make(N, table)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        q = Fraction(scalar)
        return Cyclotomic(self.conductor, tuple(c / q for c in self.coeffs))

    def __pow__(self, e: int):
        out = Cyclotomic.one()
        base = self
        if e < 0:
            raise ValueError("negative powers are not needed here")
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def galois(self, a: int) -> "Cyclotomic":
        """Apply zeta -> zeta^a; requires gcd(a, conductor) = 1."""
        N = self.conductor
        if N == 1:
            return self
        if gcd(a, N) != 1:
            raise ValueError("not a Galois automorphism")
        table: dict = {}
        for e, c in enumerate(self.coeffs):
            if c != 0:
                k = (e * a) % N
                table[k] = table.get(k, Fraction(0)) + c
        return Cyclotomic._make(N, table)

    def conjugate(self) -> "Cyclotomic":
        if self.conductor == 1:
            return self
        return self.galois(self.conductor - 1)


def cyclo_sum(values) -> Cyclotomic:
    total = Cyclotomic.zero()
    for v in values:
        total = total + v
    return total
