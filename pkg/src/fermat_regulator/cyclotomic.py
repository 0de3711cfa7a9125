"""Exact arithmetic in the cyclotomic field Q(mu_N).

Elements are stored on the power basis 1, xi, ..., xi^(phi(N)-1) of a fixed
primitive N-th root of unity xi, with :class:`fractions.Fraction`
coefficients.  Equality is therefore canonical.  Complex embeddings send
xi to exp(2 pi i h / N) for h coprime to N.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


def euler_phi(n: int) -> int:
    result, m, d = n, n, 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


def mobius(n: int) -> int:
    sign, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            sign = -sign
        d += 1
    if m > 1:
        sign = -sign
    return sign


def units(N: int) -> list[int]:
    """Representatives 1 <= h <= N of (Z/N)^*, ascending (just [1] for N = 1)."""
    if N == 1:
        return [1]
    return [h for h in range(1, N) if math.gcd(h, N) == 1]


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    # b monic or -1-leading (x^d - 1 is monic); exact division over Z
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + db] // b[db]
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the N-th cyclotomic polynomial."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    num: list[int] = [1]
    den: list[int] = [1]
    for d in range(1, N + 1):
        if N % d:
            continue
        mu = mobius(N // d)
        if mu == 0:
            continue
        factor = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _poly_mul(num, factor)
        else:
            den = _poly_mul(den, factor)
    return tuple(_poly_divexact(num, den))


@lru_cache(maxsize=None)
def power_table(N: int) -> np.ndarray:
    """Integer matrix whose row e holds xi_N^e reduced to the power basis."""
    phi = euler_phi(N)
    cyc = cyclotomic_polynomial(N)
    table = np.zeros((N, phi), dtype=object)
    cur = [0] * phi
    cur[0] = 1
    for e in range(N):
        table[e, :] = cur
        # multiply by xi and reduce the xi^phi term
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    table.setflags(write=False)
    return table


class CyclotomicNumber:
    """An element of Q(mu_N) on the power basis of xi_N."""

    __slots__ = ("N", "coeffs", "_hash")

    def __init__(self, N: int, coeffs: Iterable):
        phi = euler_phi(N)
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != phi:
            raise ValueError(f"expected {phi} coefficients for N={N}, got {len(cs)}")
        self.N = N
        self.coeffs = cs
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, N: int) -> "CyclotomicNumber":
        return cls(N, [0] * euler_phi(N))

    @classmethod
    def from_int(cls, N: int, value) -> "CyclotomicNumber":
        cs = [0] * euler_phi(N)
        cs[0] = value
        return cls(N, cs)

    @classmethod
    def from_exponent_counts(cls, N: int, counts: Sequence, scale=1) -> "CyclotomicNumber":
        """scale * sum_e counts[e] * xi^e for a length-N vector of rationals."""
        table = power_table(N)
        acc = [0] * euler_phi(N)
        for e, c in enumerate(counts):
            if c:
                c = c if isinstance(c, Fraction) else int(c)
                row = table[e]
                for i in range(len(acc)):
                    if row[i]:
                        acc[i] += c * row[i]
        scale = Fraction(scale)
        return cls(N, [scale * a for a in acc])

    # -- basic protocol ---------------------------------------------------

    def __repr__(self) -> str:
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"CyclotomicNumber(N={self.N}, [{terms}])"

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicNumber):
            return self.N == other.N and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.N, self.coeffs))
        return self._hash

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.N != self.N:
                raise ValueError(f"conductor mismatch: {self.N} vs {other.N}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_int(self.N, other)
        raise TypeError(f"cannot combine CyclotomicNumber with {type(other).__name__}")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber(self.N, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.N, [-a for a in self.coeffs])

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber(self.N, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.N, [a * other for a in self.coeffs])
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        N = self.N
        red = [Fraction(0)] * N
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        red[(i + j) % N] += a * b
        return CyclotomicNumber.from_exponent_counts(N, red)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.N, [a / other for a in self.coeffs])
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = CyclotomicNumber.from_int(self.N, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- field structure ----------------------------------------------------

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def galois(self, h: int) -> "CyclotomicNumber":
        """Image under the automorphism xi -> xi^h."""
        N = self.N
        if math.gcd(h, N) != 1:
            raise ValueError(f"h={h} is not a unit modulo N={N}")
        red = [Fraction(0)] * N
        for k, c in enumerate(self.coeffs):
            if c:
                red[(h * k) % N] += c
        return CyclotomicNumber.from_exponent_counts(N, red)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def embed(self, h: int = 1) -> complex:
        """Complex value under xi -> exp(2 pi i h / N)."""
        N = self.N
        if math.gcd(h, N) != 1:
            raise ValueError(f"h={h} is not a unit modulo N={N}")
        z = 0j
        for k, c in enumerate(self.coeffs):
            if c:
                z += float(c) * cmath.exp(2j * math.pi * ((h * k) % N) / N)
        return z

    def embeddings(self) -> dict[int, complex]:
        return {h: self.embed(h) for h in units(self.N)}

    def trace(self) -> Fraction:
        total = CyclotomicNumber.zero(self.N)
        for h in units(self.N):
            total = total + self.galois(h)
        if not total.is_rational():
            raise ArithmeticError("trace is not rational")
        return total.coeffs[0]

    def norm(self) -> Fraction:
        total = CyclotomicNumber.from_int(self.N, 1)
        for h in units(self.N):
            total = total * self.galois(h)
        if not total.is_rational():
            raise ArithmeticError("norm is not rational")
        return total.coeffs[0]

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CyclotomicNumber":
        return cls(int(obj["N"]), [Fraction(int(n), int(d)) for n, d in obj["coeffs"]])


def root_of_unity(N: int, e: int) -> CyclotomicNumber:
    """xi_N^e on the power basis."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    return CyclotomicNumber(N, list(power_table(N)[e % N]))
