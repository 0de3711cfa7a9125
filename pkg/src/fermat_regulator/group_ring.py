"""Index sets, orbits and projector coefficients for G_N = (Z/N)^2.

A group-ring element with coefficients in Q(mu_N) is stored redundantly as
an integer array ``counts[r, s, e]`` (the multiplicity of xi^e at the group
element (r, s)) over a common denominator.  Convolution in this form is a
cyclic convolution on (Z/N)^3 and stays in integers; equality is decided
after reducing the exponent axis to the power basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .cyclotomic import CyclotomicNumber, power_table, units


def rep(x: int, N: int) -> int:
    """The representative of x mod N in {1, ..., N}."""
    return (x - 1) % N + 1


@dataclass(frozen=True)
class FermatIndex:
    N: int
    a: int
    b: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        object.__setattr__(self, "a", self.a % self.N)
        object.__setattr__(self, "b", self.b % self.N)

    @property
    def c(self) -> int:
        return (-self.a - self.b) % self.N

    @property
    def rep_a(self) -> int:
        return rep(self.a, self.N)

    @property
    def rep_b(self) -> int:
        return rep(self.b, self.N)

    @property
    def rep_c(self) -> int:
        return rep(self.c, self.N)

    @property
    def in_I_N(self) -> bool:
        return self.a != 0 and self.b != 0 and self.c != 0

    @property
    def primitive(self) -> bool:
        return math.gcd(math.gcd(self.N, self.a), self.b) == 1

    def scaled(self, h: int) -> "FermatIndex":
        return FermatIndex(self.N, h * self.a, h * self.b)

    def negated(self) -> "FermatIndex":
        return self.scaled(-1)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c}) mod {self.N}"


def index_set(N: int) -> list[FermatIndex]:
    """All (a, b) in G_N with a, b and a + b nonzero; there are (N-1)(N-2)."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    return [FermatIndex(N, a, b) for a in range(N) for b in range(N)
            if FermatIndex(N, a, b).in_I_N]


def cyclic_subgroup(N: int, g: int) -> frozenset[int]:
    """The subgroup of (Z/N)^* generated by g (e.g. H_{N,k} for k = F_q uses g = q)."""
    if math.gcd(g, N) != 1:
        raise ValueError(f"{g} is not a unit modulo {N}")
    out, x = set(), 1 % N
    while x not in out:
        out.add(x)
        x = x * g % N
    return frozenset(out)


def full_unit_group(N: int) -> frozenset[int]:
    return frozenset(h % N for h in units(N))


def _check_subgroup(N: int, subgroup: Iterable[int]) -> frozenset[int]:
    sub = frozenset(h % N for h in subgroup)
    if not sub:
        raise ValueError("empty subgroup")
    for h in sub:
        if math.gcd(h, N) != 1:
            raise ValueError(f"{h} is not a unit modulo {N}")
        for k in sub:
            if h * k % N not in sub:
                raise ValueError(f"{sorted(sub)} is not closed under multiplication mod {N}")
    return sub


@dataclass(frozen=True)
class OrbitClass:
    N: int
    members: frozenset
    subgroup: frozenset = field(repr=False)

    def __len__(self) -> int:
        return len(self.members)

    def representative(self) -> tuple[int, int]:
        return min(self.members)


def orbit(index: FermatIndex, subgroup: Iterable[int]) -> OrbitClass:
    """{(ha, hb) : h in subgroup}."""
    sub = _check_subgroup(index.N, subgroup)
    members = frozenset(((h * index.a) % index.N, (h * index.b) % index.N) for h in sub)
    return OrbitClass(index.N, members, sub)


def orbit_classes(N: int, subgroup: Iterable[int]) -> list[OrbitClass]:
    """Partition of G_N into orbits, sorted by smallest member."""
    sub = _check_subgroup(N, subgroup)
    seen: set = set()
    out = []
    for a in range(N):
        for b in range(N):
            if (a, b) in seen:
                continue
            o = orbit(FermatIndex(N, a, b), sub)
            seen |= o.members
            out.append(o)
    return out


class GroupRingElement:
    """Element of Q(mu_N)[G_N] as integer exponent counts over a common denominator."""

    __slots__ = ("N", "counts", "den")

    def __init__(self, N: int, counts: np.ndarray, den: int = 1):
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (N, N, N):
            raise ValueError(f"counts must have shape {(N, N, N)}, got {counts.shape}")
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.N = N
        self.counts = counts
        self.den = int(den)

    @classmethod
    def zero(cls, N: int) -> "GroupRingElement":
        return cls(N, np.zeros((N, N, N), dtype=np.int64))

    @classmethod
    def identity(cls, N: int) -> "GroupRingElement":
        counts = np.zeros((N, N, N), dtype=np.int64)
        counts[0, 0, 0] = 1
        return cls(N, counts)

    def canonical(self) -> tuple[np.ndarray, int]:
        """Power-basis coefficients (N, N, phi) and denominator, in lowest terms."""
        table = np.array(power_table(self.N), dtype=np.int64)
        coeffs = np.tensordot(self.counts, table, axes=([2], [0]))
        g = reduce(math.gcd, (int(v) for v in np.unique(np.abs(coeffs))), self.den)
        if g > 1:
            coeffs //= g
        return coeffs, self.den // g

    def is_zero(self) -> bool:
        return not self.canonical()[0].any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        if self.N != other.N:
            return False
        c1, d1 = self.canonical()
        c2, d2 = other.canonical()
        return d1 == d2 and np.array_equal(c1, c2)

    __hash__ = None

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        if self.N != other.N:
            raise ValueError("group size mismatch")
        den = self.den * other.den // math.gcd(self.den, other.den)
        counts = self.counts * (den // self.den) + other.counts * (den // other.den)
        return GroupRingElement(self.N, counts, den)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        if self.N != other.N:
            raise ValueError("group size mismatch")
        counts = _kernels.group_ring_convolve(self.counts, other.counts)
        return GroupRingElement(self.N, counts, self.den * other.den)

    def galois(self, h: int) -> "GroupRingElement":
        """Apply xi -> xi^h to every coefficient."""
        N = self.N
        if math.gcd(h, N) != 1:
            raise ValueError(f"h={h} is not a unit modulo N={N}")
        out = np.zeros_like(self.counts)
        for e in range(N):
            out[:, :, (h * e) % N] += self.counts[:, :, e]
        return GroupRingElement(N, out, self.den)

    def coeff(self, r: int, s: int) -> CyclotomicNumber:
        return CyclotomicNumber.from_exponent_counts(
            self.N, self.counts[r % self.N, s % self.N], scale=Fraction(1, self.den))

    @property
    def coeffs(self) -> dict[tuple[int, int], CyclotomicNumber]:
        return {(r, s): self.coeff(r, s) for r in range(self.N) for s in range(self.N)}


class ProjectorCoeffs(GroupRingElement):
    """p_N^{a,b} = N^-2 sum_{(r,s)} xi^{-(ar+bs)} g^{r,s}."""

    __slots__ = ("index",)

    def __init__(self, index: FermatIndex):
        N = index.N
        counts = np.zeros((N, N, N), dtype=np.int64)
        r = np.arange(N)[:, None]
        s = np.arange(N)[None, :]
        e = (-(index.a * r + index.b * s)) % N
        counts[r, s, e] = 1
        super().__init__(N, counts, N * N)
        self.index = index


def projector(index: FermatIndex) -> ProjectorCoeffs:
    return ProjectorCoeffs(index)


def orbit_projector(index: FermatIndex, subgroup: Iterable[int]) -> GroupRingElement:
    """Sum of the projectors over the orbit of index under the subgroup."""
    total = GroupRingElement.zero(index.N)
    for a, b in sorted(orbit(index, subgroup).members):
        total = total + projector(FermatIndex(index.N, a, b))
    return total


def reduce_projector(N: int, d: int, index: FermatIndex) -> Optional[FermatIndex]:
    """Image of p_N^{a,b} under G_N -> G_{N/d}: p_{N/d}^{a/d,b/d}, or None for zero."""
    if d < 1 or N % d:
        raise ValueError(f"d={d} does not divide N={N}")
    if index.N != N:
        raise ValueError(f"index lives in G_{index.N}, not G_{N}")
    if index.a % d or index.b % d:
        return None
    return FermatIndex(N // d, index.a // d, index.b // d)


def primitive_reduction(index: FermatIndex) -> FermatIndex:
    """(a', b') over N' = N/d with d = gcd(N, a, b)."""
    d = math.gcd(math.gcd(index.N, index.a), index.b)
    return reduce_projector(index.N, d, index)
