"""Finite fields, multiplicative characters and Jacobi sums.

Elements of F_q, q = p^f, are encoded as integers 0 .. q-1 whose base-p
digits are the coefficients of a polynomial in F_p[X] modulo a fixed monic
irreducible of degree f (for f = 1 the encoding is the residue itself).
Each field carries a full discrete-log table for a generator g, so the
character chi_N(x) = xi_N^(dlog x mod N) costs one lookup.  That pins the
identification mu_N(F_q) = mu_N(Q(mu_N)) to zeta = g^((q-1)/N) -> xi_N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels
from .cyclotomic import CyclotomicNumber
from .group_ring import FermatIndex, cyclic_subgroup, orbit

DEFAULT_Q_MAX = 2**20


class FieldTooLarge(ValueError):
    """The requested field exceeds q_max."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(x: int, n: int) -> int:
    if math.gcd(x, n) != 1:
        raise ValueError(f"{x} is not a unit modulo {n}")
    if n == 1:
        return 1
    k, y = 1, x % n
    while y != 1:
        y = y * x % n
        k += 1
    return k


# -- polynomial helpers over F_p (coefficient lists, constant term first) ----

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _ptrim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _ptrim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim([x % p for x in a]), _ptrim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    f = len(m) - 1
    x = [0, 1]
    if _ppowmod(x, p**f, m, p) != _pmod(x, m, p):
        return False
    for ell in prime_factors(f):
        h = _ppowmod(x, p ** (f // ell), m, p)
        diff = h + [0] * (2 - len(h)) if len(h) < 2 else list(h)
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(m, diff, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_modulus(p: int, f: int) -> tuple[int, ...]:
    """First monic irreducible of degree f over F_p in encoding order."""
    for low in range(1, p**f):
        coeffs = [(low // p**i) % p for i in range(f)] + [1]
        if coeffs[0] and _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ArithmeticError(f"no irreducible polynomial of degree {f} over F_{p}")


# -- field table ---------------------------------------------------------------

@dataclass(eq=False)
class FieldTable:
    """F_q with a discrete-log table for a fixed generator."""

    p: int
    f: int
    q: int
    modulus: tuple
    generator: int
    exp: np.ndarray = field(repr=False)
    dlog: np.ndarray = field(repr=False)
    _one_minus: Optional[np.ndarray] = field(default=None, repr=False)
    _histograms: dict = field(default_factory=dict, repr=False)

    # element encodings ---------------------------------------------------

    def digits(self, x) -> np.ndarray:
        return _kernels._decode(np.asarray(x, dtype=np.int64), self.p, self.f)

    def encode(self, digits) -> np.ndarray:
        return _kernels._encode(np.asarray(digits, dtype=np.int64) % self.p, self.p)

    @property
    def one_minus(self) -> np.ndarray:
        """Encoding of 1 - x for every encoding x."""
        if self._one_minus is None:
            x = np.arange(self.q, dtype=np.int64)
            if self.f == 1:
                om = (1 - x) % self.p
            else:
                d = (-self.digits(x)) % self.p
                d[:, 0] = (d[:, 0] + 1) % self.p
                om = self.encode(d)
            self._one_minus = om
        return self._one_minus

    @property
    def minus_one(self) -> int:
        return self.p - 1 if self.p != 2 else 1

    def add(self, x, y):
        if self.f == 1:
            return (np.asarray(x) + np.asarray(y)) % self.p
        return self.encode(self.digits(x) + self.digits(y))

    def neg(self, x):
        if self.f == 1:
            return (-np.asarray(x)) % self.p
        return self.encode(-self.digits(x))

    def mul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        zero = (x == 0) | (y == 0)
        lx = np.where(x == 0, 0, self.dlog[x])
        ly = np.where(y == 0, 0, self.dlog[y])
        out = self.exp[(lx + ly) % (self.q - 1)]
        return np.where(zero, 0, out)

    def power(self, x, n: int):
        """x**n by repeated squaring on encodings; does not consult the log table."""
        x = np.asarray(x, dtype=np.int64)
        if self.f == 1:
            result = np.ones_like(x)
            base = x % self.p
            while n:
                if n & 1:
                    result = result * base % self.p
                base = base * base % self.p
                n >>= 1
            return result
        mod = np.array(self.modulus, dtype=np.int64)
        flat = x.reshape(-1)
        base = self.digits(flat)
        result = np.zeros_like(base)
        result[:, 0] = 1
        while n:
            if n & 1:
                result = _rowwise_mulmod(result, base, mod, self.p)
            base = _rowwise_mulmod(base, base, mod, self.p)
            n >>= 1
        return self.encode(result).reshape(x.shape)

    def zeta(self, N: int) -> int:
        """The fixed primitive N-th root of unity g^((q-1)/N)."""
        if (self.q - 1) % N:
            raise ValueError(f"N={N} does not divide q-1={self.q - 1}")
        return int(self.exp[(self.q - 1) // N])

    def regenerate(self, u: int) -> "FieldTable":
        """The same field with generator g^u (u must be a unit mod q-1)."""
        n = self.q - 1
        if math.gcd(u, n) != 1:
            raise ValueError(f"u={u} is not a unit modulo q-1={n}")
        k = np.arange(n, dtype=np.int64)
        exp = self.exp[(k * u) % n]
        exp.setflags(write=False)
        dlog = np.full(self.q, -1, dtype=np.int64)
        dlog[exp] = k
        dlog.setflags(write=False)
        return FieldTable(p=self.p, f=self.f, q=self.q, modulus=self.modulus,
                          generator=int(exp[1 % n]), exp=exp, dlog=dlog, _one_minus=self._one_minus)

    def character_histogram(self, N: int) -> np.ndarray:
        """H[i, k] = #{x != 0, 1 : dlog x = i, dlog(1-x) = k (mod N)}."""
        if (self.q - 1) % N:
            raise ValueError(f"N={N} does not divide q-1={self.q - 1}")
        if N not in self._histograms:
            self._histograms[N] = _kernels.exponent_histogram(self.dlog, self.one_minus, N)
        return self._histograms[N]


def _rowwise_mulmod(xs: np.ndarray, ys: np.ndarray, modulus: np.ndarray, p: int) -> np.ndarray:
    f = xs.shape[1]
    prod = np.zeros((xs.shape[0], 2 * f - 1), dtype=np.int64)
    for i in range(f):
        prod[:, i:i + f] += xs[:, i, None] * ys
    prod %= p
    for d in range(2 * f - 2, f - 1, -1):
        c = prod[:, d]
        prod[:, d - f:d] = (prod[:, d - f:d] - c[:, None] * modulus[None, :f]) % p
    return prod[:, :f]


def _find_generator(p: int, f: int, modulus: tuple) -> int:
    q = p**f
    n = q - 1
    if n == 1:
        return 1
    cofactors = [n // ell for ell in prime_factors(n)]
    if f == 1:
        for g in range(2, p):
            if all(pow(g, c, p) != 1 for c in cofactors):
                return g
    else:
        m = list(modulus)
        for g in range(p, q):
            d = [(g // p**i) % p for i in range(f)]
            if all(_ppowmod(d, c, m, p) != [1] for c in cofactors):
                return g
    raise ArithmeticError(f"no generator found for F_{q}")


def make_field(p: int, f: int = 1, q_max: int = DEFAULT_Q_MAX) -> FieldTable:
    """Build F_{p^f} with a verified generator and full dlog table."""
    if f < 1:
        raise ValueError(f"extension degree must be >= 1, got {f}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q = p**f
    if q > q_max:
        raise FieldTooLarge(f"field too large: q={q} exceeds q_max={q_max}")
    return _make_field_cached(p, f) if q <= 4096 else _make_large_field_cached(p, f)


@lru_cache(maxsize=256)
def _make_field_cached(p: int, f: int) -> FieldTable:
    return _build_field(p, f)


# large tables cost ~24 bytes per element, so only the most recent few are kept
@lru_cache(maxsize=2)
def _make_large_field_cached(p: int, f: int) -> FieldTable:
    return _build_field(p, f)


def _build_field(p: int, f: int) -> FieldTable:
    q = p**f
    modulus = (0, 1) if f == 1 else irreducible_modulus(p, f)
    g = _find_generator(p, f, modulus)
    if f == 1:
        exp = _kernels.powers_mod_p(g, p)
    else:
        gen = np.array([(g // p**i) % p for i in range(f)], dtype=np.int64)
        exp = _kernels.powers_poly(gen, np.array(modulus, dtype=np.int64), p, f)
    dlog = np.full(q, -1, dtype=np.int64)
    dlog[exp] = np.arange(q - 1, dtype=np.int64)
    if (dlog[1:] < 0).any():
        raise ArithmeticError(f"generator {g} of F_{q} does not have order q-1")
    exp.setflags(write=False)
    dlog.setflags(write=False)
    return FieldTable(p=p, f=f, q=q, modulus=modulus, generator=g, exp=exp, dlog=dlog)


def embed_field(small: FieldTable, big: FieldTable) -> np.ndarray:
    """Encodings in `big` of the elements of `small` under a fixed embedding.

    For a prime field the embedding is canonical.  Otherwise the first root
    (in generator-power order) of the modulus of `small` inside the
    subfield of `big` is used.
    """
    if small.p != big.p or big.f % small.f:
        raise ValueError(f"F_{small.q} does not embed in F_{big.q}")
    if small.f == 1:
        return np.arange(small.q, dtype=np.int64)
    step = (big.q - 1) // (small.q - 1)
    candidates = big.exp[::step]
    m = small.modulus
    theta = None
    for cand in candidates:
        acc = np.int64(m[-1])
        for coeff in reversed(m[:-1]):
            acc = big.add(big.mul(acc, cand), coeff)
        if int(acc) == 0:
            theta = int(cand)
            break
    if theta is None:
        raise ArithmeticError("no root of the subfield modulus found")
    powers = [1]
    for _ in range(small.f - 1):
        powers.append(int(big.mul(powers[-1], theta)))
    g_digits = small.digits(small.generator)
    image_g = 0
    for c, pw in zip(g_digits, powers):
        for _ in range(int(c)):
            image_g = int(big.add(image_g, pw))
    L = int(big.dlog[image_g])
    out = np.zeros(small.q, dtype=np.int64)
    k = np.arange(small.q - 1, dtype=np.int64)
    out[small.exp] = big.exp[(k * L) % (big.q - 1)]
    return out


# -- Jacobi sums -------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiSumRecord:
    N: int
    a: int
    b: int
    p: int
    f: int
    q: int
    value: CyclotomicNumber
    character_normalization: int = 1

    def to_json(self) -> dict:
        return {"N": self.N, "p": self.p, "f": self.f, "t": self.character_normalization,
                "a": self.a, "b": self.b, "coeffs": self.value.to_json()["coeffs"]}


def jacobi_sum_from_histogram(hist: np.ndarray, N: int, a: int, b: int) -> CyclotomicNumber:
    """-sum_{i,k} hist[i,k] xi^(a i + b k)."""
    i = np.arange(N)[:, None]
    k = np.arange(N)[None, :]
    e = (a * i + b * k) % N
    counts = np.bincount(e.ravel(), weights=hist.ravel(), minlength=N)
    return CyclotomicNumber.from_exponent_counts(N, [-int(round(c)) for c in counts])


def jacobi_sum(field: FieldTable, N: int, a: int, b: int) -> JacobiSumRecord:
    """j(chi^a, chi^b) = -sum_{x+y=1} chi^a(x) chi^b(y), with chi(g) = xi_N."""
    if (field.q - 1) % N:
        raise ValueError(f"N={N} does not divide q-1={field.q - 1}")
    value = jacobi_sum_from_histogram(field.character_histogram(N), N, a % N, b % N)
    return JacobiSumRecord(N=N, a=a % N, b=b % N, p=field.p, f=field.f, q=field.q, value=value)


def jacobi_sum_brute(field: FieldTable, N: int, a: int, b: int, char_exp=None) -> CyclotomicNumber:
    """Direct evaluation of the defining sum; char_exp maps x to the exponent of chi(x)."""
    if char_exp is None:
        def char_exp(x):
            return int(field.dlog[x]) % N
    counts = [0] * N
    for x in range(field.q):
        y = int(field.one_minus[x])
        if x == 0 or y == 0:
            continue
        counts[(a * char_exp(x) + b * char_exp(y)) % N] += 1
    return CyclotomicNumber.from_exponent_counts(N, [-c for c in counts])


def _norm_compatibility_twist(field: FieldTable, ext: FieldTable) -> int:
    """u' with chi_ext^{u'} = chi_base o Norm, as a residue mod q-1."""
    iota = embed_field(field, ext)
    cof = (ext.q - 1) // (field.q - 1)
    L = int(ext.dlog[iota[field.generator]])
    if L % cof:
        raise ArithmeticError("embedded generator is not in the norm subgroup")
    u = L // cof
    return pow(u, -1, field.q - 1)


def davenport_hasse_check(field: FieldTable, n: int, N: int, a: int, b: int,
                          q_max: int = DEFAULT_Q_MAX) -> bool:
    """j over F_{q^n} with the character chi o Norm equals j over F_q to the n-th power."""
    if not FermatIndex(N, a, b).in_I_N:
        raise ValueError(f"({a},{b}) is not in I_{N}")
    base = jacobi_sum(field, N, a, b).value
    if n == 1:
        return True
    ext = make_field(field.p, field.f * n, q_max)
    twist = _norm_compatibility_twist(field, ext) % N
    lifted = jacobi_sum(ext, N, a, b).value.galois(twist)
    return lifted == base**n


# -- point counts and fixed points -----------------------------------------------------

def point_count(field: FieldTable, N: int) -> int:
    """#{x^N + y^N = z^N} in P^2(F_q), by enumeration."""
    if field.p and N % field.p == 0:
        raise ValueError(f"p={field.p} divides N={N}")
    xs = np.arange(field.q, dtype=np.int64)
    powers = field.power(xs, N)
    cnt = np.bincount(powers, minlength=field.q)
    affine = int((cnt * cnt[field.one_minus]).sum())
    at_infinity = int(cnt[field.minus_one])
    return affine + at_infinity


def _frobenius_twist_class(field: FieldTable, ext: FieldTable, N: int) -> int:
    """z with iota(zeta_base) = zeta_ext^z, zeta_ext = G^((Q-1)/N)."""
    iota = embed_field(field, ext)
    Z = int(ext.dlog[iota[field.zeta(N)]])
    step = (ext.q - 1) // N
    if Z % step:
        raise ArithmeticError("embedded root of unity has wrong order")
    return (Z // step) % N


def twisted_fixed_points(field: FieldTable, N: int, n: int, r: int, s: int,
                         q_max: int = DEFAULT_Q_MAX, method: str = "formula") -> int:
    """#{P : Fr^n g(P) = P} for g = g_N^{-r,-s}, i.e. x^{q^n} = zeta^r x, y^{q^n} = zeta^s y."""
    if (field.q - 1) % N:
        raise ValueError(f"N={N} does not divide q-1={field.q - 1}")
    r %= N
    s %= N
    if method == "formula":
        ext = field if n == 1 else make_field(field.p, field.f * n, q_max)
        z = _frobenius_twist_class(field, ext, N)
        hist = ext.character_histogram(N)
        lam0 = N * N * int(hist[(z * r) % N, (z * s) % N])
        lam0 += N * (r == 0) + N * (s == 0)
        lam1 = N * (int(ext.dlog[ext.minus_one]) % N == (z * (r - s)) % N)
        return int(lam0 + lam1)
    if method == "direct":
        big = make_field(field.p, field.f * n * N, q_max)
        iota = embed_field(field, big)
        zeta = int(iota[field.zeta(N)])
        qn = field.q**n
        xs = np.arange(big.q, dtype=np.int64)
        frob = np.zeros_like(xs)
        nz = xs != 0
        frob[nz] = big.exp[(big.dlog[xs[nz]] * (qn % (big.q - 1))) % (big.q - 1)]

        def fixed(k):
            return frob == big.mul(xs, big.power(np.array(zeta), k % N))

        pw = big.power(xs, N)
        mr, ms = fixed(r), fixed(s)
        cr = np.bincount(pw[mr], minlength=big.q)
        cs = np.bincount(pw[ms], minlength=big.q)
        affine = int((cr * cs[big.one_minus]).sum())
        inf = int((fixed(r - s) & nz & (pw == big.minus_one)).sum())
        return affine + inf
    raise ValueError(f"unknown method {method!r}")


def weighted_fixed_point_sum(field: FieldTable, N: int, n: int, a: int, b: int,
                             q_max: int = DEFAULT_Q_MAX, method: str = "formula") -> CyclotomicNumber:
    """N^-2 sum_{r,s} xi^{ar+bs} Lambda(Fr^n g^{-r,-s}); equals -j^n for (a,b) in I_N."""
    counts = [0] * N
    for r in range(N):
        for s in range(N):
            lam = twisted_fixed_points(field, N, n, r, s, q_max, method)
            counts[(a * r + b * s) % N] += lam
    return CyclotomicNumber.from_exponent_counts(N, counts, scale=Fraction(1, N * N))


# -- zeta polynomials --------------------------------------------------------------------

def zeta_polynomial(field: FieldTable, N: int, a: int, b: int) -> list[CyclotomicNumber]:
    """Coefficients (constant first) of P(X_N^{a,b}, T) over F_q."""
    if (field.q - 1) % N:
        raise ValueError(f"N={N} does not divide q-1={field.q - 1}")
    idx = FermatIndex(N, a, b)
    one = CyclotomicNumber.from_int(N, 1)
    zeros = (idx.a == 0) + (idx.b == 0) + (idx.c == 0)
    if zeros == 1:
        return [one]
    if zeros == 3:
        raise ValueError("(0,0) gives the zeta function of P^1, not a polynomial of this shape")
    return [one, -jacobi_sum(field, N, a, b).value]


def orbit_zeta_polynomial(base: FieldTable, N: int, a: int, b: int,
                          q_max: int = DEFAULT_Q_MAX) -> list[CyclotomicNumber]:
    """P(X_N^{[a,b]_k}, T) over k = base: 1 - j T^{#orbit}, j taken over k(mu_N)."""
    idx = FermatIndex(N, a, b)
    if not (idx.in_I_N and idx.primitive):
        raise ValueError(f"({a},{b}) must be a primitive element of I_{N}")
    if math.gcd(N, base.p) != 1:
        raise ValueError(f"p={base.p} divides N={N}")
    m = multiplicative_order(base.q % N, N)
    K = base if m == 1 else make_field(base.p, base.f * m, q_max)
    d = len(orbit(idx, cyclic_subgroup(N, base.q % N)))
    j = jacobi_sum(K, N, a, b).value
    poly = [CyclotomicNumber.zero(N)] * (d + 1)
    poly[0] = CyclotomicNumber.from_int(N, 1)
    poly[d] = -j
    return poly
