"""Jacobi-sum Euler products for L(sigma, X_N^{a,b}, s) at real s > 3/2.

A rational prime p not dividing N splits in Q(mu_N) into g = phi(N)/f primes
of norm p^f, f the order of p mod N.  They are labelled by representatives t
of (Z/N)^*/<p>, and the prime labelled t contributes the Jacobi sum
j(chi^{ta}, chi^{tb}) over F_{p^f}.  Only the multiset of these values per p
is canonical.
"""
from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .cyclotomic import CyclotomicNumber, euler_phi, units
from .finite_field import (DEFAULT_Q_MAX, JacobiSumRecord, jacobi_sum_from_histogram,
                           make_field, multiplicative_order)
from .group_ring import FermatIndex

DEFAULT_PRIME_BOUND = 10**5
CACHE_ENV = "FERMAT_REGULATOR_CACHE"


class BadPrime(ValueError):
    """p divides N: the Euler factor is 1."""


class CacheCorrupt(ValueError):
    """A cache line failed to parse."""


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, math.isqrt(n) + 1):
        if sieve[k]:
            sieve[k * k::k] = False
    return np.flatnonzero(sieve).astype(np.int64)


@dataclass(frozen=True)
class SplittingData:
    N: int
    p: int
    f: int
    g: int
    coset_reps: tuple
    norm: int


def splitting(N: int, p: int) -> SplittingData:
    if N % p == 0:
        raise BadPrime(f"bad prime: p={p} divides N={N}, Euler factor 1")
    f = multiplicative_order(p % N, N) if N > 1 else 1
    reps, seen = [], set()
    for t in units(N):
        if t % N in seen:
            continue
        reps.append(t)
        x = t % N
        for _ in range(f):
            seen.add(x)
            x = x * p % N
    g = euler_phi(N) // f
    assert len(reps) == g
    return SplittingData(N=N, p=p, f=f, g=g, coset_reps=tuple(reps), norm=p**f)


# -- cache -----------------------------------------------------------------------

class JacobiCache:
    """Append-only JSONL store, one file per (N, p)."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.writes = 0

    def path(self, N: int, p: int) -> Path:
        return self.directory / f"jacobi_N{N}_p{p}.jsonl"

    def load(self, N: int, p: int) -> dict:
        """{(f, a, b): value} for the records of one (N, p) file."""
        path = self.path(N, p)
        if not path.exists():
            return {}
        return {(r["f"], r["a"], r["b"]): v for r, v in read_records(path)}

    def append(self, records: Iterable[JacobiSumRecord]) -> None:
        by_file: dict = {}
        for rec in records:
            by_file.setdefault(self.path(rec.N, rec.p), []).append(rec)
        for path, recs in by_file.items():
            try:
                with open(path, "a", encoding="utf-8") as fh:
                    for rec in recs:
                        fh.write(json.dumps(rec.to_json(), separators=(",", ":")) + "\n")
            except OSError as exc:
                raise OSError(f"cannot write Jacobi cache {path}: {exc}") from exc
            self.writes += len(recs)


def default_cache_dir() -> Optional[str]:
    return os.environ.get(CACHE_ENV) or None


def read_records(path) -> list:
    """Parse a cache file into (raw dict, CyclotomicNumber) pairs."""
    out = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read Jacobi cache {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                value = CyclotomicNumber.from_json({"N": raw["N"], "coeffs": raw["coeffs"]})
                for key in ("p", "f", "t", "a", "b"):
                    raw[key] = int(raw[key])
            except (ValueError, KeyError, TypeError) as exc:
                raise CacheCorrupt(f"{path}: line {lineno}: {exc}") from exc
            out.append((raw, value))
    return out


def write_records(path, records: Iterable[JacobiSumRecord]) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_json(), separators=(",", ":")) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write Jacobi cache {path}: {exc}") from exc


def cache_roundtrip(path, records: Iterable[JacobiSumRecord] = ()) -> bool:
    """Write records, read them back, and compare exactly."""
    records = list(records)
    write_records(path, records)
    back = read_records(path)
    if len(back) != len(records):
        return False
    return all(value == rec.value and raw == rec.to_json()
               for rec, (raw, value) in zip(records, back))


# -- Euler factors ------------------------------------------------------------------

@dataclass(frozen=True)
class EulerFactors:
    split: SplittingData
    values: tuple  # one CyclotomicNumber per coset representative, in order
    cache_hit: bool = False


def euler_factors_at_p(N: int, a: int, b: int, p: int, q_max: int = DEFAULT_Q_MAX,
                       cache: Optional[JacobiCache] = None, field=None) -> Optional[EulerFactors]:
    """The Jacobi sums j(chi^{ta}, chi^{tb}) over F_{p^f}, or None if p^f > q_max."""
    sp = splitting(N, p)
    keys = [(sp.f, (t * a) % N, (t * b) % N) for t in sp.coset_reps]
    if cache is not None:
        stored = cache.load(N, p)
        if all(k in stored for k in keys):
            cache.hits += 1
            return EulerFactors(sp, tuple(stored[k] for k in keys), cache_hit=True)
    if sp.norm > q_max:
        return None
    F = field if field is not None else make_field(p, sp.f, q_max)
    hist = F.character_histogram(N)
    values = tuple(jacobi_sum_from_histogram(hist, N, ta, tb) for _, ta, tb in keys)
    if cache is not None:
        cache.append(JacobiSumRecord(N=N, a=ta, b=tb, p=p, f=sp.f, q=sp.norm, value=v)
                     for (_, ta, tb), v in zip(keys, values))
    return EulerFactors(sp, values)


# -- L-values -------------------------------------------------------------------------

@dataclass
class EulerProductState:
    N: int
    a: int
    b: int
    s: float
    prime_bound: int
    values: dict = field(default_factory=dict)  # h -> complex
    tail_bound: float = math.inf
    primes_used: int = 0
    primes_skipped: list = field(default_factory=list)
    cache_hits: int = 0
    level: int = 0

    @property
    def value(self) -> complex:
        return self.values[1]


def working_level(index: FermatIndex) -> FermatIndex:
    """Level at which the Euler product is formed.

    An imprimitive (a, b) cuts out the same motive as (a/d, b/d) at level N/d.
    When Q(mu_{N/d}) = Q(mu_N) the product is taken at the lower level, where
    the primes dividing N but not N/d are good.
    """
    d = math.gcd(math.gcd(index.N, index.a), index.b)
    if d == 1:
        return index
    low = FermatIndex(index.N // d, index.a // d, index.b // d)
    if euler_phi(low.N) == euler_phi(index.N):
        return low
    return index


def _tail_estimate(N: int, s: float, P: int) -> float:
    """Bound on sum_{N(v) > P} |log(1 - j_v N(v)^-s)| using |j_v| = N(v)^{1/2}.

    Prime ideals of degree f have norms p^f; counting them with density
    phi(N)/log t in the norm gives the integral estimate used here.
    """
    if P < 2:
        return math.inf
    e = s - 0.5
    total = 0.0
    for f in range(1, euler_phi(N) + 1):
        # x = P^{1/f} is the rational-prime cutoff; sum_{p > x} p^{-f e} <= x^{1-fe}/((fe-1) log x)
        x = P ** (1.0 / f)
        if f * e <= 1 or x < 2:
            continue
        total += x ** (1 - f * e) / ((f * e - 1) * math.log(x))
    total *= euler_phi(N)
    return total / (1 - P ** (-e))


def l_value(N: int, a: int, b: int, s: float = 2.0, prime_bound: int = DEFAULT_PRIME_BOUND,
            q_max: int = DEFAULT_Q_MAX, cache: Optional[JacobiCache] = None) -> EulerProductState:
    """Truncated Euler product over primes v of Q(mu_N) with N(v) <= prime_bound, per embedding."""
    index = FermatIndex(N, a, b)
    if not index.in_I_N:
        raise ValueError(f"({a},{b}) is not in I_{N}")
    if s <= 1.5:
        raise ValueError(f"s={s} is outside the region of absolute convergence s > 3/2")
    work = working_level(index)
    M, A, B = work.N, work.a, work.b
    hs = units(M)
    logs = {h: 0j for h in hs}
    state = EulerProductState(N=N, a=index.a, b=index.b, s=s, prime_bound=prime_bound, level=M)
    skipped_charge = 0.0
    for p in primes_up_to(prime_bound):
        p = int(p)
        if M % p == 0:
            continue
        sp = splitting(M, p)
        if sp.norm > prime_bound:
            continue
        ef = euler_factors_at_p(M, A, B, p, q_max, cache)
        if ef is None:
            state.primes_skipped.append(p)
            r = sp.norm ** (0.5 - s)
            skipped_charge += sp.g * r / (1 - r)
            continue
        state.primes_used += 1
        state.cache_hits += int(ef.cache_hit)
        scale = sp.norm ** (-s)
        for h in hs:
            for v in ef.values:
                logs[h] -= cmath.log(1 - v.embed(h) * scale)
    delta = _tail_estimate(M, s, prime_bound) + skipped_charge
    state.tail_bound = math.expm1(delta) if math.isfinite(delta) else math.inf
    state.values = {h: cmath.exp(logs[h]) for h in hs}
    return state
