"""Regulator coordinates of the Fermat motives and their determinants.

All outputs are real coordinates against the canonical Deligne-cohomology
basis element, which itself is never represented.  Per embedding twist h the
regulator coefficient is rho = -F_N^{ha,hb,hc} / (4 N^2) (the complex
constant being rho / (pi i)), and the two transposition twists multiply a
permuted F_N by a real ratio of Phi_N values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .group_ring import FermatIndex, rep
from .hypergeom import DEFAULT_METHOD, f_tilde
from .lfunction import DEFAULT_PRIME_BOUND, EulerProductState, l_value, working_level

SYMBOLS = ("(1)", "(1 3)", "(2 3)")
DEFAULT_TOL = 1e-8


def phi(N: int, e: int) -> complex:
    """Phi_N(eta^e) = eta^{e(N-1)/2} - eta^{-e(N-1)/2} = 2i sin(pi e (N-1)/N)."""
    if N % 2 == 0:
        raise ValueError(f"Phi_N needs odd N, got {N}")
    e %= N
    if e == 0:
        return 0j
    return 2j * math.sin(math.pi * e * (N - 1) / N)


def _as_index(index, N: Optional[int] = None) -> FermatIndex:
    if isinstance(index, FermatIndex):
        return index
    a, b = index[0], index[1]
    return FermatIndex(N, a, b)


@lru_cache(maxsize=4096)
def _F_cached(N: int, a: int, b: int, tol: float, method: str) -> tuple[float, float]:
    plus = f_tilde(rep(a, N) / N, rep(b, N) / N, method, tol)
    minus = f_tilde(rep(-a, N) / N, rep(-b, N) / N, method, tol)
    return plus.value - minus.value, plus.err_bound + minus.err_bound


def F_N_with_error(index: FermatIndex, tol: float = DEFAULT_TOL,
                   method: str = DEFAULT_METHOD) -> tuple[float, float]:
    if not index.in_I_N:
        raise ValueError(f"{index} is not in I_{index.N}")
    return _F_cached(index.N, index.a, index.b, float(tol), method)


def F_N(index: FermatIndex, tol: float = DEFAULT_TOL, method: str = DEFAULT_METHOD) -> float:
    """F~(<a>/N, <b>/N) - F~(<-a>/N, <-b>/N)."""
    return F_N_with_error(index, tol, method)[0]


@dataclass(frozen=True)
class RegulatorValue:
    index: FermatIndex
    h: int
    F_value: float
    constant: float

    @property
    def complex_constant(self) -> complex:
        """rho / (pi i), purely imaginary."""
        return self.constant / (math.pi * 1j)


def regulator_constant(index: FermatIndex, h: int = 1, tol: float = DEFAULT_TOL,
                       method: str = DEFAULT_METHOD) -> RegulatorValue:
    N = index.N
    if math.gcd(h, N) != 1:
        raise ValueError(f"h={h} is not a unit modulo N={N}")
    F = F_N(index.scaled(h), tol, method)
    return RegulatorValue(index, h % N, F, -F / (4 * N * N))


def twist_coefficient(index: FermatIndex, which: str, h: int = 1) -> float:
    """Real ratio -Phi(eta^{hc})/Phi(eta^{ha}) for (1 3), or with hb in the denominator for (2 3)."""
    N = index.N
    hc = h * index.c
    if which == "(1 3)":
        den = h * index.a
    elif which == "(2 3)":
        den = h * index.b
    else:
        raise ValueError(f"unknown transposition {which!r}")
    d = phi(N, den)
    if d == 0:
        raise ZeroDivisionError(f"Phi_{N}(eta^{den % N}) vanishes")
    ratio = -phi(N, hc) / d
    assert abs(ratio.imag) <= 1e-12 * max(1.0, abs(ratio.real))
    return ratio.real


def symbol_entry(index: FermatIndex, symbol: str, h: int, tol: float = DEFAULT_TOL,
                 method: str = DEFAULT_METHOD) -> tuple[float, float]:
    """Coordinate (up to the common factor -1/(4 N^2 pi i)) of a symbol at the place of h."""
    N = index.N
    a, b, c = h * index.a, h * index.b, h * index.c
    if symbol == "(1)":
        return F_N_with_error(FermatIndex(N, a, b), tol, method)
    if symbol == "(1 3)":
        F, err = F_N_with_error(FermatIndex(N, c, b), tol, method)
    elif symbol == "(2 3)":
        F, err = F_N_with_error(FermatIndex(N, a, c), tol, method)
    else:
        raise ValueError(f"unknown symbol {symbol!r}")
    r = twist_coefficient(index, symbol, h)
    return r * F, abs(r) * err


def infinite_places(N: int) -> list[int]:
    """Smallest positive representatives of (Z/N)^*/{+-1}."""
    return [h for h in range(1, N // 2 + 1) if math.gcd(h, N) == 1] if N > 2 else [1]


@dataclass
class RegMatrix:
    N: int
    index: FermatIndex
    rows: list
    cols: list
    entries: np.ndarray
    errors: np.ndarray
    determinants: dict = field(default_factory=dict)

    def det(self) -> float:
        if self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("matrix is not square")
        return float(np.linalg.det(self.entries))

    def to_json(self) -> dict:
        return {"N": self.N, "a": self.index.a, "b": self.index.b, "c": self.index.c,
                "rows": list(self.rows), "cols": list(self.cols),
                "entries": self.entries.tolist(), "errors": self.errors.tolist(),
                "determinants": dict(self.determinants)}


def regulator_matrix(index: FermatIndex, symbols: Sequence[str] = SYMBOLS,
                     rows: Optional[Sequence[int]] = None, tol: float = DEFAULT_TOL,
                     method: str = DEFAULT_METHOD) -> RegMatrix:
    N = index.N
    if N % 2 == 0:
        raise ValueError(f"regulator matrices need odd N, got {N}")
    if not index.in_I_N:
        raise ValueError(f"{index} is not in I_{N}")
    hs = list(rows) if rows is not None else infinite_places(N)
    ent = np.empty((len(hs), len(symbols)))
    err = np.empty_like(ent)
    for i, h in enumerate(hs):
        for j, sym in enumerate(symbols):
            ent[i, j], err[i, j] = symbol_entry(index, sym, h, tol, method)
    return RegMatrix(N, index, hs, list(symbols), ent, err)


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _det3(m: np.ndarray) -> float:
    return float(m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
                 - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
                 + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def matrix_A(index: FermatIndex, tol: float = DEFAULT_TOL, method: str = DEFAULT_METHOD) -> RegMatrix:
    """2x2 matrix over N = 5: symbols (1) and (1 3), or (2 3) when a = c."""
    if index.N != 5:
        raise ValueError(f"matrix_A is defined for N=5, got N={index.N}")
    second = "(2 3)" if index.a == index.c else "(1 3)"
    m = regulator_matrix(index, ("(1)", second), (1, 2), tol, method)
    m.determinants["direct"] = _det2(m.entries)
    return m


def det_A_closed_form(tol: float = DEFAULT_TOL, method: str = DEFAULT_METHOD) -> float:
    """r F^{1,1,3} F^{1,2,2} + r^{-1} F^{3,1,1} F^{2,2,1}, r = sin(4pi/5)/sin(2pi/5)."""
    r = math.sin(4 * math.pi / 5) / math.sin(2 * math.pi / 5)
    F = lambda a, b: F_N(FermatIndex(5, a, b), tol, method)  # noqa: E731
    return r * F(1, 1) * F(1, 2) + F(3, 1) * F(2, 2) / r


def _stu(tol: float, method: str) -> tuple[complex, complex, complex, complex]:
    F = lambda a, b: F_N(FermatIndex(7, a, b), tol, method)  # noqa: E731
    s = 1j * F(1, 2) / phi(7, 4)
    t = 1j * F(2, 4) / phi(7, 1)
    u = 1j * F(3, 6) / phi(7, 5)
    C = 1j * phi(7, 4) * phi(7, 1) * phi(7, 5)
    return s, t, u, C


def det_B_factored(tol: float = DEFAULT_TOL, method: str = DEFAULT_METHOD) -> float:
    """C (s^3 + t^3 + u^3 - 3stu) for B^{1,2,4}."""
    s, t, u, C = _stu(tol, method)
    val = C * (s**3 + t**3 + u**3 - 3 * s * t * u)
    assert abs(val.imag) <= 1e-9 * max(1.0, abs(val.real))
    return val.real


def matrix_B(index: FermatIndex, tol: float = DEFAULT_TOL, method: str = DEFAULT_METHOD) -> RegMatrix:
    """3x3 matrix over N = 7 with rows h = 1, 2, 3 and all three symbols."""
    if index.N != 7:
        raise ValueError(f"matrix_B is defined for N=7, got N={index.N}")
    m = regulator_matrix(index, SYMBOLS, (1, 2, 3), tol, method)
    m.determinants["direct"] = _det3(m.entries)
    m.determinants["lu"] = m.det()
    if (index.a, index.b) == (1, 2):
        m.determinants["factored"] = det_B_factored(tol, method)
    return m


def numerical_rank(matrix: np.ndarray, rtol: float = 1e-8) -> tuple[int, np.ndarray]:
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0, sv
    return int(np.sum(sv > rtol * sv[0])), sv


def surjectivity_report(N: int, index: FermatIndex, tol: float = DEFAULT_TOL,
                        rtol: float = 1e-8, method: str = DEFAULT_METHOD) -> dict:
    """Rank of the places x symbols regulator matrix."""
    if N % 2 == 0 or N < 5:
        raise ValueError(f"surjectivity_report needs odd N >= 5, got {N}")
    m = regulator_matrix(_as_index(index, N), SYMBOLS, None, tol, method)
    rank, sv = numerical_rank(m.entries, rtol)
    return {"N": N, "index": (m.index.a, m.index.b, m.index.c), "rank": rank,
            "singular_values": sv.tolist(), "matrix": m}


# -- Beilinson ratio ------------------------------------------------------------------------

def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with least denominator in [lo, hi], 0 < lo <= hi."""
    n = math.floor(lo)
    if n == lo:
        return Fraction(n)
    if n + 1 <= hi:
        return Fraction(n + 1)
    return n + 1 / simplest_rational(1 / (hi - n), 1 / (lo - n))


def recognize_rational(x: float, budget: float, max_den: int = 200) -> Optional[Fraction]:
    """Simplest p/q with |x - p/q| <= budget and q <= max_den, if any."""
    if not math.isfinite(x) or not math.isfinite(budget) or budget < 0:
        return None
    lo, hi = Fraction(x) - Fraction(budget), Fraction(x) + Fraction(budget)
    if lo <= 0 <= hi:
        return None
    sign = 1
    if hi < 0:
        sign, lo, hi = -1, -hi, -lo
    r = simplest_rational(lo, hi)
    return sign * r if r.denominator <= max_den else None


@dataclass
class BeilinsonResult:
    N: int
    index: FermatIndex
    l_value: float
    rhs: float
    ratio: float
    budget: float  # absolute, on the ratio
    recognized: Optional[Fraction]
    height: Optional[int]
    l_tail_bound: float
    rhs_error: float
    prime_bound: int

    def to_json(self) -> dict:
        return {"N": self.N, "a": self.index.a, "b": self.index.b, "L": self.l_value,
                "rhs": self.rhs, "ratio": self.ratio, "budget": self.budget,
                "recognized": None if self.recognized is None else str(self.recognized),
                "height": self.height, "l_tail_bound": self.l_tail_bound,
                "rhs_error": self.rhs_error, "prime_bound": self.prime_bound}


def beilinson_rhs(index: FermatIndex, tol: float = DEFAULT_TOL,
                  method: str = DEFAULT_METHOD) -> tuple[float, float]:
    """Regulator side of the conjectural equality, and its absolute error."""
    N = index.N
    if N in (3, 4, 6):
        work = working_level(index)
        F, err = F_N_with_error(work, tol, method)
        w = math.sin(2 * math.pi / work.N)
        return w * F, w * err
    if N == 5:
        r = math.sin(4 * math.pi / 5) / math.sin(2 * math.pi / 5)
        vals = {k: F_N_with_error(FermatIndex(5, *k), tol, method) for k in ((1, 1), (1, 2), (3, 1), (2, 2))}
        (f1, e1), (f2, e2), (f3, e3), (f4, e4) = (vals[k] for k in ((1, 1), (1, 2), (3, 1), (2, 2)))
        val = r * f1 * f2 + f3 * f4 / r
        err = r * (abs(f1) * e2 + abs(f2) * e1) + (abs(f3) * e4 + abs(f4) * e3) / r
        return val, err
    if N == 7:
        if len({index.a, index.b, index.c}) < 3:
            raise ValueError("the N=7 expression applies when a, b, c are distinct")
        F = {k: F_N_with_error(FermatIndex(7, *k), tol, method) for k in ((1, 2), (2, 4), (4, 1))}
        s = -F[(1, 2)][0] / math.sin(4 * math.pi / 7)
        t = F[(2, 4)][0] / math.sin(6 * math.pi / 7)
        u = -F[(4, 1)][0] / math.sin(2 * math.pi / 7)
        es = F[(1, 2)][1] / math.sin(4 * math.pi / 7)
        et = F[(2, 4)][1] / math.sin(6 * math.pi / 7)
        eu = F[(4, 1)][1] / math.sin(2 * math.pi / 7)
        val = s**3 + t**3 + u**3 - 3 * s * t * u
        err = (abs(3 * s * s - 3 * t * u) * es + abs(3 * t * t - 3 * s * u) * et
               + abs(3 * u * u - 3 * s * t) * eu)
        return val, err
    raise ValueError(f"unsupported N={N}; choose from 3, 4, 5, 6, 7")


def beilinson_ratio(N: int, index: FermatIndex, lvalue: Optional[EulerProductState] = None,
                    tol: float = DEFAULT_TOL, prime_bound: int = DEFAULT_PRIME_BOUND,
                    cache=None, max_den: int = 200, method: str = DEFAULT_METHOD) -> BeilinsonResult:
    index = _as_index(index, N)
    rhs, rhs_err = beilinson_rhs(index, tol, method)
    if lvalue is None:
        lvalue = l_value(N, index.a, index.b, 2.0, prime_bound, cache=cache)
    L = lvalue.value.real
    ratio = L / rhs
    rel = lvalue.tail_bound + rhs_err / abs(rhs)
    budget = abs(ratio) * rel
    rec = recognize_rational(ratio, budget, max_den)
    height = None if rec is None else max(abs(rec.numerator), rec.denominator)
    return BeilinsonResult(N, index, L, rhs, ratio, budget, rec, height,
                           lvalue.tail_bound, rhs_err, lvalue.prime_bound)
