"""Hot inner loops, each in a numba and a pure-numpy flavour.

The numba versions are used when numba imports and the environment variable
``FERMAT_REGULATOR_NUMBA`` is not set to ``0``.  Both flavours return
bit-identical results; ``tests/test_kernels.py`` and
``benchmarks/bench_kernels.py`` run them side by side.
"""
from __future__ import annotations

import math
import os

import numpy as np

_WANT_NUMBA = os.environ.get("FERMAT_REGULATOR_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _powers_mod_p_numpy(g: int, p: int) -> np.ndarray:
    """g**k mod p for k = 0 .. p-2, by a blocked outer product."""
    n = p - 1
    block = max(1, math.isqrt(n))
    small = np.empty(block, dtype=np.int64)
    x = 1
    for j in range(block):
        small[j] = x
        x = x * g % p
    big_step = x
    nrows = -(-n // block)
    big = np.empty(nrows, dtype=np.int64)
    y = 1
    for i in range(nrows):
        big[i] = y
        y = y * big_step % p
    return ((big[:, None] * small[None, :]) % p).ravel()[:n]


def _decode(enc: np.ndarray, p: int, f: int) -> np.ndarray:
    digits = np.empty(enc.shape + (f,), dtype=np.int64)
    rest = enc.astype(np.int64, copy=True)
    for i in range(f):
        rest, digits[..., i] = np.divmod(rest, p)
    return digits


def _encode(digits: np.ndarray, p: int) -> np.ndarray:
    f = digits.shape[-1]
    enc = np.zeros(digits.shape[:-1], dtype=np.int64)
    for i in range(f - 1, -1, -1):
        enc = enc * p + digits[..., i]
    return enc


def _outer_mulmod(xs: np.ndarray, ys: np.ndarray, modulus: np.ndarray, p: int) -> np.ndarray:
    """Products xs[i]*ys[j] mod (modulus, p) for digit arrays of shape (k, f), (m, f)."""
    f = xs.shape[1]
    prod = np.zeros((xs.shape[0], ys.shape[0], 2 * f - 1), dtype=np.int64)
    for i in range(f):
        prod[:, :, i:i + f] += xs[:, None, i, None] * ys[None, :, :]
    for d in range(2 * f - 2, f - 1, -1):
        # only the leading digit needs reducing; entries stay below ~2 f p^2
        c = prod[:, :, d] % p
        prod[:, :, d - f:d] -= c[:, :, None] * modulus[None, None, :f]
    low = prod[:, :, :f]
    low %= p
    return low


def _geometric_rows(x: np.ndarray, count: int, modulus: np.ndarray, p: int) -> np.ndarray:
    """Digit rows of x^0 .. x^(count-1), doubling the table each step."""
    f = x.shape[0]
    rows = np.zeros((1, f), dtype=np.int64)
    rows[0, 0] = 1
    step = x[None, :]
    while rows.shape[0] < count:
        rows = np.concatenate([rows, _outer_mulmod(rows, step, modulus, p)[:, 0, :]])
        step = _outer_mulmod(step, step, modulus, p)[:, 0, :]
    return rows[:count]


def _powers_poly_numpy(gen: np.ndarray, modulus: np.ndarray, p: int, f: int) -> np.ndarray:
    n = p**f - 1
    block = max(1, math.isqrt(n))
    small = _geometric_rows(gen, block, modulus, p)
    big_step = _outer_mulmod(small[-1:], gen[None, :], modulus, p)[0, 0]
    nrows = -(-n // block)
    big = _geometric_rows(big_step, nrows, modulus, p)
    # multiplication by big[i] is the F_p-linear map with rows big[i] * x^k
    basis = np.eye(f, dtype=np.int64)
    mats = _outer_mulmod(big, basis, modulus, p)  # (nrows, f, f)
    place = p ** np.arange(f, dtype=np.int64)
    out = np.empty(nrows * block, dtype=np.int64)
    chunk = max(1, (1 << 22) // (block * f))
    for start in range(0, nrows, chunk):
        part = np.matmul(small[None, :, :], mats[start:start + chunk]) % p
        out[start * block:(start + part.shape[0]) * block] = (part @ place).ravel()
    return out[:n]


def _exponent_histogram_numpy(dlog: np.ndarray, one_minus: np.ndarray, N: int) -> np.ndarray:
    x = np.arange(2, dlog.shape[0], dtype=np.int64)
    y = one_minus[x]
    keep = y != 0
    ex = dlog[x[keep]] % N
    ey = dlog[y[keep]] % N
    return np.bincount(ex * N + ey, minlength=N * N).reshape(N, N).astype(np.int64)


def _group_ring_convolve_numpy(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = np.zeros_like(B)
    for r, s, e in zip(*np.nonzero(A)):
        out += A[r, s, e] * np.roll(B, (r, s, e), axis=(0, 1, 2))
    return out


def _antidiagonal_sums_numpy(log_a: np.ndarray, log_b: np.ndarray, log_c: np.ndarray) -> np.ndarray:
    D = log_c.shape[0]
    out = np.empty(D)
    for d in range(D):
        out[d] = np.exp(log_a[:d + 1] + log_b[d::-1] - log_c[d]).sum()
    return out


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def _powers_mod_p_numba(g, p):
        # g^(i*block + j) = big[i] * small[j]: the products are independent, unlike a running power
        n = p - 1
        block = max(1, int(math.sqrt(n)))
        small = np.empty(block, dtype=np.int64)
        x = np.int64(1)
        for j in range(block):
            small[j] = x
            x = x * g % p
        out = np.empty(n, dtype=np.int64)
        y = np.int64(1)
        for start in range(0, n, block):
            for j in range(min(block, n - start)):
                out[start + j] = y * small[j] % p
            y = y * x % p
        return out

    @_jit
    def _powers_poly_numba(gen, modulus, p, f):
        q = 1
        for _ in range(f):
            q *= p
        n = q - 1
        out = np.empty(n, dtype=np.int64)
        cur = np.zeros(f, dtype=np.int64)
        cur[0] = 1
        prod = np.zeros(2 * f - 1, dtype=np.int64)
        for k in range(n):
            enc = np.int64(0)
            for i in range(f - 1, -1, -1):
                enc = enc * p + cur[i]
            out[k] = enc
            prod[:] = 0
            for i in range(f):
                if cur[i] != 0:
                    for j in range(f):
                        prod[i + j] += cur[i] * gen[j]
            for d in range(2 * f - 2, f - 1, -1):
                c = prod[d] % p
                if c != 0:
                    for i in range(f):
                        prod[d - f + i] -= c * modulus[i]
            for i in range(f):
                cur[i] = prod[i] % p
        return out

    @_jit
    def _exponent_histogram_numba(dlog, one_minus, N):
        hist = np.zeros((N, N), dtype=np.int64)
        for x in range(2, dlog.shape[0]):
            y = one_minus[x]
            if y == 0:
                continue
            hist[dlog[x] % N, dlog[y] % N] += 1
        return hist

    @_jit
    def _group_ring_convolve_numba(A, B):
        N = A.shape[0]
        out = np.zeros_like(B)
        for r1 in range(N):
            for s1 in range(N):
                for e1 in range(N):
                    c = A[r1, s1, e1]
                    if c == 0:
                        continue
                    for r2 in range(N):
                        r = (r1 + r2) % N
                        for s2 in range(N):
                            s = (s1 + s2) % N
                            for e2 in range(N):
                                v = B[r2, s2, e2]
                                if v != 0:
                                    out[r, s, (e1 + e2) % N] += c * v
        return out

    # reassociating the inner sum lets it vectorize; terms are all positive
    @numba.njit(cache=True, nogil=True, fastmath=True)
    def _antidiagonal_sums_numba(log_a, log_b, log_c):
        D = log_c.shape[0]
        out = np.empty(D)
        if np.abs(log_a[:D]).max() < 300.0 and np.abs(log_b[:D]).max() < 300.0:
            # exp(a) exp(b) cannot overflow here, so exponentiate once and convolve
            ea = np.exp(log_a[:D])
            eb_rev = np.exp(log_b[:D])[::-1].copy()
            for d in range(D):
                acc = 0.0
                off = D - 1 - d
                for m in range(d + 1):
                    acc += ea[m] * eb_rev[off + m]
                out[d] = acc * math.exp(-log_c[d])
            return out
        for d in range(D):
            acc = 0.0
            for m in range(d + 1):
                acc += math.exp(log_a[m] + log_b[d - m] - log_c[d])
            out[d] = acc
        return out


NUMPY_IMPL = {
    "powers_mod_p": _powers_mod_p_numpy,
    "powers_poly": _powers_poly_numpy,
    "exponent_histogram": _exponent_histogram_numpy,
    "group_ring_convolve": _group_ring_convolve_numpy,
    "antidiagonal_sums": _antidiagonal_sums_numpy,
}

if HAVE_NUMBA:
    NUMBA_IMPL = {
        "powers_mod_p": _powers_mod_p_numba,
        "powers_poly": _powers_poly_numba,
        "exponent_histogram": _exponent_histogram_numba,
        "group_ring_convolve": _group_ring_convolve_numba,
        "antidiagonal_sums": _antidiagonal_sums_numba,
    }
else:
    NUMBA_IMPL = {}


def _active(name: str):
    if USE_NUMBA and NUMBA_IMPL:
        return NUMBA_IMPL[name]
    return NUMPY_IMPL[name]


def powers_mod_p(g: int, p: int) -> np.ndarray:
    """Antilog table of a primitive root g modulo a prime p."""
    return _active("powers_mod_p")(np.int64(g), np.int64(p))


def powers_poly(gen: np.ndarray, modulus: np.ndarray, p: int, f: int) -> np.ndarray:
    """Encodings of gen**k in F_p[X]/(modulus), k = 0 .. p**f - 2."""
    gen = np.ascontiguousarray(gen, dtype=np.int64)
    modulus = np.ascontiguousarray(modulus, dtype=np.int64)
    return _active("powers_poly")(gen, modulus, np.int64(p), np.int64(f))


def exponent_histogram(dlog: np.ndarray, one_minus: np.ndarray, N: int) -> np.ndarray:
    """Counts of (dlog x mod N, dlog(1-x) mod N) over x in F_q minus {0, 1}."""
    return _active("exponent_histogram")(dlog, one_minus, np.int64(N))


def group_ring_convolve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Cyclic convolution on (Z/N)^3 of two integer arrays of shape (N, N, N)."""
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    return _active("group_ring_convolve")(A, B)


def antidiagonal_sums(log_a: np.ndarray, log_b: np.ndarray, log_c: np.ndarray) -> np.ndarray:
    """S_d = sum_{m+n=d} exp(log_a[m] + log_b[n] - log_c[d])."""
    return _active("antidiagonal_sums")(
        np.ascontiguousarray(log_a, dtype=np.float64),
        np.ascontiguousarray(log_b, dtype=np.float64),
        np.ascontiguousarray(log_c, dtype=np.float64),
    )
