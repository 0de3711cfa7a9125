"""Gamma and Beta values, hypergeometric series at the boundary, and F~, G~.

F~(alpha, beta) is evaluated four independent ways:

``double_series``
    anti-diagonal sums of the defining Appell-type double series;
``single_series_3F2``
    (B(alpha, beta))^2 * 3F2(alpha, beta, alpha+beta-1; alpha+beta, alpha+beta; 1);
``beta_sum``
    sum_m B(alpha+m, beta)/(alpha+m);
``quadrature``
    tanh-sinh quadrature of the triangle integral.

The series at x = 1 converge algebraically, so each partial sum is completed
by a tail fitted on the known asymptotic exponents and summed in closed form
with Hurwitz zeta values.  The error estimate is the change in that tail when
one more fitted term is dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from . import _kernels

METHODS = ("double_series", "single_series_3F2", "beta_sum", "quadrature")
DEFAULT_METHOD = "single_series_3F2"
TERM_BUDGET = 10**7
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class HGValue:
    value: float
    method: str
    err_bound: float
    terms_used: int
    converged: bool = True

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class ThreeF2Params:
    a1: float
    a2: float
    a3: float
    b1: float
    b2: float
    x: float = 1.0

    def __post_init__(self):
        for b in (self.b1, self.b2):
            if b <= 0 and float(b).is_integer():
                raise ValueError(f"denominator parameter {b} is a non-positive integer")

    @property
    def excess(self) -> float:
        """b1 + b2 - a1 - a2 - a3; the series converges at x = 1 iff this is positive."""
        return self.b1 + self.b2 - self.a1 - self.a2 - self.a3

    @property
    def converges(self) -> bool:
        if abs(self.x) < 1:
            return True
        if self.terminates:
            return True
        return abs(self.x) == 1 and self.excess > 0

    @property
    def terminates(self) -> bool:
        return any(a <= 0 and float(a).is_integer() for a in (self.a1, self.a2, self.a3))


# -- Gamma, Beta, Pochhammer -----------------------------------------------------------

def log_gamma(x: float) -> float:
    if x <= 0:
        raise ValueError(f"log_gamma needs a positive argument, got {x}")
    return math.lgamma(x)


def log_beta(alpha: float, beta: float) -> float:
    if alpha <= 0 or beta <= 0:
        raise ValueError(f"Beta needs positive arguments, got ({alpha}, {beta})")
    return math.lgamma(alpha) + math.lgamma(beta) - math.lgamma(alpha + beta)


def beta(alpha: float, beta_: float) -> float:
    return math.exp(log_beta(alpha, beta_))


def pochhammer(alpha: float, n: int) -> float:
    """Rising factorial alpha (alpha+1) ... (alpha+n-1)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if alpha <= 0 and float(alpha).is_integer() and -alpha < n:
        raise ValueError(f"({alpha}, {n}) crosses the pole at 0")
    if alpha > 0 and n > 64:
        return math.exp(math.lgamma(alpha + n) - math.lgamma(alpha))
    out = 1.0
    for k in range(n):
        out *= alpha + k
    return out


def _signed_log_gamma(x: float) -> tuple[float, float]:
    return float(special.gammasgn(x)), math.lgamma(x)


# -- tail fitting ------------------------------------------------------------------------

def _distinct_exponents(families: Sequence[float], order: int) -> list[float]:
    """Exponents e + k, k < order, for each family, merging coincident ones."""
    out: list[float] = []
    for k in range(order):
        for e in families:
            x = e + k
            if all(abs(x - y) > 1e-9 for y in out):
                out.append(x)
    return sorted(out)


def _fitted_tail(n: np.ndarray, t: np.ndarray, exponents: Sequence[float], start: int) -> float:
    """sum_{m >= start} sum_k c_k m^-e_k with c_k fitted to t(n) by least squares."""
    exps = np.asarray(exponents, dtype=float)
    nn = n.astype(float)[:, None]
    scale = float(n.max())
    basis = (nn / scale) ** (-exps[None, :])
    coef, *_ = np.linalg.lstsq(basis, t, rcond=None)
    # rescale c_k (scale/m)^e = c_k scale^e m^-e
    c = coef * scale**exps
    return float(np.sum(c * special.zeta(exps, float(start))))


def _tail_with_error(n: np.ndarray, t: np.ndarray, families: Sequence[float], start: int,
                     leading: Sequence[float], order: int = 3) -> tuple[float, float]:
    """Tail from `start` on, for terms ~ sum_i leading[i] n^-families[i] (1 + O(1/n)).

    The leading coefficients are known in closed form, so only the
    corrections n^-(e+k), k >= 1, are fitted.
    """
    fam = np.asarray(families, dtype=float)
    lead = np.asarray(leading, dtype=float)
    resid = t - (lead[None, :] * n.astype(float)[:, None] ** (-fam[None, :])).sum(axis=1)
    known = float(np.sum(lead * special.zeta(fam, float(start))))

    def corrections(k_max):
        exps = _distinct_exponents([e + 1 for e in families], k_max)
        return [e for e in exps if all(abs(e - f) > 1e-9 for f in families)]

    hi = _fitted_tail(n, resid, corrections(order - 1), start)
    lo = _fitted_tail(n, resid, corrections(order - 2), start) if order > 2 else 0.0
    return known + hi, abs(hi - lo)


def _sample_indices(M: int, count: int = 64) -> np.ndarray:
    """Geometrically spread indices in [M/4, M-1]."""
    idx = np.unique(np.round(np.geomspace(M // 4, M - 1, count)).astype(np.int64))
    return idx


# -- generic series ------------------------------------------------------------------------

def _series_terms(params: ThreeF2Params, start: int, stop: int, t_start: float) -> np.ndarray:
    """Terms t_n, start <= n < stop, of the 3F2 series given t_start."""
    n = np.arange(start, stop - 1, dtype=float)
    ratios = ((params.a1 + n) * (params.a2 + n) * (params.a3 + n)
              / ((params.b1 + n) * (params.b2 + n) * (1.0 + n))) * params.x
    out = np.empty(stop - start)
    out[0] = t_start
    out[1:] = t_start * np.cumprod(ratios)
    return out


def hyp3f2(params: ThreeF2Params, tol: float = 1e-10, max_terms: int = TERM_BUDGET) -> HGValue:
    """3F2(a1, a2, a3; b1, b2; x) for |x| < 1, or x = 1 with positive excess."""
    if not params.converges:
        raise ValueError(f"3F2 series diverges for {params}")
    if params.terminates:
        n_max = int(min(-a for a in (params.a1, params.a2, params.a3)
                        if a <= 0 and float(a).is_integer()))
        terms = _series_terms(params, 0, n_max + 2, 1.0)[:n_max + 1]
        total = math.fsum(terms)
        return HGValue(total, "closed_form", 4 * _EPS * max(1.0, abs(total)), n_max + 1)
    if abs(params.x) < 1:
        total, n, t, chunk = 0.0, 0, 1.0, 256
        while True:
            terms = _series_terms(params, n, n + chunk + 1, t)
            total += math.fsum(terms[:-1])
            n += chunk
            t = terms[-1]
            last = abs(terms[-2])
            if last <= tol * _EPS + tol * abs(total) * 1e-3 or last == 0.0:
                err = abs(t) / max(1e-300, 1 - abs(params.x)) + 4 * _EPS * abs(total)
                return HGValue(total, "series", err, n)
            if n >= max_terms:
                return HGValue(total, "series", float("inf"), n, converged=False)
    # x == 1: algebraic decay t_n ~ C n^(-1-excess)
    families = [1.0 + params.excess]
    lead = [float(special.gamma(params.b1) * special.gamma(params.b2)
                  * special.rgamma(params.a1) * special.rgamma(params.a2) * special.rgamma(params.a3))]
    M = 2048
    while True:
        terms = _series_terms(params, 0, M, 1.0)
        idx = _sample_indices(M)
        tail, err = _tail_with_error(idx, terms[idx], families, M, lead)
        total = math.fsum(terms) + tail
        err += 16 * _EPS * abs(total)
        if err <= tol or M * 2 > max_terms:
            return HGValue(total, "series", err, M, converged=err <= tol)
        M *= 2


def gauss_2f1_at_1(alpha: float, beta_: float, gamma: float) -> HGValue:
    """Gauss summation Gamma(g)Gamma(g-a-b)/(Gamma(g-a)Gamma(g-b))."""
    if gamma <= 0 and float(gamma).is_integer():
        raise ValueError(f"gamma={gamma} is a non-positive integer")
    if gamma - alpha - beta_ <= 0:
        raise ValueError(f"2F1 diverges at 1: gamma - alpha - beta = {gamma - alpha - beta_} <= 0")
    for a in (alpha, beta_):
        if a <= 0 and float(a).is_integer() and a == 0:
            return HGValue(1.0, "closed_form", 0.0, 1)
    sign, log_val = 1.0, 0.0
    for x, s in ((gamma, 1), (gamma - alpha - beta_, 1), (gamma - alpha, -1), (gamma - beta_, -1)):
        if x <= 0 and float(x).is_integer():
            # 1/Gamma at a pole vanishes
            return HGValue(0.0, "closed_form", 0.0, 1)
        sg, lg = _signed_log_gamma(x)
        sign *= sg
        log_val += s * lg
    value = sign * math.exp(log_val)
    return HGValue(value, "closed_form", 8 * _EPS * abs(value), 1)


def gauss_2f1_series(alpha: float, beta_: float, gamma: float, terms: int = 10**4) -> HGValue:
    """Truncated series for 2F1(alpha, beta; gamma; 1) plus a fitted algebraic tail."""
    if gamma - alpha - beta_ <= 0:
        raise ValueError("2F1 diverges at 1")
    n = np.arange(terms - 1, dtype=float)
    ratios = (alpha + n) * (beta_ + n) / ((gamma + n) * (1.0 + n))
    t = np.empty(terms)
    t[0] = 1.0
    t[1:] = np.cumprod(ratios)
    idx = _sample_indices(terms)
    lead = [float(special.gamma(gamma) * special.rgamma(alpha) * special.rgamma(beta_))]
    tail, err = _tail_with_error(idx, t[idx], [1.0 + gamma - alpha - beta_], terms, lead)
    total = math.fsum(t) + tail
    return HGValue(total, "series", err + 16 * _EPS * abs(total), terms)


# -- Appell F3 at (1, 1) --------------------------------------------------------------------------

def _log_rising(alpha: float, n: int) -> np.ndarray:
    """log of (alpha)_k for k = 0 .. n-1, alpha > 0."""
    k = np.arange(n, dtype=float)
    return special.gammaln(alpha + k) - math.lgamma(alpha)


def _antidiagonal_series(families: Sequence[float], leading: Sequence[float], tol: float,
                         max_terms: int, grow, D0: int = 1024) -> HGValue:
    D = D0
    while True:
        la, lb, lc = grow(D)
        S = _kernels.antidiagonal_sums(la, lb, lc)
        idx = _sample_indices(D)
        tail, err = _tail_with_error(idx, S[idx], families, D, leading)
        total = math.fsum(S) + tail
        err += 16 * _EPS * abs(total) + D * _EPS * abs(total)
        terms = D * (D + 1) // 2
        nxt = 2 * D
        if err <= tol or nxt * (nxt + 1) // 2 > max_terms:
            return HGValue(total, "double_series", err, terms, converged=err <= tol)
        D = nxt


def f3_at_boundary(alpha: float, alpha2: float, beta_: float, beta2: float, gamma: float,
                   tol: float = 1e-8, max_terms: int = TERM_BUDGET) -> HGValue:
    """Appell F3(alpha, alpha', beta, beta'; gamma; 1, 1) summed along anti-diagonals."""
    e1 = gamma - alpha - beta_
    e2 = gamma - alpha2 - beta2
    if e1 <= 0 or e2 <= 0:
        raise ValueError("F3 diverges at (1,1): need gamma - alpha - beta > 0 and gamma - alpha' - beta' > 0")
    if min(alpha, alpha2, beta_, beta2) < 0 or gamma <= 0:
        raise ValueError("parameters must be non-negative and gamma positive")
    if (alpha == 0 or beta_ == 0) and (alpha2 == 0 or beta2 == 0):
        return HGValue(1.0, "closed_form", 0.0, 1)

    def log_side(a, b, n):
        # log[(a)_m (b)_m / m!]; -inf once the series in this variable stops
        if a == 0 or b == 0:
            out = np.full(n, -np.inf)
            out[0] = 0.0
            return out
        return _log_rising(a, n) + _log_rising(b, n) - special.gammaln(np.arange(n) + 1.0)

    def grow(D):
        return log_side(alpha, beta_, D), log_side(alpha2, beta2, D), _log_rising(gamma, D)

    # with m (resp. n) frozen the terms decay like n^-(1+e2) (resp. m^-(1+e1));
    # the m = 0 column fixes the leading coefficient Gamma(gamma)/(Gamma(alpha')Gamma(beta'))
    families, leading = [], []
    for e, a, b in ((e1, alpha, beta_), (e2, alpha2, beta2)):
        if a != 0 and b != 0:
            families.append(1.0 + e)
            leading.append(float(special.gamma(gamma) * special.rgamma(a) * special.rgamma(b)))
    return _antidiagonal_series(families, leading, tol, max_terms, grow)


# -- F~ ----------------------------------------------------------------------------------------------

def _check_positive(alpha: float, beta_: float) -> None:
    if not (alpha > 0 and beta_ > 0):
        raise ValueError(f"F~ needs positive parameters, got ({alpha}, {beta_})")


def _f_tilde_double(alpha: float, beta_: float, tol: float) -> HGValue:
    pref = math.exp(log_beta(alpha, beta_) - math.log(alpha + beta_))
    v = f3_at_boundary(alpha, beta_, 1.0, 1.0, alpha + beta_ + 1.0, tol / pref)
    return HGValue(pref * v.value, "double_series", pref * v.err_bound, v.terms_used, v.converged)


def _f_tilde_3f2(alpha: float, beta_: float, tol: float) -> HGValue:
    pref = math.exp(2 * log_beta(alpha, beta_))
    s = alpha + beta_
    v = hyp3f2(ThreeF2Params(alpha, beta_, s - 1.0, s, s, 1.0), tol / pref)
    method = "closed_form" if v.method == "closed_form" else "single_series_3F2"
    return HGValue(pref * v.value, method, pref * v.err_bound + 8 * _EPS * pref * abs(v.value),
                   v.terms_used, v.converged)


def _f_tilde_beta_sum(alpha: float, beta_: float, tol: float, M: int = 4096) -> HGValue:
    a, b = min(alpha, beta_), max(alpha, beta_)
    m = np.arange(M, dtype=float)
    logf = math.lgamma(b) - np.log(special.poch(a + m, b)) - np.log(a + m)
    head = math.fsum(np.exp(logf))

    def f(x):
        return math.gamma(b) / special.poch(a + x, b) / (a + x)

    # d/dx log f = psi(a+x) - psi(a+b+x) - 1/(a+x)
    def dlogf(x):
        return float(special.digamma(a + x) - special.digamma(a + b + x)) - 1.0 / (a + x)

    fM = f(M)
    d1 = dlogf(M)
    integral = _tail_integral(a, b, M)
    # Euler-Maclaurin: sum_{m>=M} f = int_M^inf f + f(M)/2 - f'(M)/12 + f'''(M)/720 - ...
    tail = integral + fM / 2 - d1 * fM / 12
    # poch is good to about 1e-12 relative at moderate arguments
    err = abs(fM) * (1 + b) * (2 + b) * (3 + b) / M**3 / 720 + 2e-12 * (head + tail)
    return HGValue(head + tail, "beta_sum", err, M, converged=err <= tol)


def _tail_integral(a: float, b: float, M: float) -> float:
    """int_M^inf Gamma(a+x)Gamma(b)/Gamma(a+b+x)/(a+x) dx by Gauss-Laguerre in s = b log(x/M)."""
    nodes, weights = np.polynomial.laguerre.laggauss(60)
    log_x = math.log(M) + nodes / b
    x = np.exp(np.minimum(log_x, 600.0))
    # poch keeps the gamma ratio accurate where differencing gammaln would cancel
    exact = -np.log(special.poch(a + x, b)) - np.log(a + x)
    asym = -(1 + b) * log_x - np.exp(-log_x) * (b * (2 * a + b - 1) / 2 + a)
    log_f = np.where(log_x < 40.0, exact, asym) + math.lgamma(b)
    # f(x) dx = f(x) x ds / b, and the Laguerre weight supplies e^{-s}
    g = np.exp(log_f + log_x + nodes) / b
    return float(np.dot(weights, g))


def _ts_nodes(h: float, T: float):
    """tanh-sinh nodes on (0,1): log x, log(1-x) and log of the weight dx/dt * h."""
    t = np.arange(-T, T + h / 2, h)
    z = math.pi * np.sinh(t)
    log_x = -np.logaddexp(0.0, -z)
    log_1mx = -np.logaddexp(0.0, z)
    log_w = math.log(h) + np.log(math.pi * np.cosh(t)) + log_x + log_1mx
    return log_x, log_1mx, log_w


def _quadrature_sum(alpha: float, beta_: float, h: float, T: float) -> float:
    lx, l1x, lw = _ts_nodes(h, T)
    # xi along axis 0, eta along axis 1
    lxi, l1xi, lwxi = lx[:, None], l1x[:, None], lw[:, None]
    leta, l1eta, lweta = lx[None, :], l1x[None, :], lw[None, :]
    log_den = np.logaddexp(l1xi, lxi + leta)
    log_integrand = ((alpha - 1) * lxi + (alpha - 1) * l1eta + (beta_ - 1) * leta
                     - log_den + lwxi + lweta)
    return float(np.exp(log_integrand).sum())


def _f_tilde_quadrature(alpha: float, beta_: float, tol: float) -> HGValue:
    # the nodes must reach x ~ exp(-40/min(alpha,beta)) for the endpoint mass to vanish
    T = math.asinh(40.0 / (math.pi * min(alpha, beta_, 1.0))) + 0.5
    h = 0.25
    prev = _quadrature_sum(alpha, beta_, h, T)
    n_pts = 0
    for _ in range(6):
        h /= 2
        cur = _quadrature_sum(alpha, beta_, h, T)
        n_pts = int(2 * T / h + 1) ** 2
        err = abs(cur - prev) + 64 * _EPS * abs(cur)
        if err <= tol:
            return HGValue(cur, "quadrature", err, n_pts)
        prev = cur
    return HGValue(cur, "quadrature", err, n_pts, converged=False)


_F_METHODS = {
    "double_series": _f_tilde_double,
    "single_series_3F2": _f_tilde_3f2,
    "beta_sum": _f_tilde_beta_sum,
    "quadrature": _f_tilde_quadrature,
}


def f_tilde(alpha: float, beta_: float, method: str = DEFAULT_METHOD, tol: float = 1e-8) -> HGValue:
    """F~(alpha, beta) = B(alpha, beta)/(alpha+beta) * F3(alpha, beta, 1, 1; alpha+beta+1; 1, 1)."""
    _check_positive(alpha, beta_)
    if method not in _F_METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return _F_METHODS[method](float(alpha), float(beta_), tol)


def g_tilde(alpha: float, beta_: float, tol: float = 1e-12) -> HGValue:
    """G~(alpha, beta) = Gamma(a)Gamma(b)/Gamma(a+b+1) * 3F2(a, b, 1; g/2, (g+1)/2; 1/4), g = a+b+1."""
    _check_positive(alpha, beta_)
    g = alpha + beta_ + 1.0
    pref = math.exp(math.lgamma(alpha) + math.lgamma(beta_) - math.lgamma(g))
    v = hyp3f2(ThreeF2Params(alpha, beta_, 1.0, g / 2, (g + 1) / 2, 0.25), tol / pref)
    return HGValue(pref * v.value, "single_series_3F2", pref * v.err_bound, v.terms_used, v.converged)


def g_series(alpha: float, beta_: float, gamma: float, x: float, terms: int = 200) -> float:
    """Partial sum of sum_n (alpha,n)(beta,n)/(gamma,2n) x^n; the n = 0 term is 1."""
    total, t = 1.0, 1.0
    for n in range(terms - 1):
        t *= (alpha + n) * (beta_ + n) * x / ((gamma + 2 * n) * (gamma + 2 * n + 1))
        total += t
    return total


# -- Dixon transformation ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class DixonResult:
    params: ThreeF2Params
    prefactor: float
    log_abs_prefactor: float


def dixon_transform(params: ThreeF2Params) -> DixonResult:
    """3F2(a,b,c;d,e;1) = Gamma(d)Gamma(e)Gamma(s)/(Gamma(a)Gamma(s+b)Gamma(s+c)) 3F2(d-a,e-a,s;s+b,s+c;1)."""
    a, b, c, d, e = params.a1, params.a2, params.a3, params.b1, params.b2
    if params.x != 1.0:
        raise ValueError("the transformation is an identity at x = 1 only")
    s = d + e - a - b - c
    if s <= 0:
        raise ValueError(f"left side diverges (s = {s})")
    if a <= 0:
        raise ValueError(f"right side diverges (its excess is a = {a})")
    sign, log_p = 1.0, 0.0
    for x, k in ((d, 1), (e, 1), (s, 1), (a, -1), (s + b, -1), (s + c, -1)):
        sg, lg = _signed_log_gamma(x)
        sign *= sg
        log_p += k * lg
    new = ThreeF2Params(d - a, e - a, s, s + b, s + c, 1.0)
    return DixonResult(new, sign * math.exp(log_p), log_p)


def pochhammer_beta_identity_check(a: int, b: int, N: int, i: int, j: int, rtol: float = 1e-10) -> bool:
    """(a/N+b/N, i+j) B(a/N+i, b/N+j) == (a/N, i)(b/N, j) B(a/N, b/N)."""
    x, y = a / N, b / N
    lhs = pochhammer(x + y, i + j) * beta(x + i, y + j)
    rhs = pochhammer(x, i) * pochhammer(y, j) * beta(x, y)
    return abs(lhs - rhs) <= rtol * abs(rhs)
