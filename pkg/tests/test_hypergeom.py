import math

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from fermat_regulator.hypergeom import (METHODS, ThreeF2Params, beta, dixon_transform, f3_at_boundary, f_tilde,
                                        g_series, g_tilde, gauss_2f1_at_1, gauss_2f1_series, hyp3f2, log_beta,
                                        log_gamma, pochhammer, pochhammer_beta_identity_check)

mp.mp.dps = 30

# B(a,b)^2 3F2(a, b, a+b-1; a+b, a+b; 1), evaluated by mpmath at 30 digits and frozen
F_TILDE_ORACLE = {
    (1 / 7, 2 / 7): 82.369512513642916,
    (0.5, 0.5): 9.8696044010893586,
    (1 / 3, 2 / 3): 13.159472534785813,
    (6 / 7, 1 / 7): 52.426757361755648,
    (0.2, 0.4): 40.629915963830941,
    (0.9, 0.8): 2.6282775960051553,
}


def mp_f_tilde(a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    s = a + b
    return float(mp.beta(a, b) ** 2 * mp.hyp3f2(a, b, s - 1, s, s, 1))


def test_frozen_oracle_values_are_reproducible():
    for (a, b), v in list(F_TILDE_ORACLE.items())[:2]:
        assert mp_f_tilde(a, b) == pytest.approx(v, rel=1e-15)


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("ab", list(F_TILDE_ORACLE))
def test_f_tilde_against_oracle(method, ab):
    v = f_tilde(*ab, method=method)
    assert abs(v.value - F_TILDE_ORACLE[ab]) <= v.err_bound + 1e-12 * F_TILDE_ORACLE[ab]


def test_f_tilde_closed_values():
    assert f_tilde(0.5, 0.5).value == pytest.approx(math.pi**2, abs=1e-8)
    assert f_tilde(1 / 3, 2 / 3).value == pytest.approx(4 * math.pi**2 / 3, abs=1e-8)


def test_f_tilde_symmetric():
    assert f_tilde(0.2, 0.7).value == pytest.approx(f_tilde(0.7, 0.2).value, rel=1e-12)


def test_f_tilde_rejects_bad_input():
    with pytest.raises(ValueError):
        f_tilde(0.0, 0.5)
    with pytest.raises(ValueError):
        f_tilde(0.5, 0.5, method="nope")


def test_f3_specialization():
    a, b = 1 / 3, 1 / 4
    v = f3_at_boundary(a, b, 1.0, 1.0, a + b + 1)
    assert beta(a, b) / (a + b) * v.value == pytest.approx(mp_f_tilde(a, b), rel=1e-8)


@pytest.mark.parametrize("a,b", [(0.2, 0.2), (0.5, 0.3), (1 / 7, 4 / 7), (0.9, 0.6)])
def test_g_tilde_against_mpmath(a, b):
    g = a + b + 1
    ref = mp.gamma(a) * mp.gamma(b) / mp.gamma(g) * mp.hyp3f2(a, b, 1, g / 2, (g + 1) / 2, mp.mpf(1) / 4)
    assert g_tilde(a, b).value == pytest.approx(float(ref), rel=1e-12)


def test_g_series_partial_sum():
    # (gamma, 2n) = 4^n (gamma/2, n) ((gamma+1)/2, n), so the series is a 3F2 at x/4
    assert g_series(0.3, 0.4, 1.7, 1.0, terms=400) == pytest.approx(
        float(mp.hyp3f2(0.3, 0.4, 1, 1.7 / 2, 2.7 / 2, 0.25)), rel=1e-13)


@pytest.mark.parametrize("alpha", [1 / 5, 1 / 3, 2 / 5, 2 / 3, 4 / 5])
def test_f_equals_three_g_on_diagonal(alpha):
    assert f_tilde(alpha, alpha).value == pytest.approx(3 * g_tilde(alpha, alpha).value, abs=1e-6)


def test_difference_identity_is_diagonal_only():
    def gap(a, b):
        lhs = f_tilde(a, b).value - f_tilde(1 - a, 1 - b).value
        return abs(lhs - 3 * (g_tilde(a, b).value - g_tilde(1 - a, 1 - b).value))

    assert gap(0.2, 0.2) < 1e-6
    assert gap(0.2, 0.4) > 1.0


@pytest.mark.parametrize("params", [
    ThreeF2Params(0.5, 0.25, 0.75, 1.5, 1.25, 0.3),
    ThreeF2Params(1.0, 2.0, 0.5, 3.0, 2.5, 1.0),
    ThreeF2Params(0.1, 0.2, 0.3, 0.4, 0.9, 1.0),
    ThreeF2Params(-3.0, 0.5, 1.5, 2.0, 0.7, 1.0),
    ThreeF2Params(0.3, 0.6, 1.0, 0.8, 1.2, -0.9),
])
def test_hyp3f2_against_mpmath(params):
    ref = float(mp.hyp3f2(params.a1, params.a2, params.a3, params.b1, params.b2, params.x))
    v = hyp3f2(params, tol=1e-12)
    assert abs(v.value - ref) <= max(v.err_bound, 1e-12 * abs(ref)) * 10


def test_hyp3f2_divergent():
    with pytest.raises(ValueError):
        hyp3f2(ThreeF2Params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        ThreeF2Params(1.0, 1.0, 1.0, -2.0, 1.0)


@given(st.floats(-0.9, 2.0), st.floats(-0.9, 2.0), st.floats(0.2, 2.0))
def test_gauss_closed_form_vs_mpmath(a, b, excess):
    c = a + b + excess
    if c <= 0 or float(c).is_integer():
        return
    ref = float(mp.hyp2f1(a, b, c, 1))
    assert gauss_2f1_at_1(a, b, c).value == pytest.approx(ref, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("a,b,c", [(0.5, 0.5, 2.0), (-0.5, 1.2, 1.5), (1.0, 1.0, 2.5), (0.3, 0.9, 1.6)])
def test_gauss_series_vs_closed_form(a, b, c):
    assert gauss_2f1_series(a, b, c).value == pytest.approx(gauss_2f1_at_1(a, b, c).value, abs=1e-6)


def test_dixon_transform_is_identity():
    p = ThreeF2Params(0.3, 0.5, 0.7, 1.4, 1.9, 1.0)
    d = dixon_transform(p)
    assert hyp3f2(p, 1e-13).value == pytest.approx(d.prefactor * hyp3f2(d.params, 1e-13).value, rel=1e-9)
    d2 = dixon_transform(d.params)
    assert hyp3f2(p, 1e-13).value == pytest.approx(
        d.prefactor * d2.prefactor * hyp3f2(d2.params, 1e-13).value, rel=1e-9)
    with pytest.raises(ValueError):
        dixon_transform(ThreeF2Params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0))


def test_gamma_family():
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi))
    assert log_beta(0.3, 0.4) == pytest.approx(float(mp.log(mp.beta(0.3, 0.4))))
    assert pochhammer(0.5, 3) == 1.875
    assert pochhammer(-2.0, 2) == 2.0
    with pytest.raises(ValueError):
        pochhammer(-2.0, 4)


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 30), st.integers(0, 30))
def test_pochhammer_beta_identity(a, b, i, j):
    N = 13
    assert pochhammer_beta_identity_check(a, b, N, i, j)
