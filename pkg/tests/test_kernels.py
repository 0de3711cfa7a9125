"""The numba kernels and their numpy fallbacks must agree bit for bit."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermat_regulator import _kernels as K
from fermat_regulator.finite_field import irreducible_modulus, make_field

needs_numba = pytest.mark.skipif(not K.NUMBA_IMPL, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("p", [2, 3, 7, 101, 7919])
def test_powers_mod_p_paths_agree(p):
    g = make_field(p).generator
    np.testing.assert_array_equal(K.NUMPY_IMPL["powers_mod_p"](g, p), K.NUMBA_IMPL["powers_mod_p"](g, p))


@needs_numba
@pytest.mark.parametrize("p,f", [(2, 2), (2, 7), (3, 4), (5, 3), (13, 2), (199, 2)])
def test_powers_poly_paths_agree(p, f):
    m = np.array(irreducible_modulus(p, f), dtype=np.int64)
    gen = np.array(make_field(p, f).digits(make_field(p, f).generator), dtype=np.int64)
    np.testing.assert_array_equal(K.NUMPY_IMPL["powers_poly"](gen, m, p, f),
                                  K.NUMBA_IMPL["powers_poly"](gen, m, p, f))


@needs_numba
@pytest.mark.parametrize("p,f,N", [(7, 1, 3), (31, 1, 5), (4, 1, 3), (3, 2, 4), (2, 6, 9)])
def test_exponent_histogram_paths_agree(p, f, N):
    if p == 4:
        p, f = 2, 2
    F = make_field(p, f)
    np.testing.assert_array_equal(K.NUMPY_IMPL["exponent_histogram"](F.dlog, F.one_minus, N),
                                  K.NUMBA_IMPL["exponent_histogram"](F.dlog, F.one_minus, N))


@needs_numba
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_group_ring_convolve_paths_agree(N, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-3, 4, size=(N, N, N))
    B = rng.integers(-3, 4, size=(N, N, N))
    np.testing.assert_array_equal(K.NUMPY_IMPL["group_ring_convolve"](A, B),
                                  K.NUMBA_IMPL["group_ring_convolve"](A, B))


@needs_numba
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_antidiagonal_sums_paths_agree(n, seed):
    rng = np.random.default_rng(seed)
    la, lb, lc = (rng.normal(size=n) for _ in range(3))
    np.testing.assert_allclose(K.NUMPY_IMPL["antidiagonal_sums"](la, lb, lc),
                               K.NUMBA_IMPL["antidiagonal_sums"](la, lb, lc), rtol=1e-13)


def test_encode_decode_roundtrip():
    x = np.arange(3**5)
    np.testing.assert_array_equal(K._encode(K._decode(x, 3, 5), 3), x)


def test_env_flag_selects_numpy():
    code = "import fermat_regulator._kernels as K; print(K.USE_NUMBA)"
    env = dict(os.environ, FERMAT_REGULATOR_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_numpy_path_end_to_end():
    """A full Jacobi sum computed with the fallback kernels matches the default path."""
    code = ("from fermat_regulator.finite_field import make_field, jacobi_sum;"
            "print(jacobi_sum(make_field(3, 4), 5, 1, 2).value.to_json())")
    env = dict(os.environ, FERMAT_REGULATOR_NUMBA="0")
    fallback = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    from fermat_regulator.finite_field import jacobi_sum
    assert fallback.stdout.strip() == str(jacobi_sum(make_field(3, 4), 5, 1, 2).value.to_json())


@needs_numba
def test_antidiagonal_sums_large_logs():
    rng = np.random.default_rng(1)
    la, lb = rng.uniform(350, 400, 64), rng.uniform(-400, -350, 64)
    lc = rng.uniform(-5, 5, 64)
    np.testing.assert_allclose(K.NUMPY_IMPL["antidiagonal_sums"](la, lb, lc),
                               K.NUMBA_IMPL["antidiagonal_sums"](la, lb, lc), rtol=1e-12)
