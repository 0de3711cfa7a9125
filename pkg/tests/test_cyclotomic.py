import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from fermat_regulator.cyclotomic import (CyclotomicNumber, cyclotomic_polynomial, euler_phi, mobius,
                                         root_of_unity, units)


@pytest.mark.parametrize("n", range(1, 60))
def test_phi_and_mobius_match_sympy(n):
    assert euler_phi(n) == sympy.totient(n)
    assert mobius(n) == sympy.mobius(n)


@pytest.mark.parametrize("N", range(1, 40))
def test_cyclotomic_polynomial_matches_sympy(N):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(N, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(N)) == expected


def test_units():
    assert units(12) == [1, 5, 7, 11]
    assert units(1) == [0] or units(1) == [1]


def numbers(N):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.lists(coeff, min_size=euler_phi(N), max_size=euler_phi(N)).map(lambda cs: CyclotomicNumber(N, cs))


Ns = st.sampled_from([1, 3, 4, 5, 7, 8, 9, 12])


@given(st.data())
def test_ring_axioms(data):
    N = data.draw(Ns)
    x, y, z = data.draw(numbers(N)), data.draw(numbers(N)), data.draw(numbers(N))
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x - x == 0


@given(st.data())
def test_embeddings_are_ring_homomorphisms(data):
    N = data.draw(Ns)
    x, y = data.draw(numbers(N)), data.draw(numbers(N))
    for h in units(N):
        assert abs((x * y).embed(h) - x.embed(h) * y.embed(h)) < 1e-9
        assert abs((x + y).embed(h) - x.embed(h) - y.embed(h)) < 1e-9


@given(st.data())
def test_galois_is_automorphism(data):
    N = data.draw(Ns)
    x, y = data.draw(numbers(N)), data.draw(numbers(N))
    for h in units(N):
        assert (x * y).galois(h) == x.galois(h) * y.galois(h)
        assert abs(x.galois(h).embed(1) - x.embed(h)) < 1e-9


@given(st.data())
def test_json_roundtrip(data):
    N = data.draw(Ns)
    x = data.draw(numbers(N))
    assert CyclotomicNumber.from_json(x.to_json()) == x


@pytest.mark.parametrize("N", [3, 5, 7, 8, 12, 15])
def test_root_of_unity(N):
    xi = root_of_unity(N, 1)
    assert xi**N == 1
    assert abs(xi.embed(1) - cmath.exp(2j * math.pi / N)) < 1e-12
    assert sum((root_of_unity(N, e) for e in range(N)), CyclotomicNumber.zero(N)) == (1 if N == 1 else 0)


@pytest.mark.parametrize("N,coeffs", [(5, [1, 2, 0, -1]), (7, [3, 0, 1, 0, 0, 2]), (12, [1, 1, 0, 2])])
def test_norm_matches_resultant(N, coeffs):
    """N(x) equals the resultant of Phi_N and the polynomial of x."""
    t = sympy.Symbol("t")
    poly = sum(c * t**i for i, c in enumerate(coeffs))
    expected = sympy.resultant(sympy.cyclotomic_poly(N, t), poly, t)
    assert CyclotomicNumber(N, coeffs).norm() == Fraction(int(expected))


def test_trace_of_root_is_mobius():
    for N in range(1, 30):
        assert root_of_unity(N, 1).trace() == mobius(N)


def test_bad_shapes():
    with pytest.raises(ValueError):
        CyclotomicNumber(5, [1, 2])
    with pytest.raises(ValueError):
        CyclotomicNumber(5, [1, 0, 0, 0]) + CyclotomicNumber(3, [1, 0])
    with pytest.raises(ValueError):
        root_of_unity(6, 1).galois(2)
