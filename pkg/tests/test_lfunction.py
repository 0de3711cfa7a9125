import itertools
import math

import mpmath as mp
import pytest

from fermat_regulator.finite_field import jacobi_sum, make_field
from fermat_regulator.group_ring import FermatIndex
from fermat_regulator.lfunction import (BadPrime, CacheCorrupt, JacobiCache, cache_roundtrip,
                                        euler_factors_at_p, l_value, primes_up_to, read_records, splitting,
                                        working_level)

# L(E, 2) for the conductor-27 curve x^3 + y^3 = z^3, from its functional equation
# (root number +1) with a_p from brute-force point counts; frozen at 1e-13
L27_AT_2 = 0.877646418044873


def cubic_ap(p):
    if p == 3:
        return 0
    cubes = [x**3 % p for x in range(p)]
    affine = sum(1 for x, y in itertools.product(cubes, cubes) if (x + y) % p == 1)
    return p + 1 - (affine + sum(1 for x in cubes if (x + 1) % p == 0))


def l27_oracle(terms=120):
    ap = {p: cubic_ap(p) for p in primes_up_to(terms).tolist()}
    a = [0, 1] + [0] * (terms - 1)
    for n in range(2, terms + 1):
        p = next(q for q in ap if n % q == 0)
        k, m = 0, n
        while m % p == 0:
            m, k = m // p, k + 1
        seq = [1, ap[p]]
        for _ in range(k - 1):
            seq.append(ap[p] * seq[-1] - (0 if p == 3 else p) * seq[-2])
        a[n] = a[m] * seq[k]
    A = mp.sqrt(27) / (2 * mp.pi)
    total = mp.fsum(a[n] * (mp.gammainc(2, n / A) / (n / A) ** 2 + mp.gammainc(0, n / A))
                    for n in range(1, terms + 1))
    return float(total / A**2)


def test_frozen_l27_value():
    assert l27_oracle() == pytest.approx(L27_AT_2, rel=1e-13)


def test_primes_up_to():
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1).size == 0


def test_splitting():
    sp = splitting(7, 2)
    assert (sp.f, sp.g, sp.norm) == (3, 2, 8)
    assert splitting(7, 29).f == 1 and splitting(7, 29).g == 6
    with pytest.raises(BadPrime, match="divides"):
        splitting(9, 3)


def test_euler_factors_match_direct_jacobi_sums():
    ef = euler_factors_at_p(7, 1, 2, 2)
    F = make_field(2, 3)
    assert ef.values == tuple(jacobi_sum(F, 7, t, 2 * t).value for t in ef.split.coset_reps)
    assert euler_factors_at_p(7, 1, 2, 2, q_max=4) is None


def test_working_level():
    assert working_level(FermatIndex(6, 2, 2)) == FermatIndex(3, 1, 1)
    assert working_level(FermatIndex(9, 3, 3)) == FermatIndex(9, 3, 3)
    assert working_level(FermatIndex(7, 1, 2)) == FermatIndex(7, 1, 2)


def test_l_value_n3_against_oracle(tmp_path):
    st = l_value(3, 1, 1, 2.0, 10**4, cache=JacobiCache(tmp_path))
    assert abs(st.value.real - L27_AT_2) <= st.tail_bound * L27_AT_2
    assert abs(st.value.imag) < 1e-12
    assert st.values[2] == pytest.approx(st.values[1].conjugate(), abs=1e-12)


def test_level_six_matches_level_three():
    assert l_value(6, 2, 2, 2.0, 2000).value == pytest.approx(l_value(3, 1, 1, 2.0, 2000).value, rel=1e-14)


def test_tail_bound_shrinks():
    b = [l_value(5, 1, 1, 2.0, P).tail_bound for P in (100, 1000, 10000)]
    assert b[0] > b[1] > b[2]


def test_empty_product():
    st = l_value(3, 1, 1, 2.0, 1)
    assert st.value == 1 and math.isinf(st.tail_bound) and st.primes_used == 0


def test_skipped_primes_are_charged():
    full = l_value(7, 1, 2, 2.0, 3000)
    part = l_value(7, 1, 2, 2.0, 3000, q_max=100)
    assert part.primes_skipped and part.tail_bound > full.tail_bound
    assert abs(part.value - full.value) <= part.tail_bound * abs(full.value)


def test_bad_arguments():
    with pytest.raises(ValueError):
        l_value(3, 1, 2)
    with pytest.raises(ValueError):
        l_value(3, 1, 1, s=1.5)


def test_cache_warm_run_is_identical(tmp_path):
    cache = JacobiCache(tmp_path)
    cold = l_value(7, 1, 2, 2.0, 3000, cache=cache)
    assert cache.writes > 0 and cold.cache_hits == 0
    warm = l_value(7, 1, 2, 2.0, 3000, cache=JacobiCache(tmp_path))
    assert warm.values == cold.values
    assert warm.cache_hits == warm.primes_used


def test_cache_roundtrip(tmp_path):
    recs = [jacobi_sum(make_field(p), 5, 1, 2) for p in (11, 31, 41)]
    assert cache_roundtrip(tmp_path / "r.jsonl", recs)


def test_corrupt_cache_names_line(tmp_path):
    cache = JacobiCache(tmp_path)
    l_value(3, 1, 1, 2.0, 50, cache=cache)
    path = cache.path(3, 7)
    with open(path, "a") as fh:
        fh.write("{not json\n")
    with pytest.raises(CacheCorrupt, match=r"line \d+"):
        read_records(path)
    with pytest.raises(CacheCorrupt):
        l_value(3, 1, 1, 2.0, 50, cache=cache)
