import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermat_regulator.cyclotomic import root_of_unity
from fermat_regulator.group_ring import (FermatIndex, GroupRingElement, cyclic_subgroup, full_unit_group,
                                         index_set, orbit, orbit_classes, orbit_projector, primitive_reduction,
                                         projector, reduce_projector, rep)


def test_rep_range():
    assert [rep(x, 5) for x in range(-1, 7)] == [4, 5, 1, 2, 3, 4, 5, 1]


@pytest.mark.parametrize("N", range(1, 14))
def test_index_set_size(N):
    assert len(index_set(N)) == (N - 1) * (N - 2)


def test_fermat_index_normalizes():
    idx = FermatIndex(7, -1, 9)
    assert (idx.a, idx.b, idx.c) == (6, 2, 6)
    assert idx.in_I_N and idx.primitive
    assert not FermatIndex(6, 2, 4).primitive


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_projectors_are_orthogonal_idempotents(N):
    G = list(itertools.product(range(N), repeat=2))
    P = {g: projector(FermatIndex(N, *g)) for g in G}
    zero = GroupRingElement.zero(N)
    for x, y in itertools.product(G, G):
        assert P[x] * P[y] == (P[x] if x == y else zero)


@pytest.mark.parametrize("N", [2, 5, 8])
def test_projectors_complete(N):
    total = GroupRingElement.zero(N)
    for a, b in itertools.product(range(N), repeat=2):
        total = total + projector(FermatIndex(N, a, b))
    assert total == GroupRingElement.identity(N)


def test_projector_coefficients():
    p = projector(FermatIndex(5, 1, 2))
    assert p.coeff(1, 1) == root_of_unity(5, -3) / 25
    assert p.coeff(0, 0) == root_of_unity(5, 0) / 25


def test_projector_acts_by_character():
    """g^{r,s} p^{a,b} = xi^{ar+bs} p^{a,b}."""
    N, a, b = 5, 2, 4
    p = projector(FermatIndex(N, a, b))
    for r, s in [(1, 0), (0, 1), (3, 2)]:
        g = np.zeros((N, N, N), dtype=np.int64)
        g[r, s, 0] = 1
        lhs = GroupRingElement(N, g) * p
        g2 = np.zeros((N, N, N), dtype=np.int64)
        g2[0, 0, (a * r + b * s) % N] = 1
        assert lhs == GroupRingElement(N, g2) * p


def test_galois_permutes_projectors():
    N = 7
    for h in (2, 3, 6):
        assert projector(FermatIndex(N, 1, 2)).galois(h) == projector(FermatIndex(N, h, 2 * h))


@pytest.mark.parametrize("N,g", [(7, 2), (7, 3), (9, 2), (12, 5), (13, 3)])
def test_orbit_classes_partition(N, g):
    H = cyclic_subgroup(N, g)
    classes = orbit_classes(N, H)
    members = [m for c in classes for m in c.members]
    assert len(members) == len(set(members)) == N * N
    for c in classes:
        assert len(H) % len(c) == 0


def test_cyclic_subgroup():
    assert cyclic_subgroup(7, 2) == {1, 2, 4}
    assert full_unit_group(8) == {1, 3, 5, 7}
    with pytest.raises(ValueError):
        cyclic_subgroup(6, 2)


def test_orbit_projector_is_idempotent():
    H = cyclic_subgroup(7, 2)
    P = orbit_projector(FermatIndex(7, 1, 2), H)
    assert P * P == P
    assert len(orbit(FermatIndex(7, 1, 2), H)) == 3


def test_reduce_projector():
    assert reduce_projector(6, 2, FermatIndex(6, 2, 4)) == FermatIndex(3, 1, 2)
    assert reduce_projector(6, 2, FermatIndex(6, 1, 4)) is None
    assert primitive_reduction(FermatIndex(9, 3, 3)) == FermatIndex(3, 1, 1)
    with pytest.raises(ValueError):
        reduce_projector(6, 4, FermatIndex(6, 2, 4))


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_group_ring_associative(N, seed):
    rng = np.random.default_rng(seed)
    x, y, z = (GroupRingElement(N, rng.integers(-2, 3, size=(N, N, N)), int(rng.integers(1, 4)))
               for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
