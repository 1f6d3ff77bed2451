from __future__ import annotations

import random

import pytest

from csknot import linalg as la
from csknot.classes import Status, equivalence_test, ideals_up_to_norm
from csknot.correspondence import (
    Route,
    classify_knot_pairs,
    conjugacy_oracle,
    eigenvector,
    ideal_to_matrix,
    matrix_to_ideal,
    star_equivalent,
)
from csknot.errors import CharpolyMismatchError
from csknot.families import family_matrix_pair, family_polynomial
from csknot.order import Order, companion
from csknot.poly import signed_reciprocal

from conftest import conjugate, random_unimodular

F8 = family_polynomial(4, -8)
M8 = [[2, 3, 0, 0], [2, 4, 1, 0], [0, 1, 1, 1], [1, 2, 0, 1]]


@pytest.fixture(scope="module")
def o8():
    return Order(F8)


def test_eigenvector_relation(o8):
    v = eigenvector(o8, M8)
    # a v = theta v, checked coordinatewise in Z[theta]
    for i in range(4):
        lhs = [sum(M8[i][j] * v[j][k] for j in range(4)) for k in range(4)]
        assert lhs == list(o8.mul(o8.theta, v[i]))


def test_eigenvector_rejects_wrong_charpoly(o8):
    with pytest.raises(CharpolyMismatchError):
        eigenvector(o8, la.identity(4))


def test_companion_maps_to_unit_class(o8):
    assert matrix_to_ideal(o8, companion(F8)) == o8.unit_ideal


def test_round_trip_on_ideals(o8):
    for s in ideals_up_to_norm(o8, 20):
        a = ideal_to_matrix(o8, s)
        assert la.charpoly(a) == F8
        back = matrix_to_ideal(o8, a)
        assert equivalence_test(back, s).status == Status.EQUIVALENT


def test_conjugation_invariance(o8, rng):
    base = matrix_to_ideal(o8, M8)
    for _ in range(10):
        u = random_unimodular(4, rng)
        assert equivalence_test(matrix_to_ideal(o8, conjugate(u, M8)), base).status == Status.EQUIVALENT


def test_basis_independence(o8, rng):
    for s in ideals_up_to_norm(o8, 9)[1:]:
        u = random_unimodular(4, rng, steps=6, entry=1)
        other = la.matmul(u, s.rows())
        a, b = ideal_to_matrix(o8, s), ideal_to_matrix(o8, other)
        x = conjugacy_oracle(a, b)
        assert x is not None
        assert la.matmul(x, a) == la.matmul(b, x)


def test_inversion_bridge():
    for n, l in [(4, 0), (5, 0), (7, 0)]:
        m1, m2 = family_matrix_pair(n, l)
        for a in (m1, m2):
            inv = la.inverse_unimodular(a)
            assert la.charpoly(inv) == signed_reciprocal(la.charpoly(a))
            v = star_equivalent(a, inv)
            assert v.verdict == Status.EQUIVALENT and v.inverted


def test_star_equivalence_verdicts(rng):
    c = companion(F8)
    v = star_equivalent(c, M8)
    assert v.verdict == Status.NOT_EQUIVALENT
    assert v.route == Route.IDEAL_EXHAUSTIVE
    assert star_equivalent(M8, M8).verdict == Status.EQUIVALENT
    u = random_unimodular(4, rng)
    v = star_equivalent(M8, conjugate(u, M8))
    assert v.verdict == Status.EQUIVALENT and v.witness is not None


def test_charpoly_mismatch():
    v = star_equivalent(companion(F8), companion(family_polynomial(4, -7)))
    assert v.verdict == Status.NOT_EQUIVALENT and v.route == Route.CHARPOLY_MISMATCH


def test_conjugacy_oracle_witness(rng):
    u = random_unimodular(4, rng, steps=4, entry=1)
    b = conjugate(u, M8)
    x = conjugacy_oracle(M8, b)
    assert x is not None and abs(la.det(x)) == 1
    assert la.matmul(x, M8) == la.matmul(b, x)


def test_knot_pairs_f8():
    rep = classify_knot_pairs(F8, 16)
    assert rep.count == 2
    assert all(p.cs.is_cs for p in rep.pairs)
    assert all(la.charpoly(p.matrix) == F8 for p in rep.pairs)
