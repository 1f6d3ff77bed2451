from __future__ import annotations

import random
import time

import pytest

from csknot.classes import (
    ClassList,
    Status,
    class_monoid,
    classify_ideal,
    equivalence_test,
    group_structure,
    ideals_up_to_norm,
)
from csknot.errors import BoundTooLargeError
from csknot.families import family_polynomial
from csknot.order import Order, corollary_basis, ideal_from_generators, ideal_product, principal_ideal


@pytest.fixture(scope="module")
def o8():
    return Order(family_polynomial(4, -8))


@pytest.fixture(scope="module")
def cl8(o8):
    return class_monoid(o8, 16)


def test_principal_ideals_are_trivial(o8):
    rng = random.Random(11)
    for _ in range(15):
        x = [rng.randint(-3, 3) for _ in range(4)]
        if not any(x):
            continue
        v = equivalence_test(principal_ideal(o8, x), o8.unit_ideal)
        assert v.status == Status.EQUIVALENT


def test_scaled_ideal_is_equivalent(o8):
    j = ideal_from_generators(o8, [[3, 0, 0, 0], [0, 7, -7, 1]])
    rng = random.Random(12)
    for _ in range(10):
        x = [rng.randint(-3, 3) for _ in range(4)]
        if not any(x):
            continue
        scaled = ideal_product(j, principal_ideal(o8, x))
        v = equivalence_test(j, scaled)
        assert v.status == Status.EQUIVALENT
        num, den = v.witness
        assert den >= 1


def test_non_principal_is_certified(o8):
    j = ideal_from_generators(o8, [[3, 0, 0, 0], [0, 7, -7, 1]])
    v = equivalence_test(j, o8.unit_ideal)
    assert v.status == Status.NOT_EQUIVALENT
    assert v.route == "exhaustive"


def test_invertibility_invariant_separates():
    o = Order(family_polynomial(4, -64))
    p = corollary_basis(o, 11, 2)
    v = equivalence_test(p, o.unit_ideal)
    assert v.status == Status.NOT_EQUIVALENT and v.route == "invariant:invertibility"


def test_class_monoid_f8(cl8):
    assert cl8.count == 2 and cl8.complete and cl8.is_group
    assert cl8.structure == [2]
    assert cl8.certified_lower_bound == 2


def test_every_ideal_lands_in_a_class(o8, cl8):
    for i in ideals_up_to_norm(o8, 30):
        k = classify_ideal(cl8, i)
        assert k is not None
        if i.norm == 1:
            assert k == 0


def test_group_structure_from_tables():
    c4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    assert group_structure(c4) == [4]
    c2c2 = [[i ^ j for j in range(4)] for i in range(4)]
    assert group_structure(c2c2) == [2, 2]
    c6 = [[(i + j) % 6 for j in range(6)] for i in range(6)]
    assert group_structure(c6) == [6]
    assert group_structure([[0]]) == []


def test_non_maximal_monoid_is_incomplete():
    o = Order(family_polynomial(4, -64))
    cl = class_monoid(o, 12)
    assert not cl.complete
    assert not cl.is_group
    assert cl.certified_lower_bound <= cl.count


def test_deadline_marks_incomplete():
    o = Order(family_polynomial(4, -25))
    cl = class_monoid(o, 556, deadline=time.monotonic() + 0.5)
    assert isinstance(cl, ClassList)
    assert not cl.complete


def test_enumeration_cap(o8):
    with pytest.raises(BoundTooLargeError):
        ideals_up_to_norm(o8, 10**9)
