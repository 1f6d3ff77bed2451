from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from csknot import linalg as la
from csknot.classes import ideals_up_to_norm
from csknot.errors import AllZeroGeneratorsError, HypothesesNotMetError, InapplicableError, NotAFactorError
from csknot.families import family_polynomial
from csknot.order import (
    Order,
    Tri,
    colon_lattice,
    companion,
    corollary_basis,
    factor_integer,
    frac_product,
    ideal_from_generators,
    ideal_product,
    is_integrally_closed,
    is_invertible_general,
    is_maximal_at,
    is_theta_stable,
    kummer_dedekind,
    minkowski_bound,
    multiplier_ring,
    prime_ideals_over,
    principal_ideal,
)
from csknot.poly import IntPoly, ModPoly

F8 = family_polynomial(4, -8)
F64 = family_polynomial(4, -64)


@pytest.fixture(scope="module")
def o8():
    return Order(F8)


@pytest.fixture(scope="module")
def o64():
    return Order(F64)


def hnf_matrices(n, det):
    """All upper-triangular row HNFs of the given determinant."""
    for diag in _ordered_factorizations(det, n):
        free = []
        for i in range(n):
            for j in range(i + 1, n):
                free.append((i, j))
        ranges = [range(diag[j]) for _, j in free]
        for vals in itertools.product(*ranges):
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                m[i][i] = diag[i]
            for (i, j), v in zip(free, vals):
                m[i][j] = v
            yield m


def _ordered_factorizations(d, k):
    if k == 1:
        yield (d,)
        return
    for a in range(1, d + 1):
        if d % a == 0:
            for rest in _ordered_factorizations(d // a, k - 1):
                yield (a,) + rest


def test_companion_convention():
    a = companion(IntPoly([5, 6, 7, 1]))
    assert a == [[0, 1, 0], [0, 0, 1], [-5, -6, -7]]
    assert la.charpoly(a) == IntPoly([5, 6, 7, 1])


def test_multiplication_is_polynomial_multiplication(o8):
    rng = random.Random(1)
    for _ in range(50):
        x = [rng.randint(-5, 5) for _ in range(4)]
        y = [rng.randint(-5, 5) for _ in range(4)]
        _, r = (IntPoly(x) * IntPoly(y)).divrem(F8)
        assert tuple(o8.mul(x, y)) == tuple(r.coeffs) + (0,) * (4 - len(r.coeffs))
        assert la.vecmat(y, o8.mult_matrix(x)) == list(o8.mul(x, y))


def test_norm_is_resultant(o8):
    rng = random.Random(2)
    for _ in range(30):
        x = [rng.randint(-4, 4) for _ in range(4)]
        want = sympy.resultant(sympy.Poly(F8.coeffs[::-1], sympy.Symbol("t")), sympy.Poly(x[::-1], sympy.Symbol("t")))
        assert o8.norm(x) == int(want)


@pytest.mark.parametrize("norm", range(1, 13))
def test_enumeration_matches_theta_stable_scan(o8, norm):
    brute = sorted(tuple(tuple(r) for r in m) for m in hnf_matrices(4, norm) if is_theta_stable(o8, m))
    got = sorted(i.basis for i in ideals_up_to_norm(o8, norm) if i.norm == norm)
    assert got == brute


def test_enumeration_non_maximal(o64):
    for norm in (11, 22):
        brute = sorted(tuple(tuple(r) for r in m) for m in hnf_matrices(4, norm) if is_theta_stable(o64, m))
        got = sorted(i.basis for i in ideals_up_to_norm(o64, norm) if i.norm == norm)
        assert got == brute


def test_principal_ideal_norm(o8):
    rng = random.Random(5)
    for _ in range(20):
        x = [rng.randint(-4, 4) for _ in range(4)]
        if not any(x):
            continue
        assert principal_ideal(o8, x).norm == abs(o8.norm(x))


def test_ideal_from_generators_rejects_zero(o8):
    with pytest.raises(AllZeroGeneratorsError):
        ideal_from_generators(o8, [[0, 0, 0, 0]])


def test_product_norm_multiplicative(o8):
    ideals = ideals_up_to_norm(o8, 12)
    for i in ideals[:12]:
        for j in ideals[:12]:
            assert ideal_product(i, j).norm == i.norm * j.norm


def test_colon_and_invertibility_maximal(o8):
    unit = o8.unit_ideal.as_frac()
    for i in ideals_up_to_norm(o8, 12):
        inv = colon_lattice(o8.unit_ideal, i)
        assert frac_product(i.as_frac(), inv) == unit
        assert is_invertible_general(i)
        assert multiplier_ring(i) == unit


def test_non_invertible_ideal_at_11(o64):
    p = corollary_basis(o64, 11, 2)
    assert p.norm == 11
    assert not is_invertible_general(p)
    ring = multiplier_ring(p)
    assert ring != o64.unit_ideal.as_frac()
    # the multiplier ring strictly contains Z[theta] with index 11
    assert ring.norm == Fraction(1, 11)


def test_kummer_dedekind_remainder(o64):
    kd = kummer_dedekind(o64, 11, ModPoly(11, (-2 % 11, 1)), g_lift=IntPoly.linear(2))
    assert kd.multiplicity == 2
    assert kd.remainder == IntPoly([-121])
    assert not kd.invertible
    # another lift changes the remainder but not the verdict
    other = kummer_dedekind(o64, 11, ModPoly(11, (9, 1)))
    assert other.remainder == IntPoly([F64(-9)])
    assert other.remainder[0] % 121 == 0 and not other.invertible


def test_kummer_dedekind_rejects_non_factor(o8):
    with pytest.raises(NotAFactorError):
        kummer_dedekind(o8, 11, ModPoly(11, (0, 1)))


def test_corollary_basis_hypotheses(o8):
    with pytest.raises(HypothesesNotMetError):
        corollary_basis(o8, 11, 2)


def test_kummer_dedekind_agrees_with_general_test():
    for a in range(-70, 1):
        o = Order(family_polynomial(4, a))
        for p in (2, 3, 5, 7, 11, 13):
            for ideal, kd in prime_ideals_over(o, p):
                assert kd.invertible == is_invertible_general(ideal), (a, p)


def test_integral_closure():
    assert is_integrally_closed(Order(F8)).verdict == Tri.YES
    rep = is_integrally_closed(Order(F64))
    assert rep.verdict == Tri.NO and rep.failing_primes == (11,)
    assert not is_maximal_at(Order(F64), 11)
    # Z[sqrt 5] is not maximal at 2
    assert is_integrally_closed(Order(IntPoly([-5, 0, 1]))).verdict == Tri.NO


@settings(max_examples=40)
@given(st.integers(2, 10**12))
def test_factor_integer(n):
    fac = factor_integer(n, trial_bound=1000)
    prod = 1
    for p, e in fac.primes.items():
        assert sympy.isprime(p)
        prod *= p**e
    for c in fac.unfactored:
        prod *= c
    assert prod == n


def test_minkowski_bound():
    o = Order(F8)
    mb = minkowski_bound(o)
    assert 15 < mb < 16
    with pytest.raises(InapplicableError):
        minkowski_bound(Order(F64))
