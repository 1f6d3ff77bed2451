from __future__ import annotations

import warnings

import pytest
import sympy

from csknot import linalg as la
from csknot.classes import Status
from csknot.errors import UnknownFamilyError
from csknot.families import (
    FAMILIES,
    ParameterOutOfRangeWarning,
    family_matrix_pair,
    family_polynomial,
    second_matrix_class,
    verify_family_theorem,
)
from csknot.poly import IntPoly, signed_reciprocal

X, L = sympy.symbols("x l")


def symbolic_division(n):
    fam = FAMILIES[n]
    slope, offset = fam.a_of_l
    f = sum(c * X**k for k, c in enumerate(fam.polynomial(slope * L + offset)))
    q, r = sympy.div(sympy.expand(f), X - fam.b, X)
    return sympy.Poly(q, X), sympy.expand(r)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_quoted_division_matches_symbolic_division(n):
    fam = FAMILIES[n]
    q, r = symbolic_division(n)
    quoted_q = sum(c * X**k for k, c in enumerate(fam.quotient(L)))
    assert sympy.expand(q.as_expr() - quoted_q) == 0
    assert sympy.expand(r - fam.remainder(L)) == 0


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_remainder_divisible_by_p_squared(n):
    fam = FAMILIES[n]
    _, r = symbolic_division(n)
    for l in range(-5, 6):
        assert int(r.subs(L, l)) % fam.p**2 == 0


@pytest.mark.parametrize("n", [4, 5, 7])
def test_matrices_annihilated_across_range(n):
    fam = FAMILIES[n]
    for l in range(-4, 5):
        if not fam.l_ok(l):
            continue
        f = family_polynomial(n, fam.a(l))
        for m in family_matrix_pair(n, l):
            assert la.is_zero(la.poly_at_matrix(f.coeffs, m))


def test_second_matrix_at_l0_for_every_family():
    for n in (4, 5, 6, 7):
        f = family_polynomial(n, FAMILIES[n].a(0))
        _, m2 = family_matrix_pair(n, 0)
        assert la.charpoly(m2) == f


def test_seven_at_l0_is_a20():
    _, m2 = family_matrix_pair(7, 0)
    assert la.charpoly(m2) == family_polynomial(7, 20)


@pytest.mark.parametrize("n,l", [(4, 0), (4, -1), (5, 0), (7, 0), (7, 1)])
def test_family_theorem_checks(n, l):
    rep = verify_family_theorem(n, l)
    failed = [c for c in rep.checks if not c.passed]
    assert not failed, failed
    assert len(rep.checks) == 6


def test_second_matrix_lies_in_the_corollary_class():
    assert second_matrix_class(4, 0) == Status.EQUIVALENT


def test_out_of_range_warns():
    with pytest.warns(ParameterOutOfRangeWarning):
        family_polynomial(4, 5)


def test_unknown_family():
    with pytest.raises(UnknownFamilyError):
        family_polynomial(8, 0)


def test_closed_forms_are_the_companion_polynomials():
    assert family_polynomial(4, -8) == IntPoly([1, -9, 14, -8, 1])
    assert family_polynomial(5, -6) == IntPoly([-1, 7, -11, 11, -6, 1])
    assert signed_reciprocal(family_polynomial(5, -6)) == IntPoly([-1, 6, -11, 11, -7, 1])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for n in FAMILIES:
            assert family_polynomial(n, 0).degree == n
