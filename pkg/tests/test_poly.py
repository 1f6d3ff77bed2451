from __future__ import annotations

import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from csknot import linalg as la
from csknot.errors import NonMonicError, NonUnitConstantTermError
from csknot.poly import (
    IntPoly,
    ModPoly,
    count_real_roots,
    discriminant,
    divrem,
    factor_mod,
    irreducibility_witness,
    is_irreducible_mod,
    is_probable_prime,
    is_squarefree,
    primes_up_to,
    reduce_mod,
    resultant,
    signed_reciprocal,
    squarefree_part,
    sylvester_matrix,
)

X = sympy.symbols("x")

coeff_lists = st.lists(st.integers(-8, 8), min_size=1, max_size=6)
monic = st.lists(st.integers(-8, 8), min_size=1, max_size=5).map(lambda c: IntPoly(c + [1]))


def to_sympy(f: IntPoly):
    return sympy.Integer(0) + sum(c * X**k for k, c in enumerate(f.coeffs))


@settings(deadline=None)
@given(coeff_lists, coeff_lists)
def test_ring_ops_match_sympy(a, b):
    f, g = IntPoly(a), IntPoly(b)
    assert to_sympy(f * g).expand() == (to_sympy(f) * to_sympy(g)).expand()
    assert to_sympy(f + g).expand() == (to_sympy(f) + to_sympy(g)).expand()


@given(coeff_lists, monic)
def test_divrem_identity(a, g):
    f = IntPoly(a)
    q, r = divrem(f, g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree


@given(monic, monic)
def test_resultant_matches_sylvester_determinant(f, g):
    assert resultant(f, g) == la.det(sylvester_matrix(f, g))


@given(monic)
def test_discriminant_matches_sympy(f):
    if f.degree < 1:
        return
    assert discriminant(f) == int(sympy.discriminant(to_sympy(f), X))


@given(monic)
def test_signed_reciprocal_involution(f):
    if f[0] not in (1, -1):
        with pytest.raises(NonUnitConstantTermError):
            signed_reciprocal(f)
        return
    g = signed_reciprocal(f)
    assert g.lc == (-1) ** f.degree * f[0]
    assert to_sympy(g).expand() == sympy.expand((-X) ** f.degree * to_sympy(f).subs(X, 1 / X))
    if g.is_monic():
        assert signed_reciprocal(g) == f


def test_signed_reciprocal_examples():
    assert signed_reciprocal(IntPoly([1, -9, 14, -8, 1])) == IntPoly([1, -8, 14, -9, 1])
    assert signed_reciprocal(IntPoly([1, -3, 1])) == IntPoly([1, -3, 1])
    with pytest.raises(NonMonicError):
        signed_reciprocal(IntPoly([1, 2]) * 2)


def test_signed_reciprocal_is_charpoly_of_inverse():
    from csknot.order import companion

    f = IntPoly([1, -9, 14, -8, 1])
    a = companion(f)
    assert la.charpoly(la.inverse_unimodular(a)) == signed_reciprocal(f)


@settings(max_examples=60)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_real_root_count_matches_sympy(roots_seed):
    # products of linear factors plus a random perturbation
    f = IntPoly([1])
    for r in roots_seed:
        f = f * IntPoly.linear(r)
    f = f * IntPoly([1, 0, 1])
    want = len([r for r in sympy.Poly(to_sympy(squarefree_part(f)), X).real_roots() if r < 0])
    assert count_real_roots(squarefree_part(f), hi=0) == want
    total = len(set(sympy.Poly(to_sympy(f), X).real_roots()))
    assert count_real_roots(squarefree_part(f)) == total


def test_squarefree():
    f = IntPoly.linear(2) ** 2 * IntPoly.linear(-1)
    assert not is_squarefree(f)
    assert squarefree_part(f) == IntPoly.linear(2) * IntPoly.linear(-1)
    assert is_squarefree(IntPoly([1, -9, 14, -8, 1]))


def test_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    for n in range(2, 2000):
        assert is_probable_prime(n) == sympy.isprime(n)
    assert is_probable_prime(2**89 - 1)
    assert not is_probable_prime(3215031751)  # strong pseudoprime to 2, 3, 5, 7


def all_monic_irreducibles(p, d):
    """Brute force: monic degree-d polynomials over F_p with no factor of lower degree."""
    out = []
    lower = [ModPoly(p, c + (1,)) for k in range(1, d // 2 + 1) for c in itertools.product(range(p), repeat=k)]
    for c in itertools.product(range(p), repeat=d):
        f = ModPoly(p, c + (1,))
        if all(not (f % g).is_zero() for g in lower):
            out.append(f)
    return out


@pytest.mark.parametrize("p,d", [(2, 4), (3, 3), (5, 2), (2, 5)])
def test_irreducibility_against_exhaustive_search(p, d):
    irred = {g.coeffs for g in all_monic_irreducibles(p, d)}
    for c in itertools.product(range(p), repeat=d):
        f = ModPoly(p, c + (1,))
        assert is_irreducible_mod(f) == (f.coeffs in irred)


@settings(max_examples=80)
@given(st.sampled_from([2, 3, 5, 7, 11, 13]), st.lists(st.integers(0, 12), min_size=1, max_size=7), st.integers(0, 5))
def test_factor_mod_expands_back(p, c, seed):
    f = ModPoly(p, tuple(x % p for x in c) + (1,))
    fac = factor_mod(f, seed=seed)
    assert fac.expand() == f
    for g, e in fac.factors:
        assert e >= 1 and g.lc == 1 and is_irreducible_mod(g)


@settings(max_examples=40)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(0, 6), min_size=2, max_size=6))
def test_factor_mod_matches_sympy(p, c):
    f = ModPoly(p, tuple(x % p for x in c) + (1,))
    got = sorted((g.coeffs, e) for g, e in factor_mod(f).factors)
    _, sf = sympy.factor_list(sum(int(a) * X**k for k, a in enumerate(f.coeffs)), modulus=p)
    want = []
    for g, e in sf:
        cs = [int(a) % p for a in sympy.Poly(g, X, modulus=p).all_coeffs()[::-1]]
        inv = pow(cs[-1], -1, p)
        want.append((tuple(a * inv % p for a in cs), e))
    assert got == sorted(want)


def test_family_factorization_mod_11():
    f = IntPoly([1, -65, 126, -64, 1])
    fac = factor_mod(reduce_mod(f, 11))
    assert fac.multiplicity(ModPoly(11, (-2 % 11, 1))) == 2


def test_irreducibility_witness():
    assert irreducibility_witness(IntPoly([1, -9, 14, -8, 1]), 200) is not None
    # x^4 + 1 is reducible modulo every prime
    assert irreducibility_witness(IntPoly([1, 0, 0, 0, 1]), 200) is None
