from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from csknot import linalg as la
from csknot.errors import DependentRowsError, KOutOfRangeError, NonSquareError

from conftest import random_unimodular


def cofactor_det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * cofactor_det([r[:j] + r[j + 1 :] for r in m[1:]]) for j in range(n) if m[0][j])


def square(n, lo=-6, hi=6):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


sizes = st.integers(1, 5).flatmap(square)


@given(sizes)
def test_det_matches_cofactor_expansion(m):
    assert la.det(m) == cofactor_det(m)


@given(sizes)
def test_charpoly_matches_sympy(m):
    x = sympy.symbols("x")
    want = sympy.Poly(sympy.Matrix(m).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    assert list(la.charpoly(m).coeffs) == [int(c) for c in want]


@given(sizes)
def test_cayley_hamilton(m):
    assert la.is_zero(la.poly_at_matrix(la.charpoly(m).coeffs, m))


def minor(m, rows, cols):
    return cofactor_det([[m[i][j] for j in cols] for i in rows])


@settings(max_examples=30)
@given(st.integers(2, 4).flatmap(square), st.data())
def test_exterior_power_entries_are_minors(m, data):
    n = len(m)
    k = data.draw(st.integers(1, n))
    subsets = list(itertools.combinations(range(n), k))
    wk = la.exterior_power(m, k)
    assert wk == [[minor(m, r, c) for c in subsets] for r in subsets]


def test_exterior_power_is_multiplicative():
    rng = random.Random(3)
    a = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]
    b = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]
    for k in (1, 2, 3):
        assert la.exterior_power(la.matmul(a, b), k) == la.matmul(la.exterior_power(a, k), la.exterior_power(b, k))


def test_exterior_power_rejects_bad_k():
    with pytest.raises(KOutOfRangeError):
        la.exterior_power(la.identity(3), 4)
    with pytest.raises(KOutOfRangeError):
        la.exterior_power(la.identity(3), 0)


def test_non_square_rejected():
    with pytest.raises(NonSquareError):
        la.det([[1, 2, 3], [4, 5, 6]])


@given(sizes)
def test_adjugate_identity(m):
    adj = la.adjugate(m)
    d = la.det(m)
    assert la.matmul(m, adj) == la.mat_scale(d, la.identity(len(m)))


def test_inverse_unimodular_roundtrip(rng):
    for n in range(2, 6):
        u = random_unimodular(n, rng)
        assert la.matmul(u, la.inverse_unimodular(u)) == la.identity(n)


def is_row_hnf(h):
    col = -1
    for r, row in enumerate(h):
        piv = next(j for j, x in enumerate(row) if x)
        if piv <= col or row[piv] <= 0:
            return False
        if any(not 0 <= h[i][piv] < row[piv] for i in range(r)):
            return False
        col = piv
    return True


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=1, max_size=6)))
def test_hnf_shape_and_transform(m):
    res = la.hnf(m)
    assert la.matmul(res.transform, m) == res.hnf
    assert abs(la.det(res.transform)) == 1
    assert is_row_hnf(res.basis)
    assert all(not any(r) for r in res.hnf[res.rank :])


def test_hnf_is_canonical_under_unimodular_change(rng):
    for _ in range(40):
        m = [[rng.randint(-20, 20) for _ in range(4)] for _ in range(4)]
        if la.det(m) == 0:
            continue
        u = random_unimodular(4, rng)
        assert la.row_hnf(la.matmul(u, m)) == la.row_hnf(m)


def test_row_hnf_with_modulus_agrees(rng):
    for _ in range(40):
        m = [[rng.randint(-20, 20) for _ in range(4)] for _ in range(4)]
        d = abs(la.det(m))
        if d == 0:
            continue
        assert la.row_hnf(m, modulus=d) == la.row_hnf(m)


def test_hnf_small_lattices_brute_force():
    # every full-rank sublattice of Z^2 with index <= 6 appears exactly once
    seen = set()
    for a in range(1, 7):
        for c in range(1, 7):
            if a * c > 6:
                continue
            for b in range(c):
                seen.add(((a, b), (0, c)))
    produced = set()
    for rows in itertools.product(range(-6, 7), repeat=4):
        m = [list(rows[:2]), list(rows[2:])]
        d = abs(la.det(m))
        if 1 <= d <= 6:
            produced.add(tuple(tuple(r) for r in la.row_hnf(m)))
    assert produced == seen


def test_solve_and_kernel():
    m = [[1, 2, 3], [4, 5, 6]]
    k = la.kernel_lattice(m)
    assert k == [[1, -2, 1]] or k == [[-1, 2, -1]]
    x = la.solve_integer([[2, 0], [0, 3]], [4, 9])
    assert x == [2, 3]
    assert la.solve_integer([[2, 0], [0, 3]], [3, 9]) is None


def test_lll_reduces_and_preserves_lattice(rng):
    for _ in range(10):
        n = 4
        b = la.matmul(random_unimodular(n, rng, steps=30, entry=5), [[rng.randint(-3, 3) + (10 if i == j else 0) for j in range(n)] for i in range(n)])
        r = la.lll_reduce(b)
        assert la.row_hnf(r) == la.row_hnf(b)
        gs = _gram_schmidt(r)
        for k in range(1, n):
            mu = Fraction(sum(x * y for x, y in zip(r[k], gs[k - 1])), sum(x * x for x in gs[k - 1]))
            assert abs(mu) <= Fraction(1, 2)
            lhs = sum(x * x for x in gs[k])
            rhs = (Fraction(3, 4) - mu * mu) * sum(x * x for x in gs[k - 1])
            assert lhs >= rhs


def _gram_schmidt(b):
    out = []
    for v in b:
        w = [Fraction(x) for x in v]
        for u in out:
            mu = sum(x * y for x, y in zip(v, u)) / sum(x * x for x in u)
            w = [x - mu * y for x, y in zip(w, u)]
        out.append(w)
    return out


def test_lll_rejects_dependent_rows():
    with pytest.raises(DependentRowsError):
        la.lll_reduce([[1, 2], [2, 4]])
