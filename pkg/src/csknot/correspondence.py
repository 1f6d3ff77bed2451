"""Integer matrices with characteristic polynomial f versus ideal classes of Z[theta].

A matrix A with f(A) = 0 has an eigenvector v with entries in Z[theta]
(``A v = theta v``); the entries span an ideal whose class depends only on the
GL(n, Z)-conjugacy class of A.  Conversely an ideal with Z-basis
``v_1..v_n`` gives the integer matrix of multiplication by theta in that basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from . import linalg as la
from .classes import ClassList, EquivVerdict, Status, class_monoid, equivalence_test
from .cs import CsReport, is_cs_matrix, is_cs_polynomial
from .errors import (
    CharpolyMismatchError,
    HypothesesNotMetError,
    NonInvertibleError,
    NotCsPolynomialError,
)
from .order import IdealLattice, Order, lattice_from_rows
from .poly import IntPoly, irreducibility_witness, signed_reciprocal

# ---------------------------------------------------------------------------
# the fraction field Q(theta), elements as Fraction coordinate lists


class _Field:
    def __init__(self, o: Order):
        self.o = o
        self.n = o.n
        self.f = [Fraction(c) for c in o.f.coeffs]

    def const(self, c) -> list[Fraction]:
        return [Fraction(c)] + [Fraction(0)] * (self.n - 1)

    def sub(self, x, y):
        return [a - b for a, b in zip(x, y)]

    def mul(self, x, y):
        n = self.n
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        prod[i + j] += a * b
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                for i in range(n):
                    prod[k - n + i] -= c * self.f[i]
        return prod[:n]

    def inv(self, x):
        m = [list(map(Fraction, row)) for row in _mult_matrix_q(self, x)]
        return la.inverse_rational(m)[0]

    @staticmethod
    def is_zero(x) -> bool:
        return not any(x)


def _mult_matrix_q(k: _Field, x):
    theta = [Fraction(0), Fraction(1)] + [Fraction(0)] * (k.n - 2)
    rows, v = [], list(x)
    for _ in range(k.n):
        rows.append(v)
        v = k.mul(v, theta)
    return rows


def _check_annihilates(o: Order, a: la.Matrix) -> None:
    if len(a) != o.n or not la.is_zero(la.poly_at_matrix(o.f.coeffs, a)):
        raise CharpolyMismatchError(f"matrix is not annihilated by {o.f}")


def eigenvector(o: Order, a: la.Matrix) -> list[tuple[int, ...]]:
    """Primitive integral v in Z[theta]^n with ``a v = theta v``.

    Gaussian elimination over Q(theta) on ``a - theta I``; the pivot of each
    column is the first remaining row with a nonzero entry.  The single free
    column is set to 1, then denominators and content are cleared.
    """
    _check_annihilates(o, a)
    k = _Field(o)
    n = o.n
    theta = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 2)
    m = [[k.sub(k.const(a[i][j]), theta) if i == j else k.const(a[i][j]) for j in range(n)] for i in range(n)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, n) if not k.is_zero(m[i][c])), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = k.inv(m[r][c])
        m[r] = [k.mul(inv, e) for e in m[r]]
        for i in range(n):
            if i != r and not k.is_zero(m[i][c]):
                fac = m[i][c]
                m[i] = [k.sub(e, k.mul(fac, g)) for e, g in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise CharpolyMismatchError("eigenspace for theta is not one-dimensional")
    fc = free[0]
    v = [k.const(0) for _ in range(n)]
    v[fc] = k.const(1)
    for row, c in enumerate(pivots):
        v[c] = [-x for x in m[row][fc]]
    den = 1
    for e in v:
        for x in e:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in e] for e in v]
    g = 0
    for e in ints:
        for x in e:
            g = gcd(g, x)
    return [tuple(x // g for x in e) for e in ints]


def matrix_to_ideal(o: Order, a: la.Matrix) -> IdealLattice:
    """The ideal spanned by the entries of an integral eigenvector of a."""
    rows = [list(e) for e in eigenvector(o, a)]
    return lattice_from_rows(o, rows, modulus=la.det(rows))


def ideal_to_matrix(o: Order, s: IdealLattice | Sequence[Sequence[int]]) -> la.Matrix:
    """Matrix of multiplication by theta in the basis rows of s: ``theta v_i = sum_j A_ij v_j``."""
    v = s.rows() if isinstance(s, IdealLattice) else [list(r) for r in s]
    vinv = la.inverse_rational(v)
    a = la.matmul(la.matmul(v, o.mult_theta), vinv)
    out = []
    for row in a:
        if any(Fraction(x).denominator != 1 for x in row):
            raise ValueError("basis does not span a theta-stable lattice")
        out.append([int(x) for x in row])
    return out


# ---------------------------------------------------------------------------
# conjugacy


def conjugacy_oracle(a: la.Matrix, b: la.Matrix, coeff_box: int = 3, max_points: int = 400_000) -> la.Matrix | None:
    """Unimodular X with ``X a = b X`` (so ``b = X a X^-1``), or None.

    Searches integer combinations of an LLL-reduced basis of the solution
    lattice with coefficients in ``[-coeff_box, coeff_box]``; the box shrinks
    until the count fits ``max_points``.  None is not a proof of non-conjugacy.
    """
    n = la._require_square(a)
    if la._require_square(b) != n:
        return None
    lin = la.zeros(n * n, n * n)
    for i in range(n):
        for j in range(n):
            row = lin[i * n + j]
            for t in range(n):
                row[i * n + t] += a[t][j]
                row[t * n + j] -= b[i][t]
    ker = la.kernel_lattice(lin)
    if not ker:
        return None
    ker = la.lll_reduce(ker)
    dim = len(ker)
    box = coeff_box
    while box > 1 and (2 * box + 1) ** dim > max_points:
        box -= 1
    coeffs = np.array(list(itertools.product(range(-box, box + 1), repeat=dim)), dtype=np.int64)
    coeffs = coeffs[np.argsort(np.abs(coeffs).sum(axis=1), kind="stable")]
    kf = np.array(ker, dtype=np.float64)
    mats = (coeffs.astype(np.float64) @ kf).reshape(-1, n, n)
    dets = np.linalg.det(mats)
    scale = np.prod(np.linalg.norm(mats, axis=2), axis=1)
    for idx in np.nonzero(np.abs(np.abs(dets) - 1) <= 0.5 + 1e-9 * scale)[0]:
        flat = la.vecmat([int(c) for c in coeffs[idx]], ker)
        x = [flat[i * n : (i + 1) * n] for i in range(n)]
        if la.det(x) in (1, -1):
            return x
    return None


class Route(str, Enum):
    CHARPOLY_MISMATCH = "CharpolyMismatch"
    IDEAL_INVARIANT = "IdealInvariant"
    IDEAL_EXHAUSTIVE = "IdealExhaustive"
    IDEAL_WITNESS = "IdealWitness"
    CONJUGACY_WITNESS = "ConjugacyWitness"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class StarVerdict:
    """Equivalent verdicts carry a field element or a unimodular matrix as witness."""

    verdict: Status
    route: Route
    witness: object = None
    inverted: bool = False
    detail: str = ""

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, tuple) and len(w) == 2 and isinstance(w[1], int):
            w = {"numerator": list(w[0]), "denominator": w[1]}
        return {
            "verdict": self.verdict.value,
            "route": self.route.value,
            "inverted": self.inverted,
            "witness": w,
            "detail": self.detail,
        }


def _certify_irreducible(f: IntPoly) -> None:
    if f.degree >= 2 and is_cs_polynomial(f).is_cs:
        return  # CS polynomials are irreducible
    if irreducibility_witness(f, 2000) is None:
        raise HypothesesNotMetError(f"could not certify {f} irreducible")


def star_equivalent(a: la.Matrix, b: la.Matrix, radius: int = 5, coeff_box: int = 3) -> StarVerdict:
    """Whether a is GL(n, Z)-conjugate to b or to b^-1."""
    n = la._require_square(a)
    if la._require_square(b) != n:
        return StarVerdict(Status.NOT_EQUIVALENT, Route.CHARPOLY_MISMATCH, detail="orders differ")
    if la.det(b) not in (1, -1):
        raise NonInvertibleError("b is not in GL(n, Z)")
    fa, fb = la.charpoly(a), la.charpoly(b)
    candidates: list[tuple[la.Matrix, bool]] = []
    if fb == fa:
        candidates.append((b, False))
    if fa[0] in (1, -1) and fb == signed_reciprocal(fa):
        candidates.append((la.inverse_unimodular(b), True))
    if not candidates:
        return StarVerdict(Status.NOT_EQUIVALENT, Route.CHARPOLY_MISMATCH, detail=f"{fb} is neither {fa} nor its signed reciprocal")
    _certify_irreducible(fa)
    o = Order(fa)
    ia = matrix_to_ideal(o, a)
    verdicts: list[StarVerdict] = []
    for bb, inverted in candidates:
        v = _compare(o, ia, a, bb, radius, coeff_box, inverted)
        if v.verdict == Status.EQUIVALENT:
            return v
        verdicts.append(v)
    if all(v.verdict == Status.NOT_EQUIVALENT for v in verdicts):
        return verdicts[0]
    return next(v for v in verdicts if v.verdict == Status.UNKNOWN)


def _compare(o, ia, a, bb, radius, coeff_box, inverted) -> StarVerdict:
    ib = matrix_to_ideal(o, bb)
    ev: EquivVerdict = equivalence_test(ia, ib, radius=radius)
    if ev.status == Status.EQUIVALENT:
        return StarVerdict(Status.EQUIVALENT, Route.IDEAL_WITNESS, ev.witness, inverted, ev.route)
    if ev.status == Status.NOT_EQUIVALENT:
        route = Route.IDEAL_INVARIANT if ev.route.startswith("invariant") else Route.IDEAL_EXHAUSTIVE
        return StarVerdict(Status.NOT_EQUIVALENT, route, None, inverted, ev.route)
    x = conjugacy_oracle(a, bb, coeff_box)
    if x is not None:
        return StarVerdict(Status.EQUIVALENT, Route.CONJUGACY_WITNESS, x, inverted)
    return StarVerdict(Status.UNKNOWN, Route.INCONCLUSIVE, None, inverted, ev.detail)


# ---------------------------------------------------------------------------
# knot pairs


@dataclass
class KnotPairClass:
    ideal: IdealLattice
    norm: int
    invertible: bool
    matrix: la.Matrix
    cs: CsReport


@dataclass
class KnotPairReport:
    polynomial: IntPoly
    classes: ClassList
    pairs: list[KnotPairClass] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.pairs)


def classify_knot_pairs(f: IntPoly, norm_bound: int, radius: int = 5, deadline: float | None = None) -> KnotPairReport:
    """One CS matrix per ideal class found among ideals of norm <= ``norm_bound``."""
    if not is_cs_polynomial(f).is_cs:
        raise NotCsPolynomialError(f"{f} is not a CS polynomial")
    o = Order(f)
    classes = class_monoid(o, norm_bound, radius=radius, deadline=deadline)
    report = KnotPairReport(f, classes)
    for rep, inv in zip(classes.representatives, classes.invertible):
        m = ideal_to_matrix(o, rep)
        report.pairs.append(KnotPairClass(rep, rep.norm, inv, m, is_cs_matrix(m)))
    return report
