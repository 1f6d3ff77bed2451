"""Four one-parameter families of positive CS polynomials and their matrix pairs.

For each dimension n in {4, 5, 6, 7} the family polynomial f_a has, along an
arithmetic progression ``a = a(l)``, a repeated linear factor ``(x - b)^2``
modulo a prime p with ``p^2 | f_a(b)``.  The ideal ``(p, theta - b)`` is then
not invertible, so the matrix it induces is not *-equivalent to the companion
matrix although both share the characteristic polynomial.

Every closed form below is hard-coded and re-derived by :func:`verify_family_theorem`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

from . import linalg as la
from .classes import Status, equivalence_test
from .correspondence import Route, matrix_to_ideal, star_equivalent
from .cs import is_cs_matrix, is_positive
from .errors import CsknotError, UnknownFamilyError
from .order import (
    Order,
    corollary_basis,
    ideal_from_generators,
    is_invertible_general,
    kummer_dedekind,
)
from .poly import IntPoly, ModPoly, divrem, factor_mod, reduce_mod


class ParameterOutOfRangeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FamilySpec:
    n: int
    a_range: str
    a_ok: Callable[[int], bool]
    l_range: str
    l_ok: Callable[[int], bool]
    a_of_l: tuple[int, int]  # a = slope * l + offset
    p: int
    b: int
    factorization: tuple[tuple[tuple[int, ...], int], ...]  # ascending coeffs, multiplicity
    polynomial: Callable[[int], list[int]] = field(repr=False)
    first_last_row: Callable[[int], list[int]] = field(repr=False)
    second_first_row: tuple[int, ...] = ()
    second_last_row: Callable[[int], list[int]] = field(repr=False, default=None)
    quotient: Callable[[int], list[int]] = field(repr=False, default=None)
    remainder: Callable[[int], int] = field(repr=False, default=None)

    def a(self, l: int) -> int:
        slope, offset = self.a_of_l
        return slope * l + offset


def _f4(a):
    return [1, a - 1, -2 * a - 2, a, 1]


def _f5(a):
    return [-1, -a + 1, 2 * a + 1, -2 * a - 1, a, 1]


def _f6(a):
    return [1, 2 * a + 1, a * a - a - 1, -2 * a * a - 2 * a - 2, a * a - a - 2, 2 * a + 1, 1]


def _f7(a):
    return [-1, a, -a + 2, a * a + 2, -a * a - 1, a - 2, -a, 1]


def _six_last(l):
    A = 49 * l - 8
    return [
        -12348 * l**2 + 336 * l - 413,
        43218 * l**2 - 1176 * l + 1445,
        -21609 * l**2 + 539 * l - 715,
        9604 * l**2 - 228 * l + 322,
        -2401 * l**2 + 279 * l - 104,
        -2 * A + 1,
    ]


def _seven_last(l):
    G = 121 * l + 20
    return [
        2012472 * l**2 + 1264494 * l + 178211,
        -3689532 * l**2 - 2318239 * l - 326720,
        614922 * l**2 + 386353 * l + 54450,
        -102487 * l**2 - 64372 * l - 9072,
        14641 * l**2 + 9922 * l + 1445,
        -847 * l - 174,
        G + 6,
    ]


def _six_first(l):
    A = 49 * l - 8
    return [-1, -2 * A - 1, -A * A + A + 1, 2 * A * A + 2 * A + 2, -A * A + A + 2, -2 * A - 1]


def _seven_first(l):
    G = 121 * l + 20
    return [1, -G, G - 2, -G * G - 2, G * G + 1, -G + 2, G]


FAMILIES: dict[int, FamilySpec] = {
    4: FamilySpec(
        n=4,
        a_range="a <= 0",
        a_ok=lambda a: a <= 0,
        l_range="l <= 0",
        l_ok=lambda l: l <= 0,
        a_of_l=(121, -64),
        p=11,
        b=2,
        factorization=(((-2, 1), 2), ((3, 6, 1), 1)),
        polynomial=_f4,
        first_last_row=lambda l: [-1, -121 * l + 65, 242 * l - 126, -121 * l + 64],
        second_first_row=(2, 11),
        second_last_row=lambda l: [-22 * l + 11, -121 * l + 61, -2, -121 * l + 62],
        quotient=lambda l: [121 * l - 61, 2, 121 * l - 62, 1],
        remainder=lambda l: 242 * l - 121,
    ),
    5: FamilySpec(
        n=5,
        a_range="a <= 0",
        a_ok=lambda a: a <= 0,
        l_range="l <= 0",
        l_ok=lambda l: l <= 0,
        a_of_l=(25, -6),
        p=5,
        b=-2,
        factorization=(((2, 1), 2), ((1, 2, 0, 1), 1)),
        polynomial=_f5,
        first_last_row=lambda l: [1, 25 * l - 7, -50 * l + 11, 50 * l - 11, -25 * l + 6],
        second_first_row=(-2, 5),
        second_last_row=lambda l: [-210 * l + 55, 525 * l - 137, -250 * l + 65, 100 * l - 27, -25 * l + 8],
        quotient=lambda l: [-525 * l + 137, 250 * l - 65, -100 * l + 27, 25 * l - 8, 1],
        remainder=lambda l: 1050 * l - 275,
    ),
    6: FamilySpec(
        n=6,
        a_range="a <= -1",
        a_ok=lambda a: a <= -1,
        l_range="l <= 0",
        l_ok=lambda l: l <= 0,
        a_of_l=(49, -8),
        p=7,
        b=-2,
        factorization=(((1, 1), 1), ((2, 1), 2), ((2, 1, 1, 1), 1)),
        polynomial=_f6,
        first_last_row=_six_first,
        second_first_row=(-2, 7),
        second_last_row=_six_last,
        quotient=lambda l: [
            -43218 * l**2 + 1176 * l - 1445,
            21609 * l**2 - 539 * l + 715,
            -9604 * l**2 + 228 * l - 322,
            2401 * l**2 - 279 * l + 104,
            98 * l - 17,
            1,
        ],
        remainder=lambda l: 86436 * l**2 - 2352 * l + 2891,
    ),
    7: FamilySpec(
        n=7,
        a_range="a >= 0",
        a_ok=lambda a: a >= 0,
        l_range="l >= 0",
        l_ok=lambda l: l >= 0,
        a_of_l=(121, 20),
        p=11,
        b=-6,
        factorization=(((6, 1), 2), ((7, 8, 0, 3, 1, 1), 1)),
        polynomial=_f7,
        first_last_row=_seven_first,
        second_first_row=(-6, 11),
        second_last_row=_seven_last,
        quotient=lambda l: [
            3689532 * l**2 + 2318239 * l + 326720,
            -614922 * l**2 - 386353 * l - 54450,
            102487 * l**2 + 64372 * l + 9072,
            -14641 * l**2 - 9922 * l - 1445,
            847 * l + 174,
            -121 * l - 26,
            1,
        ],
        remainder=lambda l: -22137192 * l**2 - 13909434 * l - 1960321,
    ),
}


def family(n: int) -> FamilySpec:
    try:
        return FAMILIES[n]
    except KeyError:
        raise UnknownFamilyError(f"no family for n = {n}; choose 4, 5, 6 or 7") from None


def family_polynomial(n: int, a: int) -> IntPoly:
    fam = family(n)
    if not fam.a_ok(a):
        warnings.warn(f"a = {a} is outside the family range {fam.a_range}", ParameterOutOfRangeWarning, stacklevel=2)
    return IntPoly(fam.polynomial(a))


def _shift_rows(n: int) -> la.Matrix:
    return [[1 if j == i + 1 else 0 for j in range(n)] for i in range(n - 1)]


def family_matrix_pair(n: int, l: int) -> tuple[la.Matrix, la.Matrix]:
    """The companion-type matrix and the matrix of the non-invertible class."""
    fam = family(n)
    if not fam.l_ok(l):
        warnings.warn(f"l = {l} is outside the theorem range {fam.l_range}", ParameterOutOfRangeWarning, stacklevel=2)
    m1 = _shift_rows(n) + [fam.first_last_row(l)]
    top = list(fam.second_first_row) + [0] * (n - 2)
    m2 = [top] + _shift_rows(n)[1:] + [fam.second_last_row(l)]
    return m1, m2


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class FamilyReport:
    n: int
    l: int
    a: int
    polynomial: IntPoly
    matrices: tuple[la.Matrix, la.Matrix]
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "l": self.l,
            "a": self.a,
            "polynomial": {"coeffs": list(self.polynomial.coeffs), "coeff_order": "ascending", "text": str(self.polynomial)},
            "matrices": [self.matrices[0], self.matrices[1]],
            "checks": [{"name": c.name, "pass": c.passed, "detail": c.detail} for c in self.checks],
            "pass": self.passed,
        }


def _run(name: str, fn) -> Check:
    try:
        ok, detail = fn()
    except CsknotError as exc:
        return Check(name, False, f"{type(exc).__name__}: {exc}")
    return Check(name, bool(ok), detail)


def verify_family_theorem(n: int, l: int) -> FamilyReport:
    """Re-derive every ingredient of the family theorem at parameter l.

    Checks: both matrices annihilate f; both are positive CS; the quoted
    factorization mod p; the quoted division by ``x - b`` as an identity in l;
    ``p^2 | r`` with a non-invertible ``(p, theta - b)``; and a certified
    non-*-equivalence of the pair.  Failures are report entries.
    """
    fam = family(n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterOutOfRangeWarning)
        m1, m2 = family_matrix_pair(n, l)
        a = fam.a(l)
        f = family_polynomial(n, a)
    p, b = fam.p, fam.b
    o = Order(f)
    checks: list[Check] = []

    def annihilates():
        z1 = la.is_zero(la.poly_at_matrix(f.coeffs, m1))
        z2 = la.is_zero(la.poly_at_matrix(f.coeffs, m2))
        return z1 and z2, f"f(m1) = 0: {z1}; f(m2) = 0: {z2}"

    def cs():
        r1, r2 = is_cs_matrix(m1), is_cs_matrix(m2)
        pos = is_positive(f)
        ok = r1.is_cs and r2.is_cs and pos
        dets = [d for _, d, _ in r1.cs_conditions], [d for _, d, _ in r2.cs_conditions]
        return ok, f"CS m1: {r1.is_cs} {dets[0]}; CS m2: {r2.is_cs} {dets[1]}; positive: {pos}"

    def factorization():
        fac = factor_mod(reduce_mod(f, p))
        got = sorted((g.coeffs, e) for g, e in fac.factors)
        want = sorted((ModPoly(p, c).coeffs, e) for c, e in fam.factorization)
        lin = fac.multiplicity(ModPoly(p, (-b, 1)))
        text = " ".join(f"({g})^{e}" for g, e in fac.factors)
        return got == want and fac.unit == 1 and lin >= 2, f"f mod {p} = {text}"

    def division():
        q, r = divrem(f, IntPoly.linear(b))
        here = q == IntPoly(fam.quotient(l)) and r == IntPoly([fam.remainder(l)])
        # both sides have coefficients of degree <= 2 in l; agreement at five points is an identity
        symbolic = True
        for t in range(l - 2, l + 3):
            ft = IntPoly(fam.polynomial(fam.a(t)))
            rhs = IntPoly.linear(b) * IntPoly(fam.quotient(t)) + IntPoly([fam.remainder(t)])
            symbolic &= ft == rhs
        return here and symbolic, f"q = {q}; r = {r[0]}; identity in l: {symbolic}"

    def non_invertible():
        r = fam.remainder(l)
        kd = kummer_dedekind(o, p, ModPoly(p, (-b, 1)), g_lift=IntPoly.linear(b))
        basis = corollary_basis(o, p, b)
        gens = ideal_from_generators(o, [o._pad((p,)), o._pad((-b, 1))])
        general = is_invertible_general(basis)
        matches = kd.remainder == IntPoly([r])
        ok = matches and r % (p * p) == 0 and not kd.invertible and basis == gens and not general
        return ok, f"r = {r} (computed {kd.remainder[0]}); p^2 | r: {r % (p * p) == 0}; Kummer-Dedekind invertible: {kd.invertible}; general test invertible: {general}; norm {basis.norm}"

    def not_star_equivalent():
        v = star_equivalent(m1, m2)
        ok = v.verdict == Status.NOT_EQUIVALENT and v.route == Route.IDEAL_INVARIANT
        return ok, f"{v.verdict.value} via {v.route.value} ({v.detail})"

    for name, fn in [
        ("annihilates", annihilates),
        ("cs", cs),
        ("factorization", factorization),
        ("division_identity", division),
        ("non_invertible", non_invertible),
        ("not_star_equivalent", not_star_equivalent),
    ]:
        checks.append(_run(name, fn))
    return FamilyReport(n, l, a, f, (m1, m2), checks)


def second_matrix_class(n: int, l: int) -> Status:
    """Whether the second matrix lands in the class of ``(p, theta - b)``."""
    fam = family(n)
    _, m2 = family_matrix_pair(n, l)
    o = Order(family_polynomial(n, fam.a(l)))
    return equivalence_test(matrix_to_ideal(o, m2), corollary_basis(o, fam.p, fam.b)).status
