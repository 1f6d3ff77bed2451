"""The order Z[theta] = Z[x]/(f) and its ideals as theta-stable lattices.

Elements are integer coordinate tuples over the power basis
``1, theta, ..., theta^(n-1)``.  Multiplication matrices use the row
convention ``coords(x * y) == coords(y) @ mult_matrix(x)``, so row k of
``mult_matrix(x)`` holds the coordinates of ``theta^k * x``; in particular
``mult_matrix(theta)`` is the companion matrix of f with last row
``[-c_0, ..., -c_(n-1)]``.

Ideals are stored by the canonical row HNF of their coordinate lattice, so
ideal equality is tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial, gcd, isqrt, lcm
from typing import Iterable, Sequence

from . import linalg as la
from .errors import (
    AllZeroGeneratorsError,
    DegreeTooSmallError,
    HypothesesNotMetError,
    InapplicableError,
    NonMonicError,
    NotAFactorError,
    OrderMismatchError,
)
from .poly import (
    IntPoly,
    ModPoly,
    count_real_roots,
    discriminant,
    divrem,
    factor_mod,
    is_probable_prime,
    lift,
    primes_up_to,
    reduce_mod,
)

OrderElement = tuple[int, ...]


def companion(f: IntPoly) -> la.Matrix:
    """Companion matrix with superdiagonal ones and last row ``-c_0 .. -c_(n-1)``."""
    if not f.is_monic():
        raise NonMonicError(f"{f} is not monic")
    n = f.degree
    m = la.zeros(n, n)
    for i in range(n - 1):
        m[i][i + 1] = 1
    m[n - 1] = [-f[k] for k in range(n)]
    return m


class Order:
    """Z[theta] for a monic irreducible integer polynomial f.

    Instances are treated as immutable; derived data is cached lazily.
    """

    def __init__(self, f: IntPoly):
        if not f.is_monic():
            raise NonMonicError(f"{f} is not monic")
        if f.degree < 2:
            raise DegreeTooSmallError("order needs deg f >= 2")
        self.f = f
        self.n = f.degree
        self.mult_theta = companion(f)

    def __repr__(self) -> str:
        return f"Order({self.f})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Order) and self.f == other.f

    def __hash__(self) -> int:
        return hash(("Order", self.f))

    @cached_property
    def disc(self) -> int:
        return discriminant(self.f)

    @cached_property
    def signature(self) -> tuple[int, int]:
        r1 = count_real_roots(self.f)
        return r1, (self.n - r1) // 2

    @cached_property
    def geometry(self):
        from .geometry import Geometry

        return Geometry(self)

    # -- elements ---------------------------------------------------------

    def element(self, coeffs: Iterable[int]) -> OrderElement:
        """Reduce a polynomial in theta (ascending coefficients) to coordinates."""
        _, r = divrem(IntPoly(coeffs), self.f)
        return self._pad(r.coeffs)

    def _pad(self, coeffs: Sequence[int]) -> OrderElement:
        return tuple(coeffs) + (0,) * (self.n - len(coeffs))

    @property
    def one(self) -> OrderElement:
        return self._pad((1,))

    @property
    def theta(self) -> OrderElement:
        return self._pad((0, 1))

    def mul(self, x: Sequence[int], y: Sequence[int]) -> OrderElement:
        return self.element((IntPoly(x) * IntPoly(y)).coeffs)

    def mult_matrix(self, x: Sequence[int]) -> la.Matrix:
        """Rows are coordinates of ``theta^k * x`` for k = 0..n-1."""
        rows = []
        v = list(x)
        m = self.mult_theta
        for _ in range(self.n):
            rows.append(v)
            v = la.vecmat(v, m)
        return rows

    def norm(self, x: Sequence[int]) -> int:
        return la.det(self.mult_matrix(x))

    def check(self, other: Order) -> None:
        if self != other:
            raise OrderMismatchError("operands live in different orders")

    @cached_property
    def unit_ideal(self) -> IdealLattice:
        return IdealLattice(self, tuple(tuple(r) for r in la.identity(self.n)))


def make_order(f: IntPoly) -> Order:
    return Order(f)


def elem_mul(o: Order, x: Sequence[int], y: Sequence[int]) -> OrderElement:
    return o.mul(x, y)


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class IdealLattice:
    """Nonzero ideal of Z[theta]; ``basis`` is its canonical row HNF."""

    order: Order
    basis: tuple[tuple[int, ...], ...]

    @property
    def norm(self) -> int:
        out = 1
        for i, row in enumerate(self.basis):
            out *= row[i]
        return out

    def rows(self) -> la.Matrix:
        return [list(r) for r in self.basis]

    def contains(self, v: Sequence[int]) -> bool:
        return la.in_row_span_hnf(self.basis, v) is not None

    def as_frac(self) -> FracLattice:
        return FracLattice(self.order, self.basis, 1)

    def __str__(self) -> str:
        return f"Ideal(norm={self.norm}, hnf={[list(r) for r in self.basis]})"


@dataclass(frozen=True)
class FracLattice:
    """Fractional lattice ``numerator / denominator`` with minimal denominator."""

    order: Order
    numerator: tuple[tuple[int, ...], ...]
    denominator: int

    @property
    def norm(self) -> Fraction:
        num = 1
        for i, row in enumerate(self.numerator):
            num *= row[i]
        return Fraction(num, self.denominator**self.order.n)

    def is_integral(self) -> bool:
        return self.denominator == 1

    def as_ideal(self) -> IdealLattice:
        if self.denominator != 1:
            raise ValueError("lattice is not integral")
        return IdealLattice(self.order, self.numerator)

    def rows(self) -> la.Matrix:
        return [list(r) for r in self.numerator]


def _to_tuple(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in rows)


def lattice_from_rows(o: Order, rows: Sequence[Sequence[int]], modulus: int | None = None) -> IdealLattice:
    """Ideal spanned by integer ``rows``; the caller guarantees theta-stability."""
    return IdealLattice(o, _to_tuple(la.row_hnf(rows, modulus=modulus, ncols=o.n)))


def frac_from_rows(o: Order, rows: Sequence[Sequence]) -> FracLattice:
    """Canonical FracLattice spanned by n independent rational rows."""
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    ints = [[int(Fraction(x) * den) for x in row] for row in rows]
    if len(ints) == o.n:
        d = abs(la.det(ints))
        h = la.row_hnf(ints, modulus=d, ncols=o.n) if d else la.row_hnf(ints)
    else:
        h = la.row_hnf(ints)
    if len(h) != o.n:
        raise ValueError("rows do not span a full-rank lattice")
    g = gcd(la.content(x for row in h for x in row), den)
    return FracLattice(o, _to_tuple([[x // g for x in row] for row in h]), den // g)


def is_theta_stable(o: Order, basis: Sequence[Sequence[int]]) -> bool:
    """Every basis row times theta lies in the span (basis must be an echelon HNF)."""
    return all(la.in_row_span_hnf(basis, la.vecmat(row, o.mult_theta)) is not None for row in basis)


def ideal_from_generators(o: Order, gens: Sequence[Sequence[int]]) -> IdealLattice:
    """Smallest ideal containing ``gens``."""
    gens = [tuple(g) for g in gens if any(g)]
    if not gens:
        raise AllZeroGeneratorsError("need at least one nonzero generator")
    rows = []
    modulus = 0
    for g in gens:
        m = o.mult_matrix(g)
        rows.extend(m)
        modulus = gcd(modulus, la.det(m))
    return lattice_from_rows(o, rows, modulus=modulus)


def principal_ideal(o: Order, x: Sequence[int]) -> IdealLattice:
    return ideal_from_generators(o, [x])


def ideal_norm(i: IdealLattice) -> int:
    return i.norm


def ideal_product(i: IdealLattice, j: IdealLattice) -> IdealLattice:
    i.order.check(j.order)
    o = i.order
    rows = [list(o.mul(a, b)) for a in i.basis for b in j.basis]
    return lattice_from_rows(o, rows, modulus=i.norm * j.norm)


def frac_product(i: FracLattice, j: FracLattice) -> FracLattice:
    i.order.check(j.order)
    o = i.order
    rows = [list(o.mul(a, b)) for a in i.numerator for b in j.numerator]
    modulus = la.det([list(r) for r in i.numerator]) * la.det([list(r) for r in j.numerator])
    h = la.row_hnf(rows, modulus=modulus, ncols=o.n)
    den = i.denominator * j.denominator
    g = gcd(la.content(x for row in h for x in row), den)
    return FracLattice(o, _to_tuple([[x // g for x in row] for row in h]), den // g)


def _as_frac(x) -> FracLattice:
    return x.as_frac() if isinstance(x, IdealLattice) else x


def colon_lattice(j, i) -> FracLattice:
    """``(J : I) = {x in K : x I subset J}`` for ideals or fractional lattices."""
    j, i = _as_frac(j), _as_frac(i)
    i.order.check(j.order)
    o = i.order
    n = o.n
    nj = [list(r) for r in j.numerator]
    det_nj = la.det(nj)
    adj_nj = la.adjugate(nj)
    # columns of [M_{n_k} adj(N_J)]_k span a lattice whose dual is the colon
    blocks = [la.matmul(o.mult_matrix(row), adj_nj) for row in i.numerator]
    gens = [[blk[r][c] for r in range(n)] for blk in blocks for c in range(n)]
    modulus = la.det(la.transpose(blocks[0]))
    g = la.row_hnf(gens, modulus=modulus, ncols=n)
    ginv_t = la.transpose(la.inverse_rational(g))
    scale = Fraction(i.denominator * det_nj, j.denominator)
    return frac_from_rows(o, [[scale * x for x in row] for row in ginv_t])


@lru_cache(maxsize=4096)
def multiplier_ring(i: IdealLattice) -> FracLattice:
    """``(I : I)``; constant on ideal classes."""
    return colon_lattice(i, i)


@lru_cache(maxsize=4096)
def is_invertible_general(i: IdealLattice) -> bool:
    """``I * (O : I) == O``."""
    o = i.order
    inv = colon_lattice(o.unit_ideal, i)
    return frac_product(i.as_frac(), inv) == o.unit_ideal.as_frac()


# ---------------------------------------------------------------------------
# Kummer-Dedekind


@dataclass(frozen=True)
class KummerDedekind:
    prime: int
    factor: ModPoly
    multiplicity: int
    remainder: IntPoly
    invertible: bool


def kummer_dedekind(o: Order, p: int, g: ModPoly, e: int | None = None, g_lift: IntPoly | None = None) -> KummerDedekind:
    """Invertibility of ``(p, g(theta))`` for a monic irreducible factor g of f mod p.

    Invertible iff ``e == 1`` or ``p^2`` does not divide every coefficient of
    the remainder of f by an integer lift of g.  The verdict does not depend
    on the lift; ``g_lift`` only fixes which remainder is reported (default:
    residues in ``[0, p)``).
    """
    fbar = reduce_mod(o.f, p)
    g = ModPoly(p, g.coeffs).monic()
    if g.degree < 1 or not (fbar % g).is_zero():
        raise NotAFactorError(f"{g} does not divide f mod {p}")
    fac = factor_mod(fbar)
    mult = fac.multiplicity(g)
    if mult == 0:
        raise NotAFactorError(f"{g} is not an irreducible factor of f mod {p}")
    if e is not None and e != mult:
        raise NotAFactorError(f"{g} has multiplicity {mult}, not {e}")
    if g_lift is None:
        g_lift = lift(g)
    elif not g_lift.is_monic() or reduce_mod(g_lift, p) != g:
        raise NotAFactorError(f"{g_lift} is not a monic lift of {g}")
    _, r = divrem(o.f, g_lift)
    p2 = p * p
    invertible = mult == 1 or any(c % p2 for c in r.coeffs)
    return KummerDedekind(prime=p, factor=g, multiplicity=mult, remainder=r, invertible=invertible)


def corollary_basis(o: Order, p: int, b: int) -> IdealLattice:
    """The ideal ``(p, theta - b)`` from the explicit basis
    ``{p, theta - b, theta (theta - b), ..., theta^(n-2) (theta - b)}``.

    Requires ``(x - b)^2 | f mod p`` and ``p^2 | f(b)``.
    """
    n = o.n
    fbar = reduce_mod(o.f, p)
    lin = ModPoly(p, (-b, 1))
    mult = factor_mod(fbar).multiplicity(lin)
    r = o.f(b)
    if mult < 2 or r % (p * p):
        raise HypothesesNotMetError(f"(x - {b}) has multiplicity {mult} mod {p} and remainder {r}")
    shifted = [-b, 1] + [0] * (n - 2)
    rows = [[p] + [0] * (n - 1)]
    v = shifted
    for _ in range(n - 1):
        rows.append(list(v))
        v = la.vecmat(v, o.mult_theta)
    ideal = lattice_from_rows(o, rows, modulus=la.det(rows))
    check = ideal_from_generators(o, [o._pad((p,)), o._pad((-b, 1))])
    if ideal != check:
        raise RuntimeError("explicit basis does not span (p, theta - b)")
    return ideal


def prime_ideals_over(o: Order, p: int) -> list[tuple[IdealLattice, KummerDedekind]]:
    """The ideals ``(p, g(theta))`` for the irreducible factors g of f mod p."""
    out = []
    for g, e in factor_mod(reduce_mod(o.f, p)).factors:
        gen = o.element(lift(g).coeffs)
        ideal = ideal_from_generators(o, [o._pad((p,)), gen])
        out.append((ideal, kummer_dedekind(o, p, g, e)))
    return out


def is_maximal_at(o: Order, p: int) -> bool:
    """Z[theta] is p-maximal iff every repeated factor passes Kummer-Dedekind."""
    fac = factor_mod(reduce_mod(o.f, p))
    return all(kummer_dedekind(o, p, g, e).invertible for g, e in fac.factors if e >= 2)


# ---------------------------------------------------------------------------
# maximality and the Minkowski bound


class Tri(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def _pollard_brent(n: int, max_iter: int, seed: int = 1) -> int | None:
    if n % 2 == 0:
        return 2
    for c in range(seed, seed + 8):
        y, r, q, g = 2, 1, 1, 1
        x = ys = 2
        steps = 0
        while g == 1 and steps < max_iter:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
            steps += r
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


@dataclass(frozen=True)
class Factorization:
    primes: dict[int, int]
    unfactored: tuple[int, ...]
    trial_bound: int

    @property
    def complete(self) -> bool:
        return not self.unfactored


def factor_integer(n: int, trial_bound: int = 10**6, rho_iterations: int = 200_000, seed: int = 1) -> Factorization:
    """Trial division to ``trial_bound`` then Pollard-Brent rho with an iteration cap."""
    n = abs(n)
    primes: dict[int, int] = {}
    if n == 0:
        raise ValueError("cannot factor 0")
    for p in primes_up_to(min(trial_bound, isqrt(n) + 1)):
        if p * p > n:
            break
        while n % p == 0:
            primes[p] = primes.get(p, 0) + 1
            n //= p
    unfactored: list[int] = []
    stack = [n] if n > 1 else []
    while stack:
        c = stack.pop()
        if c < trial_bound * trial_bound or is_probable_prime(c):
            primes[c] = primes.get(c, 0) + 1
            continue
        s = isqrt(c)
        if s * s == c:
            stack.extend([s, s])
            continue
        d = _pollard_brent(c, rho_iterations, seed=max(1, seed))
        if d is None:
            unfactored.append(c)
        else:
            stack.extend([d, c // d])
    return Factorization(primes=dict(sorted(primes.items())), unfactored=tuple(sorted(unfactored)), trial_bound=trial_bound)


@dataclass(frozen=True)
class IntegralClosureReport:
    verdict: Tri
    checked_primes: tuple[int, ...]
    failing_primes: tuple[int, ...]
    unfactored: tuple[int, ...]


def is_integrally_closed(o: Order, factor_budget: int = 10**6, seed: int = 1) -> IntegralClosureReport:
    """Decide maximality of Z[theta] at every prime whose square divides disc(f)."""
    fac = factor_integer(o.disc, trial_bound=factor_budget, seed=seed)
    checked = tuple(p for p, e in fac.primes.items() if e >= 2)
    failing = tuple(p for p in checked if not is_maximal_at(o, p))
    if failing:
        verdict = Tri.NO
    elif fac.unfactored:
        # a composite cofactor with all prime factors above the trial bound
        # is squarefree when it is below bound^3 and not a square
        b3 = factor_budget**3
        certified = all(c < b3 and isqrt(c) ** 2 != c for c in fac.unfactored)
        verdict = Tri.YES if certified else Tri.UNKNOWN
    else:
        verdict = Tri.YES
    return IntegralClosureReport(verdict, checked, failing, fac.unfactored)


# over-approximations of 4/pi and of square roots keep the bound an upper bound
_FOUR_OVER_PI_UP = Fraction(12732396, 10**7)


def _sqrt_up(x: int, scale: int = 10**6) -> Fraction:
    return Fraction(isqrt(x * scale * scale) + 1, scale)


def minkowski_bound(o: Order, closure: IntegralClosureReport | None = None) -> Fraction:
    """Rational upper bound for ``n!/n^n (4/pi)^r2 sqrt|disc|`` (maximal orders only)."""
    closure = closure or is_integrally_closed(o)
    if closure.verdict != Tri.YES:
        raise InapplicableError("Minkowski bound needs a maximal order")
    n = o.n
    _, r2 = o.signature
    return Fraction(factorial(n), n**n) * _FOUR_OVER_PI_UP**r2 * _sqrt_up(abs(o.disc))
