"""Univariate polynomials over Z and over prime fields.

Coefficients are stored in ascending order: ``IntPoly([1, -9, 14, -8, 1])``
is ``x^4 - 8x^3 + 14x^2 - 9x + 1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    NonMonicDivisorError,
    NonMonicError,
    NonUnitConstantTermError,
    NotPrimeError,
    NotSquarefreeError,
)


def _trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _format(coeffs: Sequence, var: str = "x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


class IntPoly:
    """Polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs: tuple[int, ...] = _trim(int(c) for c in coeffs)

    @classmethod
    def x(cls) -> IntPoly:
        return cls([0, 1])

    @classmethod
    def linear(cls, root: int) -> IntPoly:
        """``x - root``."""
        return cls([-root, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lc == 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        return _format(self.coeffs)

    def __neg__(self) -> IntPoly:
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other) -> IntPoly:
        other = _as_intpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> IntPoly:
        return self + (-_as_intpoly(other))

    def __rsub__(self, other) -> IntPoly:
        return _as_intpoly(other) - self

    def __mul__(self, other) -> IntPoly:
        other = _as_intpoly(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPoly:
        result = IntPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> IntPoly:
        return IntPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def divrem(self, g: IntPoly) -> tuple[IntPoly, IntPoly]:
        return divrem(self, g)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g


def _as_intpoly(p) -> IntPoly:
    if isinstance(p, IntPoly):
        return p
    if isinstance(p, int):
        return IntPoly([p])
    raise TypeError(f"cannot interpret {p!r} as IntPoly")


def divrem(f: IntPoly, g: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Quotient and remainder of ``f`` by a monic ``g`` in Z[x]."""
    if not g.is_monic():
        raise NonMonicDivisorError(f"divisor {g} is not monic")
    r = list(f.coeffs)
    dg = g.degree
    if len(r) - 1 < dg:
        return IntPoly(), IntPoly(r)
    q = [0] * (len(r) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            q[k - dg] = c
            for i, gc in enumerate(g.coeffs):
                r[k - dg + i] -= c * gc
    return IntPoly(q), IntPoly(r[:dg])


def signed_reciprocal(f: IntPoly) -> IntPoly:
    """``(-x)^n f(1/x)`` for monic ``f`` of degree n with ``f(0) = +-1``."""
    if not f.is_monic():
        raise NonMonicError(f"{f} is not monic")
    if f[0] not in (1, -1):
        raise NonUnitConstantTermError(f"constant term {f[0]} of {f} is not +-1")
    n = f.degree
    # coefficient of x^k in x^n f(1/x) is c_{n-k}
    return IntPoly((-1) ** n * f[n - k] for k in range(n + 1))


# ---------------------------------------------------------------------------
# rational polynomial helpers (lists of Fractions, ascending)


def _qtrim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _qrem(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1] / lb
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
        _qtrim(a)
    return a


def _qgcd(a: list, b: list) -> list:
    a, b = _qtrim([Fraction(x) for x in a]), _qtrim([Fraction(x) for x in b])
    while b:
        a, b = b, _qrem(a, b)
    return a


def is_squarefree(f: IntPoly) -> bool:
    """True when ``gcd(f, f')`` over Q is constant."""
    if f.degree < 1:
        return True
    return len(_qgcd(list(f.coeffs), list(f.derivative().coeffs))) == 1


def squarefree_part(f: IntPoly) -> IntPoly:
    """Primitive integer polynomial with the same complex roots as f, each simple."""
    g = _qgcd(list(f.coeffs), list(f.derivative().coeffs)) if f.degree >= 1 else [1]
    if len(g) <= 1:
        return f
    a = [Fraction(x) for x in f.coeffs]
    db = len(g) - 1
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + db] / g[-1]
        q[k] = c
        for i, gc in enumerate(g):
            a[k + i] -= c * gc
    den = 1
    for c in q:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in q]
    cont = 0
    for c in ints:
        cont = gcd(cont, c)
    sign = 1 if ints[-1] > 0 else -1
    return IntPoly(sign * c // cont for c in ints)


# ---------------------------------------------------------------------------
# resultant and discriminant


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b``."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - 1 - db + 1
    while r and len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r.pop()
        e -= 1
        while r and r[-1] == 0:
            r.pop()
    return [x * lb**e for x in r]


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Resultant by the subresultant PRS, exact over Z."""
    if f.is_zero() or g.is_zero():
        return 0
    a, b = list(f.coeffs), list(g.coeffs)
    s = 1
    if len(b) > len(a):
        a, b = b, a
        if (len(a) - 1) * (len(b) - 1) % 2:
            s = -1
    ca, cb = IntPoly(a).content(), IntPoly(b).content()
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca ** (len(b) - 1) * cb ** (len(a) - 1)
    if len(b) == 1:
        return s * t * b[0] ** (len(a) - 1)
    gg, h = 1, 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        if not r:
            return 0
        a = b
        b = [x // (gg * h**delta) for x in r]
        gg = a[-1]
        if delta >= 1:
            h = gg**delta // h ** (delta - 1)
        if len(b) == 1:
            da = len(a) - 1
            return s * t * (b[0] ** da // h ** (da - 1))


def discriminant(f: IntPoly) -> int:
    """``(-1)^(n(n-1)/2) Res(f, f') / lc(f)``."""
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    res = resultant(f, f.derivative())
    s = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(s * res, f.lc)
    assert rem == 0
    return q


def sylvester_matrix(f: IntPoly, g: IntPoly) -> list[list[int]]:
    m, n = f.degree, g.degree
    size = m + n
    rows = []
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return rows


# ---------------------------------------------------------------------------
# Sturm sequences


def sturm_sequence(f: IntPoly) -> list[list[Fraction]]:
    seq = [[Fraction(c) for c in f.coeffs], [Fraction(c) for c in f.derivative().coeffs]]
    while seq[-1] and len(seq[-1]) > 1:
        r = _qrem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_at(p: list, x) -> int:
    if x == float("inf") or x == float("-inf"):
        lead = p[-1]
        deg = len(p) - 1
        s = 1 if lead > 0 else -1
        if x < 0 and deg % 2:
            s = -s
        return s
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def _variations(seq: list, x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


INF = float("inf")


def count_real_roots(
    f: IntPoly,
    lo=-INF,
    hi=INF,
    closed_lo: bool = False,
    closed_hi: bool = False,
) -> int:
    """Number of distinct real roots of a squarefree ``f`` in the given interval.

    Endpoints are ints/Fractions or +-inf; the interval is open unless the
    corresponding ``closed_*`` flag is set.
    """
    if f.degree < 1:
        return 0
    if not is_squarefree(f):
        raise NotSquarefreeError(f"{f} is not squarefree")
    seq = sturm_sequence(f)
    lo_f = lo if lo in (INF, -INF) else Fraction(lo)
    hi_f = hi if hi in (INF, -INF) else Fraction(hi)
    if not lo_f < hi_f:
        return 0
    # V(a) - V(b) counts roots in (a, b]
    count = _variations(seq, lo_f) - _variations(seq, hi_f)
    if hi_f not in (INF, -INF) and not closed_hi and f(hi_f) == 0:
        count -= 1
    if lo_f not in (INF, -INF) and closed_lo and f(lo_f) == 0:
        count += 1
    return count


# ---------------------------------------------------------------------------
# primes


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 (first 13 prime bases)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


# ---------------------------------------------------------------------------
# polynomials over F_p


@dataclass(frozen=True)
class ModPoly:
    """Polynomial over F_p with canonical residues in [0, p), ascending."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(c % self.p for c in self.coeffs))

    @classmethod
    def make(cls, coeffs: Iterable[int], p: int) -> ModPoly:
        return cls(p, tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        return _format(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def _new(self, coeffs) -> ModPoly:
        return ModPoly(self.p, tuple(coeffs))

    def __add__(self, other: ModPoly) -> ModPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return self._new(self[k] + other[k] for k in range(n))

    def __sub__(self, other: ModPoly) -> ModPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return self._new(self[k] - other[k] for k in range(n))

    def __mul__(self, other: ModPoly) -> ModPoly:
        if not self.coeffs or not other.coeffs:
            return self._new(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return self._new(out)

    def scale(self, c: int) -> ModPoly:
        return self._new(c * x for x in self.coeffs)

    def monic(self) -> ModPoly:
        if not self.coeffs:
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def divmod(self, g: ModPoly) -> tuple[ModPoly, ModPoly]:
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p = self.p
        r = list(self.coeffs)
        dg = g.degree
        inv = pow(g.lc, -1, p)
        if len(r) - 1 < dg:
            return self._new(()), self
        q = [0] * (len(r) - dg)
        for k in range(len(r) - 1, dg - 1, -1):
            c = r[k] * inv % p
            if c:
                q[k - dg] = c
                for i, gc in enumerate(g.coeffs):
                    r[k - dg + i] = (r[k - dg + i] - c * gc) % p
        return self._new(q), self._new(r[:dg])

    def __mod__(self, g: ModPoly) -> ModPoly:
        return self.divmod(g)[1]

    def __floordiv__(self, g: ModPoly) -> ModPoly:
        return self.divmod(g)[0]

    def powmod(self, e: int, m: ModPoly) -> ModPoly:
        result = self._new((1,))
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def derivative(self) -> ModPoly:
        return self._new(k * c for k, c in enumerate(self.coeffs) if k)

    def gcd(self, other: ModPoly) -> ModPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def sort_key(self) -> tuple:
        return (self.degree, self.coeffs)


def reduce_mod(f: IntPoly, p: int) -> ModPoly:
    if not is_probable_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    return ModPoly(p, f.coeffs)


def lift(g: ModPoly) -> IntPoly:
    """Integer lift with residues in [0, p)."""
    return IntPoly(g.coeffs)


@dataclass(frozen=True)
class ModFactorization:
    p: int
    unit: int
    factors: tuple[tuple[ModPoly, int], ...]

    def expand(self) -> ModPoly:
        out = ModPoly(self.p, (self.unit,))
        for g, e in self.factors:
            for _ in range(e):
                out = out * g
        return out

    def multiplicity(self, g: ModPoly) -> int:
        g = g.monic()
        for h, e in self.factors:
            if h == g:
                return e
        return 0


def _squarefree_decomposition(f: ModPoly) -> list[tuple[ModPoly, int]]:
    """Monic squarefree factors with multiplicities (Yun-style, char p aware)."""
    p = f.p
    out: list[tuple[ModPoly, int]] = []

    def rec(f: ModPoly, mult: int) -> None:
        if f.degree < 1:
            return
        df = f.derivative()
        if df.is_zero():
            # f(x) = g(x^p) = g(x)^p over F_p
            root = f._new(f.coeffs[i] for i in range(0, len(f.coeffs), p))
            rec(root, mult * p)
            return
        c = f.gcd(df)
        w = f // c
        i = 1
        while w.degree >= 1:
            y = w.gcd(c)
            z = w // y
            if z.degree >= 1:
                out.append((z.monic(), i * mult))
            i += 1
            w = y
            c = c // y
        if c.degree >= 1:
            # c is a p-th power
            root = c._new(c.coeffs[k] for k in range(0, len(c.coeffs), p))
            rec(root.monic(), mult * p)

    rec(f.monic(), 1)
    return out


def _distinct_degree(f: ModPoly) -> list[tuple[ModPoly, int]]:
    p = f.p
    x = f._new((0, 1))
    out = []
    h = x
    d = 1
    f = f.monic()
    while f.degree >= 2 * d:
        h = h.powmod(p, f)
        g = f.gcd(h - x)
        if g.degree >= 1:
            out.append((g, d))
            f = f // g
            h = h % f
        d += 1
    if f.degree >= 1:
        out.append((f.monic(), f.degree))
    return out


def _equal_degree(f: ModPoly, d: int, rng: random.Random) -> list[ModPoly]:
    if f.degree == d:
        return [f.monic()]
    p = f.p
    n = f.degree
    while True:
        a = f._new(rng.randrange(p) for _ in range(n))
        if a.degree < 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1))
            t = a
            acc = a
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((p**d - 1) // 2, f) - f._new((1,))
        g = f.gcd(b)
        if 0 < g.degree < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor_mod(f: ModPoly, seed: int = 0) -> ModFactorization:
    """Complete factorization of ``f`` over F_p into monic irreducibles.

    Squarefree decomposition, distinct-degree, then Cantor-Zassenhaus
    equal-degree splitting with a ``random.Random(seed)`` source.  Factors are
    sorted by degree, then coefficient sequence.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    unit = f.lc
    acc: dict[ModPoly, int] = {}
    for sf, mult in _squarefree_decomposition(f):
        for g, d in _distinct_degree(sf):
            for h in _equal_degree(g, d, rng):
                acc[h] = acc.get(h, 0) + mult
    factors = tuple(sorted(acc.items(), key=lambda item: item[0].sort_key()))
    return ModFactorization(p=f.p, unit=unit, factors=factors)


def is_irreducible_mod(f: ModPoly) -> bool:
    """Rabin's irreducibility test."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    p = f.p
    x = f._new((0, 1))
    for q in {q for q in primes_up_to(n) if n % q == 0}:
        h = x.powmod(p ** (n // q), f)
        if f.gcd(h - x).degree != 0:
            return False
    return (x.powmod(p**n, f) - x) % f == f._new(())


def irreducibility_witness(f: IntPoly, prime_bound: int) -> int | None:
    """A prime p <= prime_bound, p not dividing disc(f), with f irreducible mod p."""
    if f.degree == 1:
        return 2 if prime_bound >= 2 else None
    disc = discriminant(f)
    for p in primes_up_to(prime_bound):
        if disc % p == 0:
            continue
        if is_irreducible_mod(ModPoly(p, f.coeffs)):
            return p
    return None
