"""Exact integer and rational matrix kernels.

Matrices are plain ``list[list[int]]`` in row-major order.  No function in
this module mutates its arguments; every result is a fresh list.

Conventions used throughout the package:

* ``hnf`` is the row-style Hermite normal form: upper triangular (echelon),
  positive pivots, entries above each pivot reduced into ``[0, pivot)``.
* exterior powers index k-subsets in ascending lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .errors import DependentRowsError, KOutOfRangeError, NonSquareError

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# small helpers


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def copy(m: Sequence[Sequence]) -> list[list]:
    return [list(row) for row in m]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list:
    """Row vector times matrix."""
    return [sum(x * y for x, y in zip(v, col)) for col in zip(*m)]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def mat_add(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, m: Sequence[Sequence]) -> list[list]:
    return [[c * x for x in row] for row in m]


def is_square(m: Sequence[Sequence]) -> bool:
    return len(m) > 0 and all(len(row) == len(m) for row in m)


def _require_square(m: Sequence[Sequence]) -> int:
    if not is_square(m):
        raise NonSquareError(f"expected a square matrix, got {len(m)} rows")
    return len(m)


def is_zero(m: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in m for x in row)


# ---------------------------------------------------------------------------
# determinant, characteristic polynomial, exterior powers


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = _require_square(m)
    a = copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def charpoly_coeffs(m: Sequence[Sequence[int]]) -> list[int]:
    """Ascending coefficients of ``det(xI - m)`` by Berkowitz's algorithm."""
    n = _require_square(m)
    desc = [1]
    for r in range(n):
        # leading (r+1)x(r+1) block is [[A_r, c], [R, a]]
        a = m[r][r]
        col = [m[i][r] for i in range(r)]
        row = [m[r][j] for j in range(r)]
        t = [1, -a]
        v = col
        for _ in range(r):
            t.append(-sum(x * y for x, y in zip(row, v)))
            v = [sum(m[i][j] * v[j] for j in range(r)) for i in range(r)]
        # multiply the (r+2) x (r+1) lower-triangular Toeplitz matrix by desc
        desc = [sum(t[i - j] * desc[j] for j in range(min(i, r) + 1)) for i in range(r + 2)]
    return desc[::-1]


def charpoly(m: Sequence[Sequence[int]]):
    """Characteristic polynomial ``det(xI - m)`` as an :class:`IntPoly`."""
    from .poly import IntPoly

    return IntPoly(charpoly_coeffs(m))


def exterior_power(m: Sequence[Sequence[int]], k: int) -> Matrix:
    """Matrix of k x k minors, rows/columns indexed by lexicographic k-subsets."""
    n = _require_square(m)
    if not 1 <= k <= n:
        raise KOutOfRangeError(f"k={k} outside 1..{n}")
    subsets = list(combinations(range(n), k))
    return [[det([[m[i][j] for j in cols] for i in rows]) for cols in subsets] for rows in subsets]


def poly_at_matrix(coeffs: Iterable[int], m: Sequence[Sequence[int]]) -> Matrix:
    """Evaluate the polynomial with ascending ``coeffs`` at the square matrix ``m``."""
    n = _require_square(m)
    coeffs = list(coeffs)
    result = zeros(n, n)
    for c in reversed(coeffs):
        result = matmul(result, m)
        for i in range(n):
            result[i][i] += c
    return result


def mat_pow(m: Sequence[Sequence[int]], e: int) -> Matrix:
    n = _require_square(m)
    result = identity(n)
    base = copy(m)
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# rational helpers


def inverse_rational(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over Q.  Raises ``ZeroDivisionError`` if singular."""
    n = _require_square(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    """Exact integer inverse of a matrix with determinant +-1."""
    d = det(m)
    if d not in (1, -1):
        from .errors import NonInvertibleError

        raise NonInvertibleError(f"determinant {d} is not a unit")
    inv = inverse_rational(m)
    return [[int(x) for x in row] for row in inv]


def adjugate(m: Sequence[Sequence[int]]) -> Matrix:
    """Classical adjoint, so that ``adjugate(m) @ m == det(m) * I``."""
    n = _require_square(m)
    if n == 1:
        return [[1]]
    adj = zeros(n, n)
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(m) if k != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj


# ---------------------------------------------------------------------------
# Hermite normal form


@dataclass(frozen=True)
class HnfResult:
    """Row HNF ``hnf`` of an input matrix together with ``transform @ input == hnf``.

    ``hnf`` keeps the input's shape; its last ``rows - rank`` rows are zero.
    """

    hnf: Matrix
    transform: Matrix
    rank: int

    @property
    def basis(self) -> Matrix:
        return self.hnf[: self.rank]


def hnf(m: Sequence[Sequence[int]]) -> HnfResult:
    """Row Hermite normal form with a unimodular transform."""
    a = copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity(rows)
    r = 0
    for j in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            b = a[i][j]
            if b == 0:
                continue
            p = a[r][j]
            if p == 0:
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
                continue
            g, s, t = xgcd(p, b)
            pg, bg = p // g, b // g
            ar, ai = a[r], a[i]
            a[r] = [s * x + t * y for x, y in zip(ar, ai)]
            a[i] = [pg * y - bg * x for x, y in zip(ar, ai)]
            ur, ui = u[r], u[i]
            u[r] = [s * x + t * y for x, y in zip(ur, ui)]
            u[i] = [pg * y - bg * x for x, y in zip(ur, ui)]
        p = a[r][j]
        if p == 0:
            continue
        if p < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
            p = -p
        for i in range(r):
            q = a[i][j] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return HnfResult(hnf=a, transform=u, rank=r)


def _reduce_above(basis: Matrix) -> Matrix:
    """Reduce entries above pivots of an upper-triangular echelon basis into [0, pivot)."""
    basis = copy(basis)
    for k, row in enumerate(basis):
        j = next(c for c, x in enumerate(row) if x)
        p = row[j]
        for i in range(k):
            q = basis[i][j] // p
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], row)]
    return basis


def row_hnf(rows: Sequence[Sequence[int]], modulus: int | None = None, ncols: int | None = None) -> Matrix:
    """Nonzero rows of the row HNF of the lattice spanned by ``rows``.

    When ``modulus`` is given, the caller guarantees that ``modulus * Z^n`` lies
    in the lattice (so it is full rank) and the elimination runs with entries
    reduced modulo ``modulus``; the result is identical to the unreduced HNF.
    """
    if modulus is None:
        if not rows:
            return []
        res = hnf(rows)
        return res.basis
    n = ncols if ncols is not None else len(rows[0])
    D = abs(modulus)
    if D == 0:
        raise ValueError("modulus must be nonzero")
    work = [[x % D for x in row] for row in rows]
    work = [row for row in work if any(row)]
    basis: Matrix = []
    for j in range(n):
        piv = [0] * n
        piv[j] = D
        rest = []
        for row in work:
            b = row[j]
            if b == 0:
                rest.append(row)
                continue
            p = piv[j]
            g, s, t = xgcd(p, b)
            pg, bg = p // g, b // g
            new_piv = [s * x + t * y for x, y in zip(piv, row)]
            other = [(pg * y - bg * x) % D for x, y in zip(piv, row)]
            new_piv = [x % D if c > j else x for c, x in enumerate(new_piv)]
            piv = new_piv
            if any(other):
                rest.append(other)
        work = rest
        basis.append(piv)
    return _reduce_above(basis)


def in_row_span_hnf(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Coefficients ``y`` with ``y @ basis == v`` for an echelon ``basis``, or None."""
    v = list(v)
    y = []
    for row in basis:
        j = next(c for c, x in enumerate(row) if x)
        if any(v[c] for c in range(j)):
            return None
        q, rem = divmod(v[j], row[j])
        if rem:
            return None
        y.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return y


# ---------------------------------------------------------------------------
# integer solving and kernels


def solve_integer(m: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[int] | None:
    """One integer solution ``x`` of ``m @ x == rhs``, or None when there is none."""
    cols = len(m[0])
    res = hnf(transpose(m))
    y = in_row_span_hnf(res.basis, rhs)
    if y is None:
        return None
    y = y + [0] * (cols - len(y))
    return vecmat(y, res.transform)


def kernel_lattice(m: Sequence[Sequence[int]]) -> Matrix:
    """Rows form a Z-basis of ``{x in Z^cols : m @ x == 0}`` (HNF-canonical)."""
    res = hnf(transpose(m))
    kernel = res.transform[res.rank :]
    if not kernel:
        return []
    return row_hnf(kernel)


# ---------------------------------------------------------------------------
# LLL


def lll_gram(gram: Sequence[Sequence], delta: Fraction = Fraction(3, 4)) -> Matrix:
    """Unimodular ``U`` such that ``U @ B`` is LLL-reduced, where ``gram = B B^T``.

    Exact rational Gram-Schmidt on the supplied (positive definite) Gram matrix;
    entries may be ints, Fractions or floats (floats are taken exactly).
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    u = identity(n)
    if n == 0:
        return u
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    bstar[0] = g[0][0]
    if bstar[0] <= 0:
        raise DependentRowsError("lattice rows are linearly dependent")

    def reduce(k: int, l: int) -> None:
        if abs(mu[k][l]) <= Fraction(1, 2):
            return
        q = (mu[k][l] + Fraction(1, 2)).__floor__()
        u[k] = [x - q * y for x, y in zip(u[k], u[l])]
        gkl, gll = g[k][l], g[l][l]
        g[k] = [x - q * y for x, y in zip(g[k], g[l])]
        for i in range(n):
            g[i][k] = g[k][i]
        g[k][k] = g[k][k] - q * gkl + q * q * gll
        mu[k][l] -= q
        for i in range(l):
            mu[k][i] -= q * mu[l][i]

    def swap(k: int, kmax: int) -> None:
        u[k], u[k - 1] = u[k - 1], u[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        bnew = bstar[k] + m * m * bstar[k - 1]
        mu[k][k - 1] = m * bstar[k - 1] / bnew
        bstar[k] = bstar[k - 1] * bstar[k] / bnew
        bstar[k - 1] = bnew
        for i in range(k + 1, kmax + 1):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k):
                mu[k][j] = (g[k][j] - sum(mu[j][i] * mu[k][i] * bstar[i] for i in range(j))) / bstar[j]
            bstar[k] = g[k][k] - sum(mu[k][j] ** 2 * bstar[j] for j in range(k))
            if bstar[k] <= 0:
                raise DependentRowsError("lattice rows are linearly dependent")
        reduce(k, k - 1)
        if bstar[k] < (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                reduce(k, l)
            k += 1
    return u


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> Matrix:
    """LLL-reduced basis (Euclidean norm) of the lattice spanned by independent rows."""
    gram = matmul(basis, transpose(basis))
    u = lll_gram(gram, delta)
    return matmul(u, basis)


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g
