"""Archimedean geometry of Z[theta]: embeddings, the T2 form, short vectors and units.

Floating point enters only here.  Roots come from a high-precision solve and
are rounded to complex128; every search bound carries a relative safety margin
of ``MARGIN`` and every norm that decides an answer is recomputed exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
import numpy as np

from . import linalg as la

MARGIN = 1e-6
_ROOT_DPS = 60
_GRAM_BITS = 96
# float64 rounding allowances for norm enclosures: n <= 64 terms per embedding
# and a product of at most n factors, each far above 64 * 2^-53
_EMBED_ERR = 1e-12
_PROD_ERR = 1e-9


class Geometry:
    """Embeddings of an order into R^r1 x C^r2 (one complex place per conjugate pair)."""

    def __init__(self, order):
        self.order = order
        n = order.n
        r1, r2 = order.signature
        self.r1, self.r2 = r1, r2
        with mpmath.workdps(_ROOT_DPS):
            roots = mpmath.polyroots(list(reversed(order.f.coeffs)), maxsteps=500, extraprec=4 * _ROOT_DPS)
            roots = sorted(roots, key=lambda z: abs(mpmath.im(z)))
            real = sorted((mpmath.re(z) for z in roots[:r1]))
            cplx = sorted((z if mpmath.im(z) > 0 else mpmath.conj(z) for z in roots[r1::2]), key=lambda z: mpmath.re(z))
            places = [mpmath.mpc(x) for x in real] + list(cplx)
            powers = [[complex(z**k) for z in places] for k in range(n)]
            self._mp_powers = [[z**k for z in places] for k in range(n)]
        self.places = [complex(z) for z in places]
        self.powers = np.array(powers, dtype=np.complex128)
        self.weights = np.array([1.0] * r1 + [2.0] * r2)

    @property
    def unit_rank(self) -> int:
        return self.r1 + self.r2 - 1

    def embed(self, rows: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
        """Embedding of each coordinate row; shape ``(rows, places)``."""
        return np.asarray(rows, dtype=np.float64) @ self.powers

    def t2_gram(self, rows: Sequence[Sequence[int]]) -> np.ndarray:
        e = self.embed(rows)
        return np.real((e * self.weights) @ e.conj().T)

    def t2_gram_exact(self, rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
        """T2 Gram matrix from high-precision embeddings, as dyadic rationals.

        Used to drive LLL on ill-conditioned lattices where a float64 Gram
        can lose positive definiteness.
        """
        scale = 2**_GRAM_BITS
        with mpmath.workdps(_ROOT_DPS):
            wts = [1] * self.r1 + [2] * self.r2
            emb = [
                [mpmath.fsum(int(c) * self._mp_powers[k][i] for k, c in enumerate(row)) for i in range(len(wts))]
                for row in rows
            ]
            out = []
            for a in emb:
                out.append([
                    Fraction(int(mpmath.nint(scale * mpmath.re(mpmath.fsum(w * x * mpmath.conj(y) for w, x, y in zip(wts, a, b))))), scale)
                    for b in emb
                ])
        return out

    def t2(self, rows) -> np.ndarray:
        e = self.embed(rows)
        return (np.abs(e) ** 2) @ self.weights

    def norms(self, rows) -> np.ndarray:
        e = self.embed(rows)
        return np.prod(np.abs(e) ** self.weights, axis=-1)

    def norm_bounds(self, rows) -> tuple[np.ndarray, np.ndarray]:
        """Enclosures ``lo <= |N(row)| <= hi`` that survive float64 rounding.

        Each embedding is a sum of at most n terms ``c_k z^k``; its rounding
        error is bounded by a generous multiple of eps times ``sum |c_k| |z|^k``.
        """
        a = np.asarray(rows, dtype=np.float64)
        e = np.abs(a @ self.powers)
        err = _EMBED_ERR * (np.abs(a) @ np.abs(self.powers)) + 1e-300
        lo = np.prod(np.maximum(e - err, 0.0) ** self.weights, axis=-1) * (1 - _PROD_ERR)
        hi = np.prod((e + err) ** self.weights, axis=-1) * (1 + _PROD_ERR)
        return lo, hi

    def log_vector(self, x: Sequence[int]) -> np.ndarray:
        return np.log(np.abs(self.embed([x])[0]))

    # -- units ------------------------------------------------------------

    def unit_basis(self, max_points: int = 200_000) -> list[tuple[int, ...]] | None:
        """Units of Z[theta] with independent logarithms spanning a full-rank sublattice.

        The result generates a finite-index subgroup of the unit group (modulo
        torsion); None when the search budget runs out before full rank.
        """
        if not hasattr(self, "_units"):
            self._units = self._find_units(max_points)
        return self._units

    def _find_units(self, max_points: int) -> list[tuple[int, ...]] | None:
        o = self.order
        n, r = o.n, self.unit_rank
        if r == 0:
            return []
        chosen: list[tuple[int, ...]] = []
        logs: list[np.ndarray] = []

        def offer(x: tuple[int, ...]) -> None:
            if len(chosen) == r or abs(o.norm(x)) != 1:
                return
            v = self.log_vector(x)[: self.r1 + self.r2 - 1]
            trial = np.array(logs + [v])
            if np.linalg.matrix_rank(trial, tol=1e-8 * max(1.0, np.abs(trial).max())) == len(trial):
                chosen.append(x)
                logs.append(v)

        for c in range(-3, 4):
            if abs(o.f(c)) == 1:
                offer(o._pad((-c, 1)))
        basis = la.identity(n)
        u = la.lll_gram(self.t2_gram_exact(basis))
        red = la.matmul(u, basis)
        gram = self.t2_gram(red)
        bound = float(n + 1)
        seen = 0
        while len(chosen) < r:
            pts = short_vectors(gram, bound, limit=max_points)
            if pts is None:
                return None
            cand = [tuple(la.vecmat(list(y), red)) for y in pts]
            floats = self.norms(cand) if cand else np.array([])
            order_idx = np.argsort(self.t2(cand)) if cand else []
            for i in order_idx:
                if abs(floats[i] - 1.0) < 1e-6:
                    offer(cand[i])
            if len(chosen) == r:
                break
            if len(pts) == seen and bound > 64 * n * n:
                return None
            seen = len(pts)
            bound *= 2
        return chosen

    def unit_log_lattice(self) -> np.ndarray | None:
        """Rows are full log vectors (all places) of an LLL-reduced unit basis."""
        units = self.unit_basis()
        if units is None:
            return None
        if not units:
            return np.zeros((0, self.r1 + self.r2))
        logs = np.array([self.log_vector(u) for u in units])
        w = np.sqrt(self.weights)
        g = (logs * w) @ (logs * w).T
        u = la.lll_gram([[Fraction(x) for x in row] for row in g])
        return np.array(u, dtype=np.float64) @ logs

    def t2_unit_factor(self) -> float | None:
        """Max of ``sum_i w_i exp(2 h_i)`` over vertices h of the unit log parallelepiped."""
        logs = self.unit_log_lattice()
        if logs is None:
            return None
        best = 0.0
        for signs in itertools.product((-0.5, 0.5), repeat=len(logs)):
            h = np.asarray(signs) @ logs if len(logs) else np.zeros(self.r1 + self.r2)
            best = max(best, float(np.sum(self.weights * np.exp(2 * h))))
        return best


# ---------------------------------------------------------------------------
# Fincke-Pohst


def _cholesky_q(gram: np.ndarray) -> list[list[float]]:
    n = len(gram)
    q = [[float(x) for x in row] for row in gram]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def iter_short_vectors(gram: np.ndarray, bound: float) -> Iterator[tuple[int, ...]]:
    """Nonzero integer x (one of each pair +-x) with ``x G x^T <= bound`` up to the margin."""
    q = _cholesky_q(gram)
    n = len(q)
    bound = bound * (1 + MARGIN) + MARGIN
    x = [0] * n

    def rec(i: int, rem: float, zero_above: bool) -> Iterator[tuple[int, ...]]:
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        rad = math.sqrt(max(rem, 0.0) / q[i][i])
        lo = math.ceil(c - rad - 1e-9)
        hi = math.floor(c + rad + 1e-9)
        if zero_above:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            t = q[i][i] * (xi - c) ** 2
            if t > rem + MARGIN:
                continue
            x[i] = xi
            if i == 0:
                if not (zero_above and xi == 0):
                    yield tuple(x)
            else:
                yield from rec(i - 1, rem - t, zero_above and xi == 0)
        x[i] = 0

    yield from rec(n - 1, bound, True)


def short_vectors(gram: np.ndarray, bound: float, limit: int) -> list[tuple[int, ...]] | None:
    """All vectors from :func:`iter_short_vectors`, or None past ``limit`` points."""
    out = []
    for v in iter_short_vectors(gram, bound):
        out.append(v)
        if len(out) > limit:
            return None
    return out


def ellipsoid_count_estimate(gram: np.ndarray, bound: float) -> float:
    n = len(gram)
    vol = math.pi ** (n / 2) / math.gamma(n / 2 + 1) * bound ** (n / 2)
    return vol / math.sqrt(max(np.linalg.det(gram), 1e-300))


# ---------------------------------------------------------------------------
# searching a fractional lattice for an element of given norm


@dataclass(frozen=True)
class NormSearchResult:
    """``found`` holds integer numerator coordinates c with ``|N(c)| == target``."""

    found: tuple[int, ...] | None
    exhausted: bool
    points: int


def _reduced_basis(geo: Geometry, rows: Sequence[Sequence[int]]) -> tuple[la.Matrix, np.ndarray]:
    u = la.lll_gram(geo.t2_gram_exact(rows))
    red = la.matmul(u, [list(r) for r in rows])
    return red, geo.t2_gram(red)


def _exact_hits(geo: Geometry, cands: list[list[int]], target: int) -> list[tuple[int, ...]]:
    if not cands:
        return []
    # only candidates whose norm enclosure excludes target are dropped
    lo, hi = geo.norm_bounds(cands)
    hits = [tuple(cands[i]) for i in np.nonzero((lo <= target) & (target <= hi))[0]]
    o = geo.order
    return [c for c in hits if abs(o.norm(c)) == target]


def box_norm_search(geo: Geometry, rows: Sequence[Sequence[int]], target: int, radius: int, max_points: int = 200_000) -> NormSearchResult:
    """Look for ``sum y_i b_i`` of norm ``+-target`` with ``|y_i| <= radius`` on an LLL basis."""
    n = len(rows)
    red, _ = _reduced_basis(geo, rows)
    r = radius
    while r > 0 and (2 * r + 1) ** n > max_points:
        r -= 1
    grid = np.array(list(itertools.product(range(-r, r + 1), repeat=n)), dtype=np.int64)
    grid = grid[np.any(grid != 0, axis=1)]
    coords = grid.astype(np.float64) @ np.array(red, dtype=np.float64)
    lo, hi = geo.norm_bounds(coords)
    idx = np.nonzero((lo <= target) & (target <= hi))[0]
    t2 = geo.t2(coords[idx])
    o = geo.order
    for k in idx[np.argsort(t2, kind="stable")]:
        c = la.vecmat([int(v) for v in grid[k]], red)
        if abs(o.norm(c)) == target:
            return NormSearchResult(tuple(c), False, len(grid))
    return NormSearchResult(None, False, len(grid))


def ellipsoid_norm_search(geo: Geometry, rows: Sequence[Sequence[int]], target: int, bound: float, max_points: int) -> NormSearchResult:
    """Exhaustive search of ``{c : T2(c) <= bound}`` in the lattice of ``rows``.

    ``exhausted`` is False when the estimated or actual point count passes
    ``max_points``; a None result is then inconclusive.
    """
    red, gram = _reduced_basis(geo, rows)
    if ellipsoid_count_estimate(gram, bound) > 4 * max_points:
        return NormSearchResult(None, False, 0)
    batch: list[list[int]] = []
    count = 0
    best: tuple[float, tuple[int, ...]] | None = None
    for y in iter_short_vectors(gram, bound):
        batch.append(la.vecmat(list(y), red))
        count += 1
        if count > max_points:
            return NormSearchResult(None, False, count)
        if len(batch) >= 4096:
            best = _best_hit(geo, batch, target, best)
            batch = []
    best = _best_hit(geo, batch, target, best)
    return NormSearchResult(best[1] if best else None, True, count)


def _best_hit(geo, batch, target, best):
    for c in _exact_hits(geo, batch, target):
        t = float(geo.t2([c])[0])
        if best is None or (t, c) < best:
            best = (t, c)
    return best
