"""Cappell-Shaneson conditions and positivity.

A square integer matrix A of order n is CS when det A = 1 and
``det(I - wedge^k A) = +-1`` for every k in 1..n//2.  It is positive when
``(-1)^n det(xI - A) > 0`` on the open negative half-line.

Positivity is decided by root counting: a monic f satisfies
``(-1)^n f(x) -> +inf`` as ``x -> -inf``, so ``(-1)^n f`` is positive on
``(-inf, 0)`` exactly when f has no root there.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .errors import DegreeTooSmallError, NonMonicError, ZeroConstantTermError
from .order import companion
from .poly import IntPoly, count_real_roots, squarefree_part


@dataclass(frozen=True)
class CsReport:
    """``cs_conditions`` holds ``(k, det(I - wedge^k A), passed)`` for k = 1..n//2."""

    n: int
    det: int
    is_sl: bool
    cs_conditions: tuple[tuple[int, int, bool], ...]
    is_cs: bool
    is_positive: bool | None
    charpoly: IntPoly

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "det": self.det,
            "is_sl": self.is_sl,
            "cs_conditions": [{"k": k, "det": d, "pass": ok} for k, d, ok in self.cs_conditions],
            "is_cs": self.is_cs,
            "is_positive": self.is_positive,
            "charpoly": list(self.charpoly.coeffs),
        }


def is_cs_matrix(a: la.Matrix) -> CsReport:
    n = la._require_square(a)
    d = la.det(a)
    conditions = []
    for k in range(1, n // 2 + 1):
        wk = la.exterior_power(a, k)
        v = la.det(la.mat_sub(la.identity(len(wk)), wk))
        conditions.append((k, v, v in (1, -1)))
    f = la.charpoly(a)
    positive = is_positive(f) if f[0] != 0 else None
    is_sl = d == 1
    return CsReport(
        n=n,
        det=d,
        is_sl=is_sl,
        cs_conditions=tuple(conditions),
        is_cs=is_sl and all(ok for _, _, ok in conditions),
        is_positive=positive,
        charpoly=f,
    )


def is_cs_polynomial(f: IntPoly) -> CsReport:
    """CS status of the companion matrix of f."""
    if not f.is_monic():
        raise NonMonicError(f"{f} is not monic")
    if f.degree < 2:
        raise DegreeTooSmallError("need degree >= 2")
    return is_cs_matrix(companion(f))


def is_positive(f: IntPoly) -> bool:
    """No real root of f in ``(-inf, 0)``; repeated roots are deflated first."""
    if not f.is_monic():
        raise NonMonicError(f"{f} is not monic")
    if f[0] == 0:
        raise ZeroConstantTermError("f(0) = 0")
    return count_real_roots(squarefree_part(f), hi=0) == 0
