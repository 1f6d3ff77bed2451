"""Cappell-Shaneson matrices, their characteristic polynomials and ideal classes of Z[theta]."""

from .classes import ClassList, Status, class_monoid, equivalence_test, ideals_up_to_norm
from .correspondence import classify_knot_pairs, ideal_to_matrix, matrix_to_ideal, star_equivalent
from .cs import CsReport, is_cs_matrix, is_cs_polynomial, is_positive
from .families import family_matrix_pair, family_polynomial, verify_family_theorem
from .order import Order, is_integrally_closed, minkowski_bound
from .poly import IntPoly

__all__ = [
    "ClassList",
    "CsReport",
    "IntPoly",
    "Order",
    "Status",
    "class_monoid",
    "classify_knot_pairs",
    "equivalence_test",
    "family_matrix_pair",
    "family_polynomial",
    "ideal_to_matrix",
    "ideals_up_to_norm",
    "is_cs_matrix",
    "is_cs_polynomial",
    "is_integrally_closed",
    "is_positive",
    "matrix_to_ideal",
    "minkowski_bound",
    "star_equivalent",
    "verify_family_theorem",
]
