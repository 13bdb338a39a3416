"""Symbolic and numerical tools for analytic paraproducts T_g, S_g, M_g."""

from .algebra import Scalar, UPoly, WPoly
from .expr import ParseError, format_expr, parse
from .rewrite import CanonicalForm, GroupedForm, evaluate_exact, group, is_trivial, normalize
from .classify import Classification, SpaceClass, classify, classify_expr, two_letter_table

__all__ = [
    "Scalar",
    "WPoly",
    "UPoly",
    "ParseError",
    "parse",
    "format_expr",
    "CanonicalForm",
    "GroupedForm",
    "normalize",
    "group",
    "is_trivial",
    "evaluate_exact",
    "SpaceClass",
    "Classification",
    "classify",
    "classify_expr",
    "two_letter_table",
]

__version__ = "0.1.0"
