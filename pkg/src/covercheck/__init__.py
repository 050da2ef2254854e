"""Exact tests for finite, flat and étale projections of affine varieties."""

from .groebner import GroebnerBasis, buchberger, eliminate, member, reduce
from .ideal import Ideal, intersect, is_trivial, quotient, saturate
from .morphism import (CoveringVerdict, FiberReport, FiniteCertificate, MorphismPresentation,
                       Verdict, covering_verdict, fiber_report, is_etale, is_finite,
                       is_finite_flat, jacobian_ideal, monomial_basis, non_etale_locus,
                       non_finite_locus, non_flat_locus, presentation_matrix)
from .poly import MonomialOrder, Polynomial, VarTable, block_order, grevlex, lex
from .problem import ProblemFile, load_problem, parse_polynomial, parse_problem

__all__ = [
    "CoveringVerdict", "FiberReport", "FiniteCertificate", "GroebnerBasis", "Ideal",
    "MonomialOrder", "MorphismPresentation", "Polynomial", "ProblemFile", "VarTable",
    "Verdict", "block_order", "buchberger", "covering_verdict", "eliminate", "fiber_report",
    "grevlex", "intersect", "is_etale", "is_finite", "is_finite_flat", "is_trivial",
    "jacobian_ideal", "lex", "load_problem", "member", "monomial_basis", "non_etale_locus",
    "non_finite_locus", "non_flat_locus", "parse_polynomial", "parse_problem",
    "presentation_matrix", "quotient", "reduce", "saturate",
]
