"""Exact elimination with certified degree bounds.

Sparse polynomials over the rationals or GF(p), Groebner bases with cofactor
tracking, dimension and Noether-position checks, degree-bounded eliminants
with membership certificates, and Perron relations.
"""
from .coords import CoordinateChange, apply_linear_change, generic_coordinate_change
from .engine import (Certificate, GenericCombination, Verdict, build_generic_combinations,
                     degree_bound, deformation_reduce, eliminate_with_bound, verify_certificate)
from .errors import (BoundViolationError, BudgetError, ElimError, GenericityError,
                     InconsistentInputError, NotMember, ParseError, PreconditionError,
                     StructuralError, ZeroIdeal)
from .field import GF, QQ, CoefficientField
from .groebner import (Budget, CofactorBasis, MembershipCertificate, SyzygyBasis, buchberger,
                       ideal_membership, is_groebner, normal_form, s_polynomial, syzygy_basis)
from .ideal import (DimensionReport, check_noether_position, dimension, elimination_ideal,
                    min_degree_element)
from .parsing import parse_poly, parse_system
from .perron import PerronRelation, perron_relation
from .poly import GREVLEX, LEX, Polynomial, TermOrder, weighted_degree

__version__ = "0.1.0"

__all__ = [
    "BoundViolationError", "Budget", "BudgetError", "Certificate", "CoefficientField",
    "CofactorBasis", "CoordinateChange", "DimensionReport", "ElimError", "GF", "GREVLEX", "GenericCombination",
    "GenericityError", "InconsistentInputError", "LEX", "MembershipCertificate", "NotMember",
    "ParseError", "PerronRelation", "Polynomial", "PreconditionError", "QQ", "StructuralError",
    "SyzygyBasis", "TermOrder", "Verdict", "ZeroIdeal", "apply_linear_change", "buchberger",
    "build_generic_combinations", "check_noether_position", "degree_bound", "deformation_reduce",
    "dimension", "eliminate_with_bound", "elimination_ideal", "generic_coordinate_change",
    "ideal_membership", "is_groebner", "min_degree_element", "normal_form", "parse_poly",
    "parse_system", "perron_relation", "s_polynomial", "syzygy_basis", "verify_certificate",
    "weighted_degree",
]
