"""Exact arithmetic substrate: rationals, polynomials, ideals, matrices."""

from .config import Deadline, ResourceLimitError, RunConfig, current, using
from .groebner import (
    Ideal,
    eliminate,
    gb,
    ideal_membership,
    intersect,
    is_groebner_basis,
    krull_dimension,
    normal_form,
    s_polynomial,
    saturate,
    saturate_at_origin,
)
from .linalg import coordinates, in_span, nullspace, rank, rref
from .poly import (
    GREVLEX,
    LEX,
    MonomialOrder,
    MultiPoly,
    PolyParseError,
    block_elimination,
    default_names,
    parse_laurent,
    parse_poly,
)
from .polymatrix import PolyMatrix, exact_divide, generic_rank, kernel_basis, minors_ideal, rank_at
from .rational import ONE, ZERO, Rational, qq, to_str

__all__ = [
    "Deadline", "ResourceLimitError", "RunConfig", "current", "using",
    "Ideal", "eliminate", "gb", "ideal_membership", "intersect", "is_groebner_basis",
    "krull_dimension", "normal_form", "s_polynomial", "saturate", "saturate_at_origin",
    "coordinates", "in_span", "nullspace", "rank", "rref",
    "GREVLEX", "LEX", "MonomialOrder", "MultiPoly", "PolyParseError", "block_elimination",
    "default_names", "parse_laurent", "parse_poly",
    "PolyMatrix", "exact_divide", "generic_rank", "kernel_basis", "minors_ideal", "rank_at",
    "ONE", "ZERO", "Rational", "qq", "to_str",
]
