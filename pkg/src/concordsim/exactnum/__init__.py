"""Exact arithmetic kernel: Gaussian rationals, exact matrices, integer
polynomials, real algebraic numbers and exact elimination."""
from .gaussian import GaussianRational, ZERO, ONE, I, as_fraction, format_rational, parse_rational
from .matrix import ExactMatrix, inner, outer
from .poly import IntPolynomial, SturmChain, cauchy_bound, charpoly, poly_gcd, squarefree_part, sturm_chain
from .roots import (
    AlgebraicNumber,
    algebraic_add,
    algebraic_compare,
    algebraic_mul,
    algebraic_neg,
    algebraic_recip,
    isolate_real_roots,
    refine_interval,
)
from .field import FieldElement, ReducibleModulus
from .linalg import (
    BareissResult,
    SpanBuilder,
    bareiss_eliminate,
    field_nullspace,
    field_rank,
    field_rref,
    integer_nullspace,
    rational_gram_schmidt,
    vec_inner,
)
from .eigen import SpectralGroup, hermitian_charpoly, projector_onto, spectral_groups

__all__ = [
    "GaussianRational",
    "ZERO",
    "ONE",
    "I",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "ExactMatrix",
    "inner",
    "outer",
    "IntPolynomial",
    "SturmChain",
    "cauchy_bound",
    "charpoly",
    "poly_gcd",
    "squarefree_part",
    "sturm_chain",
    "AlgebraicNumber",
    "algebraic_add",
    "algebraic_compare",
    "algebraic_mul",
    "algebraic_neg",
    "algebraic_recip",
    "isolate_real_roots",
    "refine_interval",
    "FieldElement",
    "ReducibleModulus",
    "BareissResult",
    "SpanBuilder",
    "bareiss_eliminate",
    "field_nullspace",
    "field_rank",
    "field_rref",
    "integer_nullspace",
    "rational_gram_schmidt",
    "vec_inner",
    "SpectralGroup",
    "hermitian_charpoly",
    "projector_onto",
    "spectral_groups",
]
