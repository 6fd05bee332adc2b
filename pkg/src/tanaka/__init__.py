"""Exact Tanaka prolongations of graded nilpotent Lie algebras."""

from .algebra import (
    Filtration,
    GradedLieAlgebra,
    GradedSubspace,
    LieAlgebra,
    associated_graded,
    centralizer,
    derived_and_quotient,
    extend_filtration,
    generation_depth,
    validate,
    weak_derived_flag,
)
from .linalg import Matrix, Subspace
from .ode_mixed import dimension_table, enumerate_lambdas, symbol_from_tableau, tableau
from .prolongation import ProlongConstraints, a_subspace, der0, h_slices, prolong
from .pseudo_product import finiteness_certificate, freeman, levi_kernels, make_symbol, osculation_filtration
from .spencer import HomSubspace, finite_type_verdict, rank_one_search, spencer_prolong

__version__ = "0.1.0"

__all__ = [
    "Filtration",
    "GradedLieAlgebra",
    "GradedSubspace",
    "HomSubspace",
    "LieAlgebra",
    "Matrix",
    "ProlongConstraints",
    "Subspace",
    "a_subspace",
    "associated_graded",
    "centralizer",
    "der0",
    "derived_and_quotient",
    "dimension_table",
    "enumerate_lambdas",
    "extend_filtration",
    "finite_type_verdict",
    "finiteness_certificate",
    "freeman",
    "generation_depth",
    "h_slices",
    "levi_kernels",
    "make_symbol",
    "osculation_filtration",
    "prolong",
    "rank_one_search",
    "spencer_prolong",
    "symbol_from_tableau",
    "tableau",
    "validate",
    "weak_derived_flag",
]
