"""Exact Virasoro / Verma-module computer algebra."""

from .minimal import (
    DomainError,
    kac_labels,
    kappa_parameterization,
    minimal_model_c,
    minimal_model_weight,
    singular_levels,
)
from .poly import C, DELTA, KAPPA, ParamPoly, format_fraction
from .verma import (
    CENTRAL,
    PBWVector,
    VermaParams,
    act_lowering,
    act_raising,
    apply_word,
    basis_vector,
    commutator,
    descendants,
    find_singular_vectors,
    gram_determinant,
    gram_matrix,
    in_submodule,
    is_singular,
    partitions,
    primitive_singular_vectors,
    submodule_reduce,
)

__all__ = [
    "C", "CENTRAL", "DELTA", "DomainError", "KAPPA", "PBWVector", "ParamPoly",
    "VermaParams", "act_lowering", "act_raising", "apply_word", "basis_vector",
    "commutator", "descendants", "find_singular_vectors", "format_fraction",
    "gram_determinant", "gram_matrix", "in_submodule", "is_singular",
    "kac_labels", "kappa_parameterization", "minimal_model_c",
    "minimal_model_weight", "partitions", "primitive_singular_vectors",
    "singular_levels", "submodule_reduce",
]
