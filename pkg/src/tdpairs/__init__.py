"""Exact certification of tridiagonal and Leonard pairs over Q and GF(p).

The package validates the defining axioms of a tridiagonal pair with
exact arithmetic, computes split decompositions and shape vectors,
decides the Leonard property through a linear feasibility certificate,
relates pairs by affine changes of variable, generates split-form
instances, and searches small prime fields for prescribed shapes.
"""

from __future__ import annotations

from .eigen import EigenDecomposition, eigen_decompose, primitive_idempotents
from .errors import (
    BudgetZero,
    DiameterMismatch,
    DiameterZero,
    DimensionMismatch,
    EigenspaceMismatch,
    ExhaustedRetries,
    FieldMismatch,
    FieldTooSmall,
    GeneratedPairInvalid,
    HypothesisNotMet,
    InconclusiveIrreducibility,
    InvalidLeonardParameters,
    InvariantViolation,
    NoTridiagonalOrdering,
    NotDiagonalizableOverField,
    NotIrreducible,
    NotLeonardError,
    ParseError,
    TauImageVanished,
    TdpError,
    ZeroVarphi,
)
from .fields import GF, QQ, GFElement, PrimeField, Rationals, field_from_spec, field_to_spec
from .leonard import (
    AffineRelation,
    LeonardCertificate,
    LeonardParameterSet,
    NotLeonard,
    affine_relation,
    detect_leonard,
    generate_split_form,
    leonard_basis,
    random_leonard,
    reduce_to_affine,
    switching_from_sequences,
    switching_via_solve,
)
from .linalg import Matrix, min_poly, poly_eval_matrix
from .pairs import (
    IrreducibilityReport,
    ShapeVector,
    TriDiagonalPair,
    closure_algebra,
    irreducible,
    reducibility_witness_from_tau_kernel,
    shape,
    support_path_orderings,
    validate_pair,
)
from .polynomials import Polynomial
from .search import (
    SearchResult,
    SearchSpec,
    aggregate_results,
    partition_seeds,
    search_shape,
)
from .split import (
    SplitDecomposition,
    SplitReport,
    TauBasis,
    complete_report,
    split_subspaces,
    tau_basis,
    tau_images,
    verify_raising_lowering,
    verify_tau_images,
)
from .subspaces import (
    Subspace,
    annihilator,
    image_of,
    kernel,
    subspace_intersect,
    subspace_leq,
    subspace_sum,
)

__all__ = [
    "AffineRelation",
    "BudgetZero",
    "DiameterMismatch",
    "DiameterZero",
    "DimensionMismatch",
    "EigenDecomposition",
    "EigenspaceMismatch",
    "ExhaustedRetries",
    "FieldMismatch",
    "FieldTooSmall",
    "GF",
    "GFElement",
    "GeneratedPairInvalid",
    "HypothesisNotMet",
    "InconclusiveIrreducibility",
    "InvalidLeonardParameters",
    "InvariantViolation",
    "IrreducibilityReport",
    "LeonardCertificate",
    "LeonardParameterSet",
    "Matrix",
    "NoTridiagonalOrdering",
    "NotDiagonalizableOverField",
    "NotIrreducible",
    "NotLeonard",
    "NotLeonardError",
    "ParseError",
    "Polynomial",
    "PrimeField",
    "QQ",
    "Rationals",
    "SearchResult",
    "SearchSpec",
    "ShapeVector",
    "SplitDecomposition",
    "SplitReport",
    "Subspace",
    "TauBasis",
    "TauImageVanished",
    "TdpError",
    "TriDiagonalPair",
    "ZeroVarphi",
    "affine_relation",
    "aggregate_results",
    "annihilator",
    "closure_algebra",
    "complete_report",
    "detect_leonard",
    "eigen_decompose",
    "field_from_spec",
    "field_to_spec",
    "generate_split_form",
    "image_of",
    "irreducible",
    "kernel",
    "leonard_basis",
    "min_poly",
    "partition_seeds",
    "poly_eval_matrix",
    "primitive_idempotents",
    "random_leonard",
    "reduce_to_affine",
    "reducibility_witness_from_tau_kernel",
    "search_shape",
    "shape",
    "split_subspaces",
    "subspace_intersect",
    "subspace_leq",
    "subspace_sum",
    "support_path_orderings",
    "switching_from_sequences",
    "switching_via_solve",
    "tau_basis",
    "tau_images",
    "validate_pair",
    "verify_raising_lowering",
    "verify_tau_images",
]
