"""Exact equivalence decisions for sampled vector-valued maps under matrix groups."""

from .errors import MapequivError
from .fields import FieldSpec, Scalar, is_prime
from .matrix import Matrix, RankProfile, determinant, invert_matrix, rank_profile, solve_in_column_space
from .samplemap import (
    BasePoints,
    SampleKey,
    SampleMap,
    load_dataset,
    parse_dataset_csv,
    parse_dataset_json,
    select_base_points,
)
from .groups import GroupSpec
from .signature import (
    Signature,
    compute_signature,
    reconstruct_canonical,
    signature_from_json,
    signature_to_json,
    signatures_equal,
)
from .equivalence import (
    Decision,
    Witness,
    build_witness,
    decide,
    decide_affine,
    decide_gl,
    decide_subgroup,
    decision_to_json,
    verify_witness,
)
from .invariants import check_algebraic_independence, evaluate_generators
from .oracle import brute_force_equivalent, enumerate_group

__version__ = "0.1.0"

__all__ = [
    "BasePoints",
    "Decision",
    "FieldSpec",
    "GroupSpec",
    "MapequivError",
    "Matrix",
    "RankProfile",
    "SampleKey",
    "SampleMap",
    "Scalar",
    "Signature",
    "Witness",
    "brute_force_equivalent",
    "build_witness",
    "check_algebraic_independence",
    "compute_signature",
    "decide",
    "decide_affine",
    "decide_gl",
    "decide_subgroup",
    "decision_to_json",
    "determinant",
    "enumerate_group",
    "evaluate_generators",
    "invert_matrix",
    "is_prime",
    "load_dataset",
    "parse_dataset_csv",
    "parse_dataset_json",
    "rank_profile",
    "reconstruct_canonical",
    "select_base_points",
    "signature_from_json",
    "signature_to_json",
    "signatures_equal",
    "solve_in_column_space",
    "verify_witness",
]
