"""Exact Weyr canonical forms, Weyr commutants and normal forms of commuting
nilpotent matrix pairs with a one-dimensional common kernel.

The scikit-learn style wrappers live in :mod:`weyrform.estimators` and are
not imported here, so the CLI starts without loading scikit-learn.
"""

from .commutant import (CommutantBasis, CommutantPattern, KMatrix, commutant_basis,
                        commutant_dimension, expand_superblock_layout, format_h_grid,
                        h_pattern, is_commutant_member, k_matrix, matches_pattern)
from .exceptions import (KernelDimensionError, NotCommutingError, NotNilpotentError,
                         PreconditionError, ReductionError, StructureError, WeyrFormError)
from .fields import QQ, Field
from .linalg import Matrix, conjugate, invert, kernel_basis, mat_mul, rank
from .normal_form import (CommutingPair, NormalFormReport, NormalFormResult, StairProfile,
                          common_kernel_dimension, equal_block_profile, reduce_pair,
                          stair_profile, verify_normal_form)
from .structure import (GeneralWeyrStructure, SegreStructure, WeyrStructure,
                        build_general_weyr, build_weyr_matrix, jordan_matrix,
                        jordan_to_weyr_permutation, weyr_characteristic, weyr_decomposition)

__version__ = "0.1.0"

__all__ = [
    "QQ", "CommutantBasis", "CommutantPattern", "CommutingPair", "Field",
    "GeneralWeyrStructure", "KMatrix", "KernelDimensionError", "Matrix",
    "NormalFormReport", "NormalFormResult", "NotCommutingError", "NotNilpotentError",
    "PreconditionError", "ReductionError", "SegreStructure", "StairProfile",
    "StructureError", "WeyrFormError", "WeyrStructure", "build_general_weyr",
    "build_weyr_matrix", "common_kernel_dimension", "commutant_basis", "commutant_dimension",
    "conjugate", "equal_block_profile", "expand_superblock_layout", "format_h_grid",
    "h_pattern", "invert", "is_commutant_member", "jordan_matrix",
    "jordan_to_weyr_permutation", "k_matrix", "kernel_basis", "mat_mul", "matches_pattern",
    "rank", "reduce_pair", "stair_profile", "verify_normal_form", "weyr_characteristic",
    "weyr_decomposition",
]
