"""Generalized matrix functions, tensor/compound/symmetric powers, partial matrix
functions of block matrices, and randomized checks of the inequalities between them."""

from .blocks import (
    BlockMatrix,
    partial_function_1,
    partial_function_2,
    partial_trace_1,
    partial_trace_2,
    reshuffle,
)
from .core import (
    LoewnerVerdict,
    determinant,
    hermitian_eigenvalues,
    is_psd,
    jacobi_eigh,
    loewner_ge,
    make_rng,
    random_psd,
)
from .errors import ApplicabilityError, ImmanantLabError
from .functions import (
    MatrixFunctional,
    apply_functional,
    immanant,
    parse_functional,
    permanent,
    sn_immanant,
)
from .groups import (
    CharacterFunction,
    Permutation,
    PermutationGroup,
    group_from_generators,
    sn_character,
    symmetric_group,
)
from .harness import InequalityCase, TrialReport, check_case, run_suite
from .multilinear import compound, power, symmetric_power, tensor_power

__version__ = "0.1.0"

__all__ = [
    "ApplicabilityError",
    "BlockMatrix",
    "CharacterFunction",
    "ImmanantLabError",
    "InequalityCase",
    "LoewnerVerdict",
    "MatrixFunctional",
    "Permutation",
    "PermutationGroup",
    "TrialReport",
    "apply_functional",
    "check_case",
    "compound",
    "determinant",
    "group_from_generators",
    "hermitian_eigenvalues",
    "immanant",
    "is_psd",
    "jacobi_eigh",
    "loewner_ge",
    "make_rng",
    "parse_functional",
    "partial_function_1",
    "partial_function_2",
    "partial_trace_1",
    "partial_trace_2",
    "permanent",
    "power",
    "random_psd",
    "reshuffle",
    "run_suite",
    "sn_character",
    "sn_immanant",
    "symmetric_group",
    "symmetric_power",
    "tensor_power",
]
