"""
Spectra Module
Handles dense eigen, singular value and exponential computations
"""

from .index import (
    EigenDecomposition,
    MatrixOverflowError,
    NonSquareMatrixError,
    NullSpace,
    SpectraError,
    as_matrix,
    commutator_defect,
    eig,
    eigenvalue_separation,
    expm_scaled,
    generic_weights,
    is_unitary,
    nullspace_svd,
    numerical_rank,
    pad_to_power_of_two,
    pad_vector,
    pinv,
    power_of_two_at_least,
    rayleigh_quotient,
    relative_residual,
    separating_eig,
    singular_values,
    svd,
)

__all__ = [
    'EigenDecomposition',
    'MatrixOverflowError',
    'NonSquareMatrixError',
    'NullSpace',
    'SpectraError',
    'as_matrix',
    'commutator_defect',
    'eig',
    'eigenvalue_separation',
    'expm_scaled',
    'generic_weights',
    'is_unitary',
    'nullspace_svd',
    'numerical_rank',
    'pad_to_power_of_two',
    'pad_vector',
    'pinv',
    'power_of_two_at_least',
    'rayleigh_quotient',
    'relative_residual',
    'separating_eig',
    'singular_values',
    'svd',
]
