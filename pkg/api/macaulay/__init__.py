"""
Macaulay Module
Handles Macaulay matrices, their null spaces and the shift eigenproblems over a degree sweep
"""

from .index import (
    DegreeTooSmallError,
    MacaulayEigenproblem,
    MacaulayError,
    MacaulayMatrix,
    MacaulaySolveResult,
    NullSpaceBasis,
    RankDeficientShiftError,
    ShiftMatrixSet,
    SweepRow,
    build,
    column_order,
    degree_sweep,
    dims,
    eigenproblem,
    export_triplets,
    nullspace,
    shift_matrices,
    solve,
    sweep_to_csv,
)

__all__ = [
    'DegreeTooSmallError',
    'MacaulayEigenproblem',
    'MacaulayError',
    'MacaulayMatrix',
    'MacaulaySolveResult',
    'NullSpaceBasis',
    'RankDeficientShiftError',
    'ShiftMatrixSet',
    'SweepRow',
    'build',
    'column_order',
    'degree_sweep',
    'dims',
    'eigenproblem',
    'export_triplets',
    'nullspace',
    'shift_matrices',
    'solve',
    'sweep_to_csv',
]
