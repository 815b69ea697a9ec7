"""
Groebner Module
Handles Buchberger bases, quotient bases, multiplication matrices and the eigenvalue solve
"""

from .buchberger import BuchbergerStats, IntPoly, buchberger, interreduce, reduce_exact, spoly
from .index import (
    DefectivePivotError,
    GroebnerBasis,
    GroebnerError,
    GroebnerSolveResult,
    MultiplicationMatrixSet,
    PolySystem,
    PositiveDimensionalIdealError,
    QuotientBasis,
    best_root,
    build_records,
    groebner_basis,
    groebner_summary,
    mult_matrices,
    normal_form,
    quotient_basis,
    residuals,
    solve_groebner,
    solve_system,
    stationarity_system,
)

__all__ = [
    'BuchbergerStats',
    'IntPoly',
    'buchberger',
    'interreduce',
    'reduce_exact',
    'spoly',
    'DefectivePivotError',
    'GroebnerBasis',
    'GroebnerError',
    'GroebnerSolveResult',
    'MultiplicationMatrixSet',
    'PolySystem',
    'PositiveDimensionalIdealError',
    'QuotientBasis',
    'best_root',
    'build_records',
    'groebner_basis',
    'groebner_summary',
    'mult_matrices',
    'normal_form',
    'quotient_basis',
    'residuals',
    'solve_groebner',
    'solve_system',
    'stationarity_system',
]
