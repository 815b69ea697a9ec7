"""
Polynomial ring module
Exact sparse multivariate polynomials, monomial orders and the text format
"""

from .monomials import (
    Monomial,
    MonomialOrder,
    divides,
    mono_div,
    mono_lcm,
    mono_mul,
    monomial_index,
    monomials_up_to,
    total_degree,
)
from .polynomial import (
    MissingAssignmentError,
    Polynomial,
    PolynomialError,
    RingMismatchError,
    UnknownVariableError,
    ZeroPolynomialError,
    add,
    common_ring,
    differentiate,
    evaluate,
    leading_term,
    mul,
)
from .parser import (
    PolynomialParseError,
    format_monomial,
    format_polynomial,
    format_system,
    parse_polynomial,
    parse_system,
)

__all__ = [
    'Monomial',
    'MonomialOrder',
    'divides',
    'mono_div',
    'mono_lcm',
    'mono_mul',
    'monomial_index',
    'monomials_up_to',
    'total_degree',
    'MissingAssignmentError',
    'Polynomial',
    'PolynomialError',
    'RingMismatchError',
    'UnknownVariableError',
    'ZeroPolynomialError',
    'add',
    'common_ring',
    'differentiate',
    'evaluate',
    'leading_term',
    'mul',
    'PolynomialParseError',
    'format_monomial',
    'format_polynomial',
    'format_system',
    'parse_polynomial',
    'parse_system',
]
