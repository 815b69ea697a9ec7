"""
Hartree-Fock Module
Handles STO-3G integrals and the H3+ energy objective
"""

from .basis import (
    Geometry,
    HartreeFockError,
    InvalidGeometryError,
    NegativeArgumentError,
    PrimitiveGaussian,
    Sto3gBasis,
)
from .integrals import (
    IntegralSet,
    boys,
    boys_f0,
    kinetic,
    nuclear_attraction,
    overlap,
    two_electron,
)
from .index import (
    EnergyPolynomial,
    ObjectiveDiff,
    compare_objective,
    constrained_energy,
    energy_curves,
    energy_grid,
    energy_polynomial,
    exact_energy,
    exact_energy_curve,
    exact_minimum,
    expand_and_rationalize,
    generate_objective,
    rationalized_energy_curve,
    reference_objective,
    symmetric_coefficients,
    taylor_energy_curve,
    taylor_objective,
    total_energy,
)
from .series import Jet

__all__ = [
    'Geometry',
    'HartreeFockError',
    'InvalidGeometryError',
    'NegativeArgumentError',
    'PrimitiveGaussian',
    'Sto3gBasis',
    'IntegralSet',
    'boys',
    'boys_f0',
    'kinetic',
    'nuclear_attraction',
    'overlap',
    'two_electron',
    'EnergyPolynomial',
    'ObjectiveDiff',
    'compare_objective',
    'constrained_energy',
    'energy_curves',
    'energy_grid',
    'energy_polynomial',
    'exact_energy',
    'exact_energy_curve',
    'exact_minimum',
    'expand_and_rationalize',
    'generate_objective',
    'rationalized_energy_curve',
    'reference_objective',
    'symmetric_coefficients',
    'taylor_energy_curve',
    'taylor_objective',
    'total_energy',
    'Jet',
]
