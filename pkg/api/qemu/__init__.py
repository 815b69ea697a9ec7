"""
Quantum Emulation Module
Handles statevector emulation of block encodings, phase estimation and the projection circuit
"""

from .block_encoding import (
    BlockEncoding,
    EmulationSizeError,
    ZeroResultError,
    apply_encoded,
    encode_time_evolution,
    expectation,
    fable_encode,
    fable_scale,
)
from .ipea import EigenvectorResidualError, IpeaResult, ipea_complex
from .pipeline import QpeRun, operator_scale, qpe_groebner, qpe_macaulay, qpe_pipeline
from .projection import ProjectionResult, VanishingBranchError, nullspace_projection, projector_matrix
from .statevector import EmulationError, Statevector, hadamard_register, register_size

__all__ = [
    'BlockEncoding',
    'EmulationSizeError',
    'ZeroResultError',
    'apply_encoded',
    'encode_time_evolution',
    'expectation',
    'fable_encode',
    'fable_scale',
    'EigenvectorResidualError',
    'IpeaResult',
    'ipea_complex',
    'QpeRun',
    'operator_scale',
    'qpe_groebner',
    'qpe_macaulay',
    'qpe_pipeline',
    'ProjectionResult',
    'VanishingBranchError',
    'nullspace_projection',
    'projector_matrix',
    'EmulationError',
    'Statevector',
    'hadamard_register',
    'register_size',
]
