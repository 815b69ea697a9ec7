"""
Null-space projection circuit
Hadamard, controlled-P, Hadamard on an ancilla qubit; keeping the |1> branch
applies (I - P) / 2, and repeating it filters the state toward null(M)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..spectra import as_matrix, pinv, singular_values
from .statevector import EmulationError, Statevector, register_size

logger = logging.getLogger(__name__)

PROJECTORS = ('pinv', 'adjoint')
VANISHING_TOL = 1e-24


class VanishingBranchError(EmulationError):
    """The kept branch has (numerically) zero probability"""
    pass


@dataclass
class ProjectionResult:
    """Filtered state and, per repetition, the ancilla probabilities"""
    state: Statevector
    branch_probabilities: List[float] = field(default_factory=list)
    raw_probabilities: List[List[float]] = field(default_factory=list)
    projector: str = 'pinv'

    @property
    def survival(self) -> float:
        """Product of the kept-branch probabilities over all repetitions"""
        return float(np.prod(self.branch_probabilities)) if self.branch_probabilities else 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'projector': self.projector,
            'repetitions': len(self.branch_probabilities),
            'survival': self.survival,
            'last_branch_probability': self.branch_probabilities[-1] if self.branch_probabilities else None,
        }


def projector_matrix(M, projector: str = 'pinv') -> np.ndarray:
    """
    P whose |1> branch (I - P) keeps null(M).

    'adjoint' uses M^H M after scaling M to sigma_max = 1; 'pinv' the exact M^+ M.
    """
    M = as_matrix(M)
    if projector not in PROJECTORS:
        raise EmulationError(f"Unknown projector: {projector}")
    if projector == 'pinv':
        return pinv(M) @ M
    s = singular_values(M)
    if s.size == 0 or s[0] == 0:
        return np.zeros((M.shape[1], M.shape[1]), dtype=M.dtype)
    scaled = M / s[0]
    return scaled.conj().T @ scaled


def nullspace_projection(M, psi, repetitions: int = 50, projector: str = 'pinv') -> ProjectionResult:
    """
    Emulate the projection circuit `repetitions` times, keeping the |1> branch.

    The ancilla state after one pass is ((I + P) psi |0> + (I - P) psi |1>) / 2; the
    recorded branch probability is ||(I - P) psi||^2 for the unit input psi, so a
    null vector survives with probability 1.

    Args:
        M: matrix whose null space is targeted (q columns)
        psi: input state of length q (or padded)
        repetitions: number of passes
        projector: 'adjoint' or 'pinv'

    Returns:
        ProjectionResult with the normalized filtered state

    Raises:
        VanishingBranchError: psi has no component in null(M)
    """
    if repetitions < 1:
        raise EmulationError(f"repetitions must be at least 1, got {repetitions}")
    P = projector_matrix(M, projector)
    q = P.shape[0]
    if isinstance(psi, Statevector):
        psi = psi.amplitudes
    psi = np.asarray(psi, dtype=complex).ravel()
    padded = psi.size
    if padded < q:
        raise EmulationError(f"State of length {padded} is shorter than the {q} columns of M")
    head, tail = psi[:q], psi[q:]
    if np.any(tail):
        logger.debug("🔍 Projection: padding amplitudes are dropped (outside the column space)")

    if not np.any(head):
        raise VanishingBranchError("Input state has no amplitude on the columns of M")
    state = head / np.linalg.norm(head)
    kept: List[float] = []
    raw: List[List[float]] = []
    for rep in range(repetitions):
        Pv = P @ state
        plus, minus = state + Pv, state - Pv
        p0 = float(np.vdot(plus, plus).real) / 4
        p1 = float(np.vdot(minus, minus).real) / 4
        raw.append([p0, p1])
        weight = float(np.vdot(minus, minus).real)
        if weight <= VANISHING_TOL:
            raise VanishingBranchError(f"Kept branch vanished at repetition {rep + 1}")
        kept.append(weight)
        state = minus / np.sqrt(weight)
    out = np.zeros(register_size(padded), dtype=complex)
    out[:q] = state
    logger.debug(f"🔍 Projection ({projector}, {repetitions} reps): last branch probability {kept[-1]:.6f}")
    return ProjectionResult(Statevector(out), kept, raw, projector)
