"""
Statevector primitives
Register-level gate application on amplitude tensors; registers are axes, so a
circuit acting on the identity gives its unitary without dense gate products
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from ..errors import MolRootsError

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10


class EmulationError(MolRootsError):
    """Base error for the statevector emulator"""
    pass


@dataclass
class Statevector:
    """2**q complex amplitudes"""
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        size = self.amplitudes.size
        if size == 0 or size & (size - 1):
            raise EmulationError(f"Statevector length must be a power of two, got {size}")

    @classmethod
    def from_vector(cls, v, size: Optional[int] = None, normalize: bool = True) -> 'Statevector':
        """Zero-pad to `size` (next power of two by default) and normalize"""
        v = np.asarray(v, dtype=complex).ravel()
        size = size or register_size(v.size)
        if v.size > size:
            raise EmulationError(f"Vector of length {v.size} does not fit {size} amplitudes")
        amps = np.zeros(size, dtype=complex)
        amps[:v.size] = v
        state = cls(amps)
        return state.normalized() if normalize else state

    @classmethod
    def random(cls, size: int, rng: np.random.Generator) -> 'Statevector':
        v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        return cls(v).normalized()

    @property
    def qubits(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def dimension(self) -> int:
        return int(self.amplitudes.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> 'Statevector':
        n = self.norm()
        if n == 0:
            raise EmulationError("Cannot normalize the zero state")
        return Statevector(self.amplitudes / n)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def overlap(self, other: 'Statevector') -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: 'Statevector') -> float:
        return abs(self.overlap(other)) ** 2 / (self.norm() ** 2 * other.norm() ** 2)


def register_size(length: int, minimum: int = 2) -> int:
    """Smallest power of two >= length"""
    size = minimum
    while size < length:
        size *= 2
    return size


def hadamard_register(N: int, normalized: bool = True) -> np.ndarray:
    """H applied to every qubit of an N-dimensional register (the +-1 Sylvester matrix when not normalized)"""
    H = scipy.linalg.hadamard(N).astype(complex)
    return H / np.sqrt(N) if normalized else H


def apply_register(tensor: np.ndarray, gate: np.ndarray, axis: int) -> np.ndarray:
    """Contract `gate` with one register axis of an amplitude tensor"""
    out = np.tensordot(gate, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def swap_registers(tensor: np.ndarray, a: int, b: int) -> np.ndarray:
    return np.swapaxes(tensor, a, b)


def hadamard_test_probabilities(psi: np.ndarray, applied: np.ndarray, phase: float = 0.0):
    """
    Ancilla outcomes of H - controlled-U - phase - H on a (possibly post-selected) U.

    The joint state is (psi + e^{i phase} U psi)|0> + (psi - e^{i phase} U psi)|1>,
    up to normalization; the probabilities are taken over the two branches.
    """
    rotated = np.exp(1j * phase) * applied
    w0 = np.linalg.norm(psi + rotated) ** 2
    w1 = np.linalg.norm(psi - rotated) ** 2
    total = w0 + w1
    if total == 0:
        raise EmulationError("Hadamard test on the zero state")
    return float(w0 / total), float(w1 / total)
