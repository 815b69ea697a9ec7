"""
Block encoding
FABLE-style circuit: Hadamards on the row register, the query rotation on the
ancilla, a register swap and Hadamards again; the leading block of the circuit
unitary is A / (s * 2**n)
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from ..spectra import as_matrix, expm_scaled, pad_to_power_of_two, power_of_two_at_least
from .statevector import (
    EmulationError,
    Statevector,
    apply_register,
    hadamard_register,
    swap_registers,
)

logger = logging.getLogger(__name__)

ZERO_RESULT_TOL = 1e-14
ACTION_CHUNK = 16


class ZeroResultError(EmulationError):
    """Post-selected branch vanishes (A psi = 0)"""
    pass


class EmulationSizeError(EmulationError):
    """Problem exceeds the emulated register limits"""
    pass


def fable_scale(A: np.ndarray) -> float:
    """s = 2**ceil(log2 max|a_ij|), so every |a_ij / s| <= 1 and rescaling is exact"""
    peak = float(np.max(np.abs(A))) if A.size else 0.0
    return power_of_two_at_least(peak) if peak > 0 else 1.0


def _oracle(tensor: np.ndarray, a: np.ndarray) -> np.ndarray:
    """O_A on axes (ancilla, row, column): [[a, -sqrt(1-|a|^2)], [sqrt(1-|a|^2), conj(a)]]"""
    b = np.sqrt(np.clip(1.0 - np.abs(a) ** 2, 0.0, None))
    extra = (slice(None), slice(None)) + (None,) * (tensor.ndim - 3)
    a_, b_ = a[extra], b[extra]
    s0, s1 = tensor[0], tensor[1]
    return np.stack([a_ * s0 - b_ * s1, b_ * s0 + np.conj(a_) * s1])


@dataclass
class BlockEncoding:
    """
    Encoding of a padded N x N target (N = 2**n) on 2n + 1 qubits.

    Register order: ancilla (most significant), row register, column register.
    In 'full' mode the 2**(2n+1) unitary is materialized; in 'action' mode only
    the post-selected action on the column register is emulated.
    """
    target: np.ndarray
    scale: float
    mode: str
    unitary: Optional[np.ndarray] = None
    original_size: int = 0
    _block: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.target.shape[0]

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    @property
    def qubits(self) -> int:
        return 2 * self.n + 1

    @property
    def ancillas(self) -> int:
        return self.n + 1

    @property
    def normalization(self) -> float:
        return self.scale * self.N

    def circuit(self, tensor: np.ndarray) -> np.ndarray:
        """Apply the encoding circuit to a tensor with axes (ancilla, row, column, ...)"""
        # two unnormalized Hadamard layers, then one exact division by N = 2**n
        H = hadamard_register(self.N, normalized=False)
        a = self.target / self.scale
        tensor = apply_register(tensor, H, 1)
        tensor = _oracle(tensor, a)
        tensor = swap_registers(tensor, 1, 2)
        return apply_register(tensor, H, 1) / self.N

    def block(self) -> np.ndarray:
        """Leading N x N block, A / (s N) up to emulation error"""
        if self._block is None:
            if self.unitary is not None:
                self._block = self.unitary[:self.N, :self.N].copy()
            else:
                N = self.N
                block = np.empty((N, N), dtype=complex)
                for start in range(0, N, ACTION_CHUNK):
                    stop = min(N, start + ACTION_CHUNK)
                    tensor = np.zeros((2, N, N, stop - start), dtype=complex)
                    tensor[0, 0, start:stop, :] = np.eye(stop - start)
                    block[:, start:stop] = self.circuit(tensor)[0, 0]
                self._block = block
        return self._block

    def effective(self) -> np.ndarray:
        """The encoded operator with the normalization multiplied back"""
        return self.block() * self.normalization

    def post_selected(self, psi: np.ndarray) -> np.ndarray:
        """Unnormalized ancilla=0, row=0 branch for column-register input psi"""
        psi = np.asarray(psi, dtype=complex).ravel()
        if psi.size != self.N:
            raise EmulationError(f"State of length {psi.size} does not match the {self.N}-dim register")
        if self.unitary is not None:
            return self.unitary[:self.N, :self.N] @ psi
        tensor = np.zeros((2, self.N, self.N), dtype=complex)
        tensor[0, 0, :] = psi
        return self.circuit(tensor)[0, 0]

    def residue(self) -> float:
        """||A - s 2**n A_BL||_F on the padded target"""
        return float(np.linalg.norm(self.target - self.effective()))

    def unitarity_defect(self) -> float:
        if self.unitary is None:
            raise EmulationError("Unitarity is only checked on a materialized encoding")
        U = self.unitary
        return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])))


def fable_encode(A, mode: str = 'auto', max_full_qubits: int = 11,
                 scale: Optional[float] = None) -> BlockEncoding:
    """
    Block-encode a square matrix.

    Args:
        A: square matrix, zero-padded to a power-of-two dimension (at least 2)
        mode: 'full', 'action' or 'auto' (full when 2n + 1 <= max_full_qubits)
        max_full_qubits: largest materialized circuit
        scale: entry scale s; a power of two >= max|a_ij| by default

    Returns:
        BlockEncoding
    """
    A = as_matrix(A, square=True)
    original = A.shape[0]
    target = pad_to_power_of_two(A, minimum=2).astype(complex)
    s = float(scale) if scale is not None else fable_scale(target)
    if np.max(np.abs(target)) > s * (1 + 1e-12):
        raise EmulationError(f"Scale {s} is below max|a_ij| = {np.max(np.abs(target))}")
    N = target.shape[0]
    n = N.bit_length() - 1
    qubits = 2 * n + 1
    if mode == 'auto':
        mode = 'full' if qubits <= max_full_qubits else 'action'
    elif mode == 'full' and qubits > max_full_qubits:
        logger.warning(f"⚠️ {qubits} qubits exceed the full-unitary limit {max_full_qubits}; using action mode")
        mode = 'action'
    if mode not in ('full', 'action'):
        raise EmulationError(f"Unknown encoding mode: {mode}")

    encoding = BlockEncoding(target, s, mode, original_size=original)
    if mode == 'full':
        D = 2 * N * N
        tensor = np.eye(D, dtype=complex).reshape(2, N, N, D)
        encoding.unitary = encoding.circuit(tensor).reshape(D, D)
    logger.debug(f"🔍 Encoded {original}x{original} (padded {N}) on {qubits} qubits, s={s:g}, {mode} mode")
    return encoding


def encode_time_evolution(A, t: float = 1.0, **kwargs) -> BlockEncoding:
    """Block-encode exp(-i t A), computed classically"""
    return fable_encode(expm_scaled(A, t), **kwargs)


def _as_column_state(psi, N: int) -> np.ndarray:
    if isinstance(psi, Statevector):
        psi = psi.amplitudes
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size > N:
        raise EmulationError(f"State of length {psi.size} does not fit the {N}-dim register")
    if psi.size < N:
        psi = np.concatenate([psi, np.zeros(N - psi.size, dtype=complex)])
    return psi


def apply_encoded(enc: BlockEncoding, psi) -> Tuple[Statevector, float]:
    """
    Post-selected A psi.

    Returns:
        (normalized A psi, success probability ||A psi||^2 / (s 2**n)^2)

    Raises:
        ZeroResultError: the post-selected branch vanishes
    """
    psi = _as_column_state(psi, enc.N)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise EmulationError("Input state is zero")
    branch = enc.post_selected(psi / norm)
    probability = float(np.vdot(branch, branch).real)
    if probability <= ZERO_RESULT_TOL ** 2:
        raise ZeroResultError("A psi vanishes; the post-selected branch has zero probability")
    return Statevector(branch).normalized(), probability


def expectation(enc_or_matrix: Union[BlockEncoding, np.ndarray], psi) -> complex:
    """<psi|A|psi> for unit psi, through the encoding when one is given"""
    if isinstance(enc_or_matrix, BlockEncoding):
        enc = enc_or_matrix
        psi = _as_column_state(psi, enc.N)
        psi = psi / np.linalg.norm(psi)
        return complex(np.vdot(psi, enc.post_selected(psi)) * enc.normalization)
    A = as_matrix(enc_or_matrix, square=True)
    psi = _as_column_state(psi, A.shape[0])
    psi = psi / np.linalg.norm(psi)
    return complex(np.vdot(psi, A @ psi))
