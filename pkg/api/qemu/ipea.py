"""
Iterative phase estimation for complex eigenvalues
Least-significant bit first with phase feedback; the modulus and the bits past
the deepest measurable power come from in-phase and quadrature Hadamard tests
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .block_encoding import BlockEncoding
from .statevector import EmulationError, Statevector, hadamard_test_probabilities

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-6
NOISE_FLOOR = 1e-12
# gap at which the phase angle is still good to ~1e-8 rad with exact probabilities
READOUT_FLOOR = 1e-8
SAMPLING_SIGMAS = 4.0


class EigenvectorResidualError(EmulationError):
    """Input state is not an eigenvector of the encoded operator"""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass
class IpeaResult:
    """Phase bits x_1..x_m (most significant first), modulus and reconstructed eigenvalue"""
    bits: List[int]
    magnitude: float
    eigenvalue: complex
    gaps: List[float]
    probabilities: List[List[float]]
    low_confidence: List[int] = field(default_factory=list)
    residual: float = 0.0
    magnitude_power: int = 0

    @property
    def phase(self) -> float:
        """0.x_1 x_2 ... x_m as a fraction of a full turn"""
        return sum(b / 2 ** (i + 1) for i, b in enumerate(self.bits))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'bits': ''.join(str(b) for b in self.bits),
            'phase': self.phase,
            'magnitude': self.magnitude,
            'eigenvalue': {'re': self.eigenvalue.real, 'im': self.eigenvalue.imag},
            'gaps': self.gaps,
            'probabilities': self.probabilities,
            'low_confidence': self.low_confidence,
            'residual': self.residual,
        }


def _magnitude_from_gap(rho: float) -> float:
    """Inverse of rho = 2r / (1 + r^2) on [0, 1]"""
    rho = min(1.0, abs(rho))
    return rho / (1.0 + np.sqrt(max(0.0, 1.0 - rho * rho)))


def _operator(enc_or_matrix: Union[BlockEncoding, np.ndarray]) -> np.ndarray:
    if isinstance(enc_or_matrix, BlockEncoding):
        return enc_or_matrix.effective()
    return np.asarray(enc_or_matrix, dtype=complex)


def ipea_complex(enc_or_matrix: Union[BlockEncoding, np.ndarray], psi, bits: int = 12,
                 sampling: bool = False, shots: int = 1024,
                 rng: Optional[np.random.Generator] = None,
                 noise_floor: float = NOISE_FLOOR,
                 residual_tol: float = RESIDUAL_TOL) -> IpeaResult:
    """
    Estimate the eigenvalue of the encoded operator on an eigenvector.

    Every controlled power A^(2^j) is first measured in phase and in quadrature
    without feedback; the widest of those gaps gives the modulus. Step k
    (k = K .. 1) then measures A^(2^(k-1)) after the phase feedback
    -2 pi 0.0x_(k+1)...x_m and sets x_k = 1 when the |1> outcome is the more
    likely one, K being the deepest power whose gap clears the readout floor.
    Bits below K come from the angle of the in-phase and quadrature gaps at
    power 2^(K-1) and are listed in `low_confidence`.

    Args:
        enc_or_matrix: BlockEncoding (its effective operator is used) or a matrix
        psi: eigenvector, padded to the register size
        bits: number of phase bits m
        sampling: decide bits from binomial draws instead of exact probabilities
        shots: draws per bit in sampling mode
        rng: seeded generator for sampling mode
        noise_floor: smallest gap a power may have and still be measured bit by bit
        residual_tol: max ||A psi - lambda psi|| for a unit psi

    Returns:
        IpeaResult

    Raises:
        EigenvectorResidualError: psi is not an eigenvector within residual_tol
    """
    if bits < 1:
        raise EmulationError(f"bits must be at least 1, got {bits}")
    A = _operator(enc_or_matrix)
    if isinstance(psi, Statevector):
        psi = psi.amplitudes
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size < A.shape[0]:
        psi = np.concatenate([psi, np.zeros(A.shape[0] - psi.size, dtype=complex)])
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise EmulationError("IPEA needs a non-zero eigenvector")
    psi = psi / norm

    applied = A @ psi
    rayleigh = np.vdot(psi, applied)
    residual = float(np.linalg.norm(applied - rayleigh * psi))
    if residual > residual_tol:
        raise EigenvectorResidualError(f"Eigenvector residual {residual:.2e} exceeds {residual_tol:g}", residual)
    if sampling and rng is None:
        rng = np.random.default_rng()

    # powers A^(2^j) psi by repeated squaring
    powers = [applied]
    P = A
    for _ in range(1, bits):
        P = P @ P
        powers.append(P @ psi)

    def measure(power: np.ndarray, phase: float):
        p0, p1 = hadamard_test_probabilities(psi, power, phase)
        if sampling:
            p1 = rng.binomial(shots, p1) / shots
            p0 = 1.0 - p1
        return p0, p1

    # in-phase and quadrature gaps are 2 rho (cos a, sin a) / (1 + rho^2) for A^(2^j) psi = rho e^{ia} psi
    in_phase = [measure(v, 0.0) for v in powers]
    quadrature = [measure(v, -np.pi / 2) for v in powers]
    spans = [float(np.hypot(p0 - p1, q0 - q1)) for (p0, p1), (q0, q1) in zip(in_phase, quadrature)]
    floor = max(noise_floor, READOUT_FLOOR)
    if sampling:
        floor = max(floor, SAMPLING_SIGMAS / np.sqrt(shots))
    measurable = [j for j, s in enumerate(spans) if s >= floor]
    depth = measurable[-1] + 1 if measurable else 0

    found = [0] * bits
    gaps = [abs(p0 - p1) for p0, p1 in in_phase]
    probabilities: List[List[float]] = [[float(p0), float(p1)] for p0, p1 in in_phase]
    low = list(range(depth + 1, bits + 1))
    omega = 0.0
    if low and depth:
        # 0.x_(K+1)...x_m from the angle of A^(2^K) = (A^(2^(K-1)))^2, rounded to m - K bits
        (p0, p1), (q0, q1) = in_phase[depth - 1], quadrature[depth - 1]
        turns = (np.arctan2(q0 - q1, p0 - p1) / np.pi) % 1.0
        width = bits - depth
        n = int(np.rint(turns * 2 ** width)) % 2 ** width
        for k in low:
            found[k - 1] = (n >> (bits - k)) & 1
        omega = n / 2 ** width
        logger.warning(f"⚠️ IPEA: bits {depth + 1}..{bits} read from the phase angle at power "
                       f"2^{depth - 1} (gap {spans[depth - 1]:.2e}, readout floor {floor:.1e})")
    elif low:
        logger.warning(f"⚠️ IPEA: eigenvalue below the readout floor {floor:.1e}; all {bits} bits default to 0")

    for k in range(depth, 0, -1):
        omega /= 2
        p0, p1 = measure(powers[k - 1], -2 * np.pi * omega)
        bit = 1 if p1 > p0 else 0
        found[k - 1] = bit
        gaps[k - 1] = abs(p0 - p1)
        probabilities[k - 1] = [float(p0), float(p1)]
        omega += bit / 2
        logger.debug(f"🔍 IPEA bit {k}: P0={p0:.6f} P1={p1:.6f} -> {bit}")

    best = int(np.argmax(spans))
    r = _magnitude_from_gap(spans[best])
    magnitude = float(r ** (1.0 / 2 ** best)) if r > 0 else 0.0
    phase = sum(b / 2 ** (i + 1) for i, b in enumerate(found))
    eigenvalue = complex(magnitude * np.exp(2j * np.pi * phase))
    return IpeaResult(found, magnitude, eigenvalue, [float(g) for g in gaps], probabilities,
                      low, residual, best)
