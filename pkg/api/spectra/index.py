"""
Dense Linear Algebra Service
Eigen-decomposition with residual reports, SVD, pseudoinverse, null spaces and
the complex time-evolution exponential shared by both solver routes and the emulator
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..errors import MolRootsError

logger = logging.getLogger(__name__)

ACCEPT_RESIDUAL = 1e-8
SEPARATION_TOL = 1e-6


class SpectraError(MolRootsError):
    """Base error for dense linear algebra"""
    pass


class NonSquareMatrixError(SpectraError):
    """Operation needs a square matrix"""
    pass


class MatrixOverflowError(SpectraError):
    """Result is not finite"""
    pass


def as_matrix(A, square: bool = False) -> np.ndarray:
    """Validate a 2-D finite array (real or complex, 64-bit)"""
    M = np.asarray(A)
    if M.ndim != 2:
        raise SpectraError(f"Expected a 2-D matrix, got shape {M.shape}")
    if not np.iscomplexobj(M):
        M = M.astype(np.float64, copy=False)
    if not np.all(np.isfinite(M)):
        raise SpectraError("Matrix has non-finite entries")
    if square and M.shape[0] != M.shape[1]:
        raise NonSquareMatrixError(f"Expected a square matrix, got shape {M.shape}")
    return M


@dataclass
class EigenDecomposition:
    """Eigenpairs with per-pair relative residuals ||A v - lambda v|| / ||A||"""
    eigenvalues: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    left: bool = False

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0

    def accepted(self, tol: float = ACCEPT_RESIDUAL) -> np.ndarray:
        return self.residuals <= tol

    def rejected_indices(self, tol: float = ACCEPT_RESIDUAL) -> List[int]:
        return [int(i) for i in np.flatnonzero(~self.accepted(tol))]

    def vector(self, i: int) -> np.ndarray:
        return self.vectors[:, i]


def eig(A, left: bool = False) -> EigenDecomposition:
    """
    Full spectrum of a general square matrix.

    Args:
        A: square matrix
        left: solve the row-action problem v A = lambda v (decomposes A^T)

    Returns:
        EigenDecomposition with unit-norm vectors as columns
    """
    A = as_matrix(A, square=True)
    target = A.T if left else A
    n = target.shape[0]
    if n == 0:
        empty = np.zeros(0, dtype=complex)
        return EigenDecomposition(empty, np.zeros((0, 0), dtype=complex), np.zeros(0), left)

    w, V = scipy.linalg.eig(target)
    V = V.astype(complex)
    norms = np.linalg.norm(V, axis=0)
    norms[norms == 0] = 1.0
    V = V / norms

    scale = np.linalg.norm(target) or 1.0
    residuals = np.linalg.norm(target @ V - V * w, axis=0) / scale
    decomposition = EigenDecomposition(w.astype(complex), V, residuals, left)

    bad = decomposition.rejected_indices()
    if bad:
        logger.warning(f"⚠️ {len(bad)} of {n} eigenpairs exceed residual {ACCEPT_RESIDUAL:g} "
                       f"(max {decomposition.max_residual:.2e})")
    else:
        logger.debug(f"🔍 eig n={n}: max residual {decomposition.max_residual:.2e}")
    return decomposition


def svd(A, full_matrices: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """A = U diag(s) Vh with singular values in descending order"""
    A = as_matrix(A)
    if 0 in A.shape:
        k = min(A.shape)
        return (np.zeros((A.shape[0], k)), np.zeros(k), np.zeros((k, A.shape[1])))
    return scipy.linalg.svd(A, full_matrices=full_matrices, lapack_driver='gesdd')


def singular_values(A) -> np.ndarray:
    A = as_matrix(A)
    if 0 in A.shape:
        return np.zeros(0)
    return scipy.linalg.svdvals(A)


def pinv(A, rtol: float = 1e-10) -> np.ndarray:
    """Moore-Penrose pseudoinverse with singular values below rtol * sigma_max dropped"""
    A = as_matrix(A)
    if 0 in A.shape:
        return np.zeros((A.shape[1], A.shape[0]), dtype=A.dtype)
    U, s, Vh = svd(A)
    if s.size == 0 or s[0] == 0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=A.dtype)
    keep = s > rtol * s[0]
    return (Vh[keep].conj().T / s[keep]) @ U[:, keep].conj().T


def numerical_rank(A, rtol: float = 1e-9, atol: float = 0.0) -> int:
    s = singular_values(A)
    if s.size == 0:
        return 0
    cutoff = max(atol, rtol * s[0])
    return int(np.sum(s > cutoff))


@dataclass
class NullSpace:
    """Orthonormal right singular vectors below the threshold"""
    basis: np.ndarray
    singular_values: np.ndarray
    threshold: float
    rank: int
    ncols: int = field(default=0)

    @property
    def nullity(self) -> int:
        return self.basis.shape[1]


def _right_factor(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Singular values and Vh, through the triangular factor when A is tall"""
    m, n = A.shape
    if m > n:
        R = scipy.linalg.qr(A, mode='r', overwrite_a=False, check_finite=False)[0][:n]
        _, s, Vh = scipy.linalg.svd(R, full_matrices=True, lapack_driver='gesdd')
    else:
        _, s, Vh = scipy.linalg.svd(A, full_matrices=True, lapack_driver='gesdd')
    return s, Vh


def nullspace_svd(A, threshold: float = 1e-4) -> NullSpace:
    """
    Null space from the right singular vectors.

    A column is in the null space when its singular value is below `threshold`
    (absolute); missing singular values of a wide matrix count as zero.

    Args:
        A: dense matrix (sparse inputs should be converted by the caller)
        threshold: absolute singular-value cutoff

    Returns:
        NullSpace with q - rank orthonormal columns
    """
    A = as_matrix(A)
    m, n = A.shape
    if n == 0:
        return NullSpace(np.zeros((0, 0)), np.zeros(0), threshold, 0, 0)
    if m == 0 or not np.any(A):
        return NullSpace(np.eye(n, dtype=A.dtype), np.zeros(min(m, n)), threshold, 0, n)

    s, Vh = _right_factor(A)
    rank = int(np.sum(s >= threshold))
    Z = Vh[rank:].conj().T
    logger.debug(f"🔍 nullspace {m}x{n}: rank {rank}, nullity {Z.shape[1]}, threshold {threshold:g}")
    return NullSpace(Z, s, threshold, rank, n)


def expm_scaled(A, s: float = 1.0, cond_limit: float = 1e8) -> np.ndarray:
    """
    exp(-i s A).

    Uses the eigen-decomposition when the eigenvector matrix is well conditioned,
    scaling and squaring (scipy.linalg.expm) otherwise.

    Raises:
        MatrixOverflowError: the result has non-finite entries
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    result = None
    try:
        w, V = scipy.linalg.eig(A)
        if np.linalg.cond(V) < cond_limit:
            result = (V * np.exp(-1j * s * w)) @ scipy.linalg.inv(V)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        result = None
    if result is None:
        logger.debug("🔍 expm_scaled: eigenvectors ill conditioned, using scaling and squaring")
        result = scipy.linalg.expm(-1j * s * A.astype(complex))
    if not np.all(np.isfinite(result)):
        raise MatrixOverflowError(f"exp(-i*{s}*A) overflowed for a {n}x{n} matrix")
    return result


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = as_matrix(U, square=True)
    return bool(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) <= tol)


def commutator_defect(A, B) -> float:
    """||AB - BA||_F / (||A||_F ||B||_F), zero when either matrix vanishes"""
    A = as_matrix(A, square=True)
    B = as_matrix(B, square=True)
    scale = np.linalg.norm(A) * np.linalg.norm(B)
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(A @ B - B @ A) / scale)


def power_of_two_at_least(value: float) -> float:
    """Smallest 2**k >= value (1.0 for non-positive values)"""
    if value <= 0:
        return 1.0
    return float(2.0 ** int(np.ceil(np.log2(value))))


def pad_to_power_of_two(A, minimum: int = 2) -> np.ndarray:
    """Zero-pad a square matrix to the next power-of-two dimension"""
    A = as_matrix(A, square=True)
    n = A.shape[0]
    size = max(minimum, 1 << max(0, int(np.ceil(np.log2(max(n, 1))))))
    if size == n:
        return A
    padded = np.zeros((size, size), dtype=A.dtype)
    padded[:n, :n] = A
    return padded


def pad_vector(v, size: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    if v.size > size:
        raise SpectraError(f"Vector of length {v.size} does not fit {size}")
    out = np.zeros(size, dtype=complex)
    out[:v.size] = v
    return out


def rayleigh_quotient(A, v) -> complex:
    """(v, A v) / (v, v) with the Hermitian inner product"""
    v = np.asarray(v)
    denom = np.vdot(v, v)
    if denom == 0:
        raise SpectraError("Rayleigh quotient of the zero vector")
    return complex(np.vdot(v, np.asarray(A) @ v) / denom)


def relative_residual(A, v, value: complex) -> float:
    v = np.asarray(v)
    scale = np.linalg.norm(v) * (np.linalg.norm(A) or 1.0)
    if scale == 0:
        return float('inf')
    return float(np.linalg.norm(np.asarray(A) @ v - value * v) / scale)


def eigenvalue_separation(eigenvalues) -> float:
    """Smallest pairwise distance of the eigenvalues relative to max(1, max |lambda|)"""
    w = np.asarray(eigenvalues, dtype=complex).ravel()
    if w.size < 2:
        return float('inf')
    gaps = np.abs(w[:, None] - w[None, :])
    gaps[np.diag_indices_from(gaps)] = np.inf
    return float(gaps.min() / max(1.0, np.abs(w).max()))


def generic_weights(names: Sequence[str], seed: int = 0) -> Dict[str, float]:
    """Seeded random coefficients in +-[0.5, 1.5] for a linear combination of variables"""
    rng = np.random.default_rng(seed)
    magnitudes = rng.uniform(0.5, 1.5, len(names))
    signs = rng.choice([-1.0, 1.0], len(names))
    return {v: float(s * m) for v, s, m in zip(names, signs, magnitudes)}


def separating_eig(matrices: Mapping[str, np.ndarray], pivot: str, seed: int = 0,
                   tol: float = SEPARATION_TOL) -> Tuple[EigenDecomposition, Dict[str, float]]:
    """
    Eigenvectors of a commuting family through one of its members.

    The pivot matrix is used when its eigenvalues are separated; otherwise
    eigenvectors inside a repeated eigenspace would be arbitrary mixtures, so a
    seeded generic combination of all matrices is decomposed instead.

    Returns:
        (decomposition, weights of the decomposed combination)
    """
    decomposition = eig(matrices[pivot])
    if eigenvalue_separation(decomposition.eigenvalues) >= tol:
        return decomposition, {pivot: 1.0}
    weights = generic_weights(list(matrices), seed)
    combined = sum(w * np.asarray(matrices[v]) for v, w in weights.items())
    logger.warning(f"⚠️ Pivot {pivot} has repeated eigenvalues; decomposing a generic combination instead")
    return eig(combined), weights
