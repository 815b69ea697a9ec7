"""
Quantum Emulation Pipeline
End-to-end emulated runs: eigenvector preparation, block encoding of each
multiplication operator and phase estimation per variable, for both routes
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..config import get_groebner_config, get_macaulay_config, get_qpe_config
from ..groebner.index import GroebnerSolveResult, PolySystem, build_records, solve_groebner
from ..macaulay.index import build, column_order, eigenproblem, nullspace
from ..records import REAL_TOL, SolutionRecord
from ..spectra import pad_vector, power_of_two_at_least, separating_eig
from .block_encoding import BlockEncoding, EmulationSizeError, ZeroResultError, apply_encoded, fable_encode
from .ipea import EigenvectorResidualError, ipea_complex
from .projection import nullspace_projection
from .statevector import EmulationError, Statevector, register_size

logger = logging.getLogger(__name__)

SCALE_POLICIES = ('inf_norm', 'max_entry')


def operator_scale(M: np.ndarray, policy: str = 'inf_norm') -> float:
    """
    Power of two s with spectral radius of M / s at most 1.

    'inf_norm': s >= max row sum; 'max_entry': s = 2**ceil(log2 max|m_ij|) * N.
    """
    M = np.asarray(M)
    if policy == 'inf_norm':
        return power_of_two_at_least(float(np.max(np.sum(np.abs(M), axis=1))) if M.size else 0.0)
    if policy == 'max_entry':
        return power_of_two_at_least(float(np.max(np.abs(M))) if M.size else 0.0) * register_size(M.shape[0])
    raise EmulationError(f"Unknown scale policy: {policy}")


@dataclass
class QpeRun:
    route: str
    records: List[SolutionRecord]
    scales: Dict[str, float]
    bits: int
    details: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def summary(self) -> Dict[str, Any]:
        return {
            'route': self.route,
            'roots': len(self.records),
            'real': sum(r.is_real for r in self.records),
            'valid': sum(r.valid for r in self.records),
            'bits': self.bits,
            'scales': self.scales,
            'seconds': round(self.seconds, 3),
            **self.details,
        }


class _Estimator:
    """One encoding per variable, reused for every eigenvector"""

    def __init__(self, operators: Dict[str, np.ndarray], qpe_config: Dict[str, Any]):
        self.cfg = qpe_config
        self.scales: Dict[str, float] = {}
        self.encodings: Dict[str, BlockEncoding] = {}
        for var, M in operators.items():
            s = operator_scale(M, qpe_config['scale_policy'])
            self.scales[var] = s
            self.encodings[var] = fable_encode(M / s, max_full_qubits=qpe_config['max_full_qubits'])
        self.rng = np.random.default_rng(qpe_config['seed'])

    @property
    def size(self) -> int:
        return next(iter(self.encodings.values())).N

    def estimate(self, psi: np.ndarray) -> (Dict[str, complex], Dict[str, Any]):
        values: Dict[str, complex] = {}
        meta: Dict[str, Any] = {}
        for var, enc in self.encodings.items():
            result = ipea_complex(enc, psi, self.cfg['bits'], self.cfg['sampling'], self.cfg['shots'],
                                  self.rng, self.cfg['noise_floor'])
            try:
                _, success = apply_encoded(enc, psi)
            except ZeroResultError:
                success = 0.0
            values[var] = complex(self.scales[var] * result.eigenvalue)
            meta[var] = {**result.to_dict(), 'scale': self.scales[var], 'post_selection': success}
        return values, meta


def _check_size(N: int, qpe_config: Dict[str, Any]) -> None:
    limit = 2 ** qpe_config['max_system_qubits']
    if N > limit:
        raise EmulationSizeError(f"System register of dimension {N} exceeds 2**{qpe_config['max_system_qubits']}")


def qpe_groebner(system: PolySystem, qpe_config: Optional[Dict[str, Any]] = None,
                 groebner_config: Optional[Dict[str, Any]] = None, objective=None,
                 rc: Optional[float] = None,
                 solved: Optional[GroebnerSolveResult] = None) -> QpeRun:
    """
    Groebner route: eigenvectors of M_pivot from the classical eig, padded to the
    encoding size, then phase estimation of every M_v.
    """
    qcfg = get_qpe_config()
    qcfg.update(qpe_config or {})
    gcfg = get_groebner_config()
    gcfg.update(groebner_config or {})
    started = time.perf_counter()
    solved = solved or solve_groebner(system, gcfg, objective, rc)
    M = solved.matrices
    N = register_size(M.basis.dimension)
    _check_size(N, qcfg)

    logger.info(f"🚀 QPE (groebner): {M.basis.dimension} -> {N} dims, {qcfg['bits']} bits")
    estimator = _Estimator(M.matrices, qcfg)
    decomposition, _ = separating_eig(M.matrices, solved.pivot)
    roots, meta = [], []
    for i in range(len(decomposition)):
        psi = pad_vector(decomposition.vector(i), N)
        values, info = estimator.estimate(psi)
        roots.append(values)
        meta.append({'qpe': info, 'eigenvector': i})
    records = build_records(roots, system, 'qpe-groebner', objective, rc, gcfg['validity_window'],
                            gcfg['real_tol'], meta)
    run = QpeRun('groebner', records, estimator.scales, qcfg['bits'],
                 {'dimension': M.basis.dimension, 'register': N},
                 time.perf_counter() - started)
    logger.info(f"✅ QPE (groebner): {len(records)} roots in {run.seconds:.2f}s")
    return run


def qpe_macaulay(system: PolySystem, degree: int, qpe_config: Optional[Dict[str, Any]] = None,
                 macaulay_config: Optional[Dict[str, Any]] = None, objective=None,
                 rc: Optional[float] = None, window: float = 1.2,
                 real_tol: float = REAL_TOL, pivot: Optional[str] = None) -> QpeRun:
    """
    Macaulay route: a seeded random state is projected onto null(M(d)), expanded
    in the eigenbasis of the lifted pivot operator, and every branch above the
    weight floor is phase-estimated on each lifted operator L_g = Z_c W_g Z_c^H.
    """
    qcfg = get_qpe_config()
    qcfg.update(qpe_config or {})
    mcfg = get_macaulay_config()
    mcfg.update(macaulay_config or {})
    started = time.perf_counter()
    ring = system.ring
    if pivot not in ring:
        pivot = ring[0]

    M = build(system, degree)
    q = M.shape[1]
    N = register_size(q)
    _check_size(N, qcfg)
    null = nullspace(M, mcfg['null_threshold'])
    if null.nullity == 0:
        raise EmulationError(f"M({degree}) has a trivial null space")
    problem = eigenproblem(null.Z, ring, degree, pivot, column_order(system), mcfg['rank_rtol'],
                           mcfg['pinv_rtol'], mcfg['shift_degree'])
    Zc = problem.Zc
    lifted = {g: Zc @ problem.W[g] @ Zc.conj().T for g in ring}

    logger.info(f"🚀 QPE (macaulay): M({degree}) {M.shape[0]}x{q} -> {N} dims, {qcfg['bits']} bits")
    rng = np.random.default_rng(qcfg['seed'])
    start_state = Statevector.random(N, rng)
    projected = nullspace_projection(M.to_dense(), start_state, qcfg['repetitions'], qcfg['projector'])
    phi = projected.state.amplitudes[:q]

    decomposition, _ = separating_eig(problem.W, pivot)
    U = Zc @ decomposition.vectors
    coefficients, *_ = np.linalg.lstsq(U, phi, rcond=None)
    weights = np.abs(coefficients) ** 2 * np.linalg.norm(U, axis=0) ** 2 / np.vdot(phi, phi).real

    estimator = _Estimator(lifted, qcfg)
    roots, meta = [], []
    skipped = 0
    scales = system.coefficient_scales()
    for i, weight in enumerate(weights):
        if weight <= qcfg['branch_floor']:
            skipped += 1
            continue
        psi = pad_vector(U[:, i] / np.linalg.norm(U[:, i]), N)
        try:
            values, info = estimator.estimate(psi)
        except EigenvectorResidualError as e:
            logger.debug(f"🔍 Branch {i} is not a common eigenvector (residual {e.residual:.2e})")
            skipped += 1
            continue
        residual = max(abs(f.evaluate(values)) / (s or 1.0) for f, s in zip(system.generators, scales))
        if residual > mcfg['residual_tol']:
            skipped += 1
            continue
        roots.append(values)
        meta.append({'qpe': info, 'branch_weight': float(weight)})

    records = build_records(roots, system, 'qpe-macaulay', objective, rc, window, real_tol, meta)
    run = QpeRun('macaulay', records, estimator.scales, qcfg['bits'],
                 {'degree': degree, 'register': N, 'branches': len(weights), 'skipped': skipped,
                  'projection': projected.to_dict(), 'base_degree': problem.base_degree},
                 time.perf_counter() - started)
    logger.info(f"✅ QPE (macaulay): {len(records)} roots from {len(weights)} branches in {run.seconds:.2f}s")
    return run


def qpe_pipeline(system: PolySystem, route: Optional[str] = None, degree: Optional[int] = None,
                 qpe_config: Optional[Dict[str, Any]] = None,
                 groebner_config: Optional[Dict[str, Any]] = None,
                 macaulay_config: Optional[Dict[str, Any]] = None,
                 objective=None, rc: Optional[float] = None,
                 solved: Optional[GroebnerSolveResult] = None) -> QpeRun:
    """
    Emulated run on either route.

    Args:
        system: PolySystem
        route: 'groebner' or 'macaulay' (qpe_config['route'] by default)
        degree: Macaulay degree (macaulay route)
        qpe_config: `qpe` section overrides
        groebner_config: `groebner` section overrides
        macaulay_config: `macaulay` section overrides
        objective: EnergyPolynomial for the energy column, optional
        rc: expansion center for the validity window
        solved: an existing Groebner solve to reuse

    Returns:
        QpeRun with one record per estimated root
    """
    qcfg = get_qpe_config()
    qcfg.update(qpe_config or {})
    route = route or qcfg['route']
    if qcfg['scale_policy'] not in SCALE_POLICIES:
        raise EmulationError(f"Unknown scale policy: {qcfg['scale_policy']}")
    if route == 'groebner':
        return qpe_groebner(system, qcfg, groebner_config, objective, rc, solved)
    if route == 'macaulay':
        mcfg = get_macaulay_config()
        mcfg.update(macaulay_config or {})
        gcfg = get_groebner_config()
        gcfg.update(groebner_config or {})
        return qpe_macaulay(system, degree or mcfg['degree'], qcfg, mcfg, objective, rc,
                            gcfg['validity_window'], gcfg['real_tol'], gcfg['pivot'])
    raise EmulationError(f"Unknown route: {route}")
