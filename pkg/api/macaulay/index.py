"""
Macaulay Route Service
Groebner-free root finding: Macaulay matrix, SVD null space, shift matrices,
pseudoinverse eigenproblem, affine root extraction and degree sweeps
"""

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse

from ..config import get_macaulay_config
from ..errors import MolRootsError
from ..groebner.index import PolySystem, best_root, build_records
from ..polyring import Monomial, MonomialOrder, format_monomial, monomial_index, monomials_up_to, mono_mul
from ..records import REAL_TOL, SolutionRecord
from ..spectra import nullspace_svd, numerical_rank, pinv, separating_eig, svd

logger = logging.getLogger(__name__)


class MacaulayError(MolRootsError):
    """Base error for the Macaulay route"""
    pass


class DegreeTooSmallError(MacaulayError):
    """Degree below the largest generator degree"""
    pass


class RankDeficientShiftError(MacaulayError):
    """S_1 Z has rank zero"""
    pass


def dims(degrees: Sequence[int], n: int, d: int) -> Tuple[int, int]:
    """
    Shape of the degree-d Macaulay matrix.

    r(d) = sum_i C(d - d_i + n, n) over generators with d_i <= d, q(d) = C(d + n, n).
    """
    rows = sum(math.comb(d - di + n, n) for di in degrees if d >= di)
    return rows, math.comb(d + n, n)


def column_order(system: PolySystem) -> MonomialOrder:
    """Graded lex with the system's variable precedence"""
    return MonomialOrder('grlex', system.order.precedence)


@dataclass
class MacaulayMatrix:
    """Rows (generator, multiplier), columns all monomials of degree <= d"""
    degree: int
    ring: Tuple[str, ...]
    matrix: scipy.sparse.csr_matrix
    row_labels: List[Tuple[int, Monomial]]
    columns: List[Monomial]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    @property
    def cells(self) -> int:
        return self.shape[0] * self.shape[1]

    def column_index(self) -> Dict[Monomial, int]:
        return monomial_index(self.columns)

    def column_labels(self) -> List[str]:
        return [format_monomial(m, self.ring) for m in self.columns]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def monomial_vector(self, point: Dict[str, complex]) -> np.ndarray:
        """X-hat evaluated at a point"""
        values = [complex(point[v]) for v in self.ring]
        return np.array([np.prod([values[k] ** e for k, e in enumerate(m)]) for m in self.columns],
                        dtype=complex)

    def summary(self) -> Dict[str, Any]:
        return {'d': self.degree, 'rows': self.shape[0], 'cols': self.shape[1],
                'nonzeros': self.nnz, 'cells': self.cells}


def build(system: PolySystem, d: int) -> MacaulayMatrix:
    """
    Degree-d Macaulay matrix of a system.

    Args:
        system: PolySystem
        d: degree, at least the largest generator degree

    Returns:
        MacaulayMatrix with rows grouped by generator, multipliers in column order

    Raises:
        DegreeTooSmallError: d below max d_i
    """
    degrees = system.degrees()
    if d < max(degrees):
        raise DegreeTooSmallError(f"Degree {d} is below the largest generator degree {max(degrees)}")
    n = len(system.ring)
    order = column_order(system)
    columns = monomials_up_to(n, d, order)
    where = monomial_index(columns)

    rows, cols, vals = [], [], []
    labels: List[Tuple[int, Monomial]] = []
    for i, (f, di) in enumerate(zip(system.generators, degrees)):
        terms = [(m, float(c)) for m, c in f.items()]
        for multiplier in monomials_up_to(n, d - di, order):
            r = len(labels)
            labels.append((i, multiplier))
            for m, c in terms:
                rows.append(r)
                cols.append(where[mono_mul(m, multiplier)])
                vals.append(c)
    matrix = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(len(labels), len(columns)))
    expected = dims(degrees, n, d)
    if matrix.shape != expected:
        raise MacaulayError(f"Macaulay matrix shape {matrix.shape} differs from {expected}")
    logger.debug(f"🔍 M({d}): {matrix.shape[0]}x{matrix.shape[1]}, {matrix.nnz} nonzeros")
    return MacaulayMatrix(d, system.ring, matrix, labels, columns)


@dataclass
class NullSpaceBasis:
    Z: np.ndarray
    threshold: float
    rank: int
    singular_values: np.ndarray

    @property
    def nullity(self) -> int:
        return self.Z.shape[1]


def nullspace(M: MacaulayMatrix, threshold: float = 1e-4) -> NullSpaceBasis:
    """Right singular vectors of M(d) with singular values below threshold"""
    started = time.perf_counter()
    ns = nullspace_svd(M.to_dense(), threshold)
    logger.info(f"📊 M({M.degree}) {M.shape[0]}x{M.shape[1]}: rank {ns.rank}, nullity {ns.nullity} "
                f"({time.perf_counter() - started:.2f}s)")
    return NullSpaceBasis(ns.basis, threshold, ns.rank, ns.singular_values)


@dataclass
class ShiftMatrixSet:
    """
    Row selections on the columns of M(d).

    `base` lists the shift-base monomials B; `select[g][j]` is the column of
    B[j] * g, `select['1'][j]` the column of B[j].
    """
    base: List[Monomial]
    select: Dict[str, np.ndarray]
    ncols: int

    def matrix(self, g: str) -> scipy.sparse.csr_matrix:
        idx = self.select[g]
        ones = np.ones(len(idx))
        return scipy.sparse.csr_matrix((ones, (np.arange(len(idx)), idx)), shape=(len(idx), self.ncols))

    def apply(self, g: str, Z: np.ndarray) -> np.ndarray:
        return Z[self.select[g]]


def shift_matrices(ring: Sequence[str], d: int, variables: Optional[Sequence[str]] = None,
                   base_degree: Optional[int] = None,
                   order: Optional[MonomialOrder] = None) -> ShiftMatrixSet:
    """
    S_1 and S_g for the columns of M(d).

    Args:
        ring: variable names
        d: Macaulay degree (d >= 1)
        variables: shift variables (all by default)
        base_degree: B = monomials of degree <= base_degree (d - 1 by default)
        order: column order

    Returns:
        ShiftMatrixSet
    """
    if d < 1:
        raise MacaulayError(f"Shift matrices need d >= 1, got {d}")
    n = len(ring)
    delta = d - 1 if base_degree is None else base_degree
    if not 0 <= delta <= d - 1:
        raise MacaulayError(f"Base degree {delta} outside [0, {d - 1}]")
    order = order or MonomialOrder('grlex', tuple(range(n)))
    columns = monomials_up_to(n, d, order)
    where = monomial_index(columns)
    base = monomials_up_to(n, delta, order)
    select = {'1': np.array([where[m] for m in base], dtype=int)}
    for g in variables or ring:
        unit = tuple(1 if v == g else 0 for v in ring)
        select[g] = np.array([where[mono_mul(m, unit)] for m in base], dtype=int)
    return ShiftMatrixSet(base, select, len(columns))


@dataclass
class MacaulayEigenproblem:
    """
    W_g = pinv(S_1 Z_c) (S_g Z_c) on the (compressed) null space.

    Shifts listed in `stable` add no rank to S_1 Z_c; the other variables are
    multiplication operators assembled from the common eigenvectors of the
    stable ones.
    """
    Zc: np.ndarray
    A: np.ndarray
    W: Dict[str, np.ndarray]
    base_degree: int
    rank_s1: int
    rank_stacked: int
    compressed: bool
    stable: List[str] = field(default_factory=list)


def _shift_ranks(Z: np.ndarray, ring: Sequence[str], d: int, delta: int, order: MonomialOrder,
                 rank_rtol: float) -> Tuple[int, Dict[str, int]]:
    S = shift_matrices(ring, d, None, delta, order)
    A = S.apply('1', Z)
    r1 = numerical_rank(A, rank_rtol)
    stacked = {g: numerical_rank(np.vstack([A, S.apply(g, Z)]), rank_rtol) for g in ring}
    return r1, stacked


def _choose_base_degree(Z: np.ndarray, ring: Sequence[str], d: int, pivot: str,
                        order: MonomialOrder, rank_rtol: float, forced: int = 0):
    """
    First base degree where no shift adds rank to S_1 Z.

    Without one, the first degree where the pivot shift is stable is taken with
    its stable shifts; failing that, the uncompressed base of degree <= d - 1.
    """
    candidates = [forced] if forced else list(range(1, d))
    partial = None
    for delta in candidates:
        r1, stacked = _shift_ranks(Z, ring, d, delta, order, rank_rtol)
        stable = [g for g in ring if stacked[g] == r1]
        logger.debug(f"🔍 base degree {delta}: rank(S1 Z)={r1}, stacked ranks {stacked}")
        if r1 == 0:
            continue
        if len(stable) == len(ring):
            return delta, r1, r1, True, stable
        if partial is None and pivot in stable:
            partial = (delta, r1, max(stacked.values()), True, stable)
    if partial is not None:
        logger.warning(f"⚠️ No base degree at d={d} is stable under every shift; "
                       f"degree {partial[0]} with shifts {partial[4]}")
        return partial
    delta = forced or d - 1
    r1, stacked = _shift_ranks(Z, ring, d, delta, order, rank_rtol)
    return delta, r1, max(stacked.values()), False, list(ring)


def _readout_operators(A: np.ndarray, W: Dict[str, np.ndarray], base: Sequence[Monomial],
                       ring: Sequence[str], variables: Sequence[str], pivot: str) -> Dict[str, np.ndarray]:
    """T diag(g(root)) T^-1, g(root) read from the degree-1 base entries of A t"""
    decomposition, _ = separating_eig(W, pivot if pivot in W else next(iter(W)))
    T = decomposition.vectors
    values = A @ T
    where = monomial_index(base)
    ones = values[where[(0,) * len(ring)]]
    ones = np.where(ones == 0, 1.0, ones)
    try:
        T_inv = np.linalg.inv(T)
    except np.linalg.LinAlgError as e:
        raise MacaulayError(f"Stable shifts do not diagonalize: {e}") from e
    out = {}
    for g in variables:
        row = values[where[tuple(1 if v == g else 0 for v in ring)]]
        out[g] = T @ np.diag(row / ones) @ T_inv
    return out


def eigenproblem(Z: np.ndarray, ring: Sequence[str], d: int, pivot: str, order: MonomialOrder,
                 rank_rtol: float = 1e-9, pinv_rtol: float = 1e-10,
                 shift_degree: int = 0) -> MacaulayEigenproblem:
    """
    Pseudoinverse eigenproblems for every variable.

    When a base degree with rank(S_1 Z) = rank([S_1 Z; S_g Z]) for every g (or at
    least for the pivot) exists, Z is compressed onto the row space of S_1 Z first;
    otherwise the literal base of degree <= d - 1 is used as is.

    Raises:
        RankDeficientShiftError: S_1 Z vanishes
    """
    delta, r1, r2, compressed, stable = _choose_base_degree(Z, ring, d, pivot, order, rank_rtol,
                                                            shift_degree)
    if r1 == 0:
        raise RankDeficientShiftError(f"S_1 Z has rank 0 at base degree {delta}")
    S = shift_matrices(ring, d, None, delta, order)
    Zc = Z
    if compressed:
        _, _, Vh = svd(S.apply('1', Z))
        Zc = Z @ Vh[:r1].conj().T
    A = S.apply('1', Zc)
    A_pinv = pinv(A, pinv_rtol)
    W = {g: A_pinv @ S.apply(g, Zc) for g in stable}
    unstable = [g for g in ring if g not in stable]
    if unstable:
        W.update(_readout_operators(A, W, S.base, ring, unstable, pivot))
    W = {g: W[g] for g in ring}
    if not compressed:
        logger.warning(f"⚠️ No base degree separates the affine part at d={d}; "
                       f"using degree <= {delta} without compression")
    return MacaulayEigenproblem(Zc, A, W, delta, r1, r2, compressed, stable)


@dataclass
class MacaulaySolveResult:
    degree: int
    matrix: MacaulayMatrix
    null: NullSpaceBasis
    problem: Optional[MacaulayEigenproblem]
    records: List[SolutionRecord]
    rejected: Dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0

    def summary(self) -> Dict[str, Any]:
        out = self.matrix.summary()
        out.update({
            'rank': self.null.rank,
            'nullity': self.null.nullity,
            'admissible': len(self.records),
            'rejected': dict(self.rejected),
            'seconds': round(self.seconds, 3),
        })
        if self.problem is not None:
            out.update({
                'base_degree': self.problem.base_degree,
                'rank_s1': self.problem.rank_s1,
                'rank_stacked': self.problem.rank_stacked,
                'compressed': self.problem.compressed,
                'stable_shifts': list(self.problem.stable),
            })
        return out


def solve(system: PolySystem, d: int, pivot: Optional[str] = None,
          macaulay_config: Optional[Dict[str, Any]] = None, objective=None,
          rc: Optional[float] = None, window: float = 1.2,
          real_tol: float = REAL_TOL) -> MacaulaySolveResult:
    """
    Affine roots from the degree-d Macaulay matrix.

    Each eigenvector t of W_pivot lifts to v = Z_c t. Columns whose monomial-1
    entry is negligible against the shift-base block are at infinity; the rest
    are scaled to v[1] = 1 and read off at the degree-1 monomials.

    Args:
        system: PolySystem
        d: Macaulay degree
        pivot: eigen-decomposed variable (first ring variable by default)
        macaulay_config: `macaulay` section overrides
        objective: EnergyPolynomial for the energy column, optional
        rc: expansion center for the validity window
        window: max |R - rc| of a valid root
        real_tol: relative imaginary-part threshold

    Returns:
        MacaulaySolveResult with the admissible roots
    """
    cfg = get_macaulay_config()
    cfg.update(macaulay_config or {})
    started = time.perf_counter()
    ring = system.ring
    pivot = pivot if pivot in ring else ring[0]
    order = column_order(system)

    M = build(system, d)
    null = nullspace(M, cfg['null_threshold'])
    result = MacaulaySolveResult(d, M, null, None, [])
    if null.nullity == 0:
        logger.warning(f"⚠️ M({d}) has a trivial null space; no roots")
        result.seconds = time.perf_counter() - started
        return result

    problem = eigenproblem(null.Z, ring, d, pivot, order, cfg['rank_rtol'], cfg['pinv_rtol'],
                           cfg['shift_degree'])
    result.problem = problem
    S = shift_matrices(ring, d, None, problem.base_degree, order)
    where = M.column_index()
    one = where[(0,) * len(ring)]
    linear = {v: where[tuple(1 if w == v else 0 for w in ring)] for v in ring}

    decomposition, _ = separating_eig(problem.W, pivot)
    roots, meta = [], []
    rejected = {'infinity': 0, 'eigen_residual': 0, 'generator_residual': 0}
    scales = system.coefficient_scales()
    for i in range(len(decomposition)):
        t = decomposition.vector(i)
        v = problem.Zc @ t
        base_norm = np.linalg.norm(S.apply('1', v))
        if base_norm == 0 or abs(v[one]) < cfg['infinity_tol'] * base_norm:
            rejected['infinity'] += 1
            continue
        v = v / v[one]
        s1v = S.apply('1', v)
        # S_g v = g(root) S_1 v for every stable shift
        eigen_residual = max(
            float(np.linalg.norm(s1v * v[linear[g]] - S.apply(g, v)) / max(1.0, np.linalg.norm(S.apply(g, v))))
            for g in problem.stable)
        if eigen_residual > cfg['eigen_residual_tol']:
            rejected['eigen_residual'] += 1
            continue
        values = {g: complex(v[linear[g]]) for g in ring}
        generator_residual = max(abs(f.evaluate(values)) / (scale or 1.0)
                                 for f, scale in zip(system.generators, scales))
        if generator_residual > cfg['residual_tol']:
            rejected['generator_residual'] += 1
            continue
        denom = np.vdot(t, t)
        rayleigh = {g: complex(np.vdot(t, problem.W[g] @ t) / denom) for g in ring}
        gap = max(abs(rayleigh[g] - values[g]) for g in ring)
        roots.append(values)
        meta.append({'degree': d, 'base_degree': problem.base_degree,
                     'eigen_residual': eigen_residual, 'rayleigh_gap': float(gap)})

    result.records = build_records(roots, system, 'macaulay', objective, rc, window, real_tol, meta)
    result.rejected = rejected
    result.seconds = time.perf_counter() - started
    logger.info(f"✅ Macaulay d={d}: {len(roots)} admissible of {len(decomposition)} "
                f"(rejected {rejected}) in {result.seconds:.2f}s")
    return result


@dataclass
class SweepRow:
    d: int
    rows: int
    cols: int
    nonzeros: int
    rank: int
    nullity: int
    base_degree: Optional[int]
    admissible: int
    best: Optional[SolutionRecord]
    real_roots: List[SolutionRecord] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        out = {k: getattr(self, k) for k in ('d', 'rows', 'cols', 'nonzeros', 'rank', 'nullity',
                                             'base_degree', 'admissible')}
        out['best'] = self.best.to_json() if self.best else None
        out['real_roots'] = [r.to_json() for r in self.real_roots]
        return out


def degree_sweep(system: PolySystem, d_list: Sequence[int], pivot: Optional[str] = None,
                 macaulay_config: Optional[Dict[str, Any]] = None, objective=None,
                 rc: Optional[float] = None, window: float = 1.2) -> List[SweepRow]:
    """build + nullspace + solve per degree; the best root is the valid real one closest to rc"""
    rows = []
    for d in d_list:
        logger.info(f"🚀 Macaulay sweep: d={d}")
        res = solve(system, d, pivot, macaulay_config, objective, rc, window)
        real = [r for r in res.records if r.is_real]
        if rc is not None:
            best = best_root(res.records, rc)
        else:
            best = real[0] if real else None
        rows.append(SweepRow(d, res.matrix.shape[0], res.matrix.shape[1], res.matrix.nnz,
                             res.null.rank, res.null.nullity,
                             res.problem.base_degree if res.problem else None,
                             len(res.records), best, real))
    return rows


def export_triplets(M: MacaulayMatrix, path: Union[str, Path]) -> Path:
    """Write M(d) as `row col value` lines"""
    from utils.report_utils import write_triplets

    coo = M.matrix.tocoo()
    return write_triplets(path, coo.row, coo.col, coo.data)


def sweep_to_csv(rows: Sequence[SweepRow], path: Union[str, Path], ring: Sequence[str]) -> Path:
    """Shape, rank and nullity columns plus the best root's real components"""
    from utils.report_utils import write_csv

    header = ['d', 'rows', 'cols', 'nonzeros', 'rank', 'nullity', 'base_degree', 'admissible'] + list(ring)
    body = []
    for r in rows:
        root = [complex(r.best.values[v]).real if r.best else '' for v in ring]
        body.append([r.d, r.rows, r.cols, r.nonzeros, r.rank, r.nullity,
                     '' if r.base_degree is None else r.base_degree, r.admissible] + root)
    return write_csv(path, header, body)
