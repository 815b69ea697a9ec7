"""
Groebner Route Service
Reduced Groebner basis of a polynomial system, quotient-ring monomial basis,
multiplication matrices and all roots as eigenvalues
"""

import logging
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..errors import MolRootsError
from ..polyring import Monomial, MonomialOrder, Polynomial, divides, format_monomial, mono_mul, parse_system
from ..polyring.polynomial import common_ring
from ..records import REAL_TOL, SolutionRecord, classify, rank_records
from ..spectra import commutator_defect, rayleigh_quotient, separating_eig, singular_values
from .buchberger import BuchbergerStats, buchberger, reduce_exact

logger = logging.getLogger(__name__)

DEFECT_COND_LIMIT = 1e10
DEFECT_RESIDUAL_TOL = 1e-6


class GroebnerError(MolRootsError):
    """Base error for the Groebner route"""
    pass


class PositiveDimensionalIdealError(GroebnerError):
    """Quotient ring is infinite-dimensional"""
    pass


class DefectivePivotError(GroebnerError):
    """Pivot multiplication matrix has no reliable eigenbasis"""

    def __init__(self, message: str, residuals: Optional[Sequence[float]] = None, condition: float = float('inf')):
        super().__init__(message)
        self.residuals = list(residuals or [])
        self.condition = condition


@dataclass
class PolySystem:
    """Generators f_1..f_t on one ring with the monomial order used to solve them"""
    generators: List[Polynomial]
    order: MonomialOrder

    def __post_init__(self):
        if not self.generators:
            raise GroebnerError("A polynomial system needs at least one generator")
        common_ring(self.generators)

    @property
    def ring(self):
        return self.generators[0].ring

    @classmethod
    def from_polynomials(cls, polys: Sequence[Polynomial], order_kind: str = 'degrevlex',
                         precedence: Optional[Sequence[str]] = None) -> 'PolySystem':
        polys = list(polys)
        if not polys:
            raise GroebnerError("A polynomial system needs at least one generator")
        ring = polys[0].ring
        if precedence is not None and set(precedence) != set(ring):
            precedence = None
        return cls(polys, MonomialOrder.create(order_kind, ring, precedence))

    @classmethod
    def from_text(cls, text: str, order_kind: str = 'degrevlex',
                  precedence: Optional[Sequence[str]] = None,
                  ring: Optional[Sequence[str]] = None) -> 'PolySystem':
        return cls.from_polynomials(parse_system(text, ring), order_kind, precedence)

    def degrees(self) -> List[int]:
        return [f.total_degree() for f in self.generators]

    def coefficient_scales(self) -> List[float]:
        return [f.coefficient_scale() for f in self.generators]

    def describe(self) -> str:
        return f"{len(self.generators)} generators of degrees {self.degrees()} in {self.order.describe(self.ring)}"


def stationarity_system(objective: Polynomial, order_kind: str = 'degrevlex',
                        precedence: Optional[Sequence[str]] = None) -> PolySystem:
    """The partial derivatives of an objective, one per ring variable in ring order"""
    partials = [objective.differentiate(v) for v in objective.ring]
    return PolySystem.from_polynomials(partials, order_kind, precedence)


@dataclass
class GroebnerBasis:
    generators: List[Polynomial]
    order: MonomialOrder
    stats: BuchbergerStats = field(default_factory=BuchbergerStats)

    @property
    def ring(self):
        return self.generators[0].ring

    def __len__(self) -> int:
        return len(self.generators)

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_term(self.order)[0] for g in self.generators]


@dataclass
class QuotientBasis:
    """Standard monomials b, ascending under the order"""
    monomials: List[Monomial]
    ring: Sequence[str]

    @property
    def dimension(self) -> int:
        return len(self.monomials)

    def index(self) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}

    def labels(self) -> List[str]:
        return [format_monomial(m, self.ring) for m in self.monomials]

    def evaluate(self, point: Dict[str, complex]) -> np.ndarray:
        values = [complex(point[v]) for v in self.ring]
        return np.array([np.prod([values[k] ** e for k, e in enumerate(m)]) for m in self.monomials],
                        dtype=complex)


@dataclass
class MultiplicationMatrixSet:
    """M_v per variable; row i of M_v holds the coordinates of NF(v * b_i)"""
    basis: QuotientBasis
    matrices: Dict[str, np.ndarray]

    def __getitem__(self, var: str) -> np.ndarray:
        return self.matrices[var]

    @property
    def variables(self) -> List[str]:
        return list(self.matrices)

    def commutation_defect(self) -> float:
        names = self.variables
        return max((commutator_defect(self.matrices[a], self.matrices[b])
                    for i, a in enumerate(names) for b in names[i + 1:]), default=0.0)

    def profile(self, var: str) -> Dict[str, Any]:
        M = self.matrices[var]
        full_rows = [i for i in range(M.shape[0]) if np.count_nonzero(M[i]) > 1]
        return {
            'max': float(M.max()) if M.size else 0.0,
            'min': float(M.min()) if M.size else 0.0,
            'full_rows': full_rows,
            'nonzeros': int(np.count_nonzero(M)),
        }


def groebner_basis(system: PolySystem) -> GroebnerBasis:
    """
    Reduced Groebner basis of the system's ideal under its order.

    Args:
        system: PolySystem

    Returns:
        GroebnerBasis with monic, inter-reduced generators
    """
    logger.info(f"🚀 Buchberger on {system.describe()}")
    stats = BuchbergerStats()
    generators = buchberger(system.generators, system.order, stats)
    if not generators:
        raise GroebnerError("System generates the zero ideal")
    return GroebnerBasis(generators, system.order, stats)


def quotient_basis(G: GroebnerBasis) -> QuotientBasis:
    """
    Monomials divisible by no leading monomial of G.

    Raises:
        PositiveDimensionalIdealError: some variable has no pure-power leading monomial
    """
    ring = G.ring
    n = len(ring)
    lms = G.leading_monomials()
    bounds = []
    for k in range(n):
        powers = [m[k] for m in lms if all(e == 0 for j, e in enumerate(m) if j != k) and m[k] > 0]
        if not powers:
            raise PositiveDimensionalIdealError(
                f"No leading monomial is a pure power of {ring[k]}; the ideal is not zero-dimensional")
        bounds.append(min(powers))
    standard = [m for m in product(*(range(b) for b in bounds))
                if not any(divides(lm, m) for lm in lms)]
    standard.sort(key=G.order.key)
    logger.info(f"📊 Quotient ring dimension {len(standard)}")
    return QuotientBasis(standard, ring)


def normal_form(p: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of p modulo G (supported on standard monomials)"""
    if p.ring != G.ring:
        p = p.change_ring(G.ring)
    return reduce_exact(p, G.generators, G.order)


def mult_matrices(G: GroebnerBasis, b: QuotientBasis,
                  variables: Optional[Sequence[str]] = None) -> MultiplicationMatrixSet:
    """
    Multiplication matrices for each variable.

    Args:
        G: Groebner basis of a zero-dimensional ideal
        b: its quotient basis
        variables: subset of the ring (all variables by default)

    Returns:
        MultiplicationMatrixSet with float entries from exact normal forms
    """
    ring = G.ring
    where = b.index()
    N = b.dimension
    matrices: Dict[str, np.ndarray] = {}
    for var in variables or ring:
        unit = tuple(1 if v == var else 0 for v in ring)
        M = np.zeros((N, N))
        for i, m in enumerate(b.monomials):
            shifted = mono_mul(m, unit)
            if shifted in where:
                M[i, where[shifted]] = 1.0
                continue
            remainder = normal_form(Polynomial.monomial(ring, shifted), G)
            for t, c in remainder.items():
                M[i, where[t]] = float(c)
        matrices[var] = M
    result = MultiplicationMatrixSet(b, matrices)
    logger.debug(f"🔍 Multiplication matrices {N}x{N}, commutation defect {result.commutation_defect():.2e}")
    return result


def residuals(system: PolySystem, records: Sequence[SolutionRecord], relative: bool = False) -> List[float]:
    """
    Max |f_k(root)| over the generators, per record.

    With relative=True each |f_k| is divided by the coefficient scale of f_k.
    """
    scales = system.coefficient_scales() if relative else [1.0] * len(system.generators)
    out = []
    for r in records:
        worst = 0.0
        for f, scale in zip(system.generators, scales):
            worst = max(worst, abs(f.evaluate(r.values)) / (scale or 1.0))
        out.append(float(worst))
    return out


def _record_sort_key(values: Dict[str, complex], ring: Sequence[str]):
    reversed_ring = list(reversed(ring))
    return (tuple(round(values[v].real, 9) for v in reversed_ring)
            + tuple(round(values[v].imag, 9) for v in reversed_ring))


def build_records(roots: Sequence[Dict[str, complex]], system: PolySystem, route: str,
                  objective=None, rc: Optional[float] = None, window: float = 1.2,
                  real_tol: float = REAL_TOL,
                  metadata: Optional[Sequence[Dict[str, Any]]] = None) -> List[SolutionRecord]:
    """
    Records from raw roots: energy, kind, validity and relative residual, sorted
    by real parts from the last ring variable backwards.
    """
    ring = system.ring
    metadata = list(metadata) if metadata is not None else [{} for _ in roots]
    paired = sorted(zip(roots, metadata), key=lambda item: _record_sort_key(item[0], ring))
    records = []
    for i, (values, meta) in enumerate(paired):
        kind = classify(values.values(), real_tol)
        energy = None
        if objective is not None and set(objective.polynomial.ring) <= set(values):
            energy = complex(objective.polynomial.evaluate(values)) / objective.scale
        if rc is not None and 'R' in values:
            valid = kind == 'real' and abs(values['R'].real - rc) <= window
        else:
            valid = kind == 'real'
        records.append(SolutionRecord(i, dict(values), energy, kind, valid, route=route, metadata=dict(meta)))
    for r, res in zip(records, residuals(system, records, relative=True)):
        r.residual = res
    return records


def solve_system(M: MultiplicationMatrixSet, pivot: str, system: PolySystem,
                 objective=None, rc: Optional[float] = None, window: float = 1.2,
                 real_tol: float = REAL_TOL) -> List[SolutionRecord]:
    """
    Roots from the eigenvectors of the pivot multiplication matrix.

    Each unit right eigenvector v of M_pivot is b evaluated at a root, so every
    coordinate is the Rayleigh quotient (v, M_i v) / (v, v).

    Args:
        M: multiplication matrices
        pivot: variable whose matrix is decomposed
        system: generators (for residuals)
        objective: EnergyPolynomial for the energy column, optional
        rc: expansion center for the validity window
        window: max |R - rc| of a valid root
        real_tol: relative imaginary-part threshold

    Returns:
        One SolutionRecord per eigenvector

    Raises:
        DefectivePivotError: eigenvectors are ill conditioned or residuals too large
    """
    if pivot not in M.matrices:
        raise GroebnerError(f"Pivot {pivot!r} is not a ring variable")
    decomposition, weights = separating_eig(M.matrices, pivot)
    s = singular_values(decomposition.vectors)
    condition = float(s[0] / s[-1]) if s.size and s[-1] > 0 else float('inf')
    if condition > DEFECT_COND_LIMIT or decomposition.max_residual > DEFECT_RESIDUAL_TOL:
        raise DefectivePivotError(
            f"M_{pivot} is defective or nearly so (eigenvector condition {condition:.2e}, "
            f"max residual {decomposition.max_residual:.2e})",
            residuals=decomposition.residuals.tolist(), condition=condition)

    roots = []
    for i in range(len(decomposition)):
        v = decomposition.vector(i)
        roots.append({var: rayleigh_quotient(M[var], v) for var in system.ring})
    records = build_records(roots, system, 'groebner', objective, rc, window, real_tol)
    logger.info(f"✅ {len(records)} roots from M_{pivot}: "
                f"{sum(r.is_real for r in records)} real, {sum(r.valid for r in records)} valid")
    return records


def best_root(records: Sequence[SolutionRecord], rc: float) -> Optional[SolutionRecord]:
    """Closest valid real root to rc (lowest energy on ties)"""
    ranked = rank_records(records, 'R', rc)
    if ranked and ranked[0].valid:
        return ranked[0]
    return None


@dataclass
class GroebnerSolveResult:
    system: PolySystem
    basis: GroebnerBasis
    quotient: QuotientBasis
    matrices: MultiplicationMatrixSet
    records: List[SolutionRecord]
    pivot: str
    seconds: float

    def summary(self) -> Dict[str, Any]:
        return groebner_summary(self.basis, self.quotient, self.matrices, self.seconds)


def solve_groebner(system: PolySystem, groebner_config: Dict[str, Any],
                   objective=None, rc: Optional[float] = None) -> GroebnerSolveResult:
    """Full Groebner route: basis, quotient, matrices and eigen-solve"""
    started = time.perf_counter()
    G = groebner_basis(system)
    b = quotient_basis(G)
    M = mult_matrices(G, b)
    pivot = groebner_config.get('pivot', 'x')
    if pivot not in system.ring:
        pivot = system.ring[0]
    records = solve_system(M, pivot, system, objective, rc,
                           groebner_config.get('validity_window', 1.2),
                           groebner_config.get('real_tol', REAL_TOL))
    tol = groebner_config.get('residual_tol', 1e-4)
    bad = [r.index for r in records if r.is_real and r.residual is not None and r.residual > tol]
    if bad:
        logger.warning(f"⚠️ Real roots {bad} exceed the relative residual {tol:g}")
    return GroebnerSolveResult(system, G, b, M, records, pivot, time.perf_counter() - started)


def groebner_summary(G: GroebnerBasis, b: QuotientBasis, M: MultiplicationMatrixSet,
                     seconds: Optional[float] = None) -> Dict[str, Any]:
    """Basis size, leading monomials, quotient dimension, pair statistics and matrix profiles"""
    return {
        'order': G.order.describe(G.ring),
        'basis_size': len(G),
        'leading_monomials': [format_monomial(m, G.ring) for m in G.leading_monomials()],
        'quotient_dimension': b.dimension,
        'quotient_basis': b.labels(),
        'pairs': G.stats.to_dict(),
        'commutation_defect': M.commutation_defect(),
        'profiles': {v: M.profile(v) for v in M.variables},
        'seconds': seconds,
    }
