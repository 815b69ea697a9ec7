"""
Hartree-Fock Objective Service
Builds the H3+ restricted Hartree-Fock total energy as a polynomial, expands it
around R_c, rationalizes the coefficients and evaluates the energy curves
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..config.config_loader import config_loader
from ..polyring import Polynomial, format_monomial, parse_polynomial
from ..polyring.polynomial import to_fraction
from .basis import Geometry, HartreeFockError, InvalidGeometryError, Sto3gBasis
from .integrals import IntegralSet
from .series import Jet

logger = logging.getLogger(__name__)

ENERGY_RING = ('x', 'y', 'z', 'e')
OBJECTIVE_RING = ('x', 'e', 'R')
ROUNDING_MODES = ('half_away', 'floor')

# (x, e) exponents of the five terms of the energy with x = y = z
X4, X2, EX2, E1, ONE = (4, 0), (2, 0), (2, 1), (0, 1), (0, 0)


@dataclass
class EnergyPolynomial:
    """Objective in (x, e, R) with the expansion that produced it"""
    polynomial: Polynomial
    rc: float
    order: int
    scale_exp: int
    rounding: str
    source: str = 'generated'

    @property
    def scale(self) -> int:
        return 10 ** self.scale_exp

    def value(self, x: complex, e: complex, R: complex) -> complex:
        """Energy in Hartree (the polynomial divided by 10**scale_exp)"""
        return self.polynomial.evaluate({'x': x, 'e': e, 'R': R}) / self.scale

    def constrained_energy(self, R: float) -> float:
        return constrained_energy(self.polynomial, R, self.scale)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'polynomial': str(self.polynomial),
            'terms': len(self.polynomial),
            'rc': self.rc,
            'order': self.order,
            'scale_exp': self.scale_exp,
            'rounding': self.rounding,
            'source': self.source,
        }


def _require_positive(R: float) -> None:
    if R <= 0:
        raise InvalidGeometryError(f"Bond length must be positive, got {R}")


def energy_polynomial(integrals: IntegralSet) -> Polynomial:
    """
    E_tot for a general orbital x*phi_A + y*phi_B + z*phi_C with multiplier e.

    E = 2 sum c_P c_Q H_PQ + sum c_P c_Q c_X c_Y [PQ|XY] - 2e (sum c_P c_Q S_PQ - 1) + 3/R,
    every float integral taken over exactly as a Fraction.

    Args:
        integrals: numeric IntegralSet

    Returns:
        Polynomial on the ring (x, y, z, e)
    """
    if not integrals.is_numeric():
        raise HartreeFockError("energy_polynomial needs numeric integrals; use taylor_objective for jets")
    n = 3
    terms: Dict[Tuple[int, ...], Fraction] = {}

    def add(sites, e_power, value):
        exps = [0, 0, 0, e_power]
        for s in sites:
            exps[s] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + to_fraction(float(value))

    H = integrals.core_hamiltonian()
    S = integrals.normalization_overlap()
    for P in range(n):
        for Q in range(n):
            add((P, Q), 0, 2.0 * H[P, Q])
            add((P, Q), 1, -2.0 * S[P, Q])
            for X in range(n):
                for Y in range(n):
                    add((P, Q, X, Y), 0, integrals.ERI[P, Q, X, Y])
    add((), 1, 2.0)
    add((), 0, 3.0 / float(integrals.R))
    return Polynomial(ENERGY_RING, terms)


def total_energy(R: float, basis: Optional[Sto3gBasis] = None) -> Polynomial:
    """Energy polynomial in (x, e) at bond length R with x = y = z"""
    _require_positive(R)
    general = energy_polynomial(IntegralSet.at(R, basis))
    x = Polynomial.variable(ENERGY_RING, 'x')
    return general.substitute({'y': x, 'z': x}).change_ring(('x', 'e'))


def symmetric_coefficients(integrals: IntegralSet) -> Dict[Tuple[int, int], Any]:
    """The five (x, e) coefficients with x = y = z; floats or jets"""
    S_sum = sum(integrals.normalization_overlap().flat)
    H_sum = sum(integrals.core_hamiltonian().flat)
    ERI_sum = sum(integrals.ERI.flat)
    return {
        X4: ERI_sum,
        X2: 2.0 * H_sum,
        EX2: -2.0 * S_sum,
        E1: 2.0,
        ONE: Geometry(integrals.R).nuclear_repulsion(),
    }


def _reexpand(coeffs: Sequence[float], rc: Fraction) -> Dict[int, Fraction]:
    """sum_k a_k (R - rc)^k as exact coefficients of R^j"""
    out: Dict[int, Fraction] = {}
    for k, a in enumerate(coeffs):
        a = to_fraction(float(a))
        if not a:
            continue
        for j in range(k + 1):
            out[j] = out.get(j, Fraction(0)) + a * math.comb(k, j) * (-rc) ** (k - j)
    return out


def taylor_objective(rc: float, order: int, basis: Optional[Sto3gBasis] = None) -> Polynomial:
    """
    Unscaled Taylor expansion of the energy around rc, re-expressed in powers of R.

    Args:
        rc: expansion center (Bohr)
        order: highest power of R - rc kept
        basis: STO-3G parameters

    Returns:
        Polynomial on (x, e, R) with exact rational coefficients
    """
    _require_positive(rc)
    if order < 0:
        raise HartreeFockError(f"Expansion order must be non-negative, got {order}")
    ints = IntegralSet.expand(rc, order, basis)
    rc_exact = Fraction(str(rc))
    terms: Dict[Tuple[int, int, int], Fraction] = {}
    for (i, j), coeff in symmetric_coefficients(ints).items():
        series = coeff.coeffs if isinstance(coeff, Jet) else [coeff]
        for power, value in _reexpand(series, rc_exact).items():
            terms[(i, j, power)] = terms.get((i, j, power), Fraction(0)) + value
    return Polynomial(OBJECTIVE_RING, terms)


def _round(value: Fraction, mode: str) -> int:
    if mode == 'floor':
        return math.floor(value)
    sign = -1 if value < 0 else 1
    return sign * math.floor(abs(value) + Fraction(1, 2))


def expand_and_rationalize(rc: float = 1.8, order: int = 3, scale_exp: int = 8,
                           rounding: str = 'half_away',
                           basis: Optional[Sto3gBasis] = None) -> Polynomial:
    """
    Integer-coefficient objective: Taylor expansion times 10**scale_exp, rounded.

    With scale_exp = 0 no rounding is applied and the exact Taylor coefficients
    are returned.
    """
    if rounding not in ROUNDING_MODES:
        raise HartreeFockError(f"Unknown rounding mode: {rounding}")
    if scale_exp < 0:
        raise HartreeFockError(f"scale_exp must be non-negative, got {scale_exp}")
    taylor = taylor_objective(rc, order, basis)
    if scale_exp == 0:
        return taylor
    scale = 10 ** scale_exp
    return Polynomial(OBJECTIVE_RING, {m: _round(c * scale, rounding) for m, c in taylor.items()})


def generate_objective(hf_config: Dict[str, Any]) -> EnergyPolynomial:
    """Objective from an `hf` configuration section"""
    basis = Sto3gBasis.from_config(hf_config)
    logger.info(f"🚀 Expanding H3+ energy at R_c={hf_config['rc']} "
                f"(order {hf_config['order']}, n={hf_config['scale_exp']}, {hf_config['rounding']})")
    poly = expand_and_rationalize(hf_config['rc'], hf_config['order'], hf_config['scale_exp'],
                                  hf_config['rounding'], basis)
    logger.info(f"✅ Objective has {len(poly)} terms")
    return EnergyPolynomial(poly, hf_config['rc'], hf_config['order'], hf_config['scale_exp'],
                            hf_config['rounding'])


def reference_objective() -> EnergyPolynomial:
    """The printed objective shipped with the reference data"""
    table = config_loader.load_table('OBJ')
    poly = parse_polynomial(table['polynomial'], table['ring'])
    return EnergyPolynomial(poly, 1.8, 3, 8, 'printed', source='reference')


@dataclass
class ObjectiveDiff:
    """Term-by-term comparison of two objectives"""
    rows: List[Dict[str, Any]] = field(default_factory=list)
    missing: List[str] = field(default_factory=list)
    extra: List[str] = field(default_factory=list)
    max_abs_diff: float = 0.0
    tolerance: float = 1.0

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra and self.max_abs_diff <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'max_abs_diff': self.max_abs_diff,
            'tolerance': self.tolerance,
            'missing': self.missing,
            'extra': self.extra,
            'rows': self.rows,
        }


def compare_objective(generated: Polynomial, reference: Polynomial, tolerance: float = 1.0) -> ObjectiveDiff:
    """Diff on the union of monomials; a term present on one side only is reported"""
    if generated.ring != reference.ring:
        generated = generated.change_ring(reference.ring)
    ring = reference.ring
    diff = ObjectiveDiff(tolerance=tolerance)
    for m in sorted(set(generated.monomials()) | set(reference.monomials()), reverse=True):
        label = format_monomial(m, ring)
        g, r = generated.coefficient(m), reference.coefficient(m)
        if not r:
            diff.extra.append(label)
        elif not g:
            diff.missing.append(label)
        delta = float(g - r)
        diff.max_abs_diff = max(diff.max_abs_diff, abs(delta))
        diff.rows.append({'term': label, 'generated': float(g), 'reference': float(r), 'diff': delta})
    return diff


def exact_energy(R: float, basis: Optional[Sto3gBasis] = None) -> float:
    """Energy on the normalization surface x^2 = 1 / sum(S)"""
    _require_positive(R)
    ints = IntegralSet.at(R, basis)
    x2 = 1.0 / ints.normalization_overlap().sum()
    return float(2.0 * x2 * ints.core_hamiltonian().sum() + x2 ** 2 * ints.ERI.sum() + 3.0 / R)


def constrained_energy(poly: Polynomial, R: float, scale: float = 1.0) -> float:
    """
    Evaluate an (x, e, R) objective on its own constraint surface.

    x^2 comes from d/de = 0, i.e. c_ex2(R) x^2 + c_e(R) = 0, and the e-free part
    is evaluated there.
    """
    by_xe: Dict[Tuple[int, int], float] = {}
    ix, ie, iR = (poly.ring.index(v) for v in OBJECTIVE_RING)
    for m, c in poly.items():
        key = (m[ix], m[ie])
        by_xe[key] = by_xe.get(key, 0.0) + float(c) * R ** m[iR]
    c_ex2 = by_xe.get(EX2, 0.0)
    if c_ex2 == 0:
        raise HartreeFockError(f"Constraint coefficient vanishes at R={R}")
    x2 = -by_xe.get(E1, 0.0) / c_ex2
    energy = by_xe.get(X4, 0.0) * x2 ** 2 + by_xe.get(X2, 0.0) * x2 + by_xe.get(ONE, 0.0)
    return energy / scale


def energy_grid(r_min: float, r_max: float, points: int) -> np.ndarray:
    if r_min <= 0 or r_max <= r_min or points < 2:
        raise HartreeFockError(f"Invalid grid: [{r_min}, {r_max}] with {points} points")
    return np.linspace(r_min, r_max, points)


def exact_energy_curve(grid: Sequence[float], basis: Optional[Sto3gBasis] = None) -> List[Tuple[float, float]]:
    return [(float(R), exact_energy(float(R), basis)) for R in grid]


def taylor_energy_curve(grid: Sequence[float], rc: float = 1.8, order: int = 3,
                        basis: Optional[Sto3gBasis] = None) -> List[Tuple[float, float]]:
    poly = taylor_objective(rc, order, basis)
    return [(float(R), constrained_energy(poly, float(R))) for R in grid]


def rationalized_energy_curve(grid: Sequence[float],
                              objective: EnergyPolynomial) -> List[Tuple[float, float]]:
    return [(float(R), objective.constrained_energy(float(R))) for R in grid]


def energy_curves(grid: Sequence[float], hf_config: Dict[str, Any]) -> List[Dict[str, float]]:
    """
    Rows (R, E_exact, E_taylor, E_rationalized) on a bond-length grid.

    Args:
        grid: bond lengths in Bohr
        hf_config: `hf` configuration section

    Returns:
        One dict per grid point
    """
    basis = Sto3gBasis.from_config(hf_config)
    objective = generate_objective(hf_config)
    taylor = taylor_objective(hf_config['rc'], hf_config['order'], basis)
    rows = []
    for R in grid:
        R = float(R)
        rows.append({
            'R': R,
            'E_exact': exact_energy(R, basis),
            'E_taylor': constrained_energy(taylor, R),
            'E_rationalized': objective.constrained_energy(R),
        })
    logger.info(f"📊 Energy curves on {len(rows)} points in [{rows[0]['R']:.3f}, {rows[-1]['R']:.3f}]")
    return rows


def exact_minimum(r_min: float = 1.5, r_max: float = 3.0,
                  basis: Optional[Sto3gBasis] = None) -> Tuple[float, float]:
    """Bond length and energy of the exact-curve minimum (bounded Brent search)"""
    result = minimize_scalar(lambda R: exact_energy(R, basis), bounds=(r_min, r_max),
                             method='bounded', options={'xatol': 1e-6})
    return float(result.x), float(result.fun)
