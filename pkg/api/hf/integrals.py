"""
Gaussian integrals
Closed-form overlap, kinetic, nuclear-attraction and two-electron integrals over
s-type Gaussians, evaluated on floats or on Taylor jets in the bond length
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import erf, gamma, gammainc

from .basis import Geometry, NegativeArgumentError, Point, PrimitiveGaussian, Sto3gBasis
from .series import Jet, exp

logger = logging.getLogger(__name__)

SERIES_CUTOFF = 1e-3
SERIES_TERMS = 12


def boys_f0(t: float) -> float:
    """
    F0(t) = integral_0^1 exp(-t u^2) du.

    Raises:
        NegativeArgumentError: t < 0
    """
    if t < 0:
        raise NegativeArgumentError(f"Boys function argument must be non-negative, got {t}")
    if t < SERIES_CUTOFF:
        return boys(0, t)
    root = math.sqrt(t)
    return 0.5 * math.sqrt(math.pi / t) * float(erf(root))


def boys(m: int, t: float) -> float:
    """F_m(t) = integral_0^1 u^(2m) exp(-t u^2) du via the regularized lower incomplete gamma"""
    if t < 0:
        raise NegativeArgumentError(f"Boys function argument must be non-negative, got {t}")
    if t < SERIES_CUTOFF:
        total = 0.0
        term = 1.0
        for k in range(SERIES_TERMS):
            total += term / (2 * m + 2 * k + 1)
            term *= -t / (k + 1)
        return total
    s = m + 0.5
    return float(gamma(s) * gammainc(s, t) / (2.0 * t ** s))


def _boys0_any(t):
    """F0 on a float or a jet; dF_m/dt = -F_(m+1)"""
    if isinstance(t, Jet):
        t0 = t.value
        if t0 < 0:
            raise NegativeArgumentError(f"Boys function argument must be non-negative, got {t0}")
        derivatives = [(-1) ** k * boys(k, t0) for k in range(t.order + 1)]
        return t.compose(derivatives)
    return boys_f0(t)


def _dist2(p: Point, q: Point):
    total = 0.0
    for a, b in zip(p, q):
        d = a - b
        total = total + d * d
    return total


def _product_center(alpha: float, A: Point, beta: float, B: Point) -> Point:
    p = alpha + beta
    return tuple((alpha * a + beta * b) / p for a, b in zip(A, B))


def overlap(p: PrimitiveGaussian, q: PrimitiveGaussian):
    """Weighted overlap of two s primitives"""
    alpha, beta = p.exponent, q.exponent
    zeta = alpha + beta
    pre = p.weight * q.weight * (math.pi / zeta) ** 1.5
    return pre * exp(-alpha * beta / zeta * _dist2(p.center, q.center))


def kinetic(p: PrimitiveGaussian, q: PrimitiveGaussian):
    """Weighted (p| -1/2 nabla^2 |q)"""
    alpha, beta = p.exponent, q.exponent
    zeta = alpha + beta
    mu = alpha * beta / zeta
    ab2 = _dist2(p.center, q.center)
    pre = p.weight * q.weight * (math.pi / zeta) ** 1.5
    return pre * mu * (3.0 - 2.0 * mu * ab2) * exp(-mu * ab2)


def nuclear_attraction(p: PrimitiveGaussian, q: PrimitiveGaussian, center: Point, charge: float = 1.0):
    """Weighted (p| -Z/|r - C| |q)"""
    alpha, beta = p.exponent, q.exponent
    zeta = alpha + beta
    P = _product_center(alpha, p.center, beta, q.center)
    pre = -charge * p.weight * q.weight * 2.0 * math.pi / zeta
    return pre * exp(-alpha * beta / zeta * _dist2(p.center, q.center)) * _boys0_any(zeta * _dist2(P, center))


def two_electron(p: PrimitiveGaussian, q: PrimitiveGaussian,
                 r: PrimitiveGaussian, s: PrimitiveGaussian):
    """Weighted [pq|rs] in chemists' notation"""
    a, b, c, d = p.exponent, q.exponent, r.exponent, s.exponent
    zp, zq = a + b, c + d
    P = _product_center(a, p.center, b, q.center)
    Q = _product_center(c, r.center, d, s.center)
    pre = (p.weight * q.weight * r.weight * s.weight
           * 2.0 * math.pi ** 2.5 / (zp * zq * math.sqrt(zp + zq)))
    gauss = exp(-a * b / zp * _dist2(p.center, q.center) - c * d / zq * _dist2(r.center, s.center))
    return pre * gauss * _boys0_any(zp * zq / (zp + zq) * _dist2(P, Q))


def _contract(fn, *shells: List[PrimitiveGaussian], extra: Tuple = ()):
    total = 0.0
    for prims in itertools.product(*shells):
        total = total + fn(*prims, *extra)
    return total


def _unique_pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


@dataclass
class IntegralSet:
    """
    Integrals over the three contracted 1s functions.

    S[P,Q], K[P,Q], V[P,Q,U] (attraction to nucleus U) and ERI[P,Q,X,Y] = [PQ|XY].
    Entries are floats for a numeric bond length and jets for an expansion.
    """
    R: Any
    S: np.ndarray
    K: np.ndarray
    V: np.ndarray
    ERI: np.ndarray

    @classmethod
    def compute(cls, geometry: Geometry, basis: Optional[Sto3gBasis] = None) -> 'IntegralSet':
        basis = basis or Sto3gBasis()
        centers = geometry.centers()
        shells = [basis.primitives(c) for c in centers]
        n = len(shells)
        S = np.empty((n, n), dtype=object)
        K = np.empty((n, n), dtype=object)
        V = np.empty((n, n, n), dtype=object)
        ERI = np.empty((n, n, n, n), dtype=object)

        pairs = _unique_pairs(n)
        for i, j in pairs:
            S[i, j] = S[j, i] = _contract(overlap, shells[i], shells[j])
            K[i, j] = K[j, i] = _contract(kinetic, shells[i], shells[j])
            for u in range(n):
                V[i, j, u] = V[j, i, u] = _contract(nuclear_attraction, shells[i], shells[j],
                                                   extra=(centers[u],))

        # 8-fold permutation symmetry of [PQ|XY]
        for a, (i, j) in enumerate(pairs):
            for k, l in pairs[a:]:
                value = _contract(two_electron, shells[i], shells[j], shells[k], shells[l])
                for (p, q), (x, y) in (((i, j), (k, l)), ((k, l), (i, j))):
                    ERI[p, q, x, y] = ERI[q, p, x, y] = ERI[p, q, y, x] = ERI[q, p, y, x] = value

        return cls(geometry.R, S, K, V, ERI)

    @classmethod
    def at(cls, R: float, basis: Optional[Sto3gBasis] = None) -> 'IntegralSet':
        """Numeric integrals at bond length R"""
        ints = cls.compute(Geometry(float(R)), basis)
        return cls(ints.R, ints.S.astype(float), ints.K.astype(float),
                   ints.V.astype(float), ints.ERI.astype(float))

    @classmethod
    def expand(cls, rc: float, order: int, basis: Optional[Sto3gBasis] = None) -> 'IntegralSet':
        """Integrals as Taylor jets in h = R - rc"""
        return cls.compute(Geometry.expansion(rc, order), basis)

    def normalization_overlap(self) -> np.ndarray:
        """S with the self-overlaps fixed at exactly 1 (the contracted functions are normalized)"""
        S = self.S.copy()
        for i in range(S.shape[0]):
            S[i, i] = 1.0
        return S

    def core_hamiltonian(self) -> np.ndarray:
        n = self.S.shape[0]
        H = np.empty((n, n), dtype=self.S.dtype)
        for i in range(n):
            for j in range(n):
                H[i, j] = self.K[i, j] + sum(self.V[i, j, u] for u in range(n))
        return H

    def is_numeric(self) -> bool:
        return self.S.dtype != object

    def summary(self) -> Dict[str, float]:
        """Headline values at the center (float view), for logs and reports"""
        def v(x):
            return x.value if isinstance(x, Jet) else float(x)
        return {
            'S_AA': v(self.S[0, 0]),
            'S_AB': v(self.S[0, 1]),
            'K_AA': v(self.K[0, 0]),
            'V_AA_A': v(self.V[0, 0, 0]),
            'ERI_AAAA': v(self.ERI[0, 0, 0, 0]),
        }
