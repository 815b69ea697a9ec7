"""
STO-3G basis and geometry
Contracted hydrogen 1s functions on the three vertices of an equilateral triangle
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from ..errors import MolRootsError
from .series import Jet, value_of

SITES = ('A', 'B', 'C')

# Unit-edge triangle; real positions are R times these
UNIT_POSITIONS = (
    (0.0, 0.0, 0.0),
    (1.0, 0.0, 0.0),
    (0.5, math.sqrt(3.0) / 2.0, 0.0),
)


class HartreeFockError(MolRootsError):
    """Base error for the Hartree-Fock model"""
    pass


class InvalidGeometryError(HartreeFockError):
    """Bond length must be positive"""
    pass


class NegativeArgumentError(HartreeFockError):
    """Boys function argument below zero"""
    pass


Point = Tuple[Any, Any, Any]


@dataclass(frozen=True)
class PrimitiveGaussian:
    """d * exp(-b |r - center|^2); center coordinates may be floats or jets"""
    exponent: float
    weight: float
    center: Point

    def __post_init__(self):
        if self.exponent <= 0:
            raise HartreeFockError(f"Gaussian exponent must be positive, got {self.exponent}")


@dataclass(frozen=True)
class Sto3gBasis:
    """Three-term contraction of one 1s function, scaled by zeta"""
    c: Tuple[float, float, float] = (0.444635, 0.535328, 0.154329)
    a: Tuple[float, float, float] = (0.109818, 0.405771, 2.22766)
    zeta: float = 1.24

    @classmethod
    def from_config(cls, hf_config: Optional[Dict[str, Any]] = None) -> 'Sto3gBasis':
        if not hf_config:
            return cls()
        return cls(tuple(float(v) for v in hf_config['c']),
                   tuple(float(v) for v in hf_config['a']),
                   float(hf_config['zeta']))

    def exponents(self) -> List[float]:
        return [a * self.zeta ** 2 for a in self.a]

    def weights(self) -> List[float]:
        return [c * (2.0 * b / math.pi) ** 0.75 for c, b in zip(self.c, self.exponents())]

    def primitives(self, center: Point) -> List[PrimitiveGaussian]:
        return [PrimitiveGaussian(b, d, center) for b, d in zip(self.exponents(), self.weights())]


@dataclass(frozen=True)
class Geometry:
    """Equilateral triangle with edge R (Bohr); R may be a float or a jet"""
    R: Any

    def __post_init__(self):
        if value_of(self.R) <= 0:
            raise InvalidGeometryError(f"Bond length must be positive, got {value_of(self.R)}")

    @classmethod
    def expansion(cls, rc: float, order: int) -> 'Geometry':
        """Geometry whose edge is the series variable R_c + h"""
        return cls(Jet.variable(rc, order))

    def centers(self) -> List[Point]:
        return [tuple(self.R * u for u in unit) for unit in UNIT_POSITIONS]

    def edge_lengths(self) -> List[float]:
        pts = [tuple(value_of(c) for c in p) for p in self.centers()]
        return [math.dist(pts[i], pts[j]) for i, j in ((0, 1), (1, 2), (2, 0))]

    def nuclear_repulsion(self):
        """Three unit charges, pairwise distance R"""
        return 3.0 / self.R
