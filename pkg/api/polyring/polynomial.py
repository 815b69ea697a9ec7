"""
Sparse exact polynomials
Polynomials over the rationals on a named ring of variables, with the arithmetic,
calculus and evaluation every solver route builds on
"""

import logging
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import MolRootsError
from .monomials import Monomial, MonomialOrder, mono_mul, total_degree

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


class PolynomialError(MolRootsError):
    """Base error for polynomial arithmetic"""
    pass


class RingMismatchError(PolynomialError):
    """Operands live on different variable rings"""
    pass


class UnknownVariableError(PolynomialError):
    """Variable is not part of the ring"""
    pass


class MissingAssignmentError(PolynomialError):
    """Evaluation point does not assign every ring variable"""
    pass


class ZeroPolynomialError(PolynomialError):
    """Operation is undefined on the zero polynomial"""
    pass


def to_fraction(value) -> Fraction:
    """Exact conversion of int, Fraction or float (binary value kept exactly)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"Cannot use {type(value).__name__} as an exact coefficient")


class Polynomial:
    """
    Immutable sparse polynomial: a ring (ordered variable names) and a map from
    exponent tuples to non-zero Fraction coefficients.
    """

    __slots__ = ('_ring', '_terms', '_hash')

    def __init__(self, ring: Sequence[str], terms: Optional[Mapping[Monomial, Scalar]] = None):
        self._ring = tuple(ring)
        n = len(self._ring)
        clean: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n:
                raise RingMismatchError(f"Monomial {m} does not fit ring {self._ring}")
            c = to_fraction(c)
            if c:
                clean[m] = c
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, ring: Sequence[str]) -> 'Polynomial':
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: Sequence[str], value) -> 'Polynomial':
        return cls(ring, {(0,) * len(ring): value})

    @classmethod
    def variable(cls, ring: Sequence[str], name: str) -> 'Polynomial':
        ring = tuple(ring)
        if name not in ring:
            raise UnknownVariableError(f"{name} is not in ring {ring}")
        exps = [0] * len(ring)
        exps[ring.index(name)] = 1
        return cls(ring, {tuple(exps): 1})

    @classmethod
    def monomial(cls, ring: Sequence[str], m: Monomial, coefficient=1) -> 'Polynomial':
        return cls(ring, {m: coefficient})

    @classmethod
    def _raw(cls, ring: Tuple[str, ...], terms: Dict[Monomial, Fraction]) -> 'Polynomial':
        # terms already clean
        p = cls.__new__(cls)
        p._ring = ring
        p._terms = terms
        p._hash = None
        return p

    # accessors

    @property
    def ring(self) -> Tuple[str, ...]:
        return self._ring

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> List[Monomial]:
        return list(self._terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(total_degree(m) == 0 for m in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(total_degree(m) for m in self._terms)

    def degree_in(self, var: str) -> int:
        i = self._index(var)
        return max((m[i] for m in self._terms), default=-1)

    def variables_used(self) -> List[str]:
        used = set()
        for m in self._terms:
            used.update(i for i, e in enumerate(m) if e)
        return [self._ring[i] for i in sorted(used)]

    def coefficient_scale(self) -> float:
        """Largest coefficient magnitude, the yardstick for residual checks"""
        return float(max((abs(c) for c in self._terms.values()), default=0))

    def _index(self, var: str) -> int:
        try:
            return self._ring.index(var)
        except ValueError:
            raise UnknownVariableError(f"{var} is not in ring {self._ring}") from None

    # arithmetic

    def _coerce(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            if other._ring != self._ring:
                raise RingMismatchError(f"Ring {other._ring} differs from {self._ring}")
            return other
        return Polynomial.constant(self._ring, to_fraction(other))

    def __add__(self, other) -> 'Polynomial':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial._raw(self._ring, terms)

    __radd__ = __add__

    def __neg__(self) -> 'Polynomial':
        return Polynomial._raw(self._ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> 'Polynomial':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'Polynomial':
        return (-self) + other

    def __mul__(self, other) -> 'Polynomial':
        if not isinstance(other, Polynomial):
            try:
                c = to_fraction(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Polynomial.zero(self._ring)
            return Polynomial._raw(self._ring, {m: v * c for m, v in self._terms.items()})
        other = self._coerce(other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial(self._ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> 'Polynomial':
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"Exponent must be a non-negative integer, got {k}")
        result = Polynomial.constant(self._ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, m: Monomial, c: Scalar) -> 'Polynomial':
        """Multiply by the single term c*m"""
        c = to_fraction(c)
        if not c:
            return Polynomial.zero(self._ring)
        return Polynomial._raw(self._ring, {mono_mul(k, m): v * c for k, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._ring == other._ring and self._terms == other._terms
        try:
            return self == Polynomial.constant(self._ring, to_fraction(other))
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._ring, frozenset(self._terms.items())))
        return self._hash

    # calculus and evaluation

    def differentiate(self, var: str) -> 'Polynomial':
        i = self._index(var)
        terms = {}
        for m, c in self._terms.items():
            if m[i]:
                dm = list(m)
                dm[i] -= 1
                terms[tuple(dm)] = c * m[i]
        return Polynomial._raw(self._ring, terms)

    def evaluate(self, point: Mapping[str, complex]) -> complex:
        """
        Evaluate at a complex point.

        Powers of every variable are built once and reused across terms.

        Raises:
            MissingAssignmentError: a ring variable has no value
        """
        missing = [v for v in self._ring if v not in point]
        if missing:
            raise MissingAssignmentError(f"No value for {missing}")
        values = [complex(point[v]) for v in self._ring]
        max_exp = [0] * len(self._ring)
        for m in self._terms:
            for i, e in enumerate(m):
                if e > max_exp[i]:
                    max_exp[i] = e
        powers = []
        for v, top in zip(values, max_exp):
            row = [1 + 0j]
            for _ in range(top):
                row.append(row[-1] * v)
            powers.append(row)
        total = 0j
        for m, c in self._terms.items():
            t = complex(float(c))
            for i, e in enumerate(m):
                if e:
                    t *= powers[i][e]
            total += t
        return total

    def substitute(self, mapping: Mapping[str, 'Polynomial']) -> 'Polynomial':
        """Replace variables by polynomials of the same ring"""
        for v in mapping:
            self._index(v)
        ring = self._ring
        result = Polynomial.zero(ring)
        cache: Dict[Tuple[int, int], Polynomial] = {}
        for m, c in self._terms.items():
            keep = [0] * len(ring)
            term = Polynomial.constant(ring, c)
            for i, e in enumerate(m):
                if not e:
                    continue
                name = ring[i]
                if name in mapping:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = mapping[name]._coerce_ring(ring) ** e
                    term = term * cache[key]
                else:
                    keep[i] = e
            result = result + term.mul_term(tuple(keep), 1)
        return result

    def _coerce_ring(self, ring: Tuple[str, ...]) -> 'Polynomial':
        if self._ring != ring:
            raise RingMismatchError(f"Ring {self._ring} differs from {ring}")
        return self

    def change_ring(self, ring: Sequence[str]) -> 'Polynomial':
        """Re-embed into a ring that contains every variable this polynomial uses"""
        ring = tuple(ring)
        used = self.variables_used()
        absent = [v for v in used if v not in ring]
        if absent:
            raise UnknownVariableError(f"{absent} missing from target ring {ring}")
        positions = [ring.index(v) if v in ring else None for v in self._ring]
        terms = {}
        for m, c in self._terms.items():
            exps = [0] * len(ring)
            for i, e in enumerate(m):
                if e:
                    exps[positions[i]] = e
            terms[tuple(exps)] = c
        return Polynomial._raw(ring, terms)

    # ordering

    def leading_term(self, order: MonomialOrder) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ZeroPolynomialError("Zero polynomial has no leading term")
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    def sorted_terms(self, order: MonomialOrder, descending: bool = True) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=descending)

    def monic(self, order: MonomialOrder) -> 'Polynomial':
        _, lc = self.leading_term(order)
        return self * (1 / lc)

    def clear_denominators(self) -> 'Polynomial':
        """Smallest integer multiple with coprime integer coefficients and positive content"""
        if not self._terms:
            return self
        den = 1
        for c in self._terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        ints = {m: int(c * den) for m, c in self._terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        return Polynomial._raw(self._ring, {m: Fraction(v // g) for m, v in ints.items()})

    # text

    def __str__(self) -> str:
        from .parser import format_polynomial
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self._ring}, '{self}')"


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def differentiate(p: Polynomial, var: str) -> Polynomial:
    return p.differentiate(var)


def evaluate(p: Polynomial, point: Mapping[str, complex]) -> complex:
    return p.evaluate(point)


def leading_term(p: Polynomial, order: MonomialOrder) -> Tuple[Monomial, Fraction]:
    return p.leading_term(order)


def common_ring(polys: Iterable[Polynomial]) -> Tuple[str, ...]:
    """Shared ring of a non-empty family; raises on mismatch"""
    rings = {p.ring for p in polys}
    if len(rings) != 1:
        raise RingMismatchError(f"Polynomials live on different rings: {sorted(rings)}")
    return rings.pop()
