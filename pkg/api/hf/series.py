"""
Truncated Taylor series
Power series in h = R - R_c carried through the integral formulas so every
integral comes with its analytic derivatives at the expansion center
"""

import math
from typing import Sequence

import numpy as np


class Jet:
    """
    f(R_c + h) = c[0] + c[1] h + ... + c[order] h**order, truncated.

    Supports the arithmetic the integral formulas use (+, -, *, / and the
    composition helpers) with floats and other jets on either side.
    """

    __slots__ = ('coeffs',)
    __array_ufunc__ = None

    def __init__(self, coeffs: Sequence[float]):
        self.coeffs = np.array(coeffs, dtype=float)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise ValueError("Jet needs at least the constant coefficient")

    @classmethod
    def variable(cls, center: float, order: int) -> 'Jet':
        c = np.zeros(order + 1)
        c[0] = center
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value: float, order: int) -> 'Jet':
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def derivative(self, k: int) -> float:
        """k-th derivative at the center"""
        if k > self.order:
            return 0.0
        return float(self.coeffs[k] * math.factorial(k))

    def _lift(self, other) -> 'Jet':
        if isinstance(other, Jet):
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet.constant(float(other), self.order)
        raise TypeError(f"Cannot combine Jet with {type(other).__name__}")

    def _align(self, other: 'Jet'):
        n = min(self.coeffs.size, other.coeffs.size)
        return self.coeffs[:n], other.coeffs[:n]

    def __add__(self, other) -> 'Jet':
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        a, b = self._align(other)
        return Jet(a + b)

    __radd__ = __add__

    def __neg__(self) -> 'Jet':
        return Jet(-self.coeffs)

    def __sub__(self, other) -> 'Jet':
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        a, b = self._align(other)
        return Jet(a - b)

    def __rsub__(self, other) -> 'Jet':
        return (-self) + other

    def __mul__(self, other) -> 'Jet':
        if not isinstance(other, Jet):
            if isinstance(other, (int, float, np.floating, np.integer)):
                return Jet(self.coeffs * float(other))
            return NotImplemented
        a, b = self._align(other)
        return Jet(np.convolve(a, b)[:a.size])

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'Jet':
        if isinstance(other, Jet):
            return self * other.reciprocal()
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet(self.coeffs / float(other))
        return NotImplemented

    def __rtruediv__(self, other) -> 'Jet':
        return self.reciprocal() * other

    def __pow__(self, k: int) -> 'Jet':
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"Jet power must be a non-negative integer, got {k}")
        result = Jet.constant(1.0, self.order)
        for _ in range(k):
            result = result * self
        return result

    def reciprocal(self) -> 'Jet':
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("Reciprocal of a jet with zero constant term")
        c = np.zeros_like(a)
        c[0] = 1.0 / a[0]
        for k in range(1, a.size):
            c[k] = -np.dot(a[1:k + 1], c[k - 1::-1][:k]) / a[0]
        return Jet(c)

    def exp(self) -> 'Jet':
        a = self.coeffs
        b = np.zeros_like(a)
        b[0] = math.exp(a[0])
        for k in range(1, a.size):
            j = np.arange(1, k + 1)
            b[k] = np.dot(j * a[1:k + 1], b[k - 1::-1][:k]) / k
        return Jet(b)

    def compose(self, derivatives: Sequence[float]) -> 'Jet':
        """f(self) from f and its derivatives at self.value: sum_k f^(k)/k! (self - value)^k"""
        delta = Jet(np.concatenate(([0.0], self.coeffs[1:])))
        result = Jet.constant(0.0, self.order)
        power = Jet.constant(1.0, self.order)
        for k in range(self.order + 1):
            if k < len(derivatives):
                result = result + power * (derivatives[k] / math.factorial(k))
            power = power * delta
        return result

    def __repr__(self) -> str:
        return f"Jet({self.coeffs.tolist()})"


def exp(x):
    """exp on floats or jets"""
    return x.exp() if isinstance(x, Jet) else math.exp(x)


def value_of(x) -> float:
    return x.value if isinstance(x, Jet) else float(x)
