"""
Monomials and monomial orders
Exponent tuples, divisibility helpers and the three term orders used by the
solvers (lex, graded lex, degree reverse lex) with an explicit variable precedence
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]

ORDER_KINDS = ('lex', 'grlex', 'degrevlex')

_KIND_ALIASES = {
    'lex': 'lex',
    'lexicographic': 'lex',
    'grlex': 'grlex',
    'graded-lex': 'grlex',
    'graded-lexicographic': 'grlex',
    'degrevlex': 'degrevlex',
    'grevlex': 'degrevlex',
    'degree-reverse-lexicographic': 'degrevlex',
}


def total_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a"""
    return tuple(x - y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    """True when monomial a divides monomial b"""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def unit_monomial(nvars: int, index: Optional[int] = None) -> Monomial:
    """The constant monomial, or the variable at `index`"""
    exps = [0] * nvars
    if index is not None:
        exps[index] = 1
    return tuple(exps)


@dataclass(frozen=True)
class MonomialOrder:
    """
    Term order on exponent tuples of a fixed ring.

    `precedence` lists ring positions from the most significant variable to the
    least significant one; `key(m)` is larger for larger monomials.
    """
    kind: str
    precedence: Tuple[int, ...]

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind)
        if kind is None:
            raise ValueError(f"Unknown monomial order kind: {self.kind}")
        object.__setattr__(self, 'kind', kind)
        if sorted(self.precedence) != list(range(len(self.precedence))):
            raise ValueError(f"Precedence must be a permutation, got {self.precedence}")

    @classmethod
    def create(cls, kind: str, ring: Sequence[str],
               precedence: Optional[Sequence[str]] = None) -> 'MonomialOrder':
        """Build an order from variable names; default precedence is the ring order"""
        names = list(ring)
        if precedence is None:
            return cls(kind, tuple(range(len(names))))
        missing = [v for v in precedence if v not in names]
        if missing or len(precedence) != len(names):
            raise ValueError(f"Precedence {list(precedence)} does not match ring {names}")
        return cls(kind, tuple(names.index(v) for v in precedence))

    def key(self, m: Monomial) -> tuple:
        permuted = tuple(m[i] for i in self.precedence)
        if self.kind == 'lex':
            return permuted
        if self.kind == 'grlex':
            return (sum(permuted), permuted)
        # degrevlex: ties broken by the smaller exponent on the last variable
        return (sum(permuted), tuple(-e for e in reversed(permuted)))

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def max(self, monomials) -> Monomial:
        return max(monomials, key=self.key)

    def sort(self, monomials, descending: bool = False) -> List[Monomial]:
        return sorted(monomials, key=self.key, reverse=descending)

    def is_graded(self) -> bool:
        return self.kind != 'lex'

    def describe(self, ring: Sequence[str]) -> str:
        names = ' > '.join(ring[i] for i in self.precedence)
        return f"{self.kind} ({names})"


def monomials_of_degree(nvars: int, degree: int) -> Iterator[Monomial]:
    """All exponent tuples of exactly `degree` (stars and bars)"""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for bars in combinations(range(degree + nvars - 1), nvars - 1):
        exps = []
        prev = -1
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(degree + nvars - 2 - prev)
        yield tuple(exps)


def monomials_up_to(nvars: int, d: int, order: Optional[MonomialOrder] = None) -> List[Monomial]:
    """
    All C(d+n, n) monomials of degree <= d.

    Blocks of equal total degree appear in ascending degree; inside a block the
    larger monomial under `order` comes first (graded lex with the ring order
    when no order is given), which is the column layout of a Macaulay matrix.

    Args:
        nvars: number of ring variables
        d: maximal total degree
        order: order used inside each degree block

    Returns:
        List of exponent tuples
    """
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got {d}")
    order = order or MonomialOrder('grlex', tuple(range(nvars)))
    result: List[Monomial] = []
    for degree in range(d + 1):
        block = list(monomials_of_degree(nvars, degree))
        block.sort(key=order.key, reverse=True)
        result.extend(block)
    return result


def monomial_index(monomials: Sequence[Monomial]) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials)}
