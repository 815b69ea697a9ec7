"""
Polynomial text format
Reads and prints the `-25940329*R**3*e*x**2 + ...` notation, one polynomial per
`;`-terminated statement for systems
"""

import re
from decimal import Decimal
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .monomials import MonomialOrder
from .polynomial import Polynomial, PolynomialError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|\^|[-+*/()]))")
_STATEMENT_PREFIX = re.compile(r"^\s*[A-Za-z_][A-Za-z_0-9]*\s*=(?!=)")


class PolynomialParseError(PolynomialError):
    """Malformed polynomial text"""
    pass


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise PolynomialParseError(f"Unexpected character at {pos}: {text[pos:pos + 12]!r}")
        number, name, op = match.groups()
        if number is not None:
            tokens.append(('num', number))
        elif name is not None:
            tokens.append(('var', name))
        else:
            tokens.append(('op', '**' if op == '^' else op))
        pos = match.end()
    return tokens


def find_variables(text: str) -> List[str]:
    """Variable names in order of first appearance"""
    seen: List[str] = []
    for kind, value in _tokenize(_strip_statement(text)):
        if kind == 'var' and value not in seen:
            seen.append(value)
    return seen


def _strip_statement(text: str) -> str:
    text = text.strip().rstrip(';').strip()
    return _STATEMENT_PREFIX.sub('', text, count=1)


class _Parser:
    """Recursive descent: expr := ['+'|'-'] term (('+'|'-') term)*"""

    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.ring = tuple(ring)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value):
        kind, got = self.take()
        if got != value:
            raise PolynomialParseError(f"Expected {value!r}, got {got!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise PolynomialParseError("Empty polynomial")
        result = self.expr()
        if self.pos != len(self.tokens):
            raise PolynomialParseError(f"Trailing input at token {self.pos}: {self.peek()[1]!r}")
        return result

    def expr(self) -> Polynomial:
        sign = 1
        kind, value = self.peek()
        if value in ('+', '-'):
            self.take()
            sign = -1 if value == '-' else 1
        result = self.term() * sign
        while self.peek()[1] in ('+', '-'):
            _, op = self.take()
            t = self.term()
            result = result + t if op == '+' else result - t
        return result

    def term(self) -> Polynomial:
        result = self.power()
        while self.peek()[1] in ('*', '/'):
            _, op = self.take()
            rhs = self.power()
            if op == '*':
                result = result * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise PolynomialParseError("Division is only allowed by a non-zero constant")
                result = result * (1 / rhs.coefficient((0,) * len(self.ring)))
        return result

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[1] == '**':
            self.take()
            kind, value = self.take()
            if kind != 'num' or not value.isdigit():
                raise PolynomialParseError(f"Exponent must be a non-negative integer, got {value!r}")
            base = base ** int(value)
        return base

    def atom(self) -> Polynomial:
        kind, value = self.take()
        if kind == 'num':
            return Polynomial.constant(self.ring, Fraction(Decimal(value)))
        if kind == 'var':
            if value not in self.ring:
                raise PolynomialParseError(f"Variable {value!r} is not in ring {self.ring}")
            return Polynomial.variable(self.ring, value)
        if value == '(':
            inner = self.expr()
            self.expect(')')
            return inner
        if value == '-':
            return -self.power()
        raise PolynomialParseError(f"Unexpected token {value!r}")


def parse_polynomial(text: str, ring: Optional[Sequence[str]] = None) -> Polynomial:
    """
    Parse one polynomial.

    Accepts `*`, `**` (or `^`), `/` by constants, parentheses, decimal and
    rational literals, an optional `NAME=` prefix and a trailing `;`.

    Args:
        text: polynomial text
        ring: variable names; defaults to the order of first appearance

    Returns:
        Polynomial on `ring`
    """
    body = _strip_statement(text)
    if ring is None:
        ring = find_variables(body)
    return _Parser(_tokenize(body), ring).parse()


def parse_system(text: str, ring: Optional[Sequence[str]] = None) -> List[Polynomial]:
    """Parse `;`- or newline-separated polynomials sharing one ring; `#` starts a comment"""
    lines = [line.split('#', 1)[0] for line in text.splitlines()]
    statements = [s.strip() for s in ';'.join(lines).split(';') if s.strip()]
    if not statements:
        raise PolynomialParseError("No polynomials found")
    if ring is None:
        ring = []
        for s in statements:
            for v in find_variables(s):
                if v not in ring:
                    ring.append(v)
    return [parse_polynomial(s, ring) for s in statements]


def print_order(ring: Sequence[str]) -> MonomialOrder:
    """Lex order with variables sorted by name, the term layout of the printed objective"""
    return MonomialOrder.create('lex', ring, sorted(ring))


def _format_coefficient(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(m, ring: Sequence[str]) -> str:
    """`R**3*e*x**2` style, factors ordered by variable name; `1` for the constant"""
    factors = []
    for i in sorted(range(len(ring)), key=lambda i: ring[i]):
        e = m[i]
        if e == 1:
            factors.append(ring[i])
        elif e > 1:
            factors.append(f"{ring[i]}**{e}")
    return "*".join(factors) or "1"


def format_polynomial(p: Polynomial, order: Optional[MonomialOrder] = None) -> str:
    """Print in the `OBJ=` style: factors by name, terms descending, `**` powers"""
    if p.is_zero():
        return "0"
    ring = p.ring
    order = order or print_order(ring)
    pieces = []
    for m, c in p.sorted_terms(order):
        label = format_monomial(m, ring)
        magnitude = abs(c)
        if label == "1":
            body = _format_coefficient(magnitude)
        elif magnitude == 1:
            body = label
        else:
            body = _format_coefficient(magnitude) + "*" + label
        pieces.append(('-' if c < 0 else '+', body))
    first_sign, first_body = pieces[0]
    out = ('-' if first_sign == '-' else '') + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def format_system(polys: Sequence[Polynomial]) -> str:
    return '\n'.join(f"{format_polynomial(p)};" for p in polys) + '\n'
