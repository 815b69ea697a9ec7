"""
Buchberger's algorithm
Fraction-free pair reduction over the integers with the Gebauer-Moeller pair
criteria and normal selection; the final basis is returned monic over the rationals
"""

import heapq
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from ..polyring import Monomial, MonomialOrder, Polynomial, divides, mono_div, mono_lcm, mono_mul

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
PROGRESS_EVERY = 200


def flat_key(order: MonomialOrder) -> Callable[[Monomial], Tuple[int, ...]]:
    """Order key as a flat integer tuple, memoized (heap-friendly)"""
    cache: Dict[Monomial, Tuple[int, ...]] = {}

    def key(m: Monomial) -> Tuple[int, ...]:
        k = cache.get(m)
        if k is None:
            raw = order.key(m)
            if raw and isinstance(raw[-1], tuple):
                k = tuple(raw[:-1]) + raw[-1]
            else:
                k = tuple(raw)
            cache[m] = k
        return k
    return key


class IntPoly:
    """Primitive integer polynomial with cached leading term (positive leading coefficient)"""

    __slots__ = ('terms', 'lm', 'lc')

    def __init__(self, terms: Dict[Monomial, int], key):
        g = 0
        for v in terms.values():
            g = gcd(g, v)
        lm = max(terms, key=key)
        if terms[lm] < 0:
            g = -g
        self.terms = {m: v // g for m, v in terms.items()} if g not in (0, 1) else dict(terms)
        self.lm = lm
        self.lc = self.terms[lm]

    @classmethod
    def from_polynomial(cls, p: Polynomial, key) -> 'IntPoly':
        ints = p.clear_denominators()
        return cls({m: int(c) for m, c in ints.items()}, key)

    def to_monic(self, ring: Sequence[str]) -> Polynomial:
        lc = Fraction(self.lc)
        return Polynomial(ring, {m: Fraction(v) / lc for m, v in self.terms.items()})


@dataclass
class BuchbergerStats:
    pairs_considered: int = 0
    zero_reductions: int = 0
    basis_peak: int = 0
    reduction_steps: int = 0
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, float]:
        return dict(self.__dict__)


def spoly(f: IntPoly, g: IntPoly) -> Dict[Monomial, int]:
    """Fraction-free S-polynomial: (lc_g/k) (L/lm_f) f - (lc_f/k) (L/lm_g) g"""
    L = mono_lcm(f.lm, g.lm)
    k = gcd(f.lc, g.lc)
    a, b = g.lc // k, f.lc // k
    qf, qg = mono_div(L, f.lm), mono_div(L, g.lm)
    out: Dict[Monomial, int] = {}
    for m, v in f.terms.items():
        t = mono_mul(m, qf)
        out[t] = out.get(t, 0) + a * v
    for m, v in g.terms.items():
        t = mono_mul(m, qg)
        s = out.get(t, 0) - b * v
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def reduce(terms: Dict[Monomial, int], G: Sequence[IntPoly], key,
           stats: Optional[BuchbergerStats] = None) -> Dict[Monomial, int]:
    """
    Full fraction-free reduction of `terms` modulo G.

    Monomials are visited from the largest down; a visited monomial that no
    leading monomial divides stays irreducible because later steps only touch
    smaller monomials. The result is primitive.
    """
    f = dict(terms)
    heap = [(tuple(-x for x in key(m)), m) for m in f]
    heapq.heapify(heap)
    irreducible: Set[Monomial] = set()
    steps = 0
    while heap:
        _, m = heapq.heappop(heap)
        if m not in f or m in irreducible:
            continue
        reducer = next((g for g in G if divides(g.lm, m)), None)
        if reducer is None:
            irreducible.add(m)
            continue
        c = f[m]
        k = gcd(reducer.lc, c)
        scale_f, scale_g = reducer.lc // k, c // k
        if scale_f < 0:
            scale_f, scale_g = -scale_f, -scale_g
        if scale_f != 1:
            for t in f:
                f[t] *= scale_f
        q = mono_div(m, reducer.lm)
        for t, v in reducer.terms.items():
            tm = mono_mul(t, q)
            old = f.get(tm)
            new = (old or 0) - scale_g * v
            if new:
                f[tm] = new
                if old is None:
                    heapq.heappush(heap, (tuple(-x for x in key(tm)), tm))
            elif old is not None:
                del f[tm]
        steps += 1
        if steps % 16 == 0 and f:
            _remove_content(f)
    if f:
        _remove_content(f)
    if stats is not None:
        stats.reduction_steps += steps
    return f


def _remove_content(f: Dict[Monomial, int]) -> None:
    g = 0
    for v in f.values():
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for t in f:
            f[t] //= g


def select(G: Sequence[IntPoly], P: Set[Pair], key) -> Pair:
    """Normal strategy: the pair with the smallest lcm, ties by indices"""
    return min(P, key=lambda p: (key(mono_lcm(G[p[0]].lm, G[p[1]].lm)), p[1], p[0]))


def update(G: List[IntPoly], P: Set[Pair], f: IntPoly, key) -> Tuple[List[IntPoly], Set[Pair]]:
    """Add f to G and update the pair set with the Gebauer-Moeller criteria"""
    lmf = f.lm
    lmG = [g.lm for g in G]
    P = {p for p in P
         if (not divides(lmf, mono_lcm(lmG[p[0]], lmG[p[1]]))
             or mono_lcm(lmG[p[0]], lmG[p[1]]) == mono_lcm(lmG[p[0]], lmf)
             or mono_lcm(lmG[p[0]], lmG[p[1]]) == mono_lcm(lmG[p[1]], lmf))}
    lcm_groups: Dict[Monomial, List[int]] = {}
    for i, lm in enumerate(lmG):
        lcm_groups.setdefault(mono_lcm(lm, lmf), []).append(i)
    minimal: List[Monomial] = []
    for L in sorted(lcm_groups, key=key):
        if all(not divides(M, L) for M in minimal):
            minimal.append(L)
    new_pairs = set()
    for L in minimal:
        # product criterion: coprime leading monomials need no pair
        if not any(mono_lcm(lmG[i], lmf) == mono_mul(lmG[i], lmf) for i in lcm_groups[L]):
            new_pairs.add((min(lcm_groups[L]), len(G)))
    return G + [f], P | new_pairs


def minimalize(G: Sequence[IntPoly], key) -> List[IntPoly]:
    Gmin: List[IntPoly] = []
    for f in sorted(G, key=lambda h: key(h.lm)):
        if all(not divides(g.lm, f.lm) for g in Gmin):
            Gmin.append(f)
    return Gmin


def interreduce(G: Sequence[IntPoly], key, stats: Optional[BuchbergerStats] = None) -> List[IntPoly]:
    reduced = []
    for i, g in enumerate(G):
        others = list(G[:i]) + list(G[i + 1:])
        reduced.append(IntPoly(reduce(g.terms, others, key, stats), key))
    return reduced


def buchberger(F: Sequence[Polynomial], order: MonomialOrder,
               stats: Optional[BuchbergerStats] = None) -> List[Polynomial]:
    """
    Reduced Groebner basis of the ideal generated by F.

    Args:
        F: generators on a common ring
        order: monomial order
        stats: optional counters filled in place

    Returns:
        Monic, inter-reduced generators sorted by leading monomial (ascending)
    """
    stats = stats if stats is not None else BuchbergerStats()
    started = time.perf_counter()
    nonzero = [f for f in F if not f.is_zero()]
    if not nonzero:
        return []
    ring = nonzero[0].ring
    key = flat_key(order)

    G: List[IntPoly] = []
    P: Set[Pair] = set()
    for f in nonzero:
        G, P = update(G, P, IntPoly.from_polynomial(f, key), key)

    while P:
        i, j = select(G, P, key)
        P.remove((i, j))
        stats.pairs_considered += 1
        r = reduce(spoly(G[i], G[j]), G, key, stats)
        if r:
            G, P = update(G, P, IntPoly(r, key), key)
            stats.basis_peak = max(stats.basis_peak, len(G))
        else:
            stats.zero_reductions += 1
        if stats.pairs_considered % PROGRESS_EVERY == 0:
            logger.info(f"📊 Buchberger: {stats.pairs_considered} pairs, basis {len(G)}, queue {len(P)}")

    basis = interreduce(minimalize(G, key), key, stats)
    basis.sort(key=lambda g: key(g.lm))
    stats.seconds = time.perf_counter() - started
    logger.info(f"✅ Groebner basis: {len(basis)} generators after {stats.pairs_considered} pairs "
                f"({stats.zero_reductions} zero) in {stats.seconds:.2f}s")
    return [g.to_monic(ring) for g in basis]


def reduce_exact(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Remainder of p modulo monic polynomials, over the rationals"""
    key = flat_key(order)
    reducers = [(g.leading_term(order)[0], g.terms) for g in basis]
    f: Dict[Monomial, Fraction] = p.terms
    heap = [(tuple(-x for x in key(m)), m) for m in f]
    heapq.heapify(heap)
    irreducible: Set[Monomial] = set()
    while heap:
        _, m = heapq.heappop(heap)
        if m not in f or m in irreducible:
            continue
        hit = next(((lm, terms) for lm, terms in reducers if divides(lm, m)), None)
        if hit is None:
            irreducible.add(m)
            continue
        lm, terms = hit
        c = f[m]
        q = mono_div(m, lm)
        for t, v in terms.items():
            tm = mono_mul(t, q)
            old = f.get(tm)
            new = (old or 0) - c * v
            if new:
                f[tm] = new
                if old is None:
                    heapq.heappush(heap, (tuple(-x for x in key(tm)), tm))
            elif old is not None:
                del f[tm]
    return Polynomial(p.ring, f)
