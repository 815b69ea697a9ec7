"""
Solution records
One root of a polynomial system with its energy, classification and validity,
plus the JSON/CSV/table renderings and the canonical multiset comparison used
against reference tables
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

REAL_TOL = 1e-6


@dataclass
class SolutionRecord:
    """A root: per-variable complex values, total energy, real/complex kind, validity flag"""
    index: int
    values: Dict[str, complex]
    energy: Optional[complex] = None
    kind: str = 'real'
    valid: bool = False
    residual: Optional[float] = None
    route: str = 'groebner'
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, var: str) -> complex:
        return self.values[var]

    @property
    def is_real(self) -> bool:
        return self.kind == 'real'

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'index': self.index}
        for var, value in self.values.items():
            out[var] = _complex_json(value)
        out['energy'] = _complex_json(self.energy) if self.energy is not None else None
        out['kind'] = self.kind
        out['valid'] = self.valid
        out['residual'] = self.residual
        out['route'] = self.route
        if self.metadata:
            out['metadata'] = self.metadata
        return out

    @classmethod
    def from_json(cls, data: Dict[str, Any], ring: Optional[Sequence[str]] = None) -> 'SolutionRecord':
        reserved = {'index', 'energy', 'kind', 'valid', 'residual', 'route', 'metadata'}
        names = list(ring) if ring else [k for k in data if k not in reserved]
        energy = data.get('energy')
        return cls(
            index=int(data['index']),
            values={v: _complex_from_json(data[v]) for v in names},
            energy=_complex_from_json(energy) if energy is not None else None,
            kind=data.get('kind', 'real'),
            valid=bool(data.get('valid', False)),
            residual=data.get('residual'),
            route=data.get('route', 'groebner'),
            metadata=dict(data.get('metadata', {})),
        )


def _complex_json(z: complex) -> Dict[str, float]:
    z = complex(z)
    return {'re': z.real, 'im': z.imag}


def _complex_from_json(data) -> complex:
    if isinstance(data, dict):
        return complex(data['re'], data['im'])
    if isinstance(data, (list, tuple)):
        return complex(data[0], data[1])
    return complex(data)


def classify(values: Iterable[complex], tol: float = REAL_TOL) -> str:
    """'real' when every |Im| is below tol times the largest component magnitude"""
    values = [complex(v) for v in values]
    scale = max([abs(v) for v in values] + [1e-300])
    return 'real' if all(abs(v.imag) < tol * scale for v in values) else 'complex'


def records_to_json(records: Sequence[SolutionRecord]) -> List[Dict[str, Any]]:
    return [r.to_json() for r in records]


def records_from_json(data: Sequence[Dict[str, Any]],
                      ring: Optional[Sequence[str]] = None) -> List[SolutionRecord]:
    return [SolutionRecord.from_json(d, ring) for d in data]


def _fmt(z: Optional[complex], width: int = 10) -> str:
    if z is None:
        return '-'.rjust(2 * width + 2)
    z = complex(z)
    return f"{z.real:>{width}.6f}{z.imag:+{width}.6f}j"


def render_table(records: Sequence[SolutionRecord], ring: Sequence[str]) -> str:
    """Aligned text table: index, one complex column per variable, energy, kind, validity"""
    header = ['  i'] + [v.center(23) for v in ring] + ['E'.center(23), 'kind'.ljust(7), 'valid', 'residual']
    lines = [' '.join(header)]
    for r in records:
        cells = [f"{r.index:3d}"] + [_fmt(r.values.get(v)) for v in ring]
        cells.append(_fmt(r.energy))
        cells.append(r.kind.ljust(7))
        cells.append(('yes' if r.valid else 'no').ljust(5))
        cells.append(f"{r.residual:.2e}" if r.residual is not None else '-')
        lines.append(' '.join(cells))
    return '\n'.join(lines) + '\n'


def csv_rows(records: Sequence[SolutionRecord], ring: Sequence[str]) -> Tuple[List[str], List[List[Any]]]:
    """Header and rows with separate real/imaginary columns"""
    header = ['index']
    for v in list(ring) + ['energy']:
        header += [f"{v}_re", f"{v}_im"]
    header += ['kind', 'valid', 'residual']
    rows = []
    for r in records:
        row: List[Any] = [r.index]
        for v in ring:
            z = complex(r.values.get(v, 0))
            row += [z.real, z.imag]
        e = complex(r.energy) if r.energy is not None else complex('nan')
        row += [e.real, e.imag, r.kind, r.valid, r.residual]
        rows.append(row)
    return header, rows


def rank_records(records: Sequence[SolutionRecord], anchor_var: str = 'R',
                 anchor: float = 0.0) -> List[SolutionRecord]:
    """Valid real roots first, then by distance of anchor_var from anchor, then energy"""
    def key(r: SolutionRecord):
        distance = abs(complex(r.values.get(anchor_var, anchor)) - anchor)
        energy = complex(r.energy).real if r.energy is not None else float('inf')
        return (not (r.valid and r.is_real), distance, energy)
    return sorted(records, key=key)


# canonical multisets

CanonicalRow = Tuple[complex, ...]


def canonical_form(values: Dict[str, complex], ring: Sequence[str],
                   sign_vars: Sequence[str] = ('x',), tol: float = 1e-9) -> Dict[str, complex]:
    """
    Representative of a root under sign flips of `sign_vars` and complex conjugation.

    Conjugation makes the first non-sign variable with an imaginary part positive
    in its imaginary part; the sign flip makes the first sign variable's real part
    (or imaginary part, when the real part vanishes) positive.
    """
    vals = {v: complex(values[v]) for v in ring}
    others = [v for v in ring if v not in sign_vars]
    for v in others + list(sign_vars):
        if abs(vals[v].imag) > tol:
            if vals[v].imag < 0:
                vals = {k: z.conjugate() for k, z in vals.items()}
            break
    for v in sign_vars:
        z = vals[v]
        if abs(z.real) > tol or abs(z.imag) > tol:
            lead = z.real if abs(z.real) > tol else z.imag
            if lead < 0:
                for s in sign_vars:
                    vals[s] = -vals[s]
            break
    return vals


def canonicalize(rows: Iterable[Dict[str, complex]], ring: Sequence[str],
                 sign_vars: Sequence[str] = ('x',), merge_tol: float = 1e-6) -> List[Dict[str, complex]]:
    """
    Collapse sign and conjugate partners, then sort.

    Sort key: real parts of the non-sign variables in ring order (for H3+ this is
    Re e, Re R), then |sign variables|, then imaginary parts of the non-sign variables.
    """
    others = [v for v in ring if v not in sign_vars]

    def key(vals):
        return (tuple(round(vals[v].real, 9) for v in others)
                + tuple(round(abs(vals[v]), 9) for v in sign_vars)
                + tuple(round(vals[v].imag, 9) for v in others))

    forms = sorted((canonical_form(r, ring, sign_vars) for r in rows), key=key)
    merged: List[Dict[str, complex]] = []
    for f in forms:
        if any(_distance(f, m, ring) <= merge_tol * max(1.0, _magnitude(f, ring)) for m in merged):
            continue
        merged.append(f)
    return merged


def _distance(a: Dict[str, complex], b: Dict[str, complex], keys: Sequence[str]) -> float:
    return max(max(abs(a[k].real - b[k].real), abs(a[k].imag - b[k].imag)) for k in keys)


def _magnitude(a: Dict[str, complex], keys: Sequence[str]) -> float:
    return max(abs(a[k]) for k in keys)


@dataclass
class MultisetComparison:
    passed: bool
    matched: List[Dict[str, Any]]
    unmatched_expected: List[Dict[str, Any]]
    unmatched_actual: List[Dict[str, Any]]
    max_deviation: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'max_deviation': self.max_deviation,
            'matched': self.matched,
            'unmatched_expected': self.unmatched_expected,
            'unmatched_actual': self.unmatched_actual,
        }


def _plain(vals: Dict[str, complex]) -> Dict[str, List[float]]:
    return {k: [round(v.real, 6), round(v.imag, 6)] for k, v in vals.items()}


def compare_multisets(actual: Iterable[Dict[str, complex]], expected: Iterable[Dict[str, complex]],
                      keys: Sequence[str], tol: float, sign_vars: Sequence[str] = ('x',),
                      require_all_actual: bool = True) -> MultisetComparison:
    """
    Match canonical rows one-to-one (nearest first) within tol per real/imaginary component.

    Args:
        actual: computed rows (dict var -> complex)
        expected: reference rows
        keys: variables compared (the ring, optionally plus 'E')
        tol: per-component tolerance
        sign_vars: variables whose joint sign flip is a symmetry
        require_all_actual: unmatched computed rows also fail the comparison
    """
    a = canonicalize(actual, keys, sign_vars)
    e = canonicalize(expected, keys, sign_vars)
    candidates = sorted(((_distance(x, y, keys), i, j) for i, x in enumerate(a) for j, y in enumerate(e)),
                        key=lambda t: t[0])
    used_a, used_e = set(), set()
    matched = []
    worst = 0.0
    for dist, i, j in candidates:
        if i in used_a or j in used_e or dist > tol:
            continue
        used_a.add(i)
        used_e.add(j)
        worst = max(worst, dist)
        matched.append({'expected': _plain(e[j]), 'actual': _plain(a[i]), 'deviation': dist})
    missing = [_plain(e[j]) for j in range(len(e)) if j not in used_e]
    extra = [_plain(a[i]) for i in range(len(a)) if i not in used_a]
    passed = not missing and (not extra or not require_all_actual)
    if not passed:
        logger.warning(f"⚠️ Multiset comparison: {len(missing)} expected rows unmatched, {len(extra)} extra rows")
    return MultisetComparison(passed, matched, missing, extra, worst)


def record_rows(records: Iterable[SolutionRecord], with_energy: bool = True) -> List[Dict[str, complex]]:
    """Records as plain dicts for canonical comparison; energy under key 'E'"""
    rows = []
    for r in records:
        row = dict(r.values)
        if with_energy and r.energy is not None:
            row['E'] = complex(r.energy)
        rows.append(row)
    return rows
