"""
Run Service
Shared entry points behind the command line and the web service; every
function returns a plain dict and, given an output directory, writes its artifacts
"""

import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from utils.report_utils import write_csv, write_json, write_text

from .config import RunConfig, get_reference_objective
from .errors import MolRootsError
from .groebner import best_root, solve_groebner
from .hf import Sto3gBasis, compare_objective, energy_curves, energy_grid, exact_minimum, generate_objective
from .macaulay import degree_sweep, export_triplets, solve as solve_macaulay, sweep_to_csv
from .polyring import format_polynomial, parse_polynomial
from .qemu import qpe_pipeline
from .records import csv_rows, records_to_json, render_table
from .systems import LoadedSystem, load_system, system_from_text

logger = logging.getLogger(__name__)

ROUTES = ('groebner', 'macaulay')
REFERENCE_SETTINGS = {'rc': 1.8, 'order': 3, 'scale_exp': 8}
# Energy-curve agreement is judged on this bond-length interval
AGREEMENT_WINDOW = (1.7, 1.9)


class RunError(MolRootsError):
    """Invalid run request (bad route, missing degree)"""
    pass


def _resolve(system: Union[str, LoadedSystem, None], config: RunConfig,
             text: Optional[str] = None, default: str = 'h3plus') -> LoadedSystem:
    if isinstance(system, LoadedSystem):
        return system
    if text:
        return system_from_text(text, config)
    return load_system(system or default, config)


def write_records(out_dir: Union[str, Path], stem: str, records, ring: Sequence[str],
                  fmt: str = 'table') -> List[str]:
    """solutions JSON always, plus a CSV or text table per the output format"""
    out_dir = Path(out_dir)
    written = [str(write_json(out_dir / f"{stem}.json", records_to_json(records)))]
    if fmt == 'csv':
        header, rows = csv_rows(records, ring)
        written.append(str(write_csv(out_dir / f"{stem}.csv", header, rows)))
    elif fmt == 'table':
        written.append(str(write_text(out_dir / f"{stem}.txt", render_table(records, ring))))
    return written


def run_generate(config: RunConfig, out_dir: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Expand and rationalize the H3+ objective, diffed against the embedded one.

    The diff compares integer values when the settings are the reference ones
    (R_c = 1.8, third order, n = 8); otherwise only the term set is compared.
    """
    started = time.perf_counter()
    objective = generate_objective(config.hf)
    reference = parse_polynomial(get_reference_objective(), ('x', 'e', 'R'))
    matches_reference = all(config.hf[k] == v for k, v in REFERENCE_SETTINGS.items())
    if matches_reference:
        diff = compare_objective(objective.polynomial, reference).to_dict()
        diff['mode'] = 'values'
    else:
        generated = set(objective.polynomial.change_ring(reference.ring).monomials())
        expected = set(reference.monomials())
        diff = {
            'mode': 'shape',
            'passed': None,
            'missing': len(expected - generated),
            'extra': len(generated - expected),
        }
    text = format_polynomial(objective.polynomial)
    result = {
        'objective': objective.to_dict(),
        'polynomial': text,
        'terms': len(objective.polynomial),
        'diff': diff,
        'seconds': round(time.perf_counter() - started, 3),
        'outputs': [],
    }
    if out_dir is not None:
        out_dir = Path(out_dir)
        result['outputs'].append(str(write_text(out_dir / 'obj.txt', f"OBJ={text};\n")))
        result['outputs'].append(str(write_json(out_dir / 'obj_diff.json', diff)))
    if diff.get('passed') is False:
        logger.warning(f"⚠️ Generated objective differs from the embedded one by up to {diff['max_abs_diff']:g}")
    return result


def run_solve(config: RunConfig, route: str = 'groebner', system: Union[str, LoadedSystem, None] = None,
              degree: Optional[int] = None, pivot: Optional[str] = None, text: Optional[str] = None,
              sweep: Optional[Sequence[int]] = None, triplets: bool = False,
              out_dir: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Solve a system on either classical route.

    Args:
        config: RunConfig
        route: 'groebner' or 'macaulay'
        system: bundled name, file path or LoadedSystem (h3plus by default)
        degree: Macaulay degree (macaulay.degree by default)
        pivot: eigen-decomposed variable (groebner.pivot by default)
        text: inline system text, used instead of `system`
        sweep: Macaulay degrees to sweep instead of a single solve
        triplets: also write M(d) as `row col value` lines
        out_dir: where to write solutions and artifacts

    Returns:
        Dict with the system, the records (JSON form), a route summary and outputs
    """
    if route not in ROUTES:
        raise RunError(f"Unknown route: {route} (expected one of {ROUTES})")
    loaded = _resolve(system, config, text)
    ring = list(loaded.ring)
    g = dict(config.groebner)
    if pivot:
        g['pivot'] = pivot
    outputs: List[str] = []
    result: Dict[str, Any] = {'route': route, 'system': loaded.to_dict(), 'ring': ring, 'outputs': outputs}

    if route == 'groebner':
        solved = solve_groebner(loaded.system, g, loaded.objective, loaded.rc)
        records = solved.records
        result['summary'] = solved.summary()
    elif sweep:
        rows = degree_sweep(loaded.system, sweep, g['pivot'], config.macaulay, loaded.objective, loaded.rc,
                            g['validity_window'])
        result['sweep'] = [row.to_dict() for row in rows]
        records = rows[-1].real_roots if rows else []
        if out_dir is not None:
            outputs.append(str(sweep_to_csv(rows, Path(out_dir) / 'sweep.csv', ring)))
    else:
        d = degree or config.macaulay['degree']
        solved = solve_macaulay(loaded.system, d, g['pivot'], config.macaulay, loaded.objective, loaded.rc,
                                g['validity_window'], g['real_tol'])
        records = solved.records
        result['summary'] = solved.summary()
        if triplets and out_dir is not None:
            outputs.append(str(export_triplets(solved.matrix, Path(out_dir) / f"macaulay_d{d}.txt")))

    result['records'] = records_to_json(records)
    result['residuals'] = [r.residual for r in records]
    best = best_root(records, loaded.rc) if loaded.rc is not None else None
    result['best'] = best.to_json() if best else None
    if out_dir is not None:
        outputs.extend(write_records(out_dir, 'solutions', records, ring, config.output['format']))
    logger.info(f"✅ {route} solve of {loaded.name}: {len(records)} records")
    return result


def run_qpe(config: RunConfig, system: Union[str, LoadedSystem, None] = None, route: Optional[str] = None,
            degree: Optional[int] = None, text: Optional[str] = None,
            out_dir: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """Emulated quantum run; records carry per-variable bits, gaps, scales and branch weights"""
    route = route or config.qpe['route']
    if route not in ROUTES:
        raise RunError(f"Unknown route: {route} (expected one of {ROUTES})")
    loaded = _resolve(system, config, text)
    run = qpe_pipeline(loaded.system, route, degree, config.qpe, config.groebner, config.macaulay,
                       loaded.objective, loaded.rc)
    result = {
        'route': route,
        'system': loaded.to_dict(),
        'ring': list(loaded.ring),
        'summary': run.summary(),
        'records': records_to_json(run.records),
        'outputs': [],
    }
    if out_dir is not None:
        result['outputs'] = write_records(out_dir, 'qpe_solutions', run.records, loaded.ring,
                                          config.output['format'])
    return result


def run_energy_curve(config: RunConfig, r_min: Optional[float] = None, r_max: Optional[float] = None,
                     points: Optional[int] = None,
                     out_dir: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """Exact, Taylor and rationalized energies on a grid, with the exact minimum"""
    o = config.output
    grid = energy_grid(r_min if r_min is not None else o['curve_r_min'],
                       r_max if r_max is not None else o['curve_r_max'],
                       points if points is not None else o['curve_points'])
    rows = energy_curves(grid, config.hf)
    lo, hi = AGREEMENT_WINDOW
    spread = [max(r['E_exact'], r['E_taylor'], r['E_rationalized'])
              - min(r['E_exact'], r['E_taylor'], r['E_rationalized'])
              for r in rows if lo <= r['R'] <= hi]
    R_min, E_min = exact_minimum(float(grid[0]), float(grid[-1]), Sto3gBasis.from_config(config.hf))
    result = {
        'rows': rows,
        'exact_minimum': {'R': R_min, 'E': E_min},
        'max_spread': max(spread) if spread else None,
        'outputs': [],
    }
    if out_dir is not None:
        path = write_csv(Path(out_dir) / 'energy_curve.csv', ['R', 'E_exact', 'E_taylor', 'E_rationalized'],
                         [[r['R'], r['E_exact'], r['E_taylor'], r['E_rationalized']] for r in rows])
        result['outputs'].append(str(path))
    logger.info(f"📊 Exact minimum at R={R_min:.4f} (E={E_min:.6f})")
    return result


def run_verify(config: Optional[RunConfig] = None, only: Optional[Sequence[str]] = None,
               skip_slow: bool = False, out_dir: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """Reference-table checks; see api.verification"""
    from .verification import verify

    report = verify(config or RunConfig(), only, skip_slow)
    result = report.to_dict()
    if out_dir is not None:
        out_dir = Path(out_dir)
        result['outputs'] = [str(write_json(out_dir / 'verify.json', result)),
                             str(write_text(out_dir / 'verify.txt', report.render()))]
    else:
        result['outputs'] = []
    result['report'] = report.render()
    return result
