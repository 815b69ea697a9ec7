"""
Command line for molroots
Batch front door: generate the objective, solve on either route, run the
emulated quantum pipeline, write energy curves and verify against the
embedded reference tables. Every command writes manifest.json to --out.
"""

import json
import logging
import sys
from pathlib import Path

import click

from api.config import build_config
from api.errors import ConfigError, MolRootsError
from api.records import records_from_json, render_table
from api.runner import RunError, run_energy_curve, run_generate, run_qpe, run_solve, run_verify
from utils.report_utils import RunManifest, to_jsonable

logger = logging.getLogger('molroots')

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def _overrides(**sections):
    """Drop unset CLI flags so file values and defaults survive"""
    return {name: {k: v for k, v in values.items() if v is not None} for name, values in sections.items()}


def _degrees(raw):
    if not raw:
        return None
    try:
        return [int(d) for d in raw.replace(';', ',').split(',') if d.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {raw!r}") from None


def _run(ctx: click.Context, command: str, config_overrides, action) -> None:
    """Build the config, run, print and write the manifest; exit with 0/1/2"""
    obj = ctx.obj
    manifest = RunManifest(command)
    try:
        config = build_config(obj['config_path'], _overrides(output={'format': obj['format']}, **config_overrides))
    except ConfigError as e:
        click.echo(f"❌ {e}", err=True)
        ctx.exit(EXIT_USAGE)
    manifest.config = config.to_dict()
    out_dir = Path(obj['out'] or config.output['out_dir'])
    status, code = 'ok', EXIT_OK
    logger.info(f"🚀 molroots {command} -> {out_dir}")
    try:
        result = action(config, out_dir)
        manifest.checkpoint()
        for path in result.get('outputs', []):
            manifest.add_output(path)
        code = result.pop('_exit', EXIT_OK)
        status = 'ok' if code == EXIT_OK else 'failed'
        _print(result, config.output['format'])
    except (RunError, ConfigError) as e:
        click.echo(f"❌ {e}", err=True)
        status, code = 'usage_error', EXIT_USAGE
    except MolRootsError as e:
        click.echo(f"❌ {type(e).__name__}: {e}", err=True)
        manifest.details['error'] = str(e)
        status, code = 'error', EXIT_FAILED
    manifest.finish(status)
    manifest.add_output(manifest.write(out_dir))
    ctx.exit(code)


def _print(result, fmt: str) -> None:
    if 'records' in result and fmt == 'table':
        click.echo(render_table(records_from_json(result['records'], result['ring']), result['ring']), nl=False)
        summary = result.get('summary')
        if summary:
            click.echo(json.dumps(to_jsonable(summary), indent=2, default=str))
    elif 'report' in result:
        click.echo(result['report'], nl=False)
    else:
        shown = {k: v for k, v in result.items() if k not in ('rows', 'records')}
        click.echo(json.dumps(to_jsonable(shown), indent=2, default=str))


@click.group()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='key=value configuration file')
@click.option('--out', type=click.Path(file_okay=False), default=None, help='output directory (default ./out)')
@click.option('--format', 'fmt', type=click.Choice(['json', 'csv', 'table']), default=None,
              help='solution output format')
@click.option('--log-level', default='INFO', show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
@click.pass_context
def cli(ctx, config_path, out, fmt, log_level):
    """Polynomial-system molecular optimization: Groebner, Macaulay and emulated quantum routes."""
    _configure_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj.update({'config_path': config_path, 'out': out, 'format': fmt})


@cli.command()
@click.option('--rc', type=float, default=None, help='expansion center R_c (Bohr)')
@click.option('--order', type=int, default=None, help='Taylor order in R - R_c')
@click.option('--scale-exp', type=int, default=None, help='n: coefficients are rounded after scaling by 10**n')
@click.option('--rounding', type=click.Choice(['half_away', 'floor']), default=None)
@click.pass_context
def generate(ctx, rc, order, scale_exp, rounding):
    """Generate the rationalized H3+ objective and diff it against the embedded one."""
    def action(config, out_dir):
        result = run_generate(config, out_dir)
        click.echo(f"OBJ={result['polynomial']};")
        return result

    _run(ctx, 'generate', {'hf': {'rc': rc, 'order': order, 'scale_exp': scale_exp, 'rounding': rounding}}, action)


@cli.command()
@click.argument('route', type=click.Choice(['groebner', 'macaulay']))
@click.argument('system', default='h3plus')
@click.option('--degree', type=int, default=None, help='Macaulay degree d')
@click.option('--sweep', default=None, help='comma-separated Macaulay degrees to sweep')
@click.option('--pivot', default=None, help='eigen-decomposed variable (default x)')
@click.option('--triplets', is_flag=True, help='also write M(d) as row/col/value triplets')
@click.pass_context
def solve(ctx, route, system, degree, sweep, pivot, triplets):
    """Solve SYSTEM (h3plus, h3plus-reference, two-level or a file) on ROUTE."""
    degrees = _degrees(sweep)

    def action(config, out_dir):
        return run_solve(config, route, system, degree, pivot, sweep=degrees, triplets=triplets, out_dir=out_dir)

    _run(ctx, 'solve', {}, action)


@cli.command()
@click.option('--route', type=click.Choice(['groebner', 'macaulay']), default=None)
@click.option('--system', default='h3plus', show_default=True)
@click.option('--bits', type=int, default=None, help='phase bits per estimate')
@click.option('--degree', type=int, default=None, help='Macaulay degree (macaulay route)')
@click.option('--seed', type=int, default=None)
@click.option('--shots', type=int, default=None, help='draws per bit; enables sampling mode')
@click.option('--projector', type=click.Choice(['pinv', 'adjoint']), default=None)
@click.pass_context
def qpe(ctx, route, system, bits, degree, seed, shots, projector):
    """Run the emulated quantum pipeline (block encoding + iterative phase estimation)."""
    qpe_overrides = {'route': route, 'bits': bits, 'seed': seed, 'shots': shots, 'projector': projector}
    if shots is not None:
        qpe_overrides['sampling'] = True

    def action(config, out_dir):
        return run_qpe(config, system, route, degree, out_dir=out_dir)

    _run(ctx, 'qpe', {'qpe': qpe_overrides}, action)


@cli.command('energy-curve')
@click.option('--r-min', type=float, default=None)
@click.option('--r-max', type=float, default=None)
@click.option('--points', type=int, default=None)
@click.pass_context
def energy_curve(ctx, r_min, r_max, points):
    """Exact, Taylor and rationalized energies along the bond length (CSV)."""
    def action(config, out_dir):
        return run_energy_curve(config, r_min, r_max, points, out_dir)

    _run(ctx, 'energy-curve', {}, action)


@cli.command()
@click.option('--only', multiple=True, help='check id to run (repeatable), e.g. T7')
@click.option('--skip-slow', is_flag=True, help='skip checks needing the H3+ basis or large Macaulay matrices')
@click.pass_context
def verify(ctx, only, skip_slow):
    """Check every embedded reference table; exit 1 on any failure."""
    def checked(config, out_dir):
        result = run_verify(config, only or None, skip_slow, out_dir)
        result['_exit'] = EXIT_OK if result['passed'] else EXIT_FAILED
        return result

    _run(ctx, 'verify', {}, checked)


def main() -> None:
    try:
        code = cli.main(standalone_mode=False, prog_name='molroots')
    except click.UsageError as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.Abort:
        sys.exit(EXIT_FAILED)
    sys.exit(code if isinstance(code, int) else EXIT_OK)


if __name__ == '__main__':
    main()
