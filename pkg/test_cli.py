"""
Tests for the molroots command line
"""

import json

import pytest
from click.testing import CliRunner

from cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, cli


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, tmp_path, *args):
    return runner.invoke(cli, ['--out', str(tmp_path), *args])


def test_generate_prints_and_writes_the_objective(runner, tmp_path):
    result = invoke(runner, tmp_path, 'generate')
    assert result.exit_code == EXIT_OK, result.output
    assert 'OBJ=' in result.stdout
    assert (tmp_path / 'obj.txt').read_text().startswith('OBJ=')
    manifest = json.loads((tmp_path / 'manifest.json').read_text())
    assert manifest['command'] == 'generate'
    assert manifest['status'] == 'ok'
    assert any(path.endswith('obj.txt') for path in manifest['outputs'])


def test_solve_groebner_json(runner, tmp_path):
    result = invoke(runner, tmp_path, '--format', 'json', 'solve', 'groebner', 'two-level')
    assert result.exit_code == EXIT_OK, result.output
    shown = json.loads(result.stdout)
    assert shown['route'] == 'groebner'
    assert shown['summary']['quotient_dimension'] == 4
    assert 'records' not in shown
    assert len(json.loads((tmp_path / 'solutions.json').read_text())) == 4


def test_solve_macaulay_table(runner, tmp_path):
    result = invoke(runner, tmp_path, 'solve', 'macaulay', 'two-level', '--degree', '3', '--triplets')
    assert result.exit_code == EXIT_OK, result.output
    assert result.stdout.splitlines()[0].split()[:2] == ['i', 'x']
    assert (tmp_path / 'macaulay_d3.txt').exists()
    assert (tmp_path / 'solutions.txt').exists()


def test_solve_sweep_option(runner, tmp_path):
    result = invoke(runner, tmp_path, '--format', 'json', 'solve', 'macaulay', 'two-level', '--sweep', '3,4')
    assert result.exit_code == EXIT_OK, result.output
    assert (tmp_path / 'sweep.csv').exists()
    bad = invoke(runner, tmp_path, 'solve', 'macaulay', 'two-level', '--sweep', '3,four')
    assert bad.exit_code == EXIT_USAGE


def test_unknown_route_is_a_usage_error(runner, tmp_path):
    result = invoke(runner, tmp_path, 'solve', 'homotopy', 'two-level')
    assert result.exit_code == EXIT_USAGE


def test_bad_config_file_is_a_usage_error(runner, tmp_path):
    path = tmp_path / 'bad.cfg'
    path.write_text("bogus = 1\n")
    result = runner.invoke(cli, ['--config', str(path), '--out', str(tmp_path / 'out'), 'generate'])
    assert result.exit_code == EXIT_USAGE


def test_missing_system_fails(runner, tmp_path):
    result = invoke(runner, tmp_path, 'solve', 'groebner', str(tmp_path / 'missing.txt'))
    assert result.exit_code == EXIT_USAGE
    manifest = json.loads((tmp_path / 'manifest.json').read_text())
    assert manifest['status'] == 'usage_error'


def test_solver_error_exits_one(runner, tmp_path):
    path = tmp_path / 'line.txt'
    path.write_text("x*y;\n")
    result = invoke(runner, tmp_path, 'solve', 'groebner', str(path))
    assert result.exit_code == EXIT_FAILED
    manifest = json.loads((tmp_path / 'manifest.json').read_text())
    assert manifest['status'] == 'error'
    assert manifest['details']['error']


def test_qpe_command(runner, tmp_path):
    result = invoke(runner, tmp_path, '--format', 'json', 'qpe', '--route', 'groebner',
                    '--system', 'two-level', '--bits', '6')
    assert result.exit_code == EXIT_OK, result.output
    shown = json.loads(result.stdout)
    assert shown['summary']['bits'] == 6
    assert shown['summary']['roots'] == 4


def test_energy_curve_command(runner, tmp_path):
    result = invoke(runner, tmp_path, 'energy-curve', '--r-min', '1.7', '--r-max', '1.9', '--points', '5')
    assert result.exit_code == EXIT_OK, result.output
    lines = (tmp_path / 'energy_curve.csv').read_text().splitlines()
    assert len(lines) == 6


def test_verify_only(runner, tmp_path):
    result = invoke(runner, tmp_path, 'verify', '--only', 'T5', '--only', 'checksums')
    assert result.exit_code == EXIT_OK, result.output
    assert 'PASSED' in result.stdout
    assert (tmp_path / 'verify.json').exists()


def test_verify_unknown_check_fails(runner, tmp_path):
    result = invoke(runner, tmp_path, 'verify', '--only', 'T9')
    assert result.exit_code == EXIT_FAILED


def test_verify_skip_slow_passes(runner, tmp_path):
    result = invoke(runner, tmp_path, 'verify', '--skip-slow')
    assert result.exit_code == EXIT_OK, result.output
    report = json.loads((tmp_path / 'verify.json').read_text())
    statuses = {table_id: entry['status'] for table_id, entry in report['tables'].items()}
    assert {t for t, s in statuses.items() if s == 'pass'} == {'CHECKSUMS', 'OBJ', 'T5', 'T6', 'CURVE', 'IPEA', 'PROJ'}
    assert {t for t, s in statuses.items() if s == 'skipped'} == {'T1', 'T2', 'T3', 'T4', 'T7', 'T8'}
