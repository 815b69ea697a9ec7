"""
Tests for solution records and canonical multiset comparison
"""

import pytest

from api.records import (
    SolutionRecord,
    canonical_form,
    canonicalize,
    classify,
    compare_multisets,
    csv_rows,
    rank_records,
    record_rows,
    records_from_json,
    records_to_json,
    render_table,
)

RING = ('x', 'e', 'R')


def record(index, x, e, R, energy=None, valid=True, kind='real'):
    return SolutionRecord(index, {'x': complex(x), 'e': complex(e), 'R': complex(R)}, energy, kind, valid)


def test_classify_is_relative():
    assert classify([1.0 + 1e-9j, 100.0]) == 'real'
    assert classify([1.0 + 1e-3j, 2.0]) == 'complex'
    assert classify([0.0, 0.0]) == 'real'


def test_json_round_trip_keeps_complex_values():
    r = record(3, 0.5 - 0.25j, -1.1, 1.8, energy=-1.2 + 0j)
    r.residual = 1e-9
    r.metadata = {'degree': 10}
    back = SolutionRecord.from_json(r.to_json(), RING)
    assert back == r
    assert records_from_json(records_to_json([r]))[0].values == r.values


def test_table_and_csv_layout():
    rows = [record(0, 0.405, -1.148, 1.827, -1.247), record(1, 1j, 2, 3, None, False, 'complex')]
    text = render_table(rows, RING)
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[1].rstrip().endswith('-')
    assert 'complex' in lines[2] and ' no ' in lines[2]
    header, body = csv_rows(rows, RING)
    assert header[:3] == ['index', 'x_re', 'x_im']
    assert header[-3:] == ['kind', 'valid', 'residual']
    assert body[1][1:3] == [0.0, 1.0]


def test_rank_records_prefers_valid_real_near_anchor():
    far = record(0, 0.1, -1, 3.0, -1.0)
    near = record(1, 0.4, -1.1, 1.82, -1.2)
    invalid = record(2, 0.4, -1.1, 1.8, -2.0, valid=False)
    assert [r.index for r in rank_records([far, invalid, near], 'R', 1.8)] == [1, 0, 2]


def test_canonical_form_flips_sign_and_conjugates():
    vals = {'x': -0.4 + 0j, 'e': -1.1 - 0.2j, 'R': 1.8 + 0j}
    form = canonical_form(vals, RING)
    assert form['x'] == pytest.approx(0.4)
    assert form['e'].imag == pytest.approx(0.2)


def test_canonicalize_merges_partners():
    rows = [{'x': 0.4, 'e': -1.1, 'R': 1.8}, {'x': -0.4, 'e': -1.1, 'R': 1.8},
            {'x': 0.6, 'e': -1.8, 'R': -3.9}]
    rows = [{k: complex(v) for k, v in r.items()} for r in rows]
    merged = canonicalize(rows, RING)
    assert len(merged) == 2
    # sorted on Re e first
    assert merged[0]['e'].real == pytest.approx(-1.8)


def test_compare_multisets_reports_missing_and_extra():
    expected = [{'x': 0.405 + 0j, 'e': -1.1482 + 0j, 'R': 1.8272 + 0j}]
    actual = [{'x': -0.4052 + 0j, 'e': -1.1485 + 0j, 'R': 1.8270 + 0j},
              {'x': 0.1 + 0j, 'e': 5 + 0j, 'R': 9 + 0j}]
    strict = compare_multisets(actual, expected, RING, 1e-3)
    assert not strict.passed
    assert len(strict.unmatched_actual) == 1
    loose = compare_multisets(actual, expected, RING, 1e-3, require_all_actual=False)
    assert loose.passed
    assert loose.max_deviation == pytest.approx(3e-4, abs=1e-9)
    assert not compare_multisets(actual, expected, RING, 1e-4, require_all_actual=False).passed


def test_record_rows_adds_energy():
    rows = record_rows([record(0, 1, 2, 3, energy=-1 + 0j), record(1, 1, 2, 3)])
    assert rows[0]['E'] == -1
    assert 'E' not in rows[1]
