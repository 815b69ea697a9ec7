"""
Tests for the Macaulay route: matrix shapes, null space, shift matrices,
the pseudoinverse eigenproblem and the degree sweep
"""

import csv
import math

import numpy as np
import pytest

from api.config import get_macaulay_config, get_reference_table
from api.errors import MolRootsError
from api.groebner import PolySystem
from api.macaulay import (
    DegreeTooSmallError,
    MacaulayError,
    build,
    degree_sweep,
    dims,
    export_triplets,
    nullspace,
    shift_matrices,
    solve,
    sweep_to_csv,
)
from api.records import compare_multisets
from utils.report_utils import read_triplets

H = math.sqrt(0.5)
TWO_LEVEL_ROOTS = [{'x': complex(H), 'y': complex(-H), 'e': 1 + 0j},
                   {'x': complex(H), 'y': complex(H), 'e': -1 + 0j}]


def test_dims_formula():
    assert dims([2, 2, 2], 3, 2) == (3, 10)
    assert dims([2, 2, 2], 3, 8) == (252, 165)
    # generators above d contribute no rows
    assert dims([3, 2, 1], 3, 1) == (1, 4)


@pytest.mark.parametrize('row', [r for r in get_reference_table('T5')['rows'] if r['d'] <= 4],
                         ids=lambda r: f"d{r['d']}")
def test_two_level_shapes_match_reference(two_level, row):
    M = build(two_level.system, row['d'])
    assert M.shape == (row['rows'], row['cols'])
    assert M.nnz == row['nonzeros']
    null = nullspace(M, get_macaulay_config()['null_threshold'])
    assert abs(null.rank - row['rank']) <= 1
    assert null.nullity == row['nullity']


def test_rows_are_generator_times_multiplier(two_level):
    M = build(two_level.system, 3)
    point = {'x': H, 'y': H, 'e': -1.0}
    # every row vanishes on the monomial vector of a root
    np.testing.assert_allclose(M.matrix @ M.monomial_vector(point), 0, atol=1e-12)
    assert M.row_labels[0] == (0, (0, 0, 0))
    assert M.columns[0] == (0, 0, 0)


def test_degree_below_generators_is_rejected(two_level):
    with pytest.raises(DegreeTooSmallError):
        build(two_level.system, 1)


def test_shift_matrices_select_shifted_columns():
    S = shift_matrices(('x', 'y'), 2, base_degree=1)
    assert S.base == [(0, 0), (1, 0), (0, 1)]
    assert S.select['1'].tolist() == [0, 1, 2]
    # columns of degree <= 2 in grlex: 1, x, y, x^2, xy, y^2
    assert S.select['x'].tolist() == [1, 3, 4]
    assert S.select['y'].tolist() == [2, 4, 5]
    assert S.matrix('x').shape == (3, 6)
    with pytest.raises(MacaulayError):
        shift_matrices(('x', 'y'), 2, base_degree=2)


@pytest.mark.parametrize('d', [3, 4, 8])
def test_two_level_roots_per_degree(two_level, d):
    solved = solve(two_level.system, d, 'x')
    real = [dict(r.values) for r in solved.records if r.is_real]
    comparison = compare_multisets(real, TWO_LEVEL_ROOTS, ('x', 'y', 'e'), 1e-6, sign_vars=('x', 'y'))
    assert comparison.passed, comparison.to_dict()
    summary = solved.summary()
    assert summary['nullity'] == 8
    assert summary['admissible'] == len(solved.records)


def test_base_degree_needs_every_shift_stable(two_level):
    # at d=3 the part at infinity first shows up in the e**2 column, so S_e is unstable at base degree 1
    solved = solve(two_level.system, 3, 'x')
    problem = solved.problem
    assert problem.base_degree == 1
    assert problem.stable == ['x', 'y']
    assert problem.rank_s1 == 4 and problem.rank_stacked == 5
    assert solved.rejected['generator_residual'] == 0
    W = problem.W
    np.testing.assert_allclose(W['x'] @ W['e'], W['e'] @ W['x'], atol=1e-8)
    np.testing.assert_allclose(sorted(np.linalg.eigvals(W['e']).real), [-1, -1, 1, 1], atol=1e-8)

    wider = solve(two_level.system, 4, 'x').summary()
    assert wider['stable_shifts'] == ['x', 'y', 'e']
    assert wider['rank_stacked'] == wider['rank_s1']


def test_degree_two_is_not_admissible(two_level):
    try:
        solved = solve(two_level.system, 2, 'x')
    except MolRootsError:
        return
    real = [dict(r.values) for r in solved.records if r.is_real]
    assert not compare_multisets(real, TWO_LEVEL_ROOTS, ('x', 'y', 'e'), 1e-6, sign_vars=('x', 'y')).passed


def test_univariate_roots():
    system = PolySystem.from_text("x**2 - 2")
    solved = solve(system, 4)
    assert sorted(r['x'].real for r in solved.records) == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-8)
    assert solved.summary()['nullity'] == 2


def test_sweep_and_csv(two_level, tmp_path):
    rows = degree_sweep(two_level.system, [3, 4], 'x')
    assert [r.d for r in rows] == [3, 4]
    assert all(r.nullity == 8 for r in rows)
    path = sweep_to_csv(rows, tmp_path / 'sweep.csv', two_level.ring)
    with open(path, newline='') as handle:
        table = list(csv.reader(handle))
    assert table[0][:8] == ['d', 'rows', 'cols', 'nonzeros', 'rank', 'nullity', 'base_degree', 'admissible']
    assert table[1][0] == '3'


def test_triplet_export(two_level, tmp_path):
    M = build(two_level.system, 3)
    path = export_triplets(M, tmp_path / 'm.txt')
    rows, cols, values = read_triplets(path)
    assert len(values) == M.nnz
    dense = np.zeros(M.shape)
    dense[rows, cols] = values
    np.testing.assert_array_equal(dense, M.to_dense())


@pytest.mark.slow
def test_h3plus_shapes_match_reference(h3plus):
    for row in get_reference_table('T7')['rows']:
        if row['d'] > 12:
            continue
        M = build(h3plus.system, row['d'])
        assert M.shape == (row['rows'], row['cols'])
        assert M.nnz == row['nonzeros']
