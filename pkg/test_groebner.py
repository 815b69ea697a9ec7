"""
Tests for the Groebner route: Buchberger, quotient basis, multiplication
matrices and the eigenvector root extraction
"""

import math

import numpy as np
import pytest

from api.groebner import (
    DefectivePivotError,
    PolySystem,
    PositiveDimensionalIdealError,
    best_root,
    groebner_basis,
    mult_matrices,
    normal_form,
    quotient_basis,
    solve_groebner,
    stationarity_system,
)
from api.config import get_groebner_config
from api.polyring import MonomialOrder, parse_polynomial, parse_system
from api.groebner import buchberger

HALF = math.sqrt(0.5)


def test_buchberger_known_lex_basis():
    ring = ('x', 'y')
    F = parse_system("x**2 + y**2 - 1; x - y", ring)
    basis = buchberger(F, MonomialOrder.create('lex', ring))
    expected = {parse_polynomial("y**2 - 1/2", ring), parse_polynomial("x - y", ring)}
    assert set(basis) == expected


def test_basis_reduces_every_generator_to_zero(two_level):
    G = groebner_basis(two_level.system)
    for f in two_level.system.generators:
        assert normal_form(f, G).is_zero()


def test_two_level_quotient_and_matrices(two_level):
    G = groebner_basis(two_level.system)
    b = quotient_basis(G)
    assert b.dimension == 4
    assert b.monomials[0] == (0, 0, 0)
    M = mult_matrices(G, b)
    assert set(M.variables) == {'x', 'y', 'e'}
    assert M.commutation_defect() < 1e-12
    # b(root) is a right eigenvector of every M_v
    root = {'x': HALF, 'y': -HALF, 'e': 1.0}
    v = b.evaluate(root)
    for var in M.variables:
        np.testing.assert_allclose(M[var] @ v, root[var] * v, atol=1e-12)


def test_two_level_roots_through_separating_pivot(two_level_solved):
    records = two_level_solved.records
    assert len(records) == 4
    assert all(r.is_real and r.valid for r in records)
    assert max(r.residual for r in records) < 1e-8
    found = sorted((round(r['x'].real, 6), round(r['y'].real, 6), round(r['e'].real, 6)) for r in records)
    h = round(HALF, 6)
    assert found == sorted([(h, h, -1.0), (-h, -h, -1.0), (h, -h, 1.0), (-h, h, 1.0)])
    # sorted by the last ring variable first
    assert [round(r['e'].real) for r in records] == [-1, -1, 1, 1]
    assert [r.index for r in records] == [0, 1, 2, 3]


def test_sqrt_two(sqrt_two):
    solved = solve_groebner(sqrt_two.system, get_groebner_config())
    values = sorted(r['x'].real for r in solved.records)
    assert values == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-12)
    assert solved.summary()['quotient_dimension'] == 2


def test_unit_root_has_one_record(unit_root):
    solved = solve_groebner(unit_root.system, get_groebner_config())
    assert len(solved.records) == 1
    assert solved.records[0]['x'] == pytest.approx(1.0)


def test_complex_roots_are_classified():
    system = PolySystem.from_text("x**2 + 1")
    records = solve_groebner(system, get_groebner_config()).records
    assert [r.kind for r in records] == ['complex', 'complex']
    assert not any(r.valid for r in records)
    assert sorted(r['x'].imag for r in records) == pytest.approx([-1.0, 1.0])


def test_positive_dimensional_ideal():
    system = PolySystem.from_text("x*y", ring=('x', 'y'))
    G = groebner_basis(system)
    with pytest.raises(PositiveDimensionalIdealError):
        quotient_basis(G)


def test_defective_pivot_is_reported():
    system = PolySystem.from_text("x**2")
    with pytest.raises(DefectivePivotError) as info:
        solve_groebner(system, get_groebner_config())
    assert info.value.condition > 1e10


def test_precedence_falls_back_to_ring_order():
    system = PolySystem.from_text("x + y; x - y", 'degrevlex', ('x', 'e', 'R'), ('x', 'y'))
    assert system.order.precedence == (0, 1)


def test_stationarity_system_has_one_partial_per_variable():
    objective = parse_polynomial("x**4 - 2*e*x**2 + e + R**2", ('x', 'e', 'R'))
    system = stationarity_system(objective)
    assert system.degrees() == [3, 2, 1]
    assert system.order.describe(system.ring) == 'degrevlex (x > e > R)'


@pytest.mark.slow
def test_h3plus_groebner_reproduces_the_ground_state(h3plus_solved):
    summary = h3plus_solved.summary()
    assert summary['quotient_dimension'] == 22
    assert h3plus_solved.matrices.commutation_defect() < 1e-8
    best = best_root(h3plus_solved.records, 1.8)
    assert best is not None
    assert abs(best['x'].real) == pytest.approx(0.405, abs=1e-3)
    assert best['e'].real == pytest.approx(-1.1482, abs=1e-3)
    assert best['R'].real == pytest.approx(1.8272, abs=1e-3)
    assert best.energy.real == pytest.approx(-1.2469, abs=5e-4)
