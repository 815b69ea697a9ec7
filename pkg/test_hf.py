"""
Tests for the Hartree-Fock objective: integrals, series, expansion,
rationalization and the energy curves
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from api.config import get_hf_config, get_reference_objective
from api.hf import (
    Geometry,
    HartreeFockError,
    IntegralSet,
    InvalidGeometryError,
    Jet,
    NegativeArgumentError,
    Sto3gBasis,
    boys,
    boys_f0,
    compare_objective,
    constrained_energy,
    energy_curves,
    energy_grid,
    exact_energy,
    exact_minimum,
    expand_and_rationalize,
    generate_objective,
    reference_objective,
    taylor_objective,
    total_energy,
)
from api.polyring import parse_polynomial


def test_boys_function():
    assert boys_f0(0.0) == pytest.approx(1.0)
    assert boys(1, 0.0) == pytest.approx(1.0 / 3.0)
    # series and closed form agree across the cutoff
    assert boys_f0(0.999e-3) == pytest.approx(boys_f0(1.001e-3), rel=1e-5)
    assert boys_f0(50.0) == pytest.approx(0.5 * math.sqrt(math.pi / 50.0), rel=1e-12)
    with pytest.raises(NegativeArgumentError):
        boys_f0(-1.0)


def test_jet_arithmetic():
    h = Jet.variable(2.0, 3)
    np.testing.assert_allclose(h.reciprocal().coeffs, [0.5, -0.25, 0.125, -0.0625])
    np.testing.assert_allclose(Jet.variable(0.0, 3).exp().coeffs, [1.0, 1.0, 0.5, 1.0 / 6.0])
    np.testing.assert_allclose((3.0 * h - 1).coeffs, [5.0, 3.0, 0.0, 0.0])
    assert (h * h).derivative(2) == pytest.approx(2.0)


def test_basis_is_normalized():
    ints = IntegralSet.at(1.8)
    np.testing.assert_allclose(np.diag(ints.S), 1.0, atol=1e-5)
    S = ints.normalization_overlap()
    assert all(S[i, i] == 1.0 for i in range(3))
    assert S[0, 1] == ints.S[0, 1]
    assert 0 < ints.S[0, 1] < 1
    # equilateral: all off-diagonal overlaps agree
    assert ints.S[0, 1] == pytest.approx(ints.S[1, 2])
    assert ints.ERI[0, 1, 2, 2] == pytest.approx(ints.ERI[2, 2, 1, 0])


def test_default_basis_rounds_to_the_printed_table():
    basis = Sto3gBasis()
    assert tuple(round(c, 4) for c in basis.c) == (0.4446, 0.5353, 0.1543)
    assert tuple(round(a, 4) for a in basis.a) == (0.1098, 0.4058, 2.2277)
    assert basis.zeta == 1.24


def test_normalization_term_uses_unit_self_overlap():
    ints = IntegralSet.expand(1.8, 3)
    S_sum = sum(ints.normalization_overlap().flat)
    assert S_sum.value == pytest.approx(3.0 + 6.0 * ints.S[0, 1].value, abs=1e-12)
    # self-overlaps carry no R dependence
    np.testing.assert_allclose(S_sum.coeffs[1:], 6.0 * ints.S[0, 1].coeffs[1:])


def test_jet_derivatives_match_finite_differences():
    rc, step = 1.8, 1e-5
    jet = IntegralSet.expand(rc, 1).S[0, 1]
    fd = (IntegralSet.at(rc + step).S[0, 1] - IntegralSet.at(rc - step).S[0, 1]) / (2 * step)
    assert jet.derivative(1) == pytest.approx(fd, rel=1e-6)
    assert jet.value == pytest.approx(IntegralSet.at(rc).S[0, 1], rel=1e-12)


def test_geometry():
    g = Geometry(2.0)
    assert g.edge_lengths() == pytest.approx([2.0, 2.0, 2.0])
    assert g.nuclear_repulsion() == pytest.approx(1.5)
    with pytest.raises(InvalidGeometryError):
        Geometry(-1.0)


def test_total_energy_structure():
    E = total_energy(1.8)
    assert E.ring == ('x', 'e')
    assert E.coefficient((0, 1)) == 2
    assert set(E.monomials()) == {(4, 0), (2, 0), (2, 1), (0, 1), (0, 0)}


def test_taylor_objective_is_exact_at_the_center():
    poly = taylor_objective(1.8, 3)
    assert poly.ring == ('x', 'e', 'R')
    assert constrained_energy(poly, 1.8) == pytest.approx(exact_energy(1.8), abs=1e-9)


def test_generated_objective_matches_embedded_one():
    generated = generate_objective(get_hf_config())
    reference = parse_polynomial(get_reference_objective(), ('x', 'e', 'R'))
    diff = compare_objective(generated.polynomial, reference)
    assert diff.passed, diff.to_dict()
    assert len(generated.polynomial) == 17
    assert all(c.denominator == 1 for _, c in generated.polynomial.items())


def test_rounding_modes_differ_by_at_most_one():
    half = expand_and_rationalize(rounding='half_away')
    floor = expand_and_rationalize(rounding='floor')
    for m, c in half.items():
        assert 0 <= c - floor.coefficient(m) <= 1
    with pytest.raises(HartreeFockError):
        expand_and_rationalize(rounding='banker')


def test_unscaled_expansion_keeps_exact_coefficients():
    poly = expand_and_rationalize(scale_exp=0)
    assert any(c.denominator != 1 for _, c in poly.items())
    assert poly == taylor_objective(1.8, 3)


def test_reference_objective_energy_near_minimum():
    objective = reference_objective()
    assert objective.scale == 10 ** 8
    assert objective.constrained_energy(1.8272) == pytest.approx(-1.2469, abs=5e-4)


def test_energy_curves_agree_near_the_center():
    rows = energy_curves(energy_grid(1.7, 1.9, 5), get_hf_config())
    for row in rows:
        assert abs(row['E_taylor'] - row['E_exact']) < 1e-3
        assert abs(row['E_rationalized'] - row['E_taylor']) < 1e-6
    center = rows[2]
    assert center['R'] == pytest.approx(1.8)
    assert center['E_taylor'] == pytest.approx(center['E_exact'], abs=1e-9)


def test_exact_minimum():
    R, E = exact_minimum()
    assert R == pytest.approx(1.83, abs=0.02)
    assert E == pytest.approx(exact_energy(R))
    assert exact_energy(R - 0.05) > E and exact_energy(R + 0.05) > E


def test_invalid_grid():
    with pytest.raises(HartreeFockError):
        energy_grid(2.0, 1.0, 10)
    with pytest.raises(HartreeFockError):
        energy_grid(1.0, 2.0, 1)


def test_exact_coefficients_are_fractions():
    poly = taylor_objective(1.8, 1)
    assert all(isinstance(c, Fraction) for _, c in poly.items())
