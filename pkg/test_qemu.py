"""
Tests for the statevector emulator: block encoding, phase estimation,
the projection circuit and the two emulated routes
"""

import logging
import math

import numpy as np
import pytest
import scipy.linalg

from api.qemu import (
    EigenvectorResidualError,
    EmulationError,
    EmulationSizeError,
    Statevector,
    VanishingBranchError,
    ZeroResultError,
    apply_encoded,
    encode_time_evolution,
    expectation,
    fable_encode,
    fable_scale,
    hadamard_register,
    ipea_complex,
    nullspace_projection,
    operator_scale,
    projector_matrix,
    qpe_groebner,
    qpe_pipeline,
    register_size,
)
from api.records import compare_multisets

H = math.sqrt(0.5)
TWO_LEVEL_ROOTS = [{'x': complex(H), 'y': complex(-H), 'e': 1 + 0j},
                   {'x': complex(H), 'y': complex(H), 'e': -1 + 0j}]


def test_statevector_layout():
    state = Statevector.from_vector([3.0, 4.0, 0.0])
    assert state.dimension == 4
    assert state.qubits == 2
    assert state.is_normalized()
    np.testing.assert_allclose(state.amplitudes[:2], [0.6, 0.8])
    with pytest.raises(EmulationError):
        Statevector(np.ones(3))
    rng = np.random.default_rng(1)
    assert Statevector.random(8, rng).fidelity(Statevector.random(8, rng)) < 1.0


def test_register_helpers():
    assert register_size(1) == 2
    assert register_size(5) == 8
    assert register_size(16) == 16
    np.testing.assert_allclose(hadamard_register(4, normalized=False) @ hadamard_register(4, normalized=False),
                               4 * np.eye(4))


def test_fable_scale_is_a_power_of_two():
    assert fable_scale(np.array([[0.3, -0.2], [0.1, 0.0]])) == 0.5
    assert fable_scale(np.array([[3.0]])) == 4.0
    assert fable_scale(np.zeros((2, 2))) == 1.0


def test_full_encoding_is_unitary_with_exact_block():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((4, 4))
    enc = fable_encode(A)
    assert enc.mode == 'full'
    assert enc.qubits == 5
    assert enc.residue() < 1e-10
    assert enc.unitarity_defect() < 1e-10
    np.testing.assert_allclose(enc.block() * enc.normalization, A, atol=1e-10)


def test_action_mode_matches_the_materialized_block():
    rng = np.random.default_rng(2)
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    full = fable_encode(A, mode='full')
    action = fable_encode(A, mode='action')
    assert action.unitary is None
    np.testing.assert_allclose(action.block(), full.block(), atol=1e-12)
    with pytest.raises(EmulationError):
        action.unitarity_defect()


def test_apply_encoded_reports_success_probability():
    A = np.diag([1.0, 0.5])
    enc = fable_encode(A)
    state, probability = apply_encoded(enc, [0.0, 1.0])
    np.testing.assert_allclose(np.abs(state.amplitudes[:2]), [0.0, 1.0], atol=1e-12)
    assert probability == pytest.approx((0.5 / enc.normalization) ** 2)
    with pytest.raises(ZeroResultError):
        apply_encoded(fable_encode(np.diag([1.0, 0.0])), [0.0, 1.0])


def test_expectation_through_the_encoding():
    A = np.array([[1.0, 2.0], [2.0, -1.0]])
    psi = [1.0, 1.0]
    assert expectation(fable_encode(A), psi) == pytest.approx(expectation(A, psi), abs=1e-10)
    assert expectation(A, psi) == pytest.approx(2.0)


def test_time_evolution_encoding():
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    enc = encode_time_evolution(A, 0.3)
    np.testing.assert_allclose(enc.effective(), scipy.linalg.expm(-0.3j * A), atol=1e-10)


@pytest.mark.parametrize('value', [0.5, -0.5, 0.9 * np.exp(2j * np.pi * 0.375)])
def test_ipea_recovers_eigenvalues(value):
    A = np.diag([value, 0.3])
    result = ipea_complex(fable_encode(A), [1.0, 0.0], bits=8)
    assert result.eigenvalue == pytest.approx(value, abs=1e-9)
    assert result.magnitude == pytest.approx(abs(value), abs=1e-9)
    assert result.residual < 1e-10


def test_ipea_phase_bits_most_significant_first():
    value = 0.9 * np.exp(2j * np.pi * 0.375)
    result = ipea_complex(np.diag([value, 0.3]), [1.0, 0.0], bits=3)
    assert result.bits == [0, 1, 1]
    assert result.phase == pytest.approx(0.375)


def test_ipea_reads_deep_bits_from_the_phase_angle(caplog):
    # 0.8**(2**7) is below the readout floor, so bits 8..10 come from the angle at power 2**6
    value = 0.8 * np.exp(2j * np.pi * 0.3141)
    with caplog.at_level(logging.WARNING, logger='api.qemu.ipea'):
        result = ipea_complex(np.diag([value, 0.3]), [1.0, 0.0], bits=10)
    assert result.low_confidence == [8, 9, 10]
    assert abs(result.phase - 0.3141) <= 2.0 ** -10
    assert result.magnitude == pytest.approx(0.8, abs=1e-9)
    assert 'read from the phase angle' in caplog.text


def test_ipea_small_real_eigenvalue():
    result = ipea_complex(np.diag([0.2, 0.1]), [1.0, 0.0], bits=8)
    assert result.low_confidence == [5, 6, 7, 8]
    assert all(result.bits[k - 1] == 0 for k in result.low_confidence)
    assert result.eigenvalue == pytest.approx(0.2, abs=1e-9)


def test_ipea_phase_over_the_unit_disk():
    rng = np.random.default_rng(11)
    bits = 10
    for _ in range(40):
        n = int(rng.integers(2, 6))
        magnitudes = np.sqrt(rng.uniform(0.0, 1.0, n))
        phases = rng.uniform(0.0, 1.0, n)
        V = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A = V @ np.diag(magnitudes * np.exp(2j * np.pi * phases)) @ np.linalg.inv(V)
        for i in range(n):
            result = ipea_complex(A, V[:, i], bits)
            error = abs((result.phase - phases[i] + 0.5) % 1.0 - 0.5)
            assert error <= 2.0 ** -bits + 1e-6, (magnitudes[i], phases[i], result.bits)
            assert result.magnitude == pytest.approx(magnitudes[i], abs=1e-6)


def test_ipea_sampling_is_seeded():
    A = np.diag([-0.5, 0.25])
    first = ipea_complex(A, [1.0, 0.0], bits=3, sampling=True, shots=2048, rng=np.random.default_rng(7))
    second = ipea_complex(A, [1.0, 0.0], bits=3, sampling=True, shots=2048, rng=np.random.default_rng(7))
    assert first.bits == second.bits == [1, 0, 0]
    assert first.eigenvalue.real < 0


def test_ipea_rejects_non_eigenvectors():
    with pytest.raises(EigenvectorResidualError) as info:
        ipea_complex(np.diag([0.5, -0.5]), [1.0, 1.0], bits=4)
    assert info.value.residual > 0.1
    with pytest.raises(EmulationError):
        ipea_complex(np.eye(2), [1.0, 0.0], bits=0)


def test_pinv_projection_is_exact():
    M = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0]])
    rng = np.random.default_rng(5)
    psi = Statevector.random(4, rng)
    result = nullspace_projection(M, psi, repetitions=3)
    np.testing.assert_allclose(M @ result.state.amplitudes, 0, atol=1e-12)
    # the kept weight of the first pass is the null-space component
    null = scipy.linalg.null_space(M)
    unit = psi.amplitudes / np.linalg.norm(psi.amplitudes)
    assert result.branch_probabilities[0] == pytest.approx(np.linalg.norm(null.conj().T @ unit) ** 2)
    assert result.branch_probabilities[-1] == pytest.approx(1.0)
    assert result.survival == pytest.approx(result.branch_probabilities[0])


def test_adjoint_projector_is_scaled():
    M = np.array([[2.0, 0.0], [0.0, 1.0]])
    np.testing.assert_allclose(projector_matrix(M, 'adjoint'), np.diag([1.0, 0.25]))
    np.testing.assert_allclose(projector_matrix(M, 'pinv'), np.eye(2), atol=1e-12)
    with pytest.raises(EmulationError):
        projector_matrix(M, 'qr')


def test_projection_of_a_row_space_state_vanishes():
    M = np.array([[1.0, 0.0]])
    with pytest.raises(VanishingBranchError):
        nullspace_projection(M, [1.0, 0.0], repetitions=2)


def test_operator_scale_policies():
    M = np.array([[1.0, 2.0], [3.0, -4.0]])
    assert operator_scale(M, 'inf_norm') == 8.0
    assert operator_scale(M, 'max_entry') == 8.0
    with pytest.raises(EmulationError):
        operator_scale(M, 'frobenius')


def test_groebner_route_recovers_two_level_roots(two_level, two_level_solved):
    run = qpe_pipeline(two_level.system, 'groebner', qpe_config={'bits': 8}, solved=two_level_solved)
    real = [dict(r.values) for r in run.records if r.is_real]
    assert len(run.records) == 4
    comparison = compare_multisets(real, TWO_LEVEL_ROOTS, ('x', 'y', 'e'), 1e-6, sign_vars=('x', 'y'))
    assert comparison.passed, comparison.to_dict()
    summary = run.summary()
    assert summary['register'] == 4
    assert set(summary['scales']) == {'x', 'y', 'e'}


def test_register_limit_is_enforced(two_level, two_level_solved):
    with pytest.raises(EmulationSizeError):
        qpe_groebner(two_level.system, {'max_system_qubits': 1}, solved=two_level_solved)


@pytest.mark.slow
def test_macaulay_route_branches_are_roots(two_level):
    run = qpe_pipeline(two_level.system, 'macaulay', degree=3, qpe_config={'bits': 8})
    assert run.records
    values = [dict(r.values) for r in run.records]
    comparison = compare_multisets(values, TWO_LEVEL_ROOTS, ('x', 'y', 'e'), 1e-4,
                                   sign_vars=('x', 'y'), require_all_actual=True)
    assert not comparison.unmatched_actual, comparison.to_dict()
    assert run.summary()['projection']['projector'] == 'pinv'
