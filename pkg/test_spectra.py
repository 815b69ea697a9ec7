"""
Tests for the dense linear algebra service
"""

import numpy as np
import pytest
import scipy.linalg

from api.spectra import (
    NonSquareMatrixError,
    SpectraError,
    commutator_defect,
    eig,
    eigenvalue_separation,
    expm_scaled,
    is_unitary,
    nullspace_svd,
    numerical_rank,
    pad_to_power_of_two,
    pinv,
    power_of_two_at_least,
    rayleigh_quotient,
    separating_eig,
)


def test_eig_nonsymmetric_residuals():
    A = np.array([[0.0, 1.0], [-2.0, -3.0]])
    dec = eig(A)
    assert sorted(dec.eigenvalues.real) == pytest.approx([-2.0, -1.0])
    assert dec.max_residual < 1e-12
    np.testing.assert_allclose(np.linalg.norm(dec.vectors, axis=0), 1.0)


def test_eig_left_vectors():
    A = np.array([[2.0, 1.0], [0.0, 3.0]])
    dec = eig(A, left=True)
    for i in range(2):
        v = dec.vector(i)
        np.testing.assert_allclose(v @ A, dec.eigenvalues[i] * v, atol=1e-12)


def test_eig_rejects_bad_input():
    with pytest.raises(NonSquareMatrixError):
        eig(np.ones((2, 3)))
    with pytest.raises(SpectraError):
        eig(np.array([[np.nan]]))
    assert len(eig(np.zeros((0, 0)))) == 0


def test_nullspace_threshold_is_absolute():
    A = np.array([[1.0, 0.0, 0.0], [0.0, 1e-6, 0.0]])
    ns = nullspace_svd(A, threshold=1e-4)
    assert ns.rank == 1
    assert ns.nullity == 2
    np.testing.assert_allclose(A @ ns.basis, 0, atol=1e-5)
    np.testing.assert_allclose(ns.basis.conj().T @ ns.basis, np.eye(2), atol=1e-12)


def test_nullspace_tall_matrix():
    rng = np.random.default_rng(3)
    B = rng.standard_normal((40, 4))
    A = B @ rng.standard_normal((4, 7))
    ns = nullspace_svd(A, threshold=1e-8)
    assert ns.rank == 4
    assert ns.nullity == 3
    np.testing.assert_allclose(A @ ns.basis, 0, atol=1e-8)


def test_pinv_and_rank():
    A = np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]])
    np.testing.assert_allclose(pinv(A), np.linalg.pinv(A), atol=1e-12)
    assert numerical_rank(A) == 1


def test_expm_matches_scipy_on_defective_matrix():
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    np.testing.assert_allclose(expm_scaled(A, 0.5), scipy.linalg.expm(-0.5j * A), atol=1e-12)
    H = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert is_unitary(expm_scaled(H))


def test_commutator_defect():
    A = np.diag([1.0, 2.0])
    assert commutator_defect(A, A @ A) == 0.0
    assert commutator_defect(A, np.array([[0.0, 1.0], [0.0, 0.0]])) > 0


def test_powers_of_two_and_padding():
    assert power_of_two_at_least(5.0) == 8.0
    assert power_of_two_at_least(4.0) == 4.0
    assert power_of_two_at_least(0.3) == 0.5
    assert power_of_two_at_least(0.0) == 1.0
    padded = pad_to_power_of_two(np.eye(3))
    assert padded.shape == (4, 4)
    assert padded[3, 3] == 0.0
    assert pad_to_power_of_two(np.eye(1)).shape == (2, 2)


def test_rayleigh_quotient():
    A = np.diag([2.0, 5.0])
    assert rayleigh_quotient(A, np.array([0.0, 3.0])) == pytest.approx(5.0)
    with pytest.raises(SpectraError):
        rayleigh_quotient(A, np.zeros(2))


def test_separating_eig_falls_back_on_repeated_eigenvalues():
    # commuting family: A has a double eigenvalue that B splits
    A = np.diag([1.0, 1.0, 2.0])
    B = np.diag([3.0, 4.0, 5.0])
    assert eigenvalue_separation(np.diag(A)) == 0.0
    dec, weights = separating_eig({'a': A, 'b': B}, 'a')
    assert set(weights) == {'a', 'b'}
    for i in range(3):
        v = dec.vector(i)
        for M in (A, B):
            lam = rayleigh_quotient(M, v)
            np.testing.assert_allclose(M @ v, lam * v, atol=1e-10)


def test_separating_eig_keeps_a_separated_pivot():
    dec, weights = separating_eig({'a': np.diag([1.0, 2.0]), 'b': np.eye(2)}, 'a')
    assert weights == {'a': 1.0}
    assert sorted(dec.eigenvalues.real) == pytest.approx([1.0, 2.0])
