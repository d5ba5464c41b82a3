import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsuff import linalg
from qsuff.errors import DomainError, NotHermitian, NotPSD, NotSquare
from qsuff.random import default_rng, rand_density_matrix, rand_hermitian

from conftest import RHO_DIAG, SIGMA_FLAT

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_eig_identity():
    w, V = linalg.hermitian_eig(np.eye(2))
    assert np.allclose(w, [1, 1])
    assert np.allclose(V.conj().T @ V, np.eye(2))


def test_eig_diagonal_ascending():
    w, _ = linalg.hermitian_eig(np.diag([0.25, -0.25]))
    assert np.allclose(w, [-0.25, 0.25], atol=1e-15)


def test_eig_pauli_x():
    w, V = linalg.hermitian_eig(PAULI_X)
    assert np.allclose(w, [-1, 1], atol=1e-14)
    assert np.allclose((V * w) @ V.conj().T, PAULI_X, atol=1e-14)


def test_eig_rejects_non_square():
    with pytest.raises(NotSquare):
        linalg.hermitian_eig(np.ones((2, 3)))


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        linalg.hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_eig_symmetrizes_round_off():
    A = np.array([[1.0, 0.5 + 1e-13j], [0.5, 2.0]])
    w, V = linalg.hermitian_eig(A)
    assert np.allclose((V * w) @ V.conj().T, (A + A.conj().T) / 2, atol=1e-14)


def test_eig_rejects_nan():
    with pytest.raises(DomainError):
        linalg.hermitian_eig(np.array([[np.nan, 0], [0, 1]]))


def test_parts_diagonal():
    parts = linalg.positive_negative_parts(np.diag([0.25, -0.25]))
    assert parts.tr_pos == pytest.approx(0.25)
    assert parts.tr_neg == pytest.approx(0.25)


def test_parts_of_psd_have_no_negative_part(rng):
    parts = linalg.positive_negative_parts(rand_density_matrix(4, rng))
    assert parts.tr_neg == 0.0
    assert np.allclose(parts.neg, 0)


def test_parts_state_difference():
    assert linalg.positive_negative_parts(RHO_DIAG - SIGMA_FLAT).tr_neg == pytest.approx(0.25, abs=1e-15)


def test_parts_reconstruction_random():
    rng = default_rng(1)
    for _ in range(1000):
        d = int(rng.integers(2, 9))
        A = rand_hermitian(d, rng)
        pos, neg, tp, tn = linalg.positive_negative_parts(A)
        fro = np.linalg.norm(A)
        assert np.linalg.norm(A - (pos - neg)) <= d * 1e-12 * fro
        assert np.linalg.norm(pos @ neg) <= 1e-12 * fro**2
        tol = d * 1e-11 * max(1.0, fro)
        assert abs(linalg.trace_norm(A) - (tp + tn)) <= tol
        assert abs(np.trace(A).real - (tp - tn)) <= tol
        assert np.linalg.eigvalsh(pos).min() >= -1e-12 * fro
        assert np.linalg.eigvalsh(neg).min() >= -1e-12 * fro


def test_trace_norm_examples():
    assert linalg.trace_norm(np.zeros((3, 3))) == 0.0
    assert linalg.trace_norm(np.diag([0.25, -0.25])) == pytest.approx(0.5)
    assert linalg.trace_norm(RHO_DIAG - 2 * SIGMA_FLAT) == pytest.approx(1.0)


def test_trace_norm_non_hermitian_uses_singular_values(rng):
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert linalg.trace_norm(A) == pytest.approx(np.linalg.svd(A, compute_uv=False).sum())
    assert linalg.trace_norm(A) >= abs(np.trace(A))


def test_trace_norm_rejects_non_square():
    with pytest.raises(NotSquare):
        linalg.trace_norm(np.ones((2, 3)))


def test_matrix_function_identity_symmetrizes():
    A = np.array([[1.0, 2.0], [2.0, -1.0]])
    assert np.allclose(linalg.matrix_function(A, lambda w: w), A)


def test_matrix_function_sqrt_and_log():
    assert np.allclose(linalg.matrix_function(np.diag([4.0, 9.0]), np.sqrt), np.diag([2, 3]))
    L = linalg.matrix_function(np.diag([0.5, 0.5]), np.log)
    assert np.allclose(L, np.diag([np.log(0.5)] * 2), atol=1e-12)


def test_matrix_function_domain_error():
    with pytest.raises(DomainError):
        linalg.matrix_function(np.diag([1.0, -1.0]), np.log)


def test_matrix_function_support_only_zeros_kernel():
    L = linalg.matrix_function(np.diag([0.5, 0.0]), np.log, support_only=True)
    assert np.allclose(L, np.diag([np.log(0.5), 0.0]))


def test_imaginary_power_at_zero_is_identity(rng):
    assert np.allclose(linalg.matrix_imaginary_power(rand_density_matrix(3, rng), 0.0), np.eye(3))


def test_imaginary_power_diagonal():
    a, b, t = 0.3, 0.7, 1.3
    got = linalg.matrix_imaginary_power(np.diag([a, b]), t)
    assert np.allclose(got, np.diag(np.exp(1j * t * np.log([a, b]))), atol=1e-14)


def test_imaginary_power_unitary(rng):
    for d in (2, 3, 5):
        U = linalg.matrix_imaginary_power(rand_density_matrix(d, rng), 1.7)
        assert np.linalg.norm(U.conj().T @ U - np.eye(d)) <= 1e-10


def test_imaginary_power_identity_on_kernel():
    U = linalg.matrix_imaginary_power(np.diag([0.6, 0.4, 0.0]), 2.0)
    assert U[2, 2] == 1.0
    assert np.linalg.norm(U.conj().T @ U - np.eye(3)) <= 1e-12


def test_imaginary_power_rejects_non_psd():
    with pytest.raises(NotPSD):
        linalg.matrix_imaginary_power(np.diag([1.0, -0.1]), 1.0)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), s=st.floats(-3, 3), t=st.floats(-3, 3), rank=st.integers(1, 4))
def test_imaginary_power_group_law(seed, s, t, rank):
    A = rand_density_matrix(4, default_rng(seed), rank=rank)
    P = linalg.support_projection(A).projector
    lhs = linalg.matrix_imaginary_power(A, s) @ linalg.matrix_imaginary_power(A, t)
    rhs = linalg.matrix_imaginary_power(A, s + t)
    assert np.linalg.norm(P @ (lhs - rhs) @ P) <= 1e-9


def test_support_projection_examples(rng):
    full = linalg.support_projection(rand_density_matrix(3, rng))
    assert full.rank == 3 and np.allclose(full.projector, np.eye(3))
    part = linalg.support_projection(np.diag([0.7, 0.3, 0.0]))
    assert part.rank == 2 and np.allclose(part.projector, np.diag([1, 1, 0]))
    assert linalg.support_projection(np.diag([1.0, 0.0])).rank == 1


def test_support_projection_is_idempotent(rng):
    P = linalg.support_projection(rand_density_matrix(5, rng, rank=3)).projector
    assert np.linalg.norm(P @ P - P) <= 1e-10
    assert np.linalg.norm(P - P.conj().T) <= 1e-12


def test_support_projection_threshold_is_relative():
    # same state up to scale keeps the same rank
    A = np.diag([1.0, 1e-11, 0.0])
    assert linalg.support_projection(A).rank == linalg.support_projection(1e6 * A).rank == 1


def test_support_projection_rejects_bad_input():
    with pytest.raises(NotPSD):
        linalg.support_projection(np.diag([1.0, -0.5]))
    with pytest.raises(DomainError):
        linalg.support_projection(np.eye(2), threshold=0.0)


def test_psd_clipping_of_dust():
    w, _ = linalg.psd_eig(np.diag([1.0, -1e-12]))
    assert w.min() == 0.0


def test_matrix_power_complex_exponent_on_support():
    M = linalg.matrix_power(np.diag([0.25, 0.0]), 0.5 - 0.2j)
    assert M[1, 1] == 0
    assert M[0, 0] == pytest.approx(np.exp((0.5 - 0.2j) * np.log(0.25)))


def test_matrix_log_kernel_is_zero():
    assert np.allclose(linalg.matrix_log(np.diag([np.e, 0.0])), np.diag([1.0, 0.0]))
