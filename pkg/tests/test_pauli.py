import math

import numpy as np
import pytest
import scipy.linalg

from conftest import random_hermitian, random_unitary
from crlab.errors import BranchCutError, InvalidInputError
from crlab.pauli import (
    decompose,
    generating_hamiltonian,
    is_hermitian,
    is_unitary,
    mat_exp,
    mat_log_principal,
    pauli_labels,
    pauli_matrix,
    recompose,
)


def test_pauli_matrix_identity():
    assert np.allclose(pauli_matrix("I"), np.eye(2))


def test_pauli_matrix_zx_algebra():
    zx = pauli_matrix("ZX")
    assert abs(np.trace(zx)) == 0
    assert np.allclose(zx @ zx, np.eye(4))
    assert is_hermitian(zx)


def test_pauli_matrix_squares_to_identity_every_label():
    for n in (1, 2, 3):
        for label in pauli_labels(n):
            p = pauli_matrix(label)
            assert np.allclose(p @ p, np.eye(2**n), atol=1e-12)


def test_three_qubit_roundtrip_label():
    dec = decompose(pauli_matrix("IYZ"))
    assert abs(dec["IYZ"] - 1.0) < 1e-12
    assert sum(abs(c) for lbl, c in dec.items() if lbl != "IYZ") < 1e-12


def test_decompose_identity():
    dec = decompose(np.eye(4))
    assert abs(dec["II"] - 1.0) < 1e-14


def test_decompose_single_pauli_exponential():
    u = mat_exp(pauli_matrix("ZX"), math.pi / 4.0)
    dec = decompose(u)
    assert abs(dec["II"] - 1.0 / math.sqrt(2.0)) < 1e-12
    assert abs(dec["ZX"] - (-1j / math.sqrt(2.0))) < 1e-12


def test_decompose_recompose_roundtrip_random(rng):
    for _ in range(100):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.max(np.abs(recompose(decompose(m)) - m)) < 1e-12


def test_decompose_rejects_bad_dimension():
    with pytest.raises(InvalidInputError):
        decompose(np.eye(3))


def test_parseval_for_random_unitaries(rng):
    for _ in range(100):
        u = random_unitary(rng, 4)
        assert abs(decompose(u).weight_sum() - 1.0) < 1e-12


def test_mat_exp_zero_hamiltonian():
    assert np.allclose(mat_exp(np.zeros((4, 4)), 1.0), np.eye(4))


def test_mat_exp_single_pauli():
    t = 1e-7
    nu = 0.5 * math.pi / t
    u = mat_exp(0.5 * nu * pauli_matrix("ZX"), t)
    dec = decompose(u)
    assert abs(dec["II"] - 1.0 / math.sqrt(2.0)) < 1e-12
    assert abs(dec["ZX"] - (-1j / math.sqrt(2.0))) < 1e-12


def test_mat_exp_matches_scaling_and_squaring(rng):
    for dim in (2, 4, 8):
        for _ in range(20):
            h = random_hermitian(rng, dim, scale=2.0)
            t = rng.uniform(0.1, 3.0)
            assert np.max(np.abs(mat_exp(h, t) - scipy.linalg.expm(-1j * h * t))) < 1e-10


def test_mat_exp_rejects_non_hermitian():
    with pytest.raises(InvalidInputError):
        mat_exp(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


def test_mat_exp_unitarity(rng):
    for _ in range(20):
        u = mat_exp(random_hermitian(rng, 8, scale=3.0), 1.7)
        assert is_unitary(u, atol=1e-10)


def test_generating_hamiltonian_identity():
    dec = generating_hamiltonian(np.eye(4), 1e-7)
    assert all(abs(c) < 1e-9 for _, c in dec.items())


def test_generating_hamiltonian_zx_quarter_turn():
    tau = 2.5e-7
    u = mat_exp(pauli_matrix("ZX"), math.pi / 4.0)
    dec = generating_hamiltonian(u, tau)
    assert abs(dec["ZX"] - math.pi / (8.0 * tau)) < 1e-6 * math.pi / (8 * tau)
    others = sum(abs(c) for lbl, c in dec.items() if lbl != "ZX")
    assert others < 1e-9 / tau


def test_generating_hamiltonian_roundtrip_small_generators(rng):
    t = 1e-7
    for _ in range(30):
        h = random_hermitian(rng, 4, scale=0.25 / t)
        u = mat_exp(h, 2.0 * t)
        dec_h = decompose(h)
        dec_rec = generating_hamiltonian(u, t)
        scale = max(abs(c) for _, c in dec_h.items())
        for label in dec_h.coeffs:
            assert abs(dec_rec[label] - dec_h[label]) < 1e-9 * max(scale, 1.0)
        assert np.max(np.abs(mat_exp(dec_rec.matrix(), 2.0 * t) - u)) < 1e-9


def test_mat_log_branch_guard():
    # eigenphase exactly at pi sits on the cut
    u = np.diag([1.0, -1.0]).astype(complex)
    with pytest.raises(BranchCutError) as err:
        mat_log_principal(u)
    assert abs(abs(err.value.eigenphase) - math.pi) < 1e-9


def test_mat_log_rejects_non_unitary():
    with pytest.raises(InvalidInputError):
        mat_log_principal(np.diag([1.0, 2.0]).astype(complex))


def test_roundtrip_inside_branch_window(rng):
    # |H| 2t close to (but inside) the principal window still round-trips
    t = 1e-7
    h = 0.5 * (math.pi - 1e-3) / (2 * t) * pauli_matrix("ZX")
    dec = generating_hamiltonian(mat_exp(h, 2 * t), t)
    assert abs(dec["ZX"] - 0.5 * (math.pi - 1e-3) / (2 * t)) < 1e-6 / t


def test_decomposition_json_roundtrip():
    dec = decompose(mat_exp(pauli_matrix("ZX"), math.pi / 4.0))
    payload = dec.to_json()
    assert isinstance(payload["ZX"], list) and len(payload["ZX"]) == 2
    from crlab.pauli import PauliDecomposition

    back = PauliDecomposition.from_json(2, payload)
    for label, c in dec.items():
        assert abs(back[label] - c) < 1e-15
