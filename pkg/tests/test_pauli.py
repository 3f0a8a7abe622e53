"""Pauli-string conventions, dense agreement, and PauliSum bookkeeping."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vqefam.pauli import (
    DENSE_QUBIT_CAP,
    PauliString,
    PauliSum,
    apply_pauli,
    dense_matrix,
    expectation,
    parse_pauli,
)

SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_oracle(label: str) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for ch in label:
        out = np.kron(out, SINGLE[ch])
    return out


labels = st.text(alphabet="IXYZ", min_size=1, max_size=5)


@given(labels)
def test_label_round_trip(label):
    ps = PauliString(label)
    assert ps.label == label
    assert ps.n_qubits == len(label)


@given(labels)
@settings(max_examples=60)
def test_dense_matches_kron_oracle(label):
    assert np.allclose(PauliString(label).dense(), kron_oracle(label), atol=1e-14)


@given(labels, st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=60)
def test_apply_matches_dense(label, seed):
    rng = np.random.default_rng(seed)
    dim = 2 ** len(label)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    ps = PauliString(label)
    assert np.allclose(ps.apply(psi), kron_oracle(label) @ psi, atol=1e-12)


def test_qubit_zero_is_leftmost():
    # |01> sits at index 1, |1100> at index 12: bit j weighs 2^(n-1-j)
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0  # |01>
    out = PauliString("XI").apply(psi)  # flip qubit 0 -> |11>
    assert np.argmax(np.abs(out)) == 3
    out = PauliString("IX").apply(psi)  # flip qubit 1 -> |00>
    assert np.argmax(np.abs(out)) == 0


def test_y_phase():
    psi = np.zeros(2, dtype=complex)
    psi[0] = 1.0
    out = PauliString("Y").apply(psi)
    assert np.allclose(out, [0.0, 1j])
    back = PauliString("Y").apply(out)
    assert np.allclose(back, psi)  # Y^2 = I


def test_invalid_label_characters():
    with pytest.raises(ValueError, match="position 1"):
        PauliString("XQZ")
    with pytest.raises(ValueError):
        PauliString("")


def test_weight():
    assert PauliString("IXIZ").weight == 2
    assert PauliString("III").weight == 0


def test_parse_pauli_is_alias():
    assert parse_pauli("XZ") == PauliString("XZ")
    assert hash(parse_pauli("XZ")) == hash(PauliString("XZ"))


def test_dense_cap():
    label = "I" * (DENSE_QUBIT_CAP + 1)
    with pytest.raises(ValueError, match="cap"):
        PauliString(label).dense()


class TestPauliSum:
    def test_duplicates_merge_by_addition(self):
        h = PauliSum([(1.0, "XZ"), (0.5, "XZ"), (2.0, "ZZ")])
        assert h.strings == (PauliString("XZ"), PauliString("ZZ"))
        assert np.allclose(h.coefficients, [1.5, 2.0])

    def test_first_appearance_order_and_zero_kept(self):
        h = PauliSum([(0.0, "ZZ"), (1.0, "XX")])
        assert [s.label for s in h.strings] == ["ZZ", "XX"]
        assert np.allclose(h.coefficients, [0.0, 1.0])

    def test_complex_coefficient_rejected(self):
        with pytest.raises(ValueError, match="real"):
            PauliSum([(1.0 + 0.1j, "Z")])

    def test_register_size_mismatch_rejected(self):
        with pytest.raises(ValueError, match="qubit"):
            PauliSum([(1.0, "Z"), (1.0, "ZZ")])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            PauliSum([])

    def test_dense_and_apply_agree(self):
        rng = np.random.default_rng(7)
        h = PauliSum([(0.3, "XY"), (-1.2, "ZI"), (0.5, "YY")])
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert np.allclose(h.apply(psi), h.dense() @ psi, atol=1e-12)
        assert np.allclose(apply_pauli(h, psi), h.apply(psi))


def test_expectation_of_z_on_basis_states():
    h = PauliSum([(1.0, "Z")])
    zero = np.array([1.0, 0.0], dtype=complex)
    one = np.array([0.0, 1.0], dtype=complex)
    assert expectation(h, zero) == pytest.approx(1.0)
    assert expectation(h, one) == pytest.approx(-1.0)


def test_expectation_requires_normalized_state():
    h = PauliSum([(1.0, "Z")])
    with pytest.raises(ValueError, match="normal"):
        expectation(h, np.array([2.0, 0.0], dtype=complex))


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=25)
def test_expectation_is_real_for_random_states(seed):
    rng = np.random.default_rng(seed)
    h = PauliSum([(0.4, "XY"), (0.6, "ZZ"), (-0.3, "YX"), (0.9, "II")])
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    value = expectation(h, psi)
    assert isinstance(value, float)
    # against the dense quadratic form
    assert value == pytest.approx((psi.conj() @ h.dense() @ psi).real, abs=1e-12)


def test_dense_matrix_helper_is_hermitian():
    h = PauliSum([(0.4, "XY"), (0.6, "ZZ")])
    m = dense_matrix(h)
    assert np.allclose(m, m.conj().T)
