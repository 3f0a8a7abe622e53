"""Pauli strings and real-weighted Pauli sums on a fixed qubit register.

Conventions used across the package:

* A Pauli string is written as a label over ``{I, X, Y, Z}`` with qubit 0
  as the leftmost character.
* Basis state ``|b_0 b_1 ... b_{n-1}>`` lives at amplitude index
  ``sum_j b_j * 2**(n-1-j)``, i.e. qubit 0 is the most significant bit.
  ``|01>`` is index 1 of 4, ``|1100>`` is index 12 of 16.
"""

from __future__ import annotations

import numpy as np

PAULI_CHARS = "IXYZ"

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
}

DENSE_QUBIT_CAP = 12


class PauliString:
    """An n-qubit Pauli operator identified by its label.

    Parameters
    ----------
    label:
        String over ``IXYZ``; qubit 0 is the leftmost character.
    """

    __slots__ = ("label", "n_qubits", "_xmask", "_yzmask", "_n_y")

    def __init__(self, label: str):
        if not isinstance(label, str) or len(label) == 0:
            raise ValueError("Pauli label must be a non-empty string")
        xmask = 0
        yzmask = 0
        n_y = 0
        n = len(label)
        for pos, ch in enumerate(label):
            if ch not in PAULI_CHARS:
                raise ValueError(
                    f"invalid Pauli character {ch!r} at position {pos} in {label!r}"
                )
            bit = 1 << (n - 1 - pos)
            if ch == "X":
                xmask |= bit
            elif ch == "Y":
                xmask |= bit
                yzmask |= bit
                n_y += 1
            elif ch == "Z":
                yzmask |= bit
        self.label = label
        self.n_qubits = n
        self._xmask = xmask
        self._yzmask = yzmask
        self._n_y = n_y

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PauliString) and other.label == self.label

    def __hash__(self) -> int:
        return hash(self.label)

    @property
    def weight(self) -> int:
        """Number of non-identity positions."""
        return sum(1 for ch in self.label if ch != "I")

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Return ``P |psi>`` for a state vector of matching dimension.

        Runs in O(2^n) using bit masks: X and Y flip their qubit's bit,
        Y and Z pick up ``(-1)^bit``, and each Y contributes a global
        factor ``i``.
        """
        dim = 1 << self.n_qubits
        if amplitudes.shape != (dim,):
            raise ValueError(
                f"state has shape {amplitudes.shape}, expected ({dim},) "
                f"for {self.n_qubits} qubits"
            )
        idx = np.arange(dim, dtype=np.uint64)
        parity = np.bitwise_count(idx & np.uint64(self._yzmask)) & 1
        phase = (1j ** self._n_y) * np.where(parity, -1.0, 1.0)
        out = np.empty(dim, dtype=np.complex128)
        out[idx ^ np.uint64(self._xmask)] = phase * amplitudes
        return out

    def dense(self) -> np.ndarray:
        """Dense ``2^n x 2^n`` matrix via Kronecker products."""
        if self.n_qubits > DENSE_QUBIT_CAP:
            raise ValueError(
                f"dense matrix refused for {self.n_qubits} qubits "
                f"(cap {DENSE_QUBIT_CAP})"
            )
        mat = np.array([[1.0]], dtype=np.complex128)
        for ch in self.label:
            mat = np.kron(mat, _SINGLE_QUBIT[ch])
        return mat


def parse_pauli(text: str) -> PauliString:
    """Parse a Pauli label, rejecting bad characters with their position."""
    return PauliString(text)


def _as_real(value) -> float:
    if isinstance(value, complex) or isinstance(value, np.complexfloating):
        raise ValueError(f"Pauli coefficients must be real, got {value!r}")
    return float(value)


class PauliSum:
    """A real linear combination of Pauli strings on a common register.

    Terms are kept in first-appearance order; duplicate labels are merged
    by coefficient addition. Coefficients must be real (the package only
    handles Hermitian observables with real weights).
    """

    __slots__ = ("_strings", "_coeffs", "n_qubits")

    def __init__(self, terms):
        strings: list[PauliString] = []
        coeffs: list[float] = []
        index: dict[str, int] = {}
        n_qubits = None
        for coeff, string in terms:
            ps = string if isinstance(string, PauliString) else PauliString(string)
            if n_qubits is None:
                n_qubits = ps.n_qubits
            elif ps.n_qubits != n_qubits:
                raise ValueError(
                    f"mixed register sizes: {ps.label!r} has {ps.n_qubits} qubits, "
                    f"expected {n_qubits}"
                )
            c = _as_real(coeff)
            slot = index.get(ps.label)
            if slot is None:
                index[ps.label] = len(strings)
                strings.append(ps)
                coeffs.append(c)
            else:
                coeffs[slot] += c
        if n_qubits is None:
            raise ValueError("PauliSum needs at least one term")
        self._strings = tuple(strings)
        self._coeffs = np.array(coeffs, dtype=np.float64)
        self.n_qubits = n_qubits

    def __len__(self) -> int:
        return len(self._strings)

    def __iter__(self):
        return iter(zip(self._coeffs, self._strings))

    def __repr__(self) -> str:
        inner = " + ".join(f"{c:g}*{s.label}" for c, s in self)
        return f"PauliSum({inner})"

    @property
    def strings(self) -> tuple[PauliString, ...]:
        return self._strings

    @property
    def coefficients(self) -> np.ndarray:
        return self._coeffs.copy()

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        out = np.zeros_like(amplitudes, dtype=np.complex128)
        for c, s in self:
            out += c * s.apply(amplitudes)
        return out

    def dense(self) -> np.ndarray:
        if self.n_qubits > DENSE_QUBIT_CAP:
            raise ValueError(
                f"dense matrix refused for {self.n_qubits} qubits "
                f"(cap {DENSE_QUBIT_CAP})"
            )
        dim = 1 << self.n_qubits
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for c, s in self:
            mat += c * s.dense()
        return mat


def apply_pauli(op: PauliString | PauliSum | str, amplitudes: np.ndarray) -> np.ndarray:
    """Apply a Pauli string or sum to a state vector."""
    if isinstance(op, str):
        op = PauliString(op)
    return op.apply(amplitudes)


def expectation(op: PauliString | PauliSum | str, amplitudes: np.ndarray) -> float:
    """Real expectation value ``<psi|O|psi>`` of a Pauli operator.

    The state must be normalized to 1e-8; the imaginary part of the raw
    expectation is asserted below 1e-10 and discarded.
    """
    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
    if isinstance(op, str):
        op = PauliString(op)
    value = complex(np.vdot(amplitudes, op.apply(amplitudes)))
    if abs(value.imag) > 1e-10:
        raise ValueError(
            f"expectation of a Hermitian Pauli operator came out complex "
            f"(imag={value.imag:.3e}); state or operator is inconsistent"
        )
    return value.real


def dense_matrix(op: PauliString | PauliSum | str) -> np.ndarray:
    """Dense matrix of a Pauli string or sum (register capped at 12 qubits)."""
    if isinstance(op, str):
        op = PauliString(op)
    return op.dense()
