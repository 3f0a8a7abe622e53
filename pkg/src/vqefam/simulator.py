"""Exact state-vector simulation of Pauli-exponential circuits.

Every gate in this package is of the form ``exp(-i * angle * P)`` for a
Pauli string ``P``. Because ``P^2 = I`` the exponential is evaluated in
closed form, ``cos(angle)|psi> - i sin(angle) P|psi>``, with no gate
decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .pauli import PauliString

if TYPE_CHECKING:
    from .ucc import Ansatz


@dataclass
class StateVector:
    """Complex amplitudes over the computational basis of ``n_qubits``."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        dim = 1 << self.n_qubits
        if self.amplitudes.shape != (dim,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"expected ({dim},)"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def reference_index(bits: str) -> int:
    """Amplitude index of a computational basis label like ``\"1100\"``."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"reference must be a non-empty 0/1 string, got {bits!r}")
    return int(bits, 2)


def prepare_reference(bits: str) -> StateVector:
    """Computational basis state ``|bits>`` with qubit 0 leftmost."""
    n = len(bits)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[reference_index(bits)] = 1.0
    return StateVector(n, amps)


def apply_exp_pauli(
    state: StateVector, string: PauliString | str, angle: float
) -> StateVector:
    """Apply ``exp(-i * angle * P)`` to a state."""
    ps = string if isinstance(string, PauliString) else PauliString(string)
    if ps.n_qubits != state.n_qubits:
        raise ValueError(
            f"operator acts on {ps.n_qubits} qubits, state has {state.n_qubits}"
        )
    amps = _exp_pauli(state.amplitudes, ps, angle)
    return StateVector(state.n_qubits, amps)


def _exp_pauli(amplitudes: np.ndarray, ps: PauliString, angle: float) -> np.ndarray:
    return math.cos(angle) * amplitudes - 1j * math.sin(angle) * ps.apply(amplitudes)


def evolve_factors(
    n_qubits: int,
    ref_index: int,
    strings: Sequence[PauliString],
    angles: Sequence[float],
) -> np.ndarray:
    """Raw-array circuit evaluation used by the landscape layer.

    Starts from the basis state ``ref_index`` and applies
    ``exp(-i * angles[k] * strings[k])`` in order.
    """
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[ref_index] = 1.0
    for ps, angle in zip(strings, angles):
        amps = _exp_pauli(amps, ps, angle)
    return amps


def apply_ansatz(ansatz: "Ansatz", theta: Sequence[float]) -> StateVector:
    """Prepare ``U(theta)|reference>`` for a factorized ansatz.

    Generators are applied in declared order; within a generator each
    factor ``(prefactor, string)`` contributes ``exp(-i * theta_k *
    prefactor * string)``. The factors of one generator commute, so their
    internal order is immaterial.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (ansatz.parameter_count,):
        raise ValueError(
            f"theta has shape {theta.shape}, ansatz takes "
            f"{ansatz.parameter_count} parameters"
        )
    strings, angles = ansatz.factor_schedule(theta)
    amps = evolve_factors(
        ansatz.n_qubits, reference_index(ansatz.reference), strings, angles
    )
    return StateVector(ansatz.n_qubits, amps)
