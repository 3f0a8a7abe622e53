"""Exact-diagonalization references for small registers.

Everything here goes through dense matrices, so it is capped at twelve
qubits; the point is to provide truth values the variational paths can
be checked against, not to scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .family import HamiltonianFamily
from .pauli import DENSE_QUBIT_CAP, PauliSum

COMMUTATOR_TOL = 1e-10


def eigenspectrum(hamiltonian: PauliSum, k: int | None = None):
    """Lowest ``k`` eigenpairs (all of them when ``k`` is None).

    Returns ``(values, vectors)`` with eigenvalues ascending and the
    eigenvectors in the columns of ``vectors``.
    """
    if hamiltonian.n_qubits > DENSE_QUBIT_CAP:
        raise ValueError(
            f"exact diagonalization is capped at {DENSE_QUBIT_CAP} qubits, "
            f"got {hamiltonian.n_qubits}"
        )
    values, vectors = np.linalg.eigh(hamiltonian.dense())
    if k is not None:
        values = values[:k]
        vectors = vectors[:, :k]
    return values, vectors


def sector_spectrum(hamiltonian: PauliSum, electrons: int, k: int | None = None):
    """Eigenpairs restricted to the fixed-particle-number sector.

    The occupation-number operator counts set bits of the basis index.
    The Hamiltonian must commute with it (checked to within
    ``COMMUTATOR_TOL``); otherwise the sector restriction would be
    meaningless and a ValueError is raised.

    The returned vectors live in the full register dimension, padded
    with zeros outside the sector.
    """
    n = hamiltonian.n_qubits
    if n > DENSE_QUBIT_CAP:
        raise ValueError(
            f"exact diagonalization is capped at {DENSE_QUBIT_CAP} qubits, got {n}"
        )
    if not 0 <= electrons <= n:
        raise ValueError(f"sector {electrons} out of range for {n} qubits")
    dim = 1 << n
    matrix = hamiltonian.dense()
    counts = np.bitwise_count(np.arange(dim, dtype=np.uint64)).astype(np.float64)
    commutator = matrix * counts[None, :] - counts[:, None] * matrix
    worst = float(np.max(np.abs(commutator)))
    if worst > COMMUTATOR_TOL:
        raise ValueError(
            "Hamiltonian does not conserve particle number "
            f"(|[H, N]| reaches {worst:.3e}, tolerance {COMMUTATOR_TOL:g})"
        )
    sector = np.flatnonzero(counts == electrons)
    block = matrix[np.ix_(sector, sector)]
    values, block_vectors = np.linalg.eigh(block)
    vectors = np.zeros((dim, len(sector)), dtype=np.complex128)
    vectors[sector, :] = block_vectors
    if k is not None:
        values = values[:k]
        vectors = vectors[:, :k]
    return values, vectors


@dataclass
class PesMinimum:
    """Location of the lowest ground-state energy over the family grid."""

    lambda_star: tuple[float, ...]
    energy: float
    node_index: tuple[int, ...]
    node_energy: float
    on_boundary: bool
    refined: bool


def _ground_energy(family: HamiltonianFamily, lam) -> float:
    values = np.linalg.eigvalsh(family.hamiltonian_at(lam).dense())
    return float(values[0])


def _parabola_vertex(x: np.ndarray, y: np.ndarray) -> float | None:
    """Vertex abscissa of the parabola through three points, if convex."""
    d21 = x[1] - x[0]
    d31 = x[2] - x[0]
    # quadratic coefficients from divided differences
    slope1 = (y[1] - y[0]) / d21
    slope2 = (y[2] - y[1]) / (x[2] - x[1])
    curvature = (slope2 - slope1) / d31
    if curvature <= 0.0:
        return None
    return 0.5 * (x[0] + x[1] - slope1 / curvature)


def pes_argmin(family: HamiltonianFamily, refine: bool = True) -> PesMinimum:
    """Grid scan for the ground-state minimum, with quadratic refinement.

    Scans every node by exact diagonalization, then (for interior
    minima) fits a parabola through the three nodes straddling the
    minimum on each axis and re-diagonalizes at the refined point.
    Minima on the grid boundary are flagged and left unrefined.
    """
    grids = family.grids
    shape = family.grid_shape
    energies = np.empty(shape)
    for index, lam in zip(np.ndindex(*shape), family.grid_points()):
        energies[index] = _ground_energy(family, lam)
    flat_best = int(np.argmin(energies))
    node_index = np.unravel_index(flat_best, shape)
    node_energy = float(energies[node_index])
    on_boundary = any(
        i == 0 or i == axis_len - 1 for i, axis_len in zip(node_index, shape)
    )
    lambda_star = tuple(float(grids[a][i]) for a, i in enumerate(node_index))
    if on_boundary or not refine:
        return PesMinimum(
            lambda_star=lambda_star,
            energy=node_energy,
            node_index=tuple(int(i) for i in node_index),
            node_energy=node_energy,
            on_boundary=on_boundary,
            refined=False,
        )
    refined_point = list(lambda_star)
    for axis in range(len(shape)):
        i = node_index[axis]
        window = [i - 1, i, i + 1]
        x = grids[axis][window]
        selector = list(node_index)
        y = np.empty(3)
        for j, w in enumerate(window):
            selector[axis] = w
            y[j] = energies[tuple(selector)]
        vertex = _parabola_vertex(x, y)
        if vertex is not None and x[0] < vertex < x[2]:
            refined_point[axis] = float(vertex)
    refined_energy = _ground_energy(family, np.array(refined_point))
    if refined_energy > node_energy:
        # The cross-section fit overshot; keep the node.
        return PesMinimum(
            lambda_star=lambda_star,
            energy=node_energy,
            node_index=tuple(int(i) for i in node_index),
            node_energy=node_energy,
            on_boundary=False,
            refined=False,
        )
    return PesMinimum(
        lambda_star=tuple(refined_point),
        energy=refined_energy,
        node_index=tuple(int(i) for i in node_index),
        node_energy=node_energy,
        on_boundary=False,
        refined=True,
    )
