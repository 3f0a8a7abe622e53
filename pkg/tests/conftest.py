"""Shared synthetic families and ansätze for the test suite.

The single-qubit analytic family is the workhorse: with the ansatz
exp(-i theta Y) on |0> and coefficients (cos lambda, sin lambda) on
(Z, X), the energy is exactly cos(2 theta - lambda), so every quantity
the library computes has a closed form to compare against.
"""

import numpy as np
import pytest

from vqefam.family import family_from_dict
from vqefam.pauli import PauliString
from vqefam.ucc import Ansatz, Generator


def family_payload(name, n_qubits, axes, grids, terms, reference_energies=None):
    data = {
        "name": name,
        "n_qubits": n_qubits,
        "lambda": {"axes": axes, "grids": [list(map(float, g)) for g in grids]},
        "terms": [
            {"pauli": label, "coeffs": list(map(float, coeffs))}
            for label, coeffs in terms
        ],
    }
    if reference_energies is not None:
        data["reference_energies"] = list(map(float, reference_energies))
    return data


def make_family(name, n_qubits, axes, grids, terms, reference_energies=None):
    data = family_payload(name, n_qubits, axes, grids, terms, reference_energies)
    return family_from_dict(data, source="<synthetic>")


def y_rotation_ansatz(n_params: int = 1) -> Ansatz:
    """exp(-i theta_k Y) repeated; one qubit, reference |0>."""
    gen = Generator(factors=((1.0, PauliString("Y")),))
    return Ansatz(n_qubits=1, reference="0", generators=(gen,) * n_params)


@pytest.fixture(scope="session")
def analytic_family():
    """c_Z = cos(lambda), c_X = sin(lambda) over [0, pi]; E = cos(2t - l)."""
    grid = np.linspace(0.0, np.pi, 161)
    return make_family(
        "analytic-1q",
        1,
        ["phi"],
        [grid],
        [("Z", np.cos(grid)), ("X", np.sin(grid))],
    )


@pytest.fixture(scope="session")
def quadratic_family():
    """Identity coefficient (lambda-2)^2 plus a constant Z term.

    E(theta, lambda) = (lambda-2)^2 + cos(2 theta); joint minimum at
    lambda = 2, theta = pi/2 (mod pi), energy -1.
    """
    grid = np.linspace(0.0, 4.0, 81)
    return make_family(
        "quadratic-1q",
        1,
        ["x"],
        [grid],
        [("I", (grid - 2.0) ** 2), ("Z", np.ones_like(grid))],
    )


@pytest.fixture(scope="session")
def constant_family():
    grid = np.linspace(-1.0, 1.0, 9)
    return make_family(
        "constant-1q",
        1,
        ["x"],
        [grid],
        [("Z", np.full_like(grid, 0.7)), ("X", np.full_like(grid, -0.2))],
    )


@pytest.fixture(scope="session")
def analytic_2d_family():
    """c_Z = cos(a+b), c_X = sin(a+b) on a tensor grid; E = cos(2t-a-b)."""
    ga = np.linspace(0.0, 1.5, 31)
    gb = np.linspace(0.0, 1.5, 37)
    aa, bb = np.meshgrid(ga, gb, indexing="ij")
    return make_family(
        "analytic-2d",
        1,
        ["a", "b"],
        [ga, gb],
        [("Z", np.cos(aa + bb).ravel()), ("X", np.sin(aa + bb).ravel())],
    )
