"""Variational eigensolvers over parametrized Hamiltonian families.

The package models a molecular Hamiltonian family H(lambda) as splined
Pauli coefficients, simulates variational eigensolver runs on a dense
statevector, and offers two ways to move through the family: mutual
gradient descent for finding equilibrium geometry, and a
predictor-corrector continuation that traces whole energy curves from a
single converged point. A brute-force diagonalization oracle backs every
result.
"""

__version__ = "0.1.0"

from .continuation import (
    ContinuationPlan,
    ContinuationResult,
    SingularHessianError,
    continue_path,
    continue_ssvqe,
    grid_path,
    polyline_path,
    predictor_step,
)
from .family import (
    DomainError,
    HamiltonianFamily,
    SchemaError,
    family_from_dict,
    load_family,
)
from .landscape import LandscapeContext
from .mgd import MgdOptions, MgdTrace, mgd_optimize
from .oracle import PesMinimum, eigenspectrum, pes_argmin, sector_spectrum
from .pauli import PauliString, PauliSum, apply_pauli, dense_matrix, expectation
from .simulator import StateVector, apply_ansatz, prepare_reference
from .ucc import (
    Ansatz,
    Generator,
    h2_ansatz,
    jw_double_excitation,
    jw_single_excitation,
    lih_ansatz,
    resolve_ansatz,
    two_electron_sector_ansatz,
    uccsd_ansatz,
)
from .vqe import (
    SsvqeResult,
    SsvqeSpec,
    VqeOptions,
    VqeResult,
    minimize,
    ssvqe_cost,
    ssvqe_minimize,
)

__all__ = [
    "Ansatz",
    "ContinuationPlan",
    "ContinuationResult",
    "DomainError",
    "Generator",
    "HamiltonianFamily",
    "LandscapeContext",
    "MgdOptions",
    "MgdTrace",
    "PauliString",
    "PauliSum",
    "PesMinimum",
    "SchemaError",
    "SingularHessianError",
    "SsvqeResult",
    "SsvqeSpec",
    "StateVector",
    "VqeOptions",
    "VqeResult",
    "apply_ansatz",
    "apply_pauli",
    "continue_path",
    "continue_ssvqe",
    "dense_matrix",
    "eigenspectrum",
    "expectation",
    "family_from_dict",
    "grid_path",
    "h2_ansatz",
    "jw_double_excitation",
    "jw_single_excitation",
    "lih_ansatz",
    "load_family",
    "mgd_optimize",
    "minimize",
    "pes_argmin",
    "polyline_path",
    "predictor_step",
    "prepare_reference",
    "resolve_ansatz",
    "sector_spectrum",
    "ssvqe_cost",
    "ssvqe_minimize",
    "two_electron_sector_ansatz",
    "uccsd_ansatz",
]
