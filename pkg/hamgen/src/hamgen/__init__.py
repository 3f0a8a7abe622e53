"""Offline generator for Hamiltonian-family JSON files.

Runs a small self-contained electronic-structure pipeline (Gaussian
integrals, restricted Hartree-Fock, active-space reduction, Jordan-Wigner
mapping) over a geometry grid and emits one family document per request,
ready to be loaded by the consuming library.
"""

__version__ = "0.1.0"

from .basis import BasisError
from .families import MoleculeSpec, SpecError, generate, load_spec, write_family, write_manifest
from .reductions import GenerationError

__all__ = [
    "BasisError",
    "GenerationError",
    "MoleculeSpec",
    "SpecError",
    "generate",
    "load_spec",
    "write_family",
    "write_manifest",
    "__version__",
]
