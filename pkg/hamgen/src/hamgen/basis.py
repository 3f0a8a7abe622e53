"""Minimal-basis shell data and molecule builders.

Shell tables are stored at Slater exponent zeta = 1 and scaled per atom
by zeta**2 (Gaussian exponents scale quadratically when the target
Slater function is stretched). Scale factors are the standard molecular
values: H 1.24, Li 1s 2.69, Li 2sp 0.80.

The STO-6G 2s/2p shared-exponent table is refit in this repository
(scripts/fit_sto6g_2sp.py) because only the 1s table was available;
both shells overlap the target Slater radial to better than 0.999998.

Geometry builders take grid values in angstrom and return basis
functions and point charges in bohr.
"""

from __future__ import annotations

import numpy as np

from .integrals import Contracted

BOHR_PER_ANGSTROM = 1.0 / 0.529177210903

STO3G_H_1S = (
    np.array([3.42525091, 0.62391373, 0.16885540]),  # zeta = 1.24 baked in
    np.array([0.15432897, 0.53532814, 0.44463454]),
)

STO6G_1S = (
    np.array([23.1030320, 4.2359157, 1.1850565, 0.4070989, 0.1580884, 0.0651095]),
    np.array([0.00916360, 0.04936150, 0.16853830, 0.37056280, 0.41649150, 0.13033400]),
)

# scripts/fit_sto6g_2sp.py output, frozen
STO6G_2SP_EXPS = np.array(
    [10.3084876476, 2.0403348340, 0.6341367624, 0.2439767057, 0.1059598868, 0.0485693170]
)
STO6G_2S_COEFFS = np.array(
    [-0.0132530362, -0.0469919924, -0.0337844592, 0.2502414866, 0.5951132218, 0.2407101141]
)
STO6G_2P_COEFFS = np.array(
    [0.0037597941, 0.0376800172, 0.1738980080, 0.4180340963, 0.4258578599, 0.1017102990]
)

ZETA_H = 1.24
ZETA_LI_1S = 2.69
ZETA_LI_2SP = 0.80

BASIS_NAMES = ("sto-3g", "sto-6g")


class BasisError(ValueError):
    pass


def _shell(center, powers, exps, coeffs, zeta) -> Contracted:
    return Contracted(
        np.asarray(center, dtype=np.float64),
        powers,
        np.asarray(exps) * zeta**2,
        np.asarray(coeffs),
    ).normalize()


def hydrogen_1s(center, basis: str) -> Contracted:
    if basis == "sto-3g":
        exps, coeffs = STO3G_H_1S
        return _shell(center, (0, 0, 0), exps, coeffs, 1.0)
    if basis == "sto-6g":
        exps, coeffs = STO6G_1S
        return _shell(center, (0, 0, 0), exps, coeffs, ZETA_H)
    raise BasisError(f"unknown basis {basis!r} (known: {', '.join(BASIS_NAMES)})")


def lithium_shells(center, basis: str) -> list[Contracted]:
    """Li 1s, 2s, 2px, 2py, 2pz in that order."""
    if basis != "sto-6g":
        raise BasisError(f"lithium is only tabulated in sto-6g, got {basis!r}")
    exps_1s, coeffs_1s = STO6G_1S
    shells = [_shell(center, (0, 0, 0), exps_1s, coeffs_1s, ZETA_LI_1S)]
    shells.append(
        _shell(center, (0, 0, 0), STO6G_2SP_EXPS, STO6G_2S_COEFFS, ZETA_LI_2SP)
    )
    for powers in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        shells.append(
            _shell(center, powers, STO6G_2SP_EXPS, STO6G_2P_COEFFS, ZETA_LI_2SP)
        )
    return shells


class Molecule:
    """Basis functions plus nuclear frame for one geometry."""

    def __init__(self, functions, charges, n_electrons):
        self.functions = list(functions)
        self.charges = [(float(z), np.asarray(c, dtype=np.float64)) for z, c in charges]
        self.n_electrons = int(n_electrons)


def h2_molecule(r_angstrom: float, basis: str = "sto-3g") -> Molecule:
    r = r_angstrom * BOHR_PER_ANGSTROM
    centers = [np.zeros(3), np.array([0.0, 0.0, r])]
    functions = [hydrogen_1s(c, basis) for c in centers]
    charges = [(1.0, c) for c in centers]
    return Molecule(functions, charges, 2)


def lih_molecule(r_angstrom: float, basis: str = "sto-6g") -> Molecule:
    r = r_angstrom * BOHR_PER_ANGSTROM
    li = np.zeros(3)
    h = np.array([0.0, 0.0, r])
    functions = lithium_shells(li, basis) + [hydrogen_1s(h, basis)]
    charges = [(3.0, li), (1.0, h)]
    return Molecule(functions, charges, 4)


def h4_molecule(d_angstrom: float, alpha: float, basis: str = "sto-3g") -> Molecule:
    """Planar zigzag H4: A-B-C-D, equal bond length d.

    Angle ABC is the variable alpha, angle BCD is fixed at 60 degrees,
    with A and D on opposite sides of the BC axis (trans arrangement).
    Alpha is in radians; d in angstrom.
    """
    d = d_angstrom * BOHR_PER_ANGSTROM
    beta = np.pi / 3.0
    b = np.zeros(3)
    c = np.array([d, 0.0, 0.0])
    a = np.array([d * np.cos(alpha), d * np.sin(alpha), 0.0])
    dd = c + np.array([-d * np.cos(beta), -d * np.sin(beta), 0.0])
    centers = [a, b, c, dd]
    functions = [hydrogen_1s(p, basis) for p in centers]
    charges = [(1.0, p) for p in centers]
    return Molecule(functions, charges, 4)
