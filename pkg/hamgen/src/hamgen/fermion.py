"""Spatial-orbital integrals to spin-orbital second-quantized tensors.

Spin orbitals interleave: spatial orbital ``m`` puts spin-up at ``2m``
and spin-down at ``2m + 1``, matching the qubit layout of the emitted
families (Hartree-Fock occupies a prefix of the register).
"""

from __future__ import annotations

import numpy as np


def spin_orbital_tensors(h_mo: np.ndarray, eri_mo: np.ndarray):
    """One-body ``h[p,q]`` and physicist two-body ``<pq|rs>`` tensors.

    ``eri_mo`` is chemist ``(pq|rs)`` over spatial MOs; the output
    applies the spin deltas ``sigma_p = sigma_r`` and ``sigma_q = sigma_s``.
    """
    n_spatial = h_mo.shape[0]
    n = 2 * n_spatial
    h1 = np.zeros((n, n))
    g2 = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(n):
            if p % 2 == q % 2:
                h1[p, q] = h_mo[p // 2, q // 2]
    for p in range(n):
        for q in range(n):
            for r in range(n):
                if p % 2 != r % 2:
                    continue
                for s in range(n):
                    if q % 2 == s % 2:
                        g2[p, q, r, s] = eri_mo[p // 2, r // 2, q // 2, s // 2]
    return h1, g2


def hartree_fock_energy_check(
    h1: np.ndarray, g2: np.ndarray, constant: float, n_electrons: int
) -> float:
    """Energy of the determinant occupying the first spin orbitals.

    Useful as a consistency pin: must equal the SCF total energy when
    the tensors come from converged canonical orbitals.
    """
    occ = range(n_electrons)
    e = constant
    for i in occ:
        e += h1[i, i]
    for i in occ:
        for j in occ:
            e += 0.5 * (g2[i, j, i, j] - g2[i, j, j, i])
    return float(e)
