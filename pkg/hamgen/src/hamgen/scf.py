"""Restricted Hartree-Fock and integral transforms.

Small closed-shell molecules only; DIIS keeps the compressed geometries
on the LiH grid from oscillating. Orbitals come back in a deterministic
gauge (first significant AO coefficient positive) so downstream
coefficient tables vary smoothly along a geometry grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ScfError(RuntimeError):
    pass


@dataclass
class ScfResult:
    energy: float
    mo_coeffs: np.ndarray
    mo_energies: np.ndarray
    n_occupied: int
    iterations: int


def _fix_gauge(c: np.ndarray) -> np.ndarray:
    """Flip MO signs so the largest-magnitude AO coefficient is positive."""
    c = c.copy()
    for m in range(c.shape[1]):
        pivot = int(np.argmax(np.abs(c[:, m])))
        if c[pivot, m] < 0:
            c[:, m] = -c[:, m]
    return c


def restricted_hartree_fock(
    s: np.ndarray,
    hcore: np.ndarray,
    eri: np.ndarray,
    n_electrons: int,
    e_nuc: float,
    *,
    max_cycles: int = 200,
    conv_tol: float = 1e-11,
    initial_density: np.ndarray | None = None,
    level_shift: float = 0.0,
    damping: float = 0.0,
) -> ScfResult:
    """Converge an RHF density with Pulay DIIS.

    ``initial_density`` warm-starts from a neighboring geometry; a
    positive ``level_shift`` raises the virtual levels during the update
    step, which settles quasi-degenerate stretched geometries where
    plain DIIS oscillates between two aufbau fillings; ``damping`` mixes
    the previous density into the first ten updates, breaking the exact
    period-two cycles that defeat both of the above.
    """
    if n_electrons % 2:
        raise ScfError(f"restricted solver needs an even electron count, got {n_electrons}")
    n_occ = n_electrons // 2

    sval, svec = np.linalg.eigh(s)
    if sval.min() < 1e-10:
        raise ScfError(f"overlap matrix nearly singular (min eigenvalue {sval.min():.3e})")
    x = svec @ np.diag(sval**-0.5) @ svec.T

    def fock(d):
        j = np.einsum("pqrs,rs->pq", eri, d)
        k = np.einsum("prqs,rs->pq", eri, d)
        return hcore + j - 0.5 * k

    def density(f, d_prev):
        if level_shift:
            f = f + level_shift * (s - s @ (0.5 * d_prev) @ s)
        e, c_ortho = np.linalg.eigh(x.T @ f @ x)
        c = x @ c_ortho
        return 2.0 * c[:, :n_occ] @ c[:, :n_occ].T, c, e

    if initial_density is None:
        d, c, mo_e = density(hcore, np.zeros_like(s))
    else:
        d = initial_density.copy()
    fock_history: list[np.ndarray] = []
    error_history: list[np.ndarray] = []
    last_e = np.inf
    for cycle in range(1, max_cycles + 1):
        f = fock(d)
        err = x.T @ (f @ d @ s - s @ d @ f) @ x
        fock_history.append(f)
        error_history.append(err)
        if len(fock_history) > 8:
            fock_history.pop(0)
            error_history.pop(0)
        if len(fock_history) > 1:
            f = _diis_extrapolate(fock_history, error_history)
        d_old = d
        d, c, mo_e = density(f, d)
        if damping and cycle <= 10:
            d = (1.0 - damping) * d + damping * d_old
        f_current = fock(d)
        e_elec = 0.5 * np.sum(d * (hcore + f_current))
        if abs(e_elec - last_e) < conv_tol and np.max(np.abs(err)) < 1e-8:
            if level_shift:
                # canonical orbital energies come from the unshifted Fock
                mo_e, c_ortho = np.linalg.eigh(x.T @ f_current @ x)
                c = x @ c_ortho
            return ScfResult(
                energy=float(e_elec + e_nuc),
                mo_coeffs=_fix_gauge(c),
                mo_energies=mo_e,
                n_occupied=n_occ,
                iterations=cycle,
            )
        last_e = e_elec
    raise ScfError(f"SCF not converged in {max_cycles} cycles (last dE {e_elec - last_e:.2e})")


def _diis_extrapolate(focks: list[np.ndarray], errors: list[np.ndarray]) -> np.ndarray:
    m = len(focks)
    b = -np.ones((m + 1, m + 1))
    b[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            b[i, j] = np.sum(errors[i] * errors[j])
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        weights = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    return sum(w * f for w, f in zip(weights, focks))


def mo_one_body(hcore: np.ndarray, c: np.ndarray) -> np.ndarray:
    return c.T @ hcore @ c


def mo_two_body(eri: np.ndarray, c: np.ndarray) -> np.ndarray:
    """(pq|rs) in the MO basis, chemist index order."""
    out = np.einsum("pi,pqrs->iqrs", c, eri, optimize=True)
    out = np.einsum("qj,iqrs->ijrs", c, out, optimize=True)
    out = np.einsum("rk,ijrs->ijks", c, out, optimize=True)
    return np.einsum("sl,ijks->ijkl", c, out, optimize=True)


def freeze_core(
    h_mo: np.ndarray, eri_mo: np.ndarray, frozen: list[int], active: list[int]
):
    """Effective one-body matrix, active ERIs, and frozen-core energy.

    The frozen orbitals stay doubly occupied; their mean field folds into
    the active one-body operator the usual way.
    """
    if set(frozen) & set(active):
        raise ValueError("frozen and active orbital lists overlap")
    e_frozen = 0.0
    for i in frozen:
        e_frozen += 2.0 * h_mo[i, i]
        for j in frozen:
            e_frozen += 2.0 * eri_mo[i, i, j, j] - eri_mo[i, j, j, i]
    idx = np.asarray(active, dtype=int)
    h_eff = h_mo[np.ix_(idx, idx)].copy()
    for a, p in enumerate(idx):
        for b, q in enumerate(idx):
            for i in frozen:
                h_eff[a, b] += 2.0 * eri_mo[p, q, i, i] - eri_mo[p, i, i, q]
    eri_act = eri_mo[np.ix_(idx, idx, idx, idx)].copy()
    return h_eff, eri_act, float(e_frozen)
