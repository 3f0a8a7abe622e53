"""Molecule-specific qubit reductions over geometry grids.

Each function walks a published grid, solves the electronic structure
at every node, and emits one Pauli-term dictionary per node plus
diagnostics. Cross-node concerns that a per-node treatment would get
wrong are handled here: molecular-orbital sign and identity following
(splines need continuous coefficients) and spectator levels chosen
once per grid (constants spline exactly).

Configuration-state functions are built from explicit creation-operator
strings so fermionic signs are never hand-assigned. Note the sign split
under this Jordan-Wigner convention for two open-shell electrons in
spatial orbitals (1, 2):

    triplet (Ms=0)     (a+_{1u} a+_{2d} + a+_{1d} a+_{2u}) |vac> / sqrt(2)
    open-shell singlet (a+_{1u} a+_{2d} - a+_{1d} a+_{2u}) |vac> / sqrt(2)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .basis import Molecule, h2_molecule, h4_molecule, lih_molecule
from .fermion import spin_orbital_tensors
from .integrals import (
    electron_repulsion_tensor,
    nuclear_repulsion,
    one_electron_matrices,
    overlap,
)
from .jw import (
    creation_string_state,
    dense_operator,
    jordan_wigner,
    project_to_paulis,
)
from .scf import ScfError, freeze_core, mo_two_body, restricted_hartree_fock


class GenerationError(RuntimeError):
    pass


@dataclass
class ReducedGrid:
    """Per-node Pauli terms for one molecule family.

    ``seams`` lists adjacent-node links (axis, multi-index of the lower
    node) where the mean-field solution legitimately switches branches,
    so coefficient jumps across them are expected rather than bugs.
    """

    n_qubits: int
    node_terms: list[dict[str, float]]
    reduction: str
    diagnostics: dict = field(default_factory=dict)
    seams: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)


@dataclass
class _Node:
    molecule: Molecule
    scf: object
    hcore: np.ndarray
    eri: np.ndarray
    e_nuc: float

    def mo_integrals(self, c: np.ndarray):
        return c.T @ self.hcore @ c, mo_two_body(self.eri, c)


def _density(res) -> np.ndarray:
    occ = res.mo_coeffs[:, : res.n_occupied]
    return 2.0 * occ @ occ.T


def _integrals(mol: Molecule):
    s, t, v = one_electron_matrices(mol.functions, mol.charges)
    eri = electron_repulsion_tensor(mol.functions)
    return s, t + v, eri, nuclear_repulsion(mol.charges)


def _solve_node(
    mol: Molecule,
    label: str,
    guess: np.ndarray | None = None,
    ints=None,
) -> _Node:
    """SCF at one node, warm-started from a neighbor's density when given.

    Stretched quasi-degenerate geometries can defeat plain DIIS, so a
    failed first attempt is retried once with a level shift before the
    node is reported as failed.
    """
    s, hcore, eri, e_nuc = ints if ints is not None else _integrals(mol)
    attempts = [
        {"initial_density": guess},
        {"initial_density": guess, "level_shift": 0.3, "damping": 0.3, "max_cycles": 600},
        {"initial_density": guess, "level_shift": 1.0, "damping": 0.5, "max_cycles": 600},
    ]
    if guess is not None:
        attempts.append({"level_shift": 0.3, "damping": 0.3, "max_cycles": 600})
    res = None
    last_exc: ScfError | None = None
    for kwargs in attempts:
        try:
            res = restricted_hartree_fock(s, hcore, eri, mol.n_electrons, e_nuc, **kwargs)
            break
        except ScfError as exc:
            last_exc = exc
    if res is None:
        raise GenerationError(
            f"electronic structure failed at node {label}: {last_exc}"
        ) from last_exc
    return _Node(molecule=mol, scf=res, hcore=hcore, eri=eri, e_nuc=e_nuc)


def _cross_overlap(prev: Molecule, curr: Molecule) -> np.ndarray:
    n = len(prev.functions)
    out = np.zeros((n, len(curr.functions)))
    for a, fa in enumerate(prev.functions):
        for b, fb in enumerate(curr.functions):
            out[a, b] = overlap(fa, fb)
    return out


def _follow_orbitals(
    references: list[tuple[Molecule, np.ndarray]],
    node: _Node,
    columns: list[int],
    label: str,
    min_diag: float = 0.7,
) -> tuple[np.ndarray, float]:
    """Permute and sign-fix ``columns`` of the node's MOs onto its neighbors'.

    Accepts one or more already-aligned neighbor nodes; the assignment
    maximizes summed absolute overlap against all of them and the sign
    follows their summed signed overlap, which keeps two-dimensional
    grids consistent across rows instead of only along the sweep path.
    Returns the full coefficient matrix with the tracked columns aligned,
    plus the worst diagonal overlap (against the reference average).
    Aborts when no assignment keeps every tracked orbital recognizably
    the same one (diagonal overlap below ``min_diag``).
    """
    c = node.scf.mo_coeffs.copy()
    overlaps = [
        ref_c[:, columns].T @ _cross_overlap(ref_mol, node.molecule) @ c[:, columns]
        for ref_mol, ref_c in references
    ]
    cost = sum(np.abs(o) for o in overlaps) / len(overlaps)
    signed = sum(overlaps) / len(overlaps)
    rows, cols = linear_sum_assignment(-cost)
    order = cols[np.argsort(rows)]
    new_order = np.array(columns)[order]
    c[:, columns] = c[:, new_order]
    worst = 1.0
    for slot in range(len(columns)):
        ov = cost[slot, order[slot]]
        if ov < min_diag:
            raise GenerationError(
                f"orbital following lost track at node {label}: "
                f"best overlap {ov:.3f} for tracked orbital {columns[slot]}"
            )
        worst = min(worst, ov)
        if signed[slot, order[slot]] < 0:
            c[:, columns[slot]] = -c[:, columns[slot]]
    return c, worst


def _assemble(h1, g2, constant, label) -> dict[str, float]:
    try:
        return jordan_wigner(h1, g2, constant)
    except ValueError as exc:
        raise GenerationError(f"mapping failed at node {label}: {exc}") from exc


# ---------------------------------------------------------------------------
# H2, full four-qubit form
# ---------------------------------------------------------------------------


def reduce_h2_4q(r_values, basis: str = "sto-3g") -> ReducedGrid:
    """Full Jordan-Wigner H2: two molecular orbitals, four spin orbitals."""
    node_terms = []
    max_iters = 0
    guess = None
    for r in r_values:
        label = f"r={r:.6g}"
        node = _solve_node(h2_molecule(float(r), basis), label, guess)
        guess = _density(node.scf)
        h_mo, eri_mo = node.mo_integrals(node.scf.mo_coeffs)
        h1, g2 = spin_orbital_tensors(h_mo, eri_mo)
        node_terms.append(_assemble(h1, g2, node.e_nuc, label))
        max_iters = max(max_iters, node.scf.iterations)
    return ReducedGrid(
        n_qubits=4,
        node_terms=node_terms,
        reduction="full Jordan-Wigner over both molecular orbitals, interleaved spins",
        diagnostics={"max_scf_iterations": max_iters},
    )


# ---------------------------------------------------------------------------
# H2, two-qubit effective form
# ---------------------------------------------------------------------------

_H2_CSF_ORDER = ("triplet", "sigma_g^2", "sigma_u^2", "open-shell singlet")


def _h2_csf_vectors() -> np.ndarray:
    """Columns: the four 2-electron CSFs of a 2-orbital system.

    Column order matches the 2-qubit basis index they are mapped to:
    |00> triplet, |01> sigma_g^2 (the reference), |10> sigma_u^2,
    |11> open-shell singlet.
    """
    sg2 = creation_string_state([0, 1], 4)
    su2 = creation_string_state([2, 3], 4)
    t0 = (creation_string_state([0, 3], 4) + creation_string_state([1, 2], 4)) / np.sqrt(2)
    open_s = (creation_string_state([0, 3], 4) - creation_string_state([1, 2], 4)) / np.sqrt(2)
    return np.column_stack([t0, sg2, su2, open_s]).real


_H2_2Q_LABELS = {"II", "ZI", "IZ", "ZZ", "XX", "YY"}


def reduce_h2_2q(r_values, basis: str = "sto-3g") -> ReducedGrid:
    """H2 condensed to two qubits via its spin-adapted CSF basis.

    The four CSFs block-diagonalize H exactly (spin symmetry decouples
    the triplet, g/u parity decouples the open-shell singlet), leaving
    one 2x2 pair block that the one-parameter ansatz sweeps. Only the
    labels II, ZI, IZ, ZZ, XX, YY can survive the projection.
    """
    csf = _h2_csf_vectors()
    node_terms = []
    guess = None
    for r in r_values:
        label = f"r={r:.6g}"
        node = _solve_node(h2_molecule(float(r), basis), label, guess)
        guess = _density(node.scf)
        h_mo, eri_mo = node.mo_integrals(node.scf.mo_coeffs)
        h1, g2 = spin_orbital_tensors(h_mo, eri_mo)
        full = dense_operator(_assemble(h1, g2, node.e_nuc, label), 4)
        h4x4 = csf.T @ full.real @ csf
        terms = project_to_paulis(h4x4)
        stray = set(terms) - _H2_2Q_LABELS
        if stray:
            raise GenerationError(
                f"projection produced unexpected terms {sorted(stray)} at node {label}"
            )
        node_terms.append(terms)
    return ReducedGrid(
        n_qubits=2,
        node_terms=node_terms,
        reduction=(
            "CSF projection onto {triplet, sigma_g^2, sigma_u^2, open-shell singlet} "
            "mapped to |00>,|01>,|10>,|11>"
        ),
        diagnostics={"csf_order": _H2_CSF_ORDER},
    )


# ---------------------------------------------------------------------------
# LiH, three-qubit effective form
# ---------------------------------------------------------------------------

_SIGMA_WEIGHT_MIN = 0.9


def _sigma_indices(c: np.ndarray, sigma_aos: list[int], label: str) -> list[int]:
    weight = np.sum(c[sigma_aos, :] ** 2, axis=0) / np.sum(c * c, axis=0)
    sigma = [m for m in range(c.shape[1]) if weight[m] > _SIGMA_WEIGHT_MIN]
    if len(sigma) != 4:
        raise GenerationError(
            f"expected 4 sigma orbitals at node {label}, found {len(sigma)} "
            f"(weights {np.round(weight, 3)})"
        )
    return sigma


def reduce_lih_3q(r_values, basis: str = "sto-6g") -> ReducedGrid:
    """LiH condensed to three qubits: frozen core, sigma CAS(2, 2), CSF basis.

    Weight-one block of the register holds the matrix of H over
    {sigma^2 -> |001>, open-shell triplet (Ms=0) -> |010>,
    sigma*^2 -> |100>}; every other basis state sits on a constant
    spectator level (grid maximum of the CSF diagonals plus 2 Ha). The
    triplet occupies the middle slot because spin symmetry decouples it
    exactly, which keeps the two-parameter ansatz exact on the paired
    block; the open-shell singlet would couple to sigma*^2 at the few
    times 1e-2 Ha level and pull the ansatz off the sector ground.
    """
    sigma_aos = [0, 1, 4, 5]  # Li 1s, Li 2s, Li 2pz, H 1s
    blocks = []
    prev_mol = None
    prev_c = None
    max_iters = 0
    reference_coupling = 0.0
    guess = None
    for r in r_values:
        label = f"r={r:.6g}"
        node = _solve_node(lih_molecule(float(r), basis), label, guess)
        guess = _density(node.scf)
        c = node.scf.mo_coeffs
        sigma = _sigma_indices(c, sigma_aos, label)
        if prev_mol is not None:
            c, _ = _follow_orbitals([(prev_mol, prev_c)], node, sigma, label)
        core, active = sigma[0], [sigma[1], sigma[2]]
        if core != 0 or node.scf.n_occupied != 2:
            raise GenerationError(
                f"unexpected occupation pattern at node {label}: "
                f"core={core}, n_occ={node.scf.n_occupied}"
            )
        h_mo, eri_mo = node.mo_integrals(c)
        h_eff, eri_act, e_frozen = freeze_core(h_mo, eri_mo, [core], active)
        h1, g2 = spin_orbital_tensors(h_eff, eri_act)
        full = dense_operator(
            _assemble(h1, g2, node.e_nuc + e_frozen, label), 4
        ).real
        sg2 = creation_string_state([0, 1], 4).real
        t0 = (
            creation_string_state([0, 3], 4) + creation_string_state([1, 2], 4)
        ).real / np.sqrt(2)
        st2 = creation_string_state([2, 3], 4).real
        basis_vecs = np.column_stack([sg2, t0, st2])
        blocks.append(basis_vecs.T @ full @ basis_vecs)
        reference_coupling = max(reference_coupling, abs(blocks[-1][0, 1]))
        max_iters = max(max_iters, node.scf.iterations)
        prev_mol, prev_c = node.molecule, c
    spectator = float(max(np.max(np.diag(b)) for b in blocks) + 2.0)
    node_terms = []
    slot = {0: 1, 1: 2, 2: 4}  # CSF row -> basis index (|001>, |010>, |100>)
    for block in blocks:
        mat = np.diag(np.full(8, spectator))
        for i, bi in slot.items():
            for j, bj in slot.items():
                mat[bi, bj] = block[i, j]
        node_terms.append(project_to_paulis(mat))
    return ReducedGrid(
        n_qubits=3,
        node_terms=node_terms,
        reduction=(
            "frozen-core sigma CAS(2,2); weight-1 block holds "
            "{sigma^2, triplet, sigma*^2} at |001>,|010>,|100>; "
            "constant spectator diagonal elsewhere"
        ),
        diagnostics={
            "spectator_level": spectator,
            "max_scf_iterations": max_iters,
            "max_reference_coupling": reference_coupling,
        },
    )


# ---------------------------------------------------------------------------
# H4, six-qubit active space
# ---------------------------------------------------------------------------


_SEAM_OVERLAP = 0.9


def _h4_cas_ground(node: _Node) -> float:
    """Active-space ground energy of one mean-field solution (basis invariant)."""
    h_mo, eri_mo = node.mo_integrals(node.scf.mo_coeffs)
    h_eff, eri_act, e_frozen = freeze_core(h_mo, eri_mo, [0], [1, 2, 3])
    h1, g2 = spin_orbital_tensors(h_eff, eri_act)
    mat = dense_operator(jordan_wigner(h1, g2, node.e_nuc + e_frozen), 6)
    weights = np.array([bin(i).count("1") for i in range(64)])
    idx = np.flatnonzero(weights == 2)
    return float(np.linalg.eigvalsh(mat[np.ix_(idx, idx)])[0])


def _h4_pick_branch(mol: Molecule, label: str, guess) -> _Node:
    """Resolve competing mean-field solutions by the model's own energy.

    The zigzag turns inversion-symmetric at alpha = pi/3 and two RHF
    solutions cross nearby (for the longer bond lengths). Warm and cold
    starts land on different members of the pair, so both are computed
    and the one whose active-space ground energy is lower wins: the
    emitted surface is then the continuous lower envelope of the two
    sheets and does not depend on the sweep path.
    """
    ints = _integrals(mol)
    node = _solve_node(mol, label, guess, ints)
    if guess is None:
        return node
    try:
        cold = _solve_node(mol, label, None, ints)
    except GenerationError:
        return node  # probe did not converge; the warm solution stands
    if abs(cold.scf.energy - node.scf.energy) <= 1e-9:
        return node
    if _h4_cas_ground(cold) < _h4_cas_ground(node):
        return cold
    return node


def reduce_h4_6q(d_values, alpha_values, basis: str = "sto-3g") -> ReducedGrid:
    """H4 zigzag with frozen lowest orbital and a CAS(2 electrons, 3 orbitals).

    Nodes run in row-major order (d slowest). Orbital identity and sign
    follow the previous node in the row; each row start follows the
    previous row's start, so the whole grid hangs off one spanning tree.
    Links where the mean field switches branches (orbitals rotate hard
    between neighbors) are reported as seams rather than failures.
    """
    n_d, n_alpha = len(d_values), len(alpha_values)
    node_terms: list[dict[str, float] | None] = [None] * (n_d * n_alpha)
    aligned: list[tuple[Molecule, np.ndarray] | None] = [None] * (n_d * n_alpha)
    row_start = None
    max_iters = 0
    for i, d in enumerate(d_values):
        prev = row_start
        for j, alpha in enumerate(alpha_values):
            label = f"d={d:.6g}, alpha={alpha:.6g}"
            guess = prev[2] if prev is not None else None
            node = _h4_pick_branch(h4_molecule(float(d), float(alpha), basis), label, guess)
            c = node.scf.mo_coeffs
            references = []
            if prev is not None:
                references.append((prev[0], prev[1]))
            if i > 0 and j > 0:
                references.append(aligned[(i - 1) * n_alpha + j])
            if references:
                c, _ = _follow_orbitals(
                    references, node, [0, 1, 2, 3], label, min_diag=0.5
                )
            h_mo, eri_mo = node.mo_integrals(c)
            h_eff, eri_act, e_frozen = freeze_core(h_mo, eri_mo, [0], [1, 2, 3])
            h1, g2 = spin_orbital_tensors(h_eff, eri_act)
            node_terms[i * n_alpha + j] = _assemble(h1, g2, node.e_nuc + e_frozen, label)
            aligned[i * n_alpha + j] = (node.molecule, c)
            max_iters = max(max_iters, node.scf.iterations)
            prev = (node.molecule, c, _density(node.scf))
            if j == 0:
                row_start = prev
    seams = _scan_seams(aligned, (n_d, n_alpha))
    return ReducedGrid(
        n_qubits=6,
        node_terms=node_terms,
        reduction=(
            "frozen lowest orbital, CAS(2 electrons, 3 orbitals), "
            "full Jordan-Wigner on 6 interleaved spin orbitals"
        ),
        diagnostics={"max_scf_iterations": max_iters, "seam_links": len(seams)},
        seams=seams,
    )


def _scan_seams(aligned, shape) -> list[tuple[int, tuple[int, ...]]]:
    """Adjacent-node links (both grid axes) whose orbitals rotate or flip.

    The signed diagonal is checked, so an orbital coming back with the
    opposite sign across a link counts as a seam even when the shapes
    match perfectly.
    """
    n_d, n_alpha = shape
    seams = []
    for i in range(n_d):
        for j in range(n_alpha):
            mol_a, c_a = aligned[i * n_alpha + j]
            for axis, ni, nj in ((0, i + 1, j), (1, i, j + 1)):
                if ni >= n_d or nj >= n_alpha:
                    continue
                mol_b, c_b = aligned[ni * n_alpha + nj]
                o = c_a.T @ _cross_overlap(mol_a, mol_b) @ c_b
                if np.min(np.diag(o)) < _SEAM_OVERLAP:
                    seams.append((axis, (i, j)))
    return seams
