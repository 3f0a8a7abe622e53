"""Assembly of per-node Pauli terms into family JSON documents.

The emitted document matches the schema the core library loads: name,
n_qubits, lambda axes/grids, a fixed term list with one coefficient per
grid node (row-major, first axis slowest), and a reference_energies
column holding the exact minimum eigenvalue of the emitted operator at
every node. Provenance lives in the optional metadata block and in a
human-readable sidecar manifest rather than in new top-level keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import __version__
from .basis import BASIS_NAMES
from .jw import dense_operator
from .reductions import (
    GenerationError,
    ReducedGrid,
    reduce_h2_2q,
    reduce_h2_4q,
    reduce_h4_6q,
    reduce_lih_3q,
)


class SpecError(ValueError):
    pass


_MOLECULES = {
    "h2": {"axes": 1, "qubits": (2, 4), "bases": ("sto-3g",)},
    "lih": {"axes": 1, "qubits": (3,), "bases": ("sto-6g",)},
    "h4": {"axes": 2, "qubits": (6,), "bases": ("sto-3g",)},
}

_LENGTH_BOUNDS = (0.05, 10.0)  # angstrom
_ANGLE_BOUNDS = (0.01, 2.5 * np.pi)  # radians


@dataclass
class MoleculeSpec:
    """Validated generation request: molecule, basis, reduction, grid."""

    name: str
    molecule: str
    basis: str
    qubits: int
    axes: list[str]
    grids: list[np.ndarray]
    mapping: str = "jordan-wigner"

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise SpecError("spec needs a non-empty family name")
        if self.molecule not in _MOLECULES:
            raise SpecError(
                f"unknown molecule {self.molecule!r} "
                f"(known: {', '.join(sorted(_MOLECULES))})"
            )
        info = _MOLECULES[self.molecule]
        if self.basis not in BASIS_NAMES:
            raise SpecError(
                f"unknown basis {self.basis!r} (known: {', '.join(BASIS_NAMES)})"
            )
        if self.basis not in info["bases"]:
            raise SpecError(
                f"molecule {self.molecule!r} is not tabulated in {self.basis!r} "
                f"(available: {', '.join(info['bases'])})"
            )
        if self.mapping != "jordan-wigner":
            raise SpecError(f"unsupported mapping {self.mapping!r}")
        if self.qubits not in info["qubits"]:
            raise SpecError(
                f"molecule {self.molecule!r} has no {self.qubits}-qubit reduction "
                f"(available: {info['qubits']})"
            )
        if len(self.axes) != info["axes"] or len(self.grids) != info["axes"]:
            raise SpecError(
                f"molecule {self.molecule!r} needs {info['axes']} lambda axes, "
                f"got {len(self.axes)}"
            )
        self.grids = [np.asarray(g, dtype=np.float64) for g in self.grids]
        for axis, grid in zip(self.axes, self.grids):
            if grid.ndim != 1 or grid.size < 2:
                raise SpecError(f"axis {axis!r} needs at least 2 grid values")
            if not np.all(np.diff(grid) > 0):
                raise SpecError(f"axis {axis!r} grid must be strictly increasing")
            lo, hi = _ANGLE_BOUNDS if axis == "alpha" else _LENGTH_BOUNDS
            if grid[0] < lo or grid[-1] > hi:
                raise SpecError(
                    f"axis {axis!r} grid [{grid[0]:.4g}, {grid[-1]:.4g}] leaves the "
                    f"sane range [{lo:.4g}, {hi:.4g}]"
                )


def load_spec(path: str) -> MoleculeSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise SpecError(f"{path}: spec must be a JSON object")
    allowed = {"name", "molecule", "basis", "qubits", "mapping", "grid"}
    unknown = set(data) - allowed
    if unknown:
        raise SpecError(f"{path}: unknown keys {sorted(unknown)}")
    for key in ("name", "molecule", "basis", "qubits", "grid"):
        if key not in data:
            raise SpecError(f"{path}: missing key {key!r}")
    grid = data["grid"]
    if not isinstance(grid, dict) or "axes" not in grid:
        raise SpecError(f"{path}: grid must hold 'axes' plus 'values' or 'ranges'")
    axes = grid["axes"]
    if "values" in grid:
        grids = [np.asarray(v, dtype=np.float64) for v in grid["values"]]
    elif "ranges" in grid:
        grids = []
        for rng in grid["ranges"]:
            if len(rng) != 3:
                raise SpecError(f"{path}: range needs [start, stop, count], got {rng}")
            start, stop, count = rng
            grids.append(np.linspace(float(start), float(stop), int(count)))
    else:
        raise SpecError(f"{path}: grid needs 'values' or 'ranges'")
    return MoleculeSpec(
        name=data["name"],
        molecule=data["molecule"],
        basis=data["basis"],
        qubits=int(data["qubits"]),
        axes=list(axes),
        grids=grids,
        mapping=data.get("mapping", "jordan-wigner"),
    )


def _run_reduction(spec: MoleculeSpec) -> ReducedGrid:
    if spec.molecule == "h2" and spec.qubits == 2:
        return reduce_h2_2q(spec.grids[0], spec.basis)
    if spec.molecule == "h2" and spec.qubits == 4:
        return reduce_h2_4q(spec.grids[0], spec.basis)
    if spec.molecule == "lih":
        return reduce_lih_3q(spec.grids[0], spec.basis)
    return reduce_h4_6q(spec.grids[0], spec.grids[1], spec.basis)


def _union_terms(node_terms: list[dict[str, float]]) -> list[str]:
    labels = set()
    for terms in node_terms:
        labels.update(terms)
    return sorted(labels)


def _smoothness_gate(table: np.ndarray, labels, grids, name: str, seams):
    """Largest adjacent-node jumps, with an abort on sign-flip-sized ones.

    Physical coefficients can be steep (nuclear repulsion near a clash
    geometry) but vary at a rate comparable to the neighboring links; a
    lost orbital sign shows up as an isolated outlier jump of twice the
    coefficient. Only interior links can abort: grid-edge links lack a
    second flank to compare against and genuinely steep physics (1/r
    walls) sits exactly there. Links listed in ``seams`` (declared
    mean-field branch switches) are exempt as well. Returns the worst
    interior and worst edge jump outside the seams.
    """
    shape = tuple(len(g) for g in grids)
    worst_interior = 0.0
    worst_edge = 0.0
    cube = table.reshape((len(labels),) + shape)
    for axis in range(len(shape)):
        diffs = np.abs(np.diff(cube, axis=axis + 1))
        pair_max = np.maximum(
            np.abs(np.take(cube, range(shape[axis] - 1), axis=axis + 1)),
            np.abs(np.take(cube, range(1, shape[axis]), axis=axis + 1)),
        )
        # a smooth steep feature has comparable jumps on the flanking
        # links; a sign flip is an isolated outlier
        m = diffs.shape[axis + 1]
        sl = (slice(None),) * (axis + 1)
        flank = np.zeros_like(diffs)
        flank[sl + (slice(0, m - 1),)] = diffs[sl + (slice(1, m),)]
        np.maximum(
            flank[sl + (slice(1, m),)],
            diffs[sl + (slice(0, m - 1),)],
            out=flank[sl + (slice(1, m),)],
        )
        keep = np.ones(diffs.shape, dtype=bool)
        for seam_axis, idx in seams:
            if seam_axis == axis:
                keep[(slice(None),) + tuple(idx)] = False
        interior = np.zeros(diffs.shape, dtype=bool)
        interior[sl + (slice(1, m - 1),)] = True
        bound = 0.3 + 0.6 * pair_max + 0.8 * flank
        bad = (diffs > bound) & keep & interior
        if np.any(bad):
            t, *node = np.argwhere(bad)[0]
            raise GenerationError(
                f"{name}: coefficient of {labels[t]} jumps by "
                f"{diffs[tuple([t] + node)]:.3f} between adjacent nodes "
                f"{tuple(node)} along axis {axis} (sign-continuity failure?)"
            )
        if np.any(keep & interior):
            worst_interior = max(worst_interior, float(np.max(diffs[keep & interior])))
        if np.any(keep & ~interior):
            worst_edge = max(worst_edge, float(np.max(diffs[keep & ~interior])))
    return worst_interior, worst_edge


def generate(spec: MoleculeSpec):
    """Run the reduction and assemble the family document plus manifest."""
    reduced = _run_reduction(spec)
    labels = _union_terms(reduced.node_terms)
    n_nodes = len(reduced.node_terms)
    table = np.zeros((len(labels), n_nodes))
    for k, terms in enumerate(reduced.node_terms):
        for i, label in enumerate(labels):
            table[i, k] = terms.get(label, 0.0)
    worst_jump, worst_edge_jump = _smoothness_gate(
        table, labels, spec.grids, spec.name, reduced.seams
    )

    reference = np.empty(n_nodes)
    sector_gap = 0.0
    n = reduced.n_qubits
    weights = np.array([bin(i).count("1") for i in range(2**n)])
    target_sector = _target_sector(spec)
    for k, terms in enumerate(reduced.node_terms):
        mat = dense_operator(terms, n)
        eigs = np.linalg.eigvalsh(mat)
        reference[k] = eigs[0]
        in_sector = np.flatnonzero(weights == target_sector)
        sector_min = np.linalg.eigvalsh(mat[np.ix_(in_sector, in_sector)])[0]
        sector_gap = max(sector_gap, abs(sector_min - eigs[0]))

    family = {
        "name": spec.name,
        "n_qubits": reduced.n_qubits,
        "lambda": {
            "axes": list(spec.axes),
            "grids": [[float(x) for x in g] for g in spec.grids],
        },
        "terms": [
            {"pauli": label, "coeffs": [float(x) for x in table[i]]}
            for i, label in enumerate(labels)
        ],
        "reference_energies": [float(x) for x in reference],
        "metadata": {
            "generator": f"hamgen {__version__}",
            "molecule": spec.molecule,
            "basis": spec.basis,
            "mapping": spec.mapping,
            "reduction": reduced.reduction,
            "units": "lengths in angstrom, angles in radians, energies in hartree",
        },
    }
    manifest = _manifest_entries(
        spec, reduced, labels, reference, (worst_jump, worst_edge_jump), sector_gap
    )
    return family, manifest


def _target_sector(spec: MoleculeSpec) -> int:
    # electrons represented in the emitted register: CSF reductions pack
    # one pair per flag qubit, full mappings keep one spin orbital per qubit
    if spec.molecule == "h2" and spec.qubits == 2:
        return 1
    if spec.molecule == "h2":
        return 2
    if spec.molecule == "lih":
        return 1
    return 2


def _manifest_entries(spec, reduced, labels, reference, worst_jumps, sector_gap):
    worst_jump, worst_edge_jump = worst_jumps
    entries = [
        ("family", spec.name),
        ("generator", f"hamgen {__version__}"),
        ("molecule", spec.molecule),
        ("basis", spec.basis),
        ("mapping", spec.mapping),
        ("n_qubits", str(reduced.n_qubits)),
        ("reduction", reduced.reduction),
        ("units", "lengths in angstrom, angles in radians, energies in hartree"),
        ("terms", str(len(labels))),
        ("nodes", str(len(reference))),
    ]
    for axis, grid in zip(spec.axes, spec.grids):
        entries.append(
            (
                f"grid.{axis}",
                f"{grid[0]:.10g} .. {grid[-1]:.10g} ({grid.size} nodes)",
            )
        )
    entries += [
        ("reference_energies", "minimum eigenvalue of the emitted operator per node"),
        ("reference_min", f"{reference.min():.12f}"),
        ("argmin_node", str(int(np.argmin(reference)))),
        ("max_adjacent_jump", f"{worst_jump:.6f}"),
        ("max_adjacent_jump_grid_edge", f"{worst_edge_jump:.6f}"),
        ("ground_vs_target_sector_gap", f"{sector_gap:.3e}"),
    ]
    if reduced.seams:
        listed = ", ".join(f"axis{a}:{idx}" for a, idx in reduced.seams[:40])
        if len(reduced.seams) > 40:
            listed += f", ... ({len(reduced.seams)} total)"
        entries.append(("branch_seams", listed))
    for key in sorted(reduced.diagnostics):
        entries.append((f"diagnostics.{key}", str(reduced.diagnostics[key])))
    return entries


def write_family(family: dict, path: str) -> None:
    """Deterministic JSON layout: one line per term, stable float repr."""
    lines = ["{"]
    lines.append(f' "name": {json.dumps(family["name"])},')
    lines.append(f' "n_qubits": {family["n_qubits"]},')
    lam = json.dumps(family["lambda"], separators=(", ", ": "))
    lines.append(f' "lambda": {lam},')
    lines.append(' "terms": [')
    for i, term in enumerate(family["terms"]):
        row = json.dumps(term, separators=(", ", ": "))
        comma = "," if i + 1 < len(family["terms"]) else ""
        lines.append(f"  {row}{comma}")
    lines.append(" ],")
    ref = json.dumps(family["reference_energies"], separators=(", ", ": "))
    lines.append(f' "reference_energies": {ref},')
    meta = json.dumps(family["metadata"], separators=(", ", ": "))
    lines.append(f' "metadata": {meta}')
    lines.append("}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(entries, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in entries:
            fh.write(f"{key} = {value}\n")
