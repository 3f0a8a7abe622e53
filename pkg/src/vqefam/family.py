"""Hamiltonian families: Pauli terms with coefficients on a parameter grid.

A family file is JSON with the shape

.. code-block:: json

    {
      "name": "h2_sto3g",
      "n_qubits": 2,
      "lambda": {"axes": ["bond_length"], "grids": [[0.2, "..."]]},
      "terms": [{"pauli": "ZI", "coeffs": ["..."]}],
      "reference_energies": ["... optional ..."],
      "metadata": {"... optional, ignored by the loader ..."}
    }

Grids are strictly ascending; two-axis coefficient tables are flattened
row-major with the first axis slowest. Between nodes every coefficient is
interpolated by a natural cubic spline (tensor product for two axes) with
analytic first derivatives. Queries outside the grid hull raise
:class:`DomainError`; there is no extrapolation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .pauli import PauliString, PauliSum


class SchemaError(ValueError):
    """Family file fails structural validation."""


class DomainError(ValueError):
    """Parameter query outside the family's grid hull."""


def _validate_grid(values, axis_name: str) -> np.ndarray:
    grid = np.asarray(values, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2:
        raise SchemaError(f"axis {axis_name!r}: grid must be a 1-D list of >= 2 numbers")
    if not np.all(np.isfinite(grid)):
        raise SchemaError(f"axis {axis_name!r}: grid contains non-finite values")
    if not np.all(np.diff(grid) > 0):
        raise SchemaError(f"axis {axis_name!r}: grid must be strictly ascending")
    return grid


@dataclass
class HamiltonianFamily:
    """Splined coefficient functions ``c_m(lambda)`` over a fixed term set."""

    name: str
    n_qubits: int
    axes: tuple[str, ...]
    grids: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    coeff_table: np.ndarray  # shape (n_terms, n1) or (n_terms, n1, n2)
    reference_energies: np.ndarray | None = None

    def __post_init__(self):
        self._strings = tuple(PauliString(lb) for lb in self.labels)
        if self.lambda_dims == 1:
            (x,) = self.grids
            # y laid out (nodes, terms) so scipy vectorizes across terms
            y = self.coeff_table.T
            self._spline = CubicSpline(x, y, bc_type="natural")
            self._spline_d = self._spline.derivative(1)
        else:
            x1, x2 = self.grids
            n_terms = self.coeff_table.shape[0]
            inner_y = self.coeff_table.reshape(n_terms * x1.size, x2.size).T
            self._inner = CubicSpline(x2, inner_y, bc_type="natural")
            self._inner_d = self._inner.derivative(1)
            self._x1 = x1
            self._n_terms = n_terms

    @property
    def lambda_dims(self) -> int:
        return len(self.axes)

    @property
    def n_terms(self) -> int:
        return len(self.labels)

    @property
    def domain(self) -> tuple[tuple[float, float], ...]:
        return tuple((float(g[0]), float(g[-1])) for g in self.grids)

    @property
    def grid_shape(self) -> tuple[int, ...]:
        return tuple(g.size for g in self.grids)

    def _check_point(self, lam) -> np.ndarray:
        point = np.atleast_1d(np.asarray(lam, dtype=np.float64))
        if point.shape != (self.lambda_dims,):
            raise ValueError(
                f"expected {self.lambda_dims} parameter value(s), got shape {point.shape}"
            )
        for axis, (value, grid) in enumerate(zip(point, self.grids)):
            if not (grid[0] <= value <= grid[-1]):
                raise DomainError(
                    f"axis {self.axes[axis]!r}: value {value:.12g} outside "
                    f"[{grid[0]:.12g}, {grid[-1]:.12g}] (no extrapolation)"
                )
        return point

    def clip_to_domain(self, lam) -> tuple[np.ndarray, bool]:
        """Clamp a point onto the grid hull; second value reports clipping."""
        point = np.atleast_1d(np.asarray(lam, dtype=np.float64)).copy()
        clipped = False
        for axis, grid in enumerate(self.grids):
            lo, hi = grid[0], grid[-1]
            if point[axis] < lo:
                point[axis] = lo
                clipped = True
            elif point[axis] > hi:
                point[axis] = hi
                clipped = True
        return point, clipped

    def _outer_spline(self, x2_value: float, derivative_axis: int | None):
        inner = self._inner_d if derivative_axis == 1 else self._inner
        v = inner(x2_value).reshape(self._n_terms, self._x1.size).T
        outer = CubicSpline(self._x1, v, bc_type="natural")
        if derivative_axis == 0:
            outer = outer.derivative(1)
        return outer

    def coefficients_at(self, lam) -> np.ndarray:
        """Coefficient vector over the term set at a parameter point."""
        point = self._check_point(lam)
        if self.lambda_dims == 1:
            return np.asarray(self._spline(point[0]), dtype=np.float64)
        outer = self._outer_spline(point[1], derivative_axis=None)
        return np.asarray(outer(point[0]), dtype=np.float64)

    def coefficient_derivative(self, lam, axis: int = 0) -> np.ndarray:
        """Analytic spline derivative ``dc/d lambda_axis`` at a point."""
        if not 0 <= axis < self.lambda_dims:
            raise ValueError(f"axis {axis} out of range for {self.lambda_dims} axes")
        point = self._check_point(lam)
        if self.lambda_dims == 1:
            return np.asarray(self._spline_d(point[0]), dtype=np.float64)
        outer = self._outer_spline(point[1], derivative_axis=axis)
        return np.asarray(outer(point[0]), dtype=np.float64)

    def hamiltonian_at(self, lam) -> PauliSum:
        """Interpolated Hamiltonian as a :class:`PauliSum`."""
        coeffs = self.coefficients_at(lam)
        return PauliSum(list(zip(coeffs, self._strings)))

    def grid_points(self):
        """All grid nodes in row-major order (first axis slowest)."""
        if self.lambda_dims == 1:
            for x in self.grids[0]:
                yield np.array([x])
        else:
            for x1 in self.grids[0]:
                for x2 in self.grids[1]:
                    yield np.array([x1, x2])

    def reference_energy_table(self) -> np.ndarray:
        if self.reference_energies is None:
            raise ValueError(f"family {self.name!r} ships no reference energies")
        return self.reference_energies.reshape(self.grid_shape)


def family_from_dict(data: dict, source: str = "<dict>") -> HamiltonianFamily:
    """Validate a parsed family document and build the spline tables."""
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: family document must be a JSON object")
    allowed = {"name", "n_qubits", "lambda", "terms", "reference_energies", "metadata"}
    unknown = set(data) - allowed
    if unknown:
        raise SchemaError(f"{source}: unknown top-level keys {sorted(unknown)}")
    for key in ("name", "n_qubits", "lambda", "terms"):
        if key not in data:
            raise SchemaError(f"{source}: missing required key {key!r}")
    name = data["name"]
    n_qubits = data["n_qubits"]
    if not isinstance(name, str) or not name:
        raise SchemaError(f"{source}: name must be a non-empty string")
    if not isinstance(n_qubits, int) or n_qubits < 1:
        raise SchemaError(f"{source}: n_qubits must be a positive integer")

    lam = data["lambda"]
    if not isinstance(lam, dict) or set(lam) != {"axes", "grids"}:
        raise SchemaError(f"{source}: lambda must hold exactly 'axes' and 'grids'")
    axes = lam["axes"]
    grids_raw = lam["grids"]
    if not isinstance(axes, list) or not 1 <= len(axes) <= 2:
        raise SchemaError(f"{source}: need 1 or 2 lambda axes, got {axes!r}")
    if not isinstance(grids_raw, list) or len(grids_raw) != len(axes):
        raise SchemaError(f"{source}: grids must match axes one-to-one")
    if any(not isinstance(a, str) or not a for a in axes):
        raise SchemaError(f"{source}: axis names must be non-empty strings")
    grids = tuple(_validate_grid(g, a) for g, a in zip(grids_raw, axes))
    n_nodes = int(np.prod([g.size for g in grids]))

    terms = data["terms"]
    if not isinstance(terms, list) or not terms:
        raise SchemaError(f"{source}: terms must be a non-empty list")
    labels: list[str] = []
    rows: list[np.ndarray] = []
    for i, term in enumerate(terms):
        if not isinstance(term, dict) or set(term) != {"pauli", "coeffs"}:
            raise SchemaError(
                f"{source}: term {i} must hold exactly 'pauli' and 'coeffs'"
            )
        try:
            ps = PauliString(term["pauli"])
        except ValueError as exc:
            raise SchemaError(f"{source}: term {i}: {exc}") from exc
        if ps.n_qubits != n_qubits:
            raise SchemaError(
                f"{source}: term {i} ({ps.label}) acts on {ps.n_qubits} qubits, "
                f"family declares {n_qubits}"
            )
        if ps.label in labels:
            raise SchemaError(f"{source}: duplicate term label {ps.label!r}")
        coeffs = np.asarray(term["coeffs"], dtype=np.float64)
        if coeffs.shape != (n_nodes,):
            raise SchemaError(
                f"{source}: term {i} ({ps.label}) has {coeffs.size} coefficients, "
                f"grid has {n_nodes} nodes"
            )
        if not np.all(np.isfinite(coeffs)):
            raise SchemaError(f"{source}: term {i} ({ps.label}) has non-finite coefficients")
        labels.append(ps.label)
        rows.append(coeffs)

    shape = tuple(g.size for g in grids)
    table = np.stack(rows).reshape((len(rows),) + shape)

    reference = None
    if "reference_energies" in data and data["reference_energies"] is not None:
        reference = np.asarray(data["reference_energies"], dtype=np.float64)
        if reference.shape != (n_nodes,):
            raise SchemaError(
                f"{source}: reference_energies has {reference.size} entries, "
                f"grid has {n_nodes} nodes"
            )
        if not np.all(np.isfinite(reference)):
            raise SchemaError(f"{source}: reference_energies contains non-finite values")

    return HamiltonianFamily(
        name=name,
        n_qubits=n_qubits,
        axes=tuple(axes),
        grids=grids,
        labels=tuple(labels),
        coeff_table=table,
        reference_energies=reference,
    )


def load_family(path: str | Path) -> HamiltonianFamily:
    """Load and validate a family JSON file."""
    path = Path(path)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read family file {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return family_from_dict(data, source=str(path))
