"""Command-line front end.

Subcommands: ``vqe`` (per-node sweep), ``mgd``, ``pes`` (ground-state
continuation), ``ssvqe-pes`` (multi-state continuation), ``exact``
(diagonalization sweep), ``check`` (invariant battery over a family and
previously written CSVs). Each run writes one CSV plus a key-value
manifest next to it.

Option precedence is flags, then an optional JSON config file, then
built-in defaults. Numbers are written with 17 significant digits so a
fixed configuration reproduces byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .continuation import (
    ContinuationPlan,
    SingularHessianError,
    continue_path,
    continue_ssvqe,
    grid_path,
    polyline_path,
)
from .family import DomainError, SchemaError, load_family
from .landscape import LandscapeContext
from .mgd import MgdOptions, mgd_optimize
from .oracle import eigenspectrum, sector_spectrum
from .ucc import resolve_ansatz
from .vqe import SsvqeSpec, VqeOptions, minimize, ssvqe_minimize

FIXTURE_DIR_VAR = "VQEFAM_FIXTURE_DIR"

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: str, columns: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_manifest(path: str, entries: dict) -> None:
    with open(path, "w") as handle:
        for key, value in entries.items():
            handle.write(f"{key} = {value}\n")


def _resolve_family_path(raw: str) -> str:
    if os.path.exists(raw):
        return raw
    fixture_dir = os.environ.get(FIXTURE_DIR_VAR)
    if fixture_dir:
        candidate = os.path.join(fixture_dir, raw)
        if os.path.exists(candidate):
            return candidate
        raise UsageError(
            f"family file not found: tried {raw!r} and {candidate!r} "
            f"(${FIXTURE_DIR_VAR})"
        )
    raise UsageError(
        f"family file not found: {raw!r} (set ${FIXTURE_DIR_VAR} to resolve "
        "bare names against a fixture directory)"
    )


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",") if part.strip() != ""])
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_waypoints(text: str) -> np.ndarray:
    points = [_parse_floats(chunk) for chunk in text.split(";") if chunk.strip()]
    if not points:
        raise UsageError(f"empty path spec {text!r}")
    widths = {len(p) for p in points}
    if len(widths) != 1:
        raise UsageError("path waypoints must all have the same number of axes")
    return np.array(points)


class Options:
    """Flag > config-file > default resolution for one subcommand."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = {}
        if getattr(args, "config", None):
            try:
                with open(args.config) as handle:
                    self.config = json.load(handle)
            except FileNotFoundError:
                raise UsageError(f"config file not found: {args.config!r}") from None
            except json.JSONDecodeError as err:
                raise UsageError(f"config file is not valid JSON: {err}") from None
            if not isinstance(self.config, dict):
                raise UsageError("config file must contain a JSON object")
        self.resolved = {}

    def get(self, key: str, default):
        value = getattr(self.args, key, None)
        if value is None:
            value = self.config.get(key, default)
        self.resolved[key] = value
        return value


def _manifest_entries(subcommand: str, family, family_path: str, options: Options):
    entries = {
        "subcommand": subcommand,
        "version": __version__,
        "family_file": family_path,
        "family_name": family.name,
        "n_qubits": family.n_qubits,
        "lambda_axes": ",".join(family.axes),
    }
    for key, value in options.resolved.items():
        if isinstance(value, np.ndarray):
            value = ",".join(_fmt(v) for v in value)
        entries[f"option.{key}"] = value
    entries["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    return entries


def _make_context(family, options: Options):
    ansatz_name = options.get("ansatz", None)
    if not ansatz_name:
        raise UsageError("--ansatz is required")
    try:
        ansatz = resolve_ansatz(ansatz_name)
    except ValueError as err:
        raise UsageError(str(err)) from None
    gradient = options.get("gradient", "parameter-shift")
    try:
        return LandscapeContext(family, ansatz, gradient_method=gradient)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _maybe_theta0(options: Options, key: str = "theta0"):
    raw = options.get(key, None)
    if raw is None:
        return None
    if isinstance(raw, str):
        return _parse_floats(raw)
    return np.asarray(raw, dtype=np.float64)


def _cmd_vqe(args: argparse.Namespace) -> int:
    options = Options(args)
    family_path = _resolve_family_path(args.family)
    family = load_family(family_path)
    context = _make_context(family, options)
    vqe_options = VqeOptions(
        step_size=float(options.get("step_size", 0.1)),
        grad_tol=float(options.get("grad_tol", 1e-7)),
        max_iterations=int(options.get("max_iterations", 5000)),
        random_init=options.get("seed", None),
        keep_history=False,
    )
    theta0 = _maybe_theta0(options)
    output = options.get("output", "vqe.csv")
    columns = (
        [f"lambda_{a}" for a in range(family.lambda_dims)]
        + [f"theta_{k}" for k in range(context.ansatz.parameter_count)]
        + ["energy", "grad_norm", "iterations", "converged"]
    )
    rows = []
    for lam in family.grid_points():
        result = minimize(context, lam, vqe_options, theta0=theta0)
        rows.append(
            [float(v) for v in np.atleast_1d(lam)]
            + [float(v) for v in result.theta]
            + [
                result.energy,
                result.grad_norm,
                result.iterations,
                int(result.converged),
            ]
        )
    _write_csv(output, columns, rows)
    _write_manifest(
        _manifest_path(output), _manifest_entries("vqe", family, family_path, options)
    )
    return EXIT_OK


def _cmd_mgd(args: argparse.Namespace) -> int:
    options = Options(args)
    family_path = _resolve_family_path(args.family)
    family = load_family(family_path)
    context = _make_context(family, options)
    lambda0 = options.get("lambda0", None)
    if lambda0 is None:
        raise UsageError("--lambda0 is required")
    if isinstance(lambda0, str):
        lambda0 = _parse_floats(lambda0)
    mgd_options = MgdOptions(
        lambda0=np.atleast_1d(np.asarray(lambda0, dtype=np.float64)),
        theta0=_maybe_theta0(options),
        eta_theta=float(options.get("eta_theta", 0.1)),
        eta_lambda=float(options.get("eta_lambda", 0.05)),
        lambda_steps=int(options.get("lambda_steps", 5)),
        theta_steps=int(options.get("theta_steps", 5)),
        tol_theta=float(options.get("tol_theta", 1e-5)),
        tol_lambda=float(options.get("tol_lambda", 1e-5)),
        max_outer=int(options.get("max_outer", 200)),
    )
    strict = bool(options.get("strict", False))
    output = options.get("output", "mgd.csv")
    try:
        trace = mgd_optimize(context, mgd_options)
    except DomainError as err:
        raise UsageError(str(err)) from None
    except RuntimeError as err:
        raise NumericalError(str(err)) from None
    _write_csv(output, trace.csv_columns(), trace.csv_rows())
    entries = _manifest_entries("mgd", family, family_path, options)
    entries["converged"] = int(trace.converged)
    entries["outer_iterations"] = trace.outer_iterations
    entries["lambda_star"] = ",".join(_fmt(v) for v in trace.lambda_star)
    entries["energy"] = _fmt(trace.energy)
    entries["quantum_evals"] = trace.quantum_evals
    entries["any_clipped"] = int(trace.any_clipped)
    _write_manifest(_manifest_path(output), entries)
    if strict and not trace.converged:
        raise NumericalError(
            f"mgd did not converge within {mgd_options.max_outer} outer iterations"
        )
    return EXIT_OK


def _pes_paths(family, options: Options):
    """Build the lambda path: grid walk for 1-D, explicit polyline else."""
    path_spec = options.get("path", None)
    if path_spec is not None:
        waypoints = (
            _parse_waypoints(path_spec) if isinstance(path_spec, str)
            else np.asarray(path_spec, dtype=np.float64)
        )
        step = float(options.get("path_step", 0.05))
        return polyline_path(waypoints, step), 0
    if family.lambda_dims != 1:
        raise UsageError("families with two axes need an explicit --path")
    from_node = int(options.get("from_node", 0))
    nodes = grid_path(family)
    if not 0 <= from_node < len(nodes):
        raise UsageError(
            f"--from-node {from_node} out of range (family has {len(nodes)} nodes)"
        )
    return nodes, from_node


def _run_continuation(context, plan, ssvqe: bool):
    try:
        if ssvqe:
            return continue_ssvqe(context, plan)
        return continue_path(context, plan)
    except SingularHessianError as err:
        raise NumericalError(str(err)) from None


def _cmd_pes(args: argparse.Namespace, ssvqe: bool) -> int:
    options = Options(args)
    family_path = _resolve_family_path(args.family)
    family = load_family(family_path)
    context = _make_context(family, options)
    corrector_steps = int(options.get("corrector_steps", 50))
    corrector_tol = float(options.get("corrector_tol", 1e-7))
    corrector_step_size = float(options.get("corrector_step_size", 0.1))
    strict = bool(options.get("strict", False))
    output = options.get("output", "ssvqe-pes.csv" if ssvqe else "pes.csv")
    spec = None
    if ssvqe:
        refs = options.get("references", None)
        if not refs:
            raise UsageError("--references is required for ssvqe-pes")
        if isinstance(refs, str):
            refs = tuple(r.strip() for r in refs.split(",") if r.strip())
        weights = options.get("weights", None)
        if isinstance(weights, str):
            weights = _parse_floats(weights)
        try:
            spec = SsvqeSpec(references=tuple(refs), weights=weights)
        except ValueError as err:
            raise UsageError(str(err)) from None

    nodes, from_node = _pes_paths(family, options)
    solver_options = VqeOptions(
        grad_tol=corrector_tol, keep_history=False,
        max_iterations=int(options.get("max_iterations", 5000)),
    )
    start = nodes[from_node]
    if ssvqe:
        seed_result = ssvqe_minimize(context, start, spec, solver_options)
    else:
        seed_result = minimize(context, start, solver_options)
    if not seed_result.converged:
        raise NumericalError(
            f"could not converge the starting point at lambda={start} "
            f"(gradient norm {seed_result.grad_norm:.3e})"
        )

    def plan_for(path):
        return ContinuationPlan(
            path=path,
            theta0=seed_result.theta,
            corrector_steps=corrector_steps,
            corrector_tol=corrector_tol,
            corrector_step_size=corrector_step_size,
            ssvqe=spec,
        )

    if from_node > 0:
        # walk down to the low edge and up to the high edge, then merge
        down = _run_continuation(context, plan_for(nodes[from_node::-1]), ssvqe)
        up = _run_continuation(context, plan_for(nodes[from_node:]), ssvqe)
        points = list(reversed(down.points))[:-1] + up.points
        result = type(up)(points=points, n_states=up.n_states)
    else:
        result = _run_continuation(context, plan_for(nodes), ssvqe)
    _write_csv(output, result.csv_columns(), result.csv_rows())
    entries = _manifest_entries(
        "ssvqe-pes" if ssvqe else "pes", family, family_path, options
    )
    flagged = sum(1 for p in result.points if not p.converged)
    entries["points"] = len(result.points)
    entries["flagged_points"] = flagged
    _write_manifest(_manifest_path(output), entries)
    if strict and flagged:
        raise NumericalError(f"{flagged} path points failed corrector convergence")
    return EXIT_OK


def _cmd_exact(args: argparse.Namespace) -> int:
    options = Options(args)
    family_path = _resolve_family_path(args.family)
    family = load_family(family_path)
    k = int(options.get("k", 1))
    if k < 1:
        raise UsageError("--k must be at least 1")
    electrons = options.get("electrons", None)
    output = options.get("output", "exact.csv")
    columns = [f"lambda_{a}" for a in range(family.lambda_dims)]
    if k == 1:
        columns.append("energy")
    else:
        columns += [f"energy_{j}" for j in range(k)]
    rows = []
    for lam in family.grid_points():
        h = family.hamiltonian_at(lam)
        try:
            if electrons is None:
                values, _ = eigenspectrum(h, k=k)
            else:
                values, _ = sector_spectrum(h, int(electrons), k=k)
        except ValueError as err:
            raise UsageError(str(err)) from None
        if len(values) < k:
            raise UsageError(
                f"requested {k} eigenvalues but the sector only has {len(values)}"
            )
        rows.append([float(v) for v in np.atleast_1d(lam)] + [float(v) for v in values])
    _write_csv(output, columns, rows)
    _write_manifest(
        _manifest_path(output),
        _manifest_entries("exact", family, family_path, options),
    )
    return EXIT_OK


def _read_csv(path: str):
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = list(reader)
    return header, rows


def _check_family(family, failures: list[str]) -> None:
    print(f"ok: family '{family.name}' passed schema validation")
    if family.reference_energies is None:
        print("ok: no reference energies to cross-check")
        return
    worst = 0.0
    table = family.reference_energy_table()
    for lam, expected in zip(family.grid_points(), table.ravel()):
        values = np.linalg.eigvalsh(family.hamiltonian_at(lam).dense())
        worst = max(worst, abs(float(values[0]) - float(expected)))
    if worst <= 1e-8:
        print(f"ok: reference energies match exact ground energies (max {worst:.2e})")
    else:
        failures.append(f"reference energies deviate by {worst:.2e} (tol 1e-8)")


def _check_lambda_in_domain(family, header, rows, failures, label):
    axes = [header.index(f"lambda_{a}") for a in range(family.lambda_dims)]
    bounds = family.domain
    for row in rows:
        for a, col in enumerate(axes):
            v = float(row[col])
            lo, hi = bounds[a]
            if v < lo - 1e-12 or v > hi + 1e-12:
                failures.append(f"{label}: lambda_{a}={v} outside the family domain")
                return
    print(f"ok: {label}: all lambda values inside the family domain")


def _check_mgd_csv(family, header, rows, failures, label):
    _check_lambda_in_domain(family, header, rows, failures, label)
    outer_col = header.index("outer")
    phase_col = header.index("phase")
    evals_col = header.index("quantum_evals")
    per_block = {}
    for row in rows:
        if row[phase_col] == "lambda":
            per_block.setdefault(int(row[outer_col]), set()).add(int(row[evals_col]))
    bad = [outer for outer, vals in per_block.items() if len(vals) != 1]
    if bad:
        failures.append(
            f"{label}: quantum_evals varied inside lambda phases of outer {bad}"
        )
    else:
        print(f"ok: {label}: quantum_evals constant within every lambda phase")
    evals = [int(row[evals_col]) for row in rows]
    if any(b < a for a, b in zip(evals, evals[1:])):
        failures.append(f"{label}: quantum_evals decreased between rows")
    else:
        print(f"ok: {label}: quantum_evals never decreases")


def _check_continuation_csv(family, header, rows, failures, label):
    _check_lambda_in_domain(family, header, rows, failures, label)
    conv_col = header.index("converged")
    flagged = sum(1 for row in rows if row[conv_col] not in ("1", "1.0"))
    print(f"ok: {label}: {len(rows)} points, {flagged} flagged unconverged")


def _check_vqe_csv(family, header, rows, failures, label):
    _check_lambda_in_domain(family, header, rows, failures, label)
    if family.reference_energies is None or family.lambda_dims != 1:
        return
    energy_col = header.index("energy")
    table = family.reference_energy_table()
    if len(rows) != len(table):
        failures.append(
            f"{label}: {len(rows)} rows but the family has {len(table)} nodes"
        )
        return
    worst = min(
        float(row[energy_col]) - float(ref) for row, ref in zip(rows, table)
    )
    if worst < -1e-9:
        failures.append(
            f"{label}: an energy undercuts the exact ground energy by {-worst:.2e}"
        )
    else:
        print(f"ok: {label}: variational bound holds on every node")


def _cmd_check(args: argparse.Namespace) -> int:
    options = Options(args)
    family_path = _resolve_family_path(args.family)
    family = load_family(family_path)
    failures: list[str] = []
    _check_family(family, failures)
    for path in args.csv or []:
        if not os.path.exists(path):
            raise UsageError(f"csv file not found: {path!r}")
        header, rows = _read_csv(path)
        label = os.path.basename(path)
        if "outer" in header:
            _check_mgd_csv(family, header, rows, failures, label)
        elif "theta_pred_0" in header:
            _check_continuation_csv(family, header, rows, failures, label)
        elif "iterations" in header:
            _check_vqe_csv(family, header, rows, failures, label)
        elif any(col.startswith("lambda_") for col in header):
            _check_lambda_in_domain(family, header, rows, failures, label)
        else:
            raise UsageError(f"unrecognized csv layout in {path!r}")
    options.resolved["csv"] = ",".join(args.csv or [])
    for line in failures:
        print(f"FAIL: {line}", file=sys.stderr)
    return EXIT_NUMERICAL if failures else EXIT_OK


def _manifest_path(output: str) -> str:
    stem, _ = os.path.splitext(output)
    return f"{stem}.manifest.txt"


def _add_common(parser: argparse.ArgumentParser, with_ansatz: bool = True) -> None:
    parser.add_argument("--family", required=True, help="family JSON file")
    parser.add_argument("--config", help="JSON file with default option values")
    parser.add_argument("--output", help="output CSV path")
    if with_ansatz:
        parser.add_argument("--ansatz", help="h2 | lih | h2s | uccsd:n,k[,t]")
        parser.add_argument(
            "--gradient",
            choices=["parameter-shift", "central-difference"],
            help="gradient method (default parameter-shift)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqefam",
        description="variational eigensolvers over Hamiltonian families",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("vqe", help="independent eigensolver run on every grid node")
    _add_common(p)
    p.add_argument("--step-size", type=float, dest="step_size")
    p.add_argument("--grad-tol", type=float, dest="grad_tol")
    p.add_argument("--max-iterations", type=int, dest="max_iterations")
    p.add_argument("--theta0", help="comma-separated starting parameters")
    p.add_argument("--seed", type=int, help="seed for a random parameter start")
    p.set_defaults(func=_cmd_vqe)

    p = sub.add_parser("mgd", help="joint circuit/geometry descent")
    _add_common(p)
    p.add_argument("--lambda0", help="starting lambda (comma-separated for 2 axes)")
    p.add_argument("--theta0", help="comma-separated starting parameters")
    p.add_argument("--eta-theta", type=float, dest="eta_theta")
    p.add_argument("--eta-lambda", type=float, dest="eta_lambda")
    p.add_argument("--lambda-steps", type=int, dest="lambda_steps")
    p.add_argument("--theta-steps", type=int, dest="theta_steps")
    p.add_argument("--tol-theta", type=float, dest="tol_theta")
    p.add_argument("--tol-lambda", type=float, dest="tol_lambda")
    p.add_argument("--max-outer", type=int, dest="max_outer")
    p.add_argument("--strict", action="store_const", const=True, default=None,
                   help="exit 1 when the run does not converge")
    p.set_defaults(func=_cmd_mgd)

    for name, ssvqe in (("pes", False), ("ssvqe-pes", True)):
        p = sub.add_parser(
            name,
            help=(
                "trace excited-state curves along the grid"
                if ssvqe
                else "trace the ground-state curve along the grid"
            ),
        )
        _add_common(p)
        p.add_argument("--from-node", type=int, dest="from_node",
                       help="grid node to seed from (1-axis families)")
        p.add_argument("--path", help="polyline 'a,b;c,d;...' for 2-axis families")
        p.add_argument("--path-step", type=float, dest="path_step")
        p.add_argument("--corrector-steps", type=int, dest="corrector_steps")
        p.add_argument("--corrector-tol", type=float, dest="corrector_tol")
        p.add_argument("--corrector-step-size", type=float,
                       dest="corrector_step_size")
        p.add_argument("--max-iterations", type=int, dest="max_iterations",
                       help="cap for the seeding eigensolver run")
        p.add_argument("--strict", action="store_const", const=True, default=None)
        if ssvqe:
            p.add_argument("--references",
                           help="comma-separated basis labels, e.g. 1100,1010")
            p.add_argument("--weights", help="comma-separated decreasing weights")
            p.set_defaults(func=lambda a: _cmd_pes(a, ssvqe=True))
        else:
            p.set_defaults(func=lambda a: _cmd_pes(a, ssvqe=False))

    p = sub.add_parser("exact", help="exact diagonalization on every grid node")
    _add_common(p, with_ansatz=False)
    p.add_argument("--k", type=int, help="how many lowest eigenvalues (default 1)")
    p.add_argument("--electrons", type=int,
                   help="restrict to a particle-number sector")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("check", help="invariant battery on a family and CSVs")
    _add_common(p, with_ansatz=False)
    p.add_argument("--csv", action="append", help="CSV produced by another run")
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SingularHessianError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SchemaError, DomainError, FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
