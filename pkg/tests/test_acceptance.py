"""Acceptance gate: one test per release criterion, tolerances pinned.

Every test here states its bound inline and fails loudly when the
library drifts. The shipped fixture files are the contract surface, so
this module loads them from fixtures/ rather than building synthetic
families. Expensive sweeps (per-node eigensolver baselines, the
six-reference subspace sweep, the two-axis descent run) are shared
through module-scoped fixtures.
"""

import pathlib
import subprocess
import sys

import numpy as np
import pytest

from conftest import make_family, y_rotation_ansatz
from vqefam.continuation import (
    ContinuationPlan,
    continue_path,
    continue_ssvqe,
    grid_path,
)
from vqefam.family import load_family
from vqefam.landscape import LandscapeContext
from vqefam.mgd import MgdOptions, mgd_optimize
from vqefam.oracle import eigenspectrum, pes_argmin, sector_spectrum
from vqefam.ucc import resolve_ansatz, uccsd_ansatz
from vqefam.vqe import SsvqeSpec, VqeOptions, minimize, ssvqe_minimize

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"

SSVQE_REFERENCES = ("1100", "1010", "1001", "0110", "0101", "0011")


# ---------------------------------------------------------------------------
# shared fixture families and baselines
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def h2():
    return load_family(FIXTURES / "h2_sto3g.json")


@pytest.fixture(scope="module")
def h2_4q():
    return load_family(FIXTURES / "h2_sto3g_4q.json")


@pytest.fixture(scope="module")
def lih():
    return load_family(FIXTURES / "lih_sto6g.json")


@pytest.fixture(scope="module")
def h4():
    return load_family(FIXTURES / "h4.json")


@pytest.fixture(scope="module")
def h2_ctx(h2):
    return LandscapeContext(h2, resolve_ansatz("h2"))


@pytest.fixture(scope="module")
def lih_ctx(lih):
    return LandscapeContext(lih, resolve_ansatz("lih"))


@pytest.fixture(scope="module")
def h2_vqe_energies(h2, h2_ctx):
    """Independent eigensolver run on every H2 node (zeros start)."""
    return np.array(
        [
            minimize(h2_ctx, lam, VqeOptions(keep_history=False)).energy
            for lam in h2.grids[0]
        ]
    )


@pytest.fixture(scope="module")
def lih_vqe_energies(lih, lih_ctx):
    return np.array(
        [
            minimize(lih_ctx, lam, VqeOptions(keep_history=False)).energy
            for lam in lih.grids[0]
        ]
    )


@pytest.fixture(scope="module")
def h2_mgd_traces(h2_ctx):
    """Default-option descent runs from the three pinned starts."""
    return {
        lam0: mgd_optimize(h2_ctx, MgdOptions(lambda0=lam0))
        for lam0 in (0.5, 1.5, 2.5)
    }


@pytest.fixture(scope="module")
def ssvqe_sweep(h2_4q):
    """Six-reference subspace sweep over the 4-qubit H2 grid.

    The weighted cost is well conditioned (Hessian condition ~60) but
    its smallest curvature is ~0.09, so the seed uses a larger step and
    a 1e-5 gradient tolerance; the per-state energies land within 1e-8
    of the sector eigenvalues, far inside the 1e-3 acceptance bound.
    """
    ctx = LandscapeContext(h2_4q, resolve_ansatz("h2s"))
    spec = SsvqeSpec(references=SSVQE_REFERENCES)
    seed = ssvqe_minimize(
        ctx,
        h2_4q.grids[0][0],
        spec,
        VqeOptions(step_size=0.5, grad_tol=1e-5, max_iterations=10000,
                   keep_history=False),
    )
    plan = ContinuationPlan(
        path=grid_path(h2_4q),
        theta0=seed.theta,
        ssvqe=spec,
        corrector_steps=50,
        corrector_tol=1e-4,
        corrector_step_size=0.5,
    )
    return continue_ssvqe(ctx, plan)


@pytest.fixture(scope="module")
def h4_mgd_trace(h4):
    """Two-axis descent anchored in the all-bonded basin.

    The oracle surface has three strict local minima; the start
    (1.1, 2.5) sits in the basin of the molecular one at d=1.004,
    alpha=2.670, far from the mean-field branch seams. The lambda
    tolerance matches the acceptance bound; the alpha direction is
    shallow, so the lambda rate is raised and the outer cap widened
    (the criterion pins neither).
    """
    ctx = LandscapeContext(h4, uccsd_ansatz(6, 2))
    options = MgdOptions(
        lambda0=np.array([1.1, 2.5]),
        eta_lambda=0.1,
        tol_lambda=1e-4,
        max_outer=400,
    )
    return mgd_optimize(ctx, options)


def draw_lambda(rng, family):
    return np.array([rng.uniform(g[0], g[-1]) for g in family.grids])


# ---------------------------------------------------------------------------
# criterion 1: parameter-shift gradients are exact
# ---------------------------------------------------------------------------


def test_gradient_parameter_shift_vs_central_difference(h2, lih, h4):
    # relative error <= 1e-6 over 100 random (theta, lambda) draws per ansatz
    cases = [
        (h2, resolve_ansatz("h2")),
        (lih, resolve_ansatz("lih")),
        (h4, uccsd_ansatz(6, 2, 1)),
    ]
    rng = np.random.default_rng(20260815)
    worst = 0.0
    for family, ansatz in cases:
        ctx = LandscapeContext(family, ansatz, fd_step=1e-5)
        for _ in range(100):
            theta = rng.uniform(-np.pi, np.pi, ansatz.parameter_count)
            lam = draw_lambda(rng, family)
            shift = ctx.grad_theta(theta, lam, method="parameter-shift")
            diff = ctx.grad_theta(theta, lam, method="central-difference")
            scale = max(np.linalg.norm(shift), np.linalg.norm(diff), 1e-6)
            worst = max(worst, np.linalg.norm(shift - diff) / scale)
    assert worst <= 1e-6, f"PASS/FAIL gradient exactness: worst rel {worst:.3e}"


# ---------------------------------------------------------------------------
# criterion 2: eigensolver vs exact sector ground on every fixture node
# ---------------------------------------------------------------------------


def test_vqe_matches_sector_oracle_h2(h2, h2_vqe_energies):
    # |E_VQE - min sector spectrum| <= 1e-6 on every node
    worst = 0.0
    for lam, energy in zip(h2.grids[0], h2_vqe_energies):
        values, _ = sector_spectrum(h2.hamiltonian_at(lam), electrons=1, k=1)
        worst = max(worst, abs(energy - values[0]))
    assert worst <= 1e-6, f"PASS/FAIL H2 VQE vs oracle: worst {worst:.3e}"


def test_vqe_matches_sector_oracle_lih(lih, lih_vqe_energies):
    # |E_VQE - min sector spectrum| <= 1e-4 on every node (frozen ansatz gap)
    worst = 0.0
    for lam, energy in zip(lih.grids[0], lih_vqe_energies):
        values, _ = sector_spectrum(lih.hamiltonian_at(lam), electrons=1, k=1)
        worst = max(worst, abs(energy - values[0]))
    assert worst <= 1e-4, f"PASS/FAIL LiH VQE vs oracle: worst {worst:.3e}"


# ---------------------------------------------------------------------------
# criterion 3: joint descent finds the equilibrium geometry
# ---------------------------------------------------------------------------


def test_mgd_equilibrium_h2(h2, h2_mgd_traces):
    # lambda* = 0.744 +/- 0.01 from every start, <= 200 outer iterations,
    # and within 0.01 of the refined oracle scan
    oracle = pes_argmin(h2, refine=True)
    for lam0, trace in h2_mgd_traces.items():
        assert trace.converged, f"start {lam0}: no convergence"
        assert trace.outer_iterations <= 200
        lam_star = float(trace.lambda_star[0])
        assert abs(lam_star - 0.744) <= 0.01, (
            f"PASS/FAIL H2 equilibrium from {lam0}: {lam_star:.4f}"
        )
        assert abs(lam_star - oracle.lambda_star[0]) <= 0.01


def test_mgd_equilibrium_lih(lih):
    # lambda* = 1.520 +/- 0.02 and within 0.01 of the refined oracle scan
    ctx = LandscapeContext(lih, resolve_ansatz("lih"))
    trace = mgd_optimize(ctx, MgdOptions(lambda0=1.5))
    assert trace.converged and trace.outer_iterations <= 200
    lam_star = float(trace.lambda_star[0])
    oracle = pes_argmin(lih, refine=True)
    assert abs(lam_star - 1.520) <= 0.02, (
        f"PASS/FAIL LiH equilibrium: {lam_star:.4f}"
    )
    assert abs(lam_star - oracle.lambda_star[0]) <= 0.01


# ---------------------------------------------------------------------------
# criterion 4: the lambda phase consumes no quantum evaluations
# ---------------------------------------------------------------------------


def test_mgd_lambda_phase_is_quantum_free(h2_mgd_traces):
    # counter constant within every lambda phase, across all runs
    for trace in h2_mgd_traces.values():
        previous = None
        for step in trace.steps:
            if step.phase == "lambda" and previous is not None:
                assert step.quantum_evals == previous.quantum_evals, (
                    f"PASS/FAIL quantum-freeness: counter moved "
                    f"{previous.quantum_evals} -> {step.quantum_evals} "
                    f"in outer {step.outer}"
                )
            previous = step


# ---------------------------------------------------------------------------
# criterion 5: analytic continuation against the closed form
# ---------------------------------------------------------------------------


def curved_companion():
    # c_Z = cos(lambda) + 0.3, c_X = sin(lambda): minimum at
    # theta* = (atan2(sin l, cos l + 0.3) + pi)/2, genuinely curved in
    # lambda so the Euler drift is first order and visible
    grid = np.linspace(0.0, np.pi, 161)
    return make_family(
        "curved-1q",
        1,
        ["phi"],
        [grid],
        [("Z", np.cos(grid) + 0.3), ("X", np.sin(grid))],
    )


def euler_errors(family, theta_star_fn, step):
    ctx = LandscapeContext(family, y_rotation_ansatz())
    path = np.arange(0.0, np.pi + 1e-12, step)
    plan = ContinuationPlan(
        path=path, theta0=np.array([theta_star_fn(0.0)]), corrector_steps=0
    )
    res = continue_path(ctx, plan)
    predicted = res.thetas[:, 0]
    exact = np.array([theta_star_fn(l) for l in path])
    return np.max(np.abs(predicted - exact))


def test_analytic_continuation_first_order(analytic_family):
    # E = cos(2 theta - lambda): theta* = (lambda + pi)/2; corrector off,
    # max |theta_i - theta*_i| <= 1e-3 at step 0.01
    exact = lambda l: 0.5 * (l + np.pi)
    err_coarse = euler_errors(analytic_family, exact, 0.01)
    err_fine = euler_errors(analytic_family, exact, 0.005)
    assert err_coarse <= 1e-3, (
        f"PASS/FAIL analytic continuation: {err_coarse:.3e}"
    )
    # first-order check: halving the step drops the error by >= 1.6, unless
    # both runs already sit on the spline-reconstruction noise floor (the
    # predictor is exact for this family, so its drift cannot scale)
    floor = 1e-6
    assert err_fine <= err_coarse
    assert (err_coarse / max(err_fine, 1e-300) >= 1.6) or (
        err_coarse <= floor and err_fine <= floor
    ), f"PASS/FAIL step halving: {err_coarse:.3e} -> {err_fine:.3e}"


def test_curved_continuation_euler_ratio():
    # on a family with genuine predictor curvature the factor must show
    family = curved_companion()
    exact = lambda l: 0.5 * (np.arctan2(np.sin(l), np.cos(l) + 0.3) + np.pi)
    err_coarse = euler_errors(family, exact, 0.01)
    err_fine = euler_errors(family, exact, 0.005)
    ratio = err_coarse / err_fine
    assert ratio >= 1.6, f"PASS/FAIL Euler ratio: {ratio:.2f}"


# ---------------------------------------------------------------------------
# criterion 6: continuation tracks independent per-node eigensolver runs
# ---------------------------------------------------------------------------


def continuation_vs_vqe(family, ctx, vqe_energies):
    start = minimize(ctx, family.grids[0][0], VqeOptions(keep_history=False))
    plan = ContinuationPlan(
        path=grid_path(family),
        theta0=start.theta,
        corrector_steps=5,
        corrector_step_size=0.4,
    )
    res = continue_path(ctx, plan)
    assert all(p.corrector_steps <= 5 for p in res.points)
    return float(np.max(np.abs(res.energies[:, 0] - vqe_energies)))


def test_continuation_vs_vqe_h2(h2, h2_ctx, h2_vqe_energies):
    # corrector <= 5 steps/point, max gap <= 1e-4 over all 50 nodes
    worst = continuation_vs_vqe(h2, h2_ctx, h2_vqe_energies)
    assert worst <= 1e-4, f"PASS/FAIL H2 continuation vs VQE: {worst:.3e}"


def test_continuation_vs_vqe_lih(lih, lih_ctx, lih_vqe_energies):
    # same bound over the 30 LiH nodes
    worst = continuation_vs_vqe(lih, lih_ctx, lih_vqe_energies)
    assert worst <= 1e-4, f"PASS/FAIL LiH continuation vs VQE: {worst:.3e}"


# ---------------------------------------------------------------------------
# criterion 7: subspace sweep reproduces the four excited-state curves
# ---------------------------------------------------------------------------


def test_ssvqe_states_match_sector_eigenvalues(h2_4q, ssvqe_sweep):
    # per-state energies within 1e-3 of the two-electron sector spectrum
    worst = 0.0
    for point in ssvqe_sweep.points:
        values, _ = sector_spectrum(
            h2_4q.hamiltonian_at(point.lam), electrons=2, k=6
        )
        worst = max(
            worst, float(np.max(np.abs(np.sort(point.energies) - np.sort(values))))
        )
    assert worst <= 1e-3, f"PASS/FAIL SSVQE vs sector: worst {worst:.3e}"


def test_ssvqe_yields_exactly_four_curves(ssvqe_sweep):
    # six states, four distinct energies at every node (degenerate curves
    # coincide to 1e-6)
    for point in ssvqe_sweep.points:
        energies = np.sort(point.energies)
        distinct = 1 + int(np.sum(np.diff(energies) > 1e-6))
        assert distinct == 4, (
            f"PASS/FAIL four curves: {distinct} at lambda {point.lam}"
        )


# ---------------------------------------------------------------------------
# criterion 8: derivative engine self-consistency
# ---------------------------------------------------------------------------


def test_hessian_symmetry(lih, h4):
    # ||A - A^T||_inf <= 1e-6 before symmetrization
    for family, ansatz, theta, lam in (
        (lih, resolve_ansatz("lih"), np.array([0.3, -0.4]), 1.7),
        (h4, uccsd_ansatz(6, 2), np.full(8, 0.2), np.array([1.1, 2.5])),
    ):
        ctx = LandscapeContext(family, ansatz)
        raw = ctx.hessian_theta(theta, lam, symmetrize=False)
        asym = float(np.max(np.abs(raw - raw.T)))
        assert asym <= 1e-6, f"PASS/FAIL Hessian symmetry: {asym:.3e}"


def test_hessian_and_mixed_vs_energy_differences(lih, lih_ctx):
    # A and b against second central differences of the energy, <= 5e-5
    theta = np.array([0.3, -0.4])
    lam = 1.7
    h = 1e-3
    a_matrix = lih_ctx.hessian_theta(theta, lam)

    def energy(t, l=lam):
        return lih_ctx.energy(t, l)

    for j in range(2):
        for k in range(2):
            ej = np.eye(2)[j] * h
            ek = np.eye(2)[k] * h
            if j == k:
                fd = (energy(theta + ej) - 2 * energy(theta) + energy(theta - ej)) / h**2
            else:
                fd = (
                    energy(theta + ej + ek)
                    - energy(theta + ej - ek)
                    - energy(theta - ej + ek)
                    + energy(theta - ej - ek)
                ) / (4 * h**2)
            assert abs(a_matrix[j, k] - fd) <= 5e-5, (
                f"PASS/FAIL A[{j},{k}] vs E differences: "
                f"{abs(a_matrix[j, k] - fd):.3e}"
            )

    b_vector = lih_ctx.mixed_theta_lambda(theta, lam, axis=0)
    for k in range(2):
        ek = np.eye(2)[k] * h
        fd = (
            energy(theta + ek, lam + h)
            - energy(theta + ek, lam - h)
            - energy(theta - ek, lam + h)
            + energy(theta - ek, lam - h)
        ) / (4 * h**2)
        assert abs(b_vector[k] - fd) <= 5e-5, (
            f"PASS/FAIL b[{k}] vs E differences: {abs(b_vector[k] - fd):.3e}"
        )


def test_grad_lambda_vs_finite_difference(lih, lih_ctx, h4):
    # dE/dlambda against central differences, <= 1e-6, both axis counts
    theta = np.array([0.3, -0.4])
    lam = 1.7
    h = 1e-5
    grad = lih_ctx.grad_lambda(theta, lam)
    fd = (lih_ctx.energy(theta, lam + h) - lih_ctx.energy(theta, lam - h)) / (2 * h)
    assert abs(grad[0] - fd) <= 1e-6

    ctx4 = LandscapeContext(h4, uccsd_ansatz(6, 2))
    theta4 = np.full(8, 0.15)
    lam4 = np.array([1.2, 2.4])
    grad4 = ctx4.grad_lambda(theta4, lam4)
    for axis in range(2):
        delta = np.zeros(2)
        delta[axis] = h
        fd = (
            ctx4.energy(theta4, lam4 + delta) - ctx4.energy(theta4, lam4 - delta)
        ) / (2 * h)
        assert abs(grad4[axis] - fd) <= 1e-6, (
            f"PASS/FAIL grad_lambda axis {axis}: {abs(grad4[axis] - fd):.3e}"
        )


# ---------------------------------------------------------------------------
# criterion 9: two-axis descent on the H4 surface (structural)
# ---------------------------------------------------------------------------


def test_h4_mgd_converges_to_local_minimum(h4, h4_mgd_trace):
    # ||grad_lambda E|| <= 1e-4 and the converged grid cell is a strict
    # local minimum of the exact-diagonalization surface
    trace = h4_mgd_trace
    assert trace.converged, "PASS/FAIL H4 descent: no convergence"
    assert trace.steps[-1].grad_lambda_norm <= 1e-4

    d_grid, a_grid = h4.grids
    i = int(np.argmin(np.abs(d_grid - trace.lambda_star[0])))
    j = int(np.argmin(np.abs(a_grid - trace.lambda_star[1])))

    def ground(ii, jj):
        values, _ = eigenspectrum(
            h4.hamiltonian_at(np.array([d_grid[ii], a_grid[jj]])), k=1
        )
        return values[0]

    center = ground(i, j)
    neighbors = [
        ground(ii, jj)
        for ii, jj in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1))
        if 0 <= ii < d_grid.size and 0 <= jj < a_grid.size
    ]
    assert all(center < v for v in neighbors), (
        f"PASS/FAIL H4 local minimum: cell ({i}, {j}) "
        f"E={center:.6f} vs neighbors {np.round(neighbors, 6)}"
    )


# ---------------------------------------------------------------------------
# criterion 10: CLI determinism
# ---------------------------------------------------------------------------


def test_cli_runs_are_byte_identical(tmp_path):
    # same seed, same configuration -> byte-identical CSV
    outputs = []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.csv"
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "vqefam.cli",
                "vqe",
                "--family",
                str(FIXTURES / "h2_sto3g.json"),
                "--ansatz",
                "h2",
                "--seed",
                "11",
                "--output",
                str(out),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1], "PASS/FAIL CLI determinism: CSVs differ"
