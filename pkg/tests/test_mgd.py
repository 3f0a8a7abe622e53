"""Alternating lambda/theta optimizer: convergence, trace bookkeeping,
quantum-evaluation accounting, and domain clipping."""

import numpy as np
import pytest

from conftest import make_family, y_rotation_ansatz
from vqefam.family import DomainError
from vqefam.landscape import LandscapeContext
from vqefam.mgd import MgdOptions, MgdStep, mgd_optimize

pytestmark = []


def fresh_ctx(family):
    # each run gets its own context so eval counters start at zero
    return LandscapeContext(family, y_rotation_ansatz())


class TestOptions:
    def test_lambda0_required(self):
        with pytest.raises(ValueError, match="lambda0"):
            MgdOptions()

    @pytest.mark.parametrize(
        "bad",
        [
            {"eta_theta": 0.0},
            {"eta_lambda": -0.5},
            {"lambda_steps": 0},
            {"theta_steps": 0},
            {"max_outer": 0},
            {"tol_theta": 0.0},
        ],
    )
    def test_positivity(self, bad):
        with pytest.raises(ValueError):
            MgdOptions(lambda0=1.0, **bad)

    def test_lambda0_outside_domain(self, quadratic_family):
        ctx = fresh_ctx(quadratic_family)
        with pytest.raises(DomainError):
            mgd_optimize(ctx, MgdOptions(lambda0=99.0))

    def test_theta0_shape_checked(self, quadratic_family):
        ctx = fresh_ctx(quadratic_family)
        with pytest.raises(ValueError, match="theta0"):
            mgd_optimize(ctx, MgdOptions(lambda0=1.0, theta0=np.zeros(3)))


def test_decoupled_quadratic_reaches_its_minimum(quadratic_family):
    # identity coefficient (l-2)^2 plus a constant-Z term: the lambda
    # dynamics do not depend on theta at all, so lambda -> 2 from any start
    for theta0 in (None, np.array([0.7]), np.array([-1.2])):
        ctx = fresh_ctx(quadratic_family)
        trace = mgd_optimize(ctx, MgdOptions(lambda0=0.5, theta0=theta0))
        assert trace.converged
        assert trace.lambda_star[0] == pytest.approx(2.0, abs=1e-4)


def test_theta_reaches_minimum_too(quadratic_family):
    ctx = fresh_ctx(quadratic_family)
    trace = mgd_optimize(ctx, MgdOptions(lambda0=3.1, theta0=np.array([0.4])))
    assert trace.converged
    assert trace.energy == pytest.approx(-1.0 + (trace.lambda_star[0] - 2) ** 2, abs=1e-8)
    assert np.cos(2 * trace.theta_star[0]) == pytest.approx(-1.0, abs=1e-9)


def test_joint_stationary_start_converges_immediately(quadratic_family):
    ctx = fresh_ctx(quadratic_family)
    trace = mgd_optimize(
        ctx, MgdOptions(lambda0=2.0, theta0=np.array([np.pi / 2]))
    )
    assert trace.converged
    assert trace.outer_iterations == 0
    assert trace.steps == []
    assert trace.lambda_star[0] == 2.0
    assert trace.theta_star[0] == np.pi / 2


def test_trace_structure(quadratic_family):
    ctx = fresh_ctx(quadratic_family)
    opts = MgdOptions(lambda0=0.5, theta0=np.array([0.4]))
    trace = mgd_optimize(ctx, opts)
    assert trace.converged
    per_outer = opts.lambda_steps + opts.theta_steps
    assert len(trace.steps) == trace.outer_iterations * per_outer
    for i, step in enumerate(trace.steps):
        outer = i // per_outer + 1
        within = i % per_outer
        assert step.outer == outer
        assert step.phase == ("lambda" if within < opts.lambda_steps else "theta")
    last = trace.steps[-1]
    assert np.array_equal(last.lam, trace.lambda_star)
    assert np.array_equal(last.theta, trace.theta_star)
    assert last.quantum_evals == trace.quantum_evals
    # final recorded norms satisfy the stopping rule
    assert last.grad_theta_norm <= opts.tol_theta
    assert last.grad_lambda_norm <= opts.tol_lambda


def test_first_row_is_post_update(quadratic_family):
    ctx = fresh_ctx(quadratic_family)
    opts = MgdOptions(lambda0=0.5, theta0=np.array([0.4]))
    trace = mgd_optimize(ctx, opts)
    # dE/dl = 2(l - 2) at l = 0.5 is -3, so the first recorded lambda is
    # 0.5 - 0.05 * (-3) = 0.65 (up to the spline derivative noise floor)
    assert trace.steps[0].lam[0] == pytest.approx(0.65, abs=1e-6)


def test_lambda_phase_is_quantum_free(quadratic_family):
    ctx = fresh_ctx(quadratic_family)
    trace = mgd_optimize(ctx, MgdOptions(lambda0=0.5, theta0=np.array([0.4])))
    by_outer: dict[int, list[MgdStep]] = {}
    for s in trace.steps:
        by_outer.setdefault(s.outer, []).append(s)
    previous_final = None
    for outer, steps in sorted(by_outer.items()):
        lam_counts = {s.quantum_evals for s in steps if s.phase == "lambda"}
        assert len(lam_counts) == 1, f"outer {outer} lambda phase did quantum work"
        if previous_final is not None:
            assert lam_counts == {previous_final}
        # theta steps may be cache hits once theta stops moving, so the
        # counter is monotone, not strictly increasing
        theta_counts = [s.quantum_evals for s in steps if s.phase == "theta"]
        assert all(b >= a for a, b in zip(theta_counts, theta_counts[1:]))
        assert theta_counts[0] >= next(iter(lam_counts))
        previous_final = theta_counts[-1]
    counter = [s.quantum_evals for s in trace.steps]
    assert counter == sorted(counter)


def test_clipping_at_domain_edge():
    # minimum of the identity coefficient sits outside the grid, so the
    # lambda steps pile up against the boundary and get flagged
    grid = np.linspace(0.0, 1.0, 9)
    fam = make_family(
        "edge", 1, ["x"], [grid],
        [("I", (grid - 2.0) ** 2), ("Z", np.full(9, 1.0))],
    )
    ctx = fresh_ctx(fam)
    trace = mgd_optimize(
        ctx, MgdOptions(lambda0=0.5, theta0=np.array([0.4]), max_outer=4)
    )
    assert not trace.converged
    assert trace.any_clipped
    assert trace.lambda_star[0] == 1.0
    for s in trace.steps:
        assert 0.0 <= s.lam[0] <= 1.0
    assert trace.outer_iterations == 4


def test_csv_columns_and_rows(quadratic_family):
    ctx = fresh_ctx(quadratic_family)
    trace = mgd_optimize(ctx, MgdOptions(lambda0=0.5, theta0=np.array([0.4])))
    assert trace.csv_columns() == [
        "outer", "phase", "lambda_0", "theta_0",
        "energy", "grad_theta_norm", "grad_lambda_norm", "quantum_evals",
    ]
    rows = trace.csv_rows()
    assert len(rows) == len(trace.steps)
    assert rows[0][1] == "lambda"
    assert all(len(r) == 8 for r in rows)


def test_two_axis_family(analytic_2d_family):
    ctx = fresh_ctx(analytic_2d_family)
    trace = mgd_optimize(
        ctx,
        MgdOptions(lambda0=np.array([0.7, 0.6]), theta0=np.array([0.3]), max_outer=50),
    )
    # E = cos(2t - a - b): flat valleys, so expect the stationarity
    # conditions rather than a unique point
    assert trace.converged
    u = 2 * trace.theta_star[0] - trace.lambda_star.sum()
    assert np.sin(u) == pytest.approx(0.0, abs=1e-5)
    assert trace.csv_columns()[2:4] == ["lambda_0", "lambda_1"]


def test_lambda0_scalar_accepted(quadratic_family):
    ctx = fresh_ctx(quadratic_family)
    trace = mgd_optimize(ctx, MgdOptions(lambda0=1.5, max_outer=1))
    assert trace.steps[0].lam.shape == (1,)
