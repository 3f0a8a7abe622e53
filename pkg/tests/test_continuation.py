"""Euler predictor plus gradient corrector along parameter paths."""

import numpy as np
import pytest

from conftest import make_family, y_rotation_ansatz
from vqefam.continuation import (
    ContinuationPlan,
    SingularHessianError,
    continue_path,
    continue_ssvqe,
    grid_path,
    polyline_path,
    predictor_step,
)
from vqefam.family import DomainError
from vqefam.landscape import LandscapeContext
from vqefam.pauli import PauliString
from vqefam.ucc import Ansatz, Generator
from vqefam.vqe import SsvqeSpec, minimize


def ctx_for(family, ansatz=None):
    return LandscapeContext(family, ansatz or y_rotation_ansatz())


class TestPredictorStep:
    def test_scalar_pin(self):
        d_theta, cond = predictor_step(np.array([[4.0]]), np.array([-2.0]), 0.5)
        assert d_theta[0] == pytest.approx(0.25)
        assert cond == pytest.approx(1.0)

    def test_identity_system(self):
        d_theta, cond = predictor_step(np.eye(2), np.array([1.0, 2.0]), 1.0)
        assert np.allclose(d_theta, [-1.0, -2.0])
        assert cond == pytest.approx(1.0)

    def test_singular_matrix_raises(self):
        with pytest.raises(SingularHessianError) as err:
            predictor_step(np.ones((2, 2)), np.array([1.0, 1.0]), 0.1)
        assert err.value.condition > 1e10 or not np.isfinite(err.value.condition)

    def test_non_finite_entries_raise(self):
        with pytest.raises(SingularHessianError, match="non-finite"):
            predictor_step(np.array([[np.nan]]), np.array([1.0]), 0.1)


class TestPlanValidation:
    def test_duplicate_path_points(self):
        with pytest.raises(ValueError, match="distinct"):
            ContinuationPlan(path=np.array([0.5, 0.5]), theta0=np.zeros(1))

    def test_empty_path(self):
        with pytest.raises(ValueError):
            ContinuationPlan(path=np.zeros((0, 1)), theta0=np.zeros(1))

    def test_negative_corrector_steps(self):
        with pytest.raises(ValueError):
            ContinuationPlan(
                path=np.array([0.1, 0.2]), theta0=np.zeros(1), corrector_steps=-1
            )

    def test_bad_corrector_tolerance(self):
        with pytest.raises(ValueError):
            ContinuationPlan(
                path=np.array([0.1, 0.2]), theta0=np.zeros(1), corrector_tol=0.0
            )

    def test_flat_path_gets_column_shape(self):
        plan = ContinuationPlan(path=np.array([0.1, 0.2]), theta0=np.zeros(1))
        assert plan.path.shape == (2, 1)


class TestRunValidation:
    def test_path_outside_domain(self, analytic_family):
        ctx = ctx_for(analytic_family)
        plan = ContinuationPlan(path=np.array([0.5, 99.0]), theta0=np.zeros(1))
        with pytest.raises(DomainError):
            continue_path(ctx, plan)

    def test_wrong_axis_count(self, analytic_family):
        ctx = ctx_for(analytic_family)
        plan = ContinuationPlan(path=np.zeros((3, 2)) + 0.5 * np.arange(3)[:, None],
                                theta0=np.zeros(1))
        with pytest.raises(ValueError, match="axes"):
            continue_path(ctx, plan)

    def test_unconverged_start_rejected(self, analytic_family):
        ctx = ctx_for(analytic_family)
        plan = ContinuationPlan(path=np.array([0.5, 0.6]), theta0=np.array([0.3]))
        with pytest.raises(ValueError, match="eigensolver"):
            continue_path(ctx, plan)

    def test_theta0_shape(self, analytic_family):
        ctx = ctx_for(analytic_family)
        plan = ContinuationPlan(path=np.array([0.5, 0.6]), theta0=np.zeros(2))
        with pytest.raises(ValueError, match="theta0"):
            continue_path(ctx, plan)

    def test_plan_kind_guards(self, analytic_family):
        ctx = ctx_for(analytic_family)
        seed = minimize(ctx, np.array([0.5]))
        ground = ContinuationPlan(path=np.array([0.5, 0.6]), theta0=seed.theta)
        with pytest.raises(ValueError, match="ssvqe"):
            continue_ssvqe(ctx, ground)
        multi = ContinuationPlan(
            path=np.array([0.5, 0.6]),
            theta0=seed.theta,
            ssvqe=SsvqeSpec(references=("0", "1")),
        )
        with pytest.raises(ValueError, match="ssvqe"):
            continue_path(ctx, multi)


def seeded_plan(ctx, path, **kwargs):
    lam0 = np.atleast_1d(path[0])
    res = minimize(ctx, lam0)
    assert res.converged
    return ContinuationPlan(path=path, theta0=res.theta, **kwargs)


def test_linear_optimum_traced_exactly(analytic_family):
    # theta*(lambda) = (lambda + pi)/2 is linear, so explicit Euler is
    # exact up to the spline noise floor even without the corrector
    ctx = ctx_for(analytic_family)
    path = np.linspace(0.2, 2.8, 27)
    plan = seeded_plan(ctx, path, corrector_steps=0)
    result = continue_path(ctx, plan)
    assert len(result.points) == 27
    for p in result.points:
        expected = np.cos(2 * p.theta_corrected[0] - p.lam[0])
        assert p.energies[0] == pytest.approx(expected, abs=1e-8)
        assert p.energies[0] == pytest.approx(-1.0, abs=1e-3)
    # raw Euler drift stays at the derivative noise level here
    thetas = result.thetas[:, 0]
    exact = (result.lambdas[:, 0] + np.pi) / 2
    offset = thetas[0] - exact[0]  # branch of the start angle
    assert np.max(np.abs(thetas - exact - offset)) <= 1e-4


def test_corrector_polishes_each_point(analytic_family):
    ctx = ctx_for(analytic_family)
    path = np.linspace(0.2, 2.8, 14)
    plan = seeded_plan(ctx, path)
    result = continue_path(ctx, plan)
    for p in result.points:
        assert p.converged
        # corrected angles are stationary: re-running the descent from
        # them terminates immediately
        again = minimize(ctx, p.lam, theta0=p.theta_corrected)
        assert again.iterations == 0
        assert p.energies[0] == pytest.approx(-1.0, abs=1e-6)
    assert np.all(np.isfinite([p.cond_a for p in result.points]))


def test_constant_family_no_movement(constant_family):
    ctx = ctx_for(constant_family)
    path = np.linspace(-1.0, 1.0, 9)
    plan = seeded_plan(ctx, path)
    result = continue_path(ctx, plan)
    thetas = result.thetas
    assert np.allclose(thetas, thetas[0], atol=1e-9)
    assert np.allclose(result.energies, result.energies[0], atol=1e-12)
    # nothing to correct when the optimum does not move
    assert all(p.corrector_steps == 0 for p in result.points)


def test_first_point_reported_verbatim(analytic_family):
    ctx = ctx_for(analytic_family)
    plan = seeded_plan(ctx, np.linspace(0.5, 0.9, 5))
    result = continue_path(ctx, plan)
    first = result.points[0]
    assert np.array_equal(first.theta_predicted, plan.theta0)
    assert np.array_equal(first.theta_corrected, plan.theta0)
    assert first.corrector_steps == 0
    assert first.converged


def test_singular_hessian_carries_partial_result(analytic_family):
    # two rotations about the same axis: the cost depends only on the
    # angle sum, so the Hessian is rank one and the predictor must fail
    redundant = Ansatz(
        generators=(
            Generator(((1.0, PauliString("Y")),)),
            Generator(((1.0, PauliString("Y")),)),
        ),
        n_qubits=1,
        reference="0",
    )
    ctx = ctx_for(analytic_family, redundant)
    res = minimize(ctx, np.array([0.5]))
    assert res.converged
    plan = ContinuationPlan(path=np.linspace(0.5, 0.9, 5), theta0=res.theta)
    with pytest.raises(SingularHessianError) as err:
        continue_path(ctx, plan)
    partial = err.value.partial
    assert partial is not None
    assert len(partial.points) == 1
    assert err.value.condition > 1e10 or not np.isfinite(err.value.condition)


def test_2d_polyline(analytic_2d_family):
    ctx = ctx_for(analytic_2d_family)
    path = polyline_path([(0.2, 0.2), (1.2, 0.8)], step=0.05)
    res = minimize(ctx, path[0])
    plan = ContinuationPlan(path=path, theta0=res.theta)
    result = continue_path(ctx, plan)
    # E = cos(2t - a - b): optimum tracks the sum of the two axes
    for p in result.points:
        assert p.energies[0] == pytest.approx(-1.0, abs=1e-6)
        u = 2 * p.theta_corrected[0] - p.lam.sum()
        assert np.cos(u) == pytest.approx(-1.0, abs=1e-6)


def test_ssvqe_continuation_two_states(analytic_family):
    ctx = ctx_for(analytic_family)
    spec = SsvqeSpec(references=("0", "1"))
    from vqefam.vqe import ssvqe_minimize

    # 2 theta - lambda = 0 is the cost maximum; keep the start off it
    seed = ssvqe_minimize(ctx, np.array([0.4]), spec, theta0=np.array([0.5]))
    assert seed.converged
    plan = ContinuationPlan(
        path=np.linspace(0.4, 2.4, 21), theta0=seed.theta, ssvqe=spec
    )
    result = continue_ssvqe(ctx, plan)
    assert result.n_states == 2
    energies = result.energies
    assert energies.shape == (21, 2)
    assert np.allclose(energies[:, 0], -1.0, atol=1e-6)
    assert np.allclose(energies[:, 1], 1.0, atol=1e-6)
    cols = result.csv_columns()
    assert "energy_0" in cols and "energy_1" in cols and "energy" not in cols


def test_csv_layout(analytic_family):
    ctx = ctx_for(analytic_family)
    plan = seeded_plan(ctx, np.linspace(0.5, 0.9, 5))
    result = continue_path(ctx, plan)
    assert result.csv_columns() == [
        "lambda_0", "theta_pred_0", "theta_corr_0",
        "energy", "corrector_steps", "cond_A", "converged",
    ]
    rows = result.csv_rows()
    assert len(rows) == 5
    assert all(len(r) == 7 for r in rows)
    assert all(r[-1] in (0, 1) for r in rows)


class TestPaths:
    def test_grid_path_matches_family(self, analytic_family):
        path = grid_path(analytic_family)
        assert path.shape == (161, 1)
        assert np.array_equal(path[:, 0], analytic_family.grids[0])

    def test_grid_path_needs_one_axis(self, analytic_2d_family):
        with pytest.raises(ValueError, match="one-axis"):
            grid_path(analytic_2d_family)

    def test_polyline_endpoints_and_spacing(self):
        path = polyline_path([(0.0, 0.0), (1.0, 0.0)], step=0.3)
        assert np.array_equal(path[0], [0.0, 0.0])
        assert np.array_equal(path[-1], [1.0, 0.0])
        gaps = np.linalg.norm(np.diff(path, axis=0), axis=1)
        assert np.all(gaps <= 0.3 + 1e-12)

    def test_polyline_multi_segment(self):
        path = polyline_path([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)], step=0.5)
        # corner appears exactly once
        matches = np.all(path == np.array([1.0, 0.0]), axis=1)
        assert matches.sum() == 1

    def test_polyline_validation(self):
        with pytest.raises(ValueError):
            polyline_path([(0.0, 0.0)], step=0.1)
        with pytest.raises(ValueError, match="coincide"):
            polyline_path([(0.0, 0.0), (0.0, 0.0)], step=0.1)
        with pytest.raises(ValueError):
            polyline_path([(0.0, 0.0), (1.0, 0.0)], step=0.0)

    def test_polyline_1d_waypoints(self):
        path = polyline_path([0.0, 1.0], step=0.25)
        assert path.shape == (5, 1)
