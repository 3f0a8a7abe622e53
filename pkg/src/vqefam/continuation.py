"""Predictor-corrector tracing of optimal circuit parameters along a path.

At a cost minimum the optimal theta*(lambda) obeys A dtheta = -b dlambda
with A the theta-Hessian of the cost and b the mixed theta/lambda second
derivative. Stepping that relation with explicit Euler and polishing
each point with a few gradient-descent steps yields a whole energy curve
from a single converged starting point. With a multi-state weighted cost
the same machinery traces every tracked eigenvalue at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .landscape import LandscapeContext
from .vqe import SsvqeSpec, VqeOptions, _descend, ssvqe_cost, ssvqe_grad


class SingularHessianError(RuntimeError):
    """Raised when the predictor matrix is unusable.

    ``condition`` holds the offending estimate; ``partial`` holds the
    points traced before the failure when raised from a path run.
    """

    def __init__(self, message: str, condition: float, partial=None):
        super().__init__(message)
        self.condition = condition
        self.partial = partial


@dataclass
class ContinuationPlan:
    """Path, starting parameters, and corrector policy.

    ``path`` is an (m, dims) array of family-domain points (a plain
    (m,) vector is accepted for one-axis families). ``theta0`` must
    already satisfy the gradient tolerance at ``path[0]``; run the
    eigensolver there first. ``corrector_steps = 0`` disables the
    corrector, leaving raw Euler predictions. ``ssvqe`` switches the
    traced cost from the ground-state energy to the weighted
    multi-state cost.
    """

    path: np.ndarray
    theta0: np.ndarray
    corrector_steps: int = 50
    corrector_tol: float = 1e-7
    corrector_step_size: float = 0.1
    cond_limit: float = 1e10
    ssvqe: SsvqeSpec | None = None

    def __post_init__(self):
        path = np.asarray(self.path, dtype=np.float64)
        if path.ndim == 1:
            path = path[:, None]
        if path.ndim != 2 or path.shape[0] < 1:
            raise ValueError("path must be a non-empty sequence of lambda points")
        seen = set()
        for row in path:
            key = row.tobytes()
            if key in seen:
                raise ValueError(f"path points must be pairwise distinct ({row})")
            seen.add(key)
        object.__setattr__(self, "path", path)
        object.__setattr__(
            self, "theta0", np.asarray(self.theta0, dtype=np.float64).copy()
        )
        if self.corrector_steps < 0:
            raise ValueError("corrector_steps must be non-negative")
        if self.corrector_tol <= 0 or self.corrector_step_size <= 0:
            raise ValueError("corrector tolerance and step size must be positive")


@dataclass
class ContinuationPoint:
    lam: np.ndarray
    theta_predicted: np.ndarray
    theta_corrected: np.ndarray
    energies: np.ndarray
    corrector_steps: int
    cond_a: float
    converged: bool


@dataclass
class ContinuationResult:
    points: list[ContinuationPoint]
    n_states: int

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.points])

    @property
    def thetas(self) -> np.ndarray:
        return np.array([p.theta_corrected for p in self.points])

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.energies for p in self.points])

    def csv_columns(self) -> list[str]:
        dims = len(self.points[0].lam)
        n_params = len(self.points[0].theta_corrected)
        columns = [f"lambda_{a}" for a in range(dims)]
        columns += [f"theta_pred_{k}" for k in range(n_params)]
        columns += [f"theta_corr_{k}" for k in range(n_params)]
        if self.n_states == 1:
            columns.append("energy")
        else:
            columns += [f"energy_{j}" for j in range(self.n_states)]
        columns += ["corrector_steps", "cond_A", "converged"]
        return columns

    def csv_rows(self) -> list[list]:
        rows = []
        for p in self.points:
            rows.append(
                [float(v) for v in p.lam]
                + [float(v) for v in p.theta_predicted]
                + [float(v) for v in p.theta_corrected]
                + [float(e) for e in p.energies]
                + [p.corrector_steps, p.cond_a, int(p.converged)]
            )
        return rows


def predictor_step(a_matrix: np.ndarray, b_vector: np.ndarray, delta_lambda: float):
    """One explicit Euler step: solve A x = b, return -delta * x.

    Raises SingularHessianError when the condition estimate of A is
    above 1e10 or the matrix contains non-finite entries.
    """
    a_matrix = np.asarray(a_matrix, dtype=np.float64)
    b_vector = np.asarray(b_vector, dtype=np.float64)
    if not (np.all(np.isfinite(a_matrix)) and np.all(np.isfinite(b_vector))):
        raise SingularHessianError("non-finite predictor system", float("nan"))
    condition = float(np.linalg.cond(a_matrix))
    if not np.isfinite(condition) or condition > 1e10:
        raise SingularHessianError(
            f"predictor matrix condition {condition:.3e} exceeds 1e10", condition
        )
    return -float(delta_lambda) * np.linalg.solve(a_matrix, b_vector), condition


class _Cost:
    """Ground-state energy viewed through the derivative engine."""

    n_states = 1

    def __init__(self, context: LandscapeContext):
        self.context = context

    def value(self, theta, lam) -> float:
        return self.context.energy(theta, lam)

    def grad(self, theta, lam) -> np.ndarray:
        return self.context.grad_theta(theta, lam)

    def hessian(self, theta, lam) -> np.ndarray:
        return self.context.hessian_theta(theta, lam)

    def mixed(self, theta, lam, axis: int) -> np.ndarray:
        return self.context.mixed_theta_lambda(theta, lam, axis)

    def energies(self, theta, lam) -> np.ndarray:
        return np.array([self.context.energy(theta, lam)])


class _SsvqeCost(_Cost):
    """Weighted multi-state cost; same derivatives, summed over states."""

    def __init__(self, context: LandscapeContext, spec: SsvqeSpec):
        super().__init__(context)
        self.spec = spec
        self.n_states = len(spec.references)

    def value(self, theta, lam) -> float:
        return ssvqe_cost(self.context, theta, lam, self.spec)[0]

    def grad(self, theta, lam) -> np.ndarray:
        return ssvqe_grad(self.context, theta, lam, self.spec)

    def hessian(self, theta, lam) -> np.ndarray:
        total = np.zeros((self.context.ansatz.parameter_count,) * 2)
        for w, r in zip(self.spec.weights, self.spec.references):
            total += w * self.context.hessian_theta(theta, lam, reference=r)
        return total

    def mixed(self, theta, lam, axis: int) -> np.ndarray:
        total = np.zeros(self.context.ansatz.parameter_count)
        for w, r in zip(self.spec.weights, self.spec.references):
            total += w * self.context.mixed_theta_lambda(theta, lam, axis, reference=r)
        return total

    def energies(self, theta, lam) -> np.ndarray:
        return ssvqe_cost(self.context, theta, lam, self.spec)[1]


def _run(context: LandscapeContext, plan: ContinuationPlan) -> ContinuationResult:
    cost = (
        _SsvqeCost(context, plan.ssvqe) if plan.ssvqe is not None else _Cost(context)
    )
    path = plan.path
    if path.shape[1] != context.family.lambda_dims:
        raise ValueError(
            f"path has {path.shape[1]} axes, family has {context.family.lambda_dims}"
        )
    for row in path:
        context.family.coefficients_at(row)  # domain check per point
    theta = plan.theta0
    if theta.shape != (context.ansatz.parameter_count,):
        raise ValueError(
            f"theta0 has shape {theta.shape}, "
            f"need ({context.ansatz.parameter_count},)"
        )
    start_norm = float(np.linalg.norm(cost.grad(theta, path[0])))
    if start_norm > plan.corrector_tol:
        raise ValueError(
            f"theta0 is not converged at the first path point "
            f"(gradient norm {start_norm:.3e} > {plan.corrector_tol:g}); "
            "run the eigensolver there first"
        )
    corrector_options = VqeOptions(
        step_size=plan.corrector_step_size,
        grad_tol=plan.corrector_tol,
        max_iterations=plan.corrector_steps,
        keep_history=False,
    )
    points = [
        ContinuationPoint(
            lam=path[0].copy(),
            theta_predicted=theta.copy(),
            theta_corrected=theta.copy(),
            energies=cost.energies(theta, path[0]),
            corrector_steps=0,
            cond_a=float("nan"),
            converged=True,
        )
    ]
    for i in range(1, len(path)):
        lam_from, lam_to = path[i - 1], path[i]
        a_matrix = cost.hessian(theta, lam_from)
        delta = lam_to - lam_from
        rhs = np.zeros(context.ansatz.parameter_count)
        for axis in range(path.shape[1]):
            rhs += delta[axis] * cost.mixed(theta, lam_from, axis)
        try:
            d_theta, condition = predictor_step(a_matrix, rhs, 1.0)
        except SingularHessianError as err:
            err.partial = ContinuationResult(points=points, n_states=cost.n_states)
            raise
        points[-1].cond_a = condition
        predicted = theta + d_theta
        corrected, _, grad_norm, steps_used, converged, _, _ = _descend(
            lambda t: cost.value(t, lam_to),
            lambda t: cost.grad(t, lam_to),
            predicted,
            corrector_options,
        )
        # _descend only ever accepts downhill moves, so the partial
        # correction is kept even when the step cap cuts it short
        theta = corrected
        points.append(
            ContinuationPoint(
                lam=lam_to.copy(),
                theta_predicted=predicted,
                theta_corrected=theta.copy(),
                energies=cost.energies(theta, lam_to),
                corrector_steps=steps_used,
                cond_a=float("nan"),
                converged=converged,
            )
        )
    # the loop stamps each point with the condition of the A evaluated
    # there for the outgoing step; the last point has no outgoing step,
    # so evaluate its Hessian once just for the report
    points[-1].cond_a = float(np.linalg.cond(cost.hessian(theta, path[-1])))
    return ContinuationResult(points=points, n_states=cost.n_states)


def continue_path(context: LandscapeContext, plan: ContinuationPlan):
    """Trace the ground-state optimum along the plan's path."""
    if plan.ssvqe is not None:
        raise ValueError("plan has an ssvqe spec; use continue_ssvqe")
    return _run(context, plan)


def continue_ssvqe(context: LandscapeContext, plan: ContinuationPlan):
    """Trace the weighted multi-state optimum along the plan's path."""
    if plan.ssvqe is None:
        raise ValueError("plan has no ssvqe spec; use continue_path")
    return _run(context, plan)


def grid_path(family) -> np.ndarray:
    """The family's own nodes as a path (one-axis families only)."""
    if family.lambda_dims != 1:
        raise ValueError("grid_path is defined for one-axis families only")
    return family.grids[0][:, None].copy()


def polyline_path(waypoints, step: float) -> np.ndarray:
    """Sample straight segments between waypoints at roughly `step` spacing."""
    pts = np.asarray(waypoints, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) < 2:
        raise ValueError("need at least two waypoints")
    if step <= 0:
        raise ValueError("step must be positive")
    segments = []
    for a, b in zip(pts[:-1], pts[1:]):
        length = float(np.linalg.norm(b - a))
        if length == 0.0:
            raise ValueError("consecutive waypoints coincide")
        n = max(1, int(np.ceil(length / step)))
        ts = np.linspace(0.0, 1.0, n + 1)[:-1]
        segments.append(a[None, :] + ts[:, None] * (b - a)[None, :])
    segments.append(pts[-1][None, :])
    return np.vstack(segments)
