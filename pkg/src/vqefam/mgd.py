"""Mutual gradient descent over circuit parameters and Hamiltonian parameters.

The optimizer alternates two phases. The lambda phase takes N descent
steps on lambda against the frozen expectation vector 𝓛(theta), which is
pure table arithmetic: no new statevector work happens, and the
quantum-evaluation counter recorded in the trace stays constant across
the phase. The theta phase then takes T ordinary descent steps on the
circuit parameters at the new lambda. The loop stops when both gradient
norms are within tolerance at an outer-iteration boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .landscape import LandscapeContext


@dataclass
class MgdOptions:
    """Controls for the alternating optimizer.

    ``lambda0`` is required and must lie inside the family domain;
    ``theta0`` defaults to zeros. Steps that would push lambda outside
    the domain are clipped to the boundary and the trace row is marked.
    """

    lambda0: np.ndarray | float | None = None
    theta0: np.ndarray | None = None
    eta_theta: float = 0.1
    eta_lambda: float = 0.05
    lambda_steps: int = 5
    theta_steps: int = 5
    tol_theta: float = 1e-5
    tol_lambda: float = 1e-5
    max_outer: int = 200

    def __post_init__(self):
        for name in ("eta_theta", "eta_lambda", "tol_theta", "tol_lambda"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("lambda_steps", "theta_steps", "max_outer"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.lambda0 is None:
            raise ValueError("lambda0 is required")


@dataclass
class MgdStep:
    """State after one recorded update (post-step values throughout)."""

    outer: int
    phase: str
    lam: np.ndarray
    theta: np.ndarray
    energy: float
    grad_theta_norm: float
    grad_lambda_norm: float
    quantum_evals: int
    clipped: bool = False


@dataclass
class MgdTrace:
    steps: list[MgdStep]
    converged: bool
    outer_iterations: int
    lambda_star: np.ndarray
    theta_star: np.ndarray
    energy: float
    quantum_evals: int

    @property
    def any_clipped(self) -> bool:
        return any(s.clipped for s in self.steps)

    def csv_columns(self) -> list[str]:
        dims = len(self.lambda_star)
        n_params = len(self.theta_star)
        return (
            ["outer", "phase"]
            + [f"lambda_{a}" for a in range(dims)]
            + [f"theta_{k}" for k in range(n_params)]
            + ["energy", "grad_theta_norm", "grad_lambda_norm", "quantum_evals"]
        )

    def csv_rows(self) -> list[list]:
        rows = []
        for s in self.steps:
            rows.append(
                [s.outer, s.phase]
                + [float(v) for v in s.lam]
                + [float(v) for v in s.theta]
                + [s.energy, s.grad_theta_norm, s.grad_lambda_norm, s.quantum_evals]
            )
        return rows


def _as_lambda(family, value) -> np.ndarray:
    lam = np.atleast_1d(np.asarray(value, dtype=np.float64))
    if lam.shape != (family.lambda_dims,):
        raise ValueError(
            f"lambda0 has shape {lam.shape}, family has {family.lambda_dims} axes"
        )
    return lam


def mgd_optimize(context: LandscapeContext, options: MgdOptions) -> MgdTrace:
    """Run the alternating optimizer; returns the full trace."""
    family = context.family
    lam = _as_lambda(family, options.lambda0)
    family.coefficients_at(lam)  # domain check; raises DomainError outside
    n_params = context.ansatz.parameter_count
    if options.theta0 is None:
        theta = np.zeros(n_params)
    else:
        theta = np.asarray(options.theta0, dtype=np.float64).copy()
        if theta.shape != (n_params,):
            raise ValueError(f"theta0 has shape {theta.shape}, need ({n_params},)")

    def norms(th, lm):
        # grad_theta also fills the Jacobian cache, which is what keeps
        # the subsequent lambda phase free of new statevector work
        gt = float(np.linalg.norm(context.grad_theta(th, lm)))
        gl = float(np.linalg.norm(context.grad_lambda(th, lm)))
        return gt, gl

    def check_energy(value, where):
        if not np.isfinite(value):
            raise RuntimeError(f"non-finite energy during {where}: {value!r}")
        return float(value)

    steps: list[MgdStep] = []
    grad_theta_norm, grad_lambda_norm = norms(theta, lam)
    energy = check_energy(context.energy(theta, lam), "initialization")
    converged = (
        grad_theta_norm <= options.tol_theta
        and grad_lambda_norm <= options.tol_lambda
    )
    outer_done = 0
    for outer in range(1, options.max_outer + 1):
        if converged:
            break
        outer_done = outer
        for _ in range(options.lambda_steps):
            grad_lam = context.grad_lambda(theta, lam)
            lam, clipped = family.clip_to_domain(lam - options.eta_lambda * grad_lam)
            energy = check_energy(context.energy(theta, lam), "lambda phase")
            grad_theta_norm, grad_lambda_norm = norms(theta, lam)
            steps.append(
                MgdStep(
                    outer=outer,
                    phase="lambda",
                    lam=lam.copy(),
                    theta=theta.copy(),
                    energy=energy,
                    grad_theta_norm=grad_theta_norm,
                    grad_lambda_norm=grad_lambda_norm,
                    quantum_evals=context.quantum_evals,
                    clipped=clipped,
                )
            )
        for _ in range(options.theta_steps):
            grad_th = context.grad_theta(theta, lam)
            theta = theta - options.eta_theta * grad_th
            energy = check_energy(context.energy(theta, lam), "theta phase")
            grad_theta_norm, grad_lambda_norm = norms(theta, lam)
            steps.append(
                MgdStep(
                    outer=outer,
                    phase="theta",
                    lam=lam.copy(),
                    theta=theta.copy(),
                    energy=energy,
                    grad_theta_norm=grad_theta_norm,
                    grad_lambda_norm=grad_lambda_norm,
                    quantum_evals=context.quantum_evals,
                )
            )
        converged = (
            grad_theta_norm <= options.tol_theta
            and grad_lambda_norm <= options.tol_lambda
        )
    return MgdTrace(
        steps=steps,
        converged=converged,
        outer_iterations=outer_done,
        lambda_star=lam.copy(),
        theta_star=theta.copy(),
        energy=energy,
        quantum_evals=context.quantum_evals,
    )
