"""Plain gradient-descent eigensolvers on a fixed Hamiltonian ``H(lambda)``.

The ground-state solver minimizes ``E(theta) = c(lambda) . L(theta)``.
The subspace solver minimizes a weighted sum of the same energy over a
set of mutually orthogonal basis references driven through one shared
circuit; with strictly decreasing weights the optimum sorts the states
by energy, which exposes excited levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .landscape import LandscapeContext


@dataclass
class VqeOptions:
    """Gradient-descent controls.

    ``step_size`` is halved whenever a step would raise the cost and
    restored to its configured value after three accepted steps in a row.
    ``random_init`` seeds a uniform draw in (-pi/4, pi/4) for theta0 when
    no explicit start is given; the default start is all zeros, i.e. the
    reference state itself.
    """

    step_size: float = 0.1
    grad_tol: float = 1e-7
    max_iterations: int = 5000
    random_init: int | None = None
    keep_history: bool = True

    def __post_init__(self):
        if self.step_size <= 0.0:
            raise ValueError(f"step_size must be positive, got {self.step_size}")
        if self.grad_tol <= 0.0:
            raise ValueError(f"grad_tol must be positive, got {self.grad_tol}")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")


@dataclass
class VqeResult:
    theta: np.ndarray
    energy: float
    grad_norm: float
    iterations: int
    converged: bool
    history_energy: np.ndarray | None
    history_theta: np.ndarray | None


@dataclass
class SsvqeSpec:
    """References and weights for the subspace search.

    References are computational basis labels (mutually orthogonal by
    construction); weights must be strictly decreasing inside (0, 1).
    The default weights are ``(k+1-j)/(k+2)`` for ``j = 0..k``.
    """

    references: tuple[str, ...]
    weights: np.ndarray | None = None

    def __post_init__(self):
        refs = tuple(self.references)
        if not refs:
            raise ValueError("need at least one reference state")
        if len(set(refs)) != len(refs):
            raise ValueError("reference states must be distinct")
        n = len(refs[0])
        for r in refs:
            if len(r) != n or any(b not in "01" for b in r):
                raise ValueError(f"bad reference label {r!r}")
        object.__setattr__(self, "references", refs)
        k = len(refs) - 1
        if self.weights is None:
            w = np.array([(k + 1 - j) / (k + 2) for j in range(k + 1)])
        else:
            w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (len(refs),):
            raise ValueError(f"need {len(refs)} weights, got shape {w.shape}")
        if np.any(w <= 0.0) or np.any(w >= 1.0):
            raise ValueError("weights must lie strictly inside (0, 1)")
        if len(refs) > 1 and np.any(np.diff(w) >= 0.0):
            raise ValueError("weights must be strictly decreasing")
        object.__setattr__(self, "weights", w)


@dataclass
class SsvqeResult:
    theta: np.ndarray
    cost: float
    state_energies: np.ndarray
    grad_norm: float
    iterations: int
    converged: bool
    history_cost: np.ndarray | None


def _descend(value_fn, grad_fn, theta0: np.ndarray, options: VqeOptions):
    """Shared plain-GD loop with step halving on cost increase."""
    theta = np.array(theta0, dtype=np.float64)
    eta = options.step_size
    successes = 0
    value = value_fn(theta)
    if not np.isfinite(value):
        raise RuntimeError(f"cost is non-finite at the start: {value!r}")
    history = [value]
    grad = grad_fn(theta)
    grad_norm = float(np.linalg.norm(grad))
    iterations = 0
    converged = grad_norm <= options.grad_tol
    thetas = [theta.copy()]
    while not converged and iterations < options.max_iterations:
        candidate = theta - eta * grad
        new_value = value_fn(candidate)
        if not np.isfinite(new_value):
            raise RuntimeError(
                f"cost became non-finite at iteration {iterations} "
                f"(theta={candidate!r}, step={eta:g})"
            )
        if new_value > value:
            eta *= 0.5
            successes = 0
            if eta < 1e-15:
                break
            continue
        theta = candidate
        value = new_value
        successes += 1
        if successes >= 3:
            eta = options.step_size
        iterations += 1
        grad = grad_fn(theta)
        grad_norm = float(np.linalg.norm(grad))
        if options.keep_history:
            history.append(value)
            thetas.append(theta.copy())
        converged = grad_norm <= options.grad_tol
    return theta, value, grad_norm, iterations, converged, history, thetas


def _initial_theta(n_params: int, theta0, options: VqeOptions) -> np.ndarray:
    if theta0 is not None:
        theta = np.asarray(theta0, dtype=np.float64)
        if theta.shape != (n_params,):
            raise ValueError(f"theta0 has shape {theta.shape}, need ({n_params},)")
        return theta.copy()
    if options.random_init is not None:
        rng = np.random.default_rng(options.random_init)
        return rng.uniform(-np.pi / 4, np.pi / 4, size=n_params)
    return np.zeros(n_params)


def minimize(
    context: LandscapeContext,
    lam,
    options: VqeOptions | None = None,
    theta0=None,
) -> VqeResult:
    """Ground-state search at a fixed parameter point."""
    options = options or VqeOptions()
    theta0 = _initial_theta(context.ansatz.parameter_count, theta0, options)
    theta, value, grad_norm, iterations, converged, history, thetas = _descend(
        lambda t: context.energy(t, lam),
        lambda t: context.grad_theta(t, lam),
        theta0,
        options,
    )
    return VqeResult(
        theta=theta,
        energy=value,
        grad_norm=grad_norm,
        iterations=iterations,
        converged=converged,
        history_energy=np.array(history) if options.keep_history else None,
        history_theta=np.array(thetas) if options.keep_history else None,
    )


def ssvqe_cost(
    context: LandscapeContext, theta, lam, spec: SsvqeSpec
) -> tuple[float, np.ndarray]:
    """Weighted cost and per-state energies for one parameter vector."""
    energies = np.array(
        [context.energy(theta, lam, reference=r) for r in spec.references]
    )
    return float(spec.weights @ energies), energies


def ssvqe_grad(context: LandscapeContext, theta, lam, spec: SsvqeSpec) -> np.ndarray:
    grad = np.zeros(context.ansatz.parameter_count)
    for w, r in zip(spec.weights, spec.references):
        grad += w * context.grad_theta(theta, lam, reference=r)
    return grad


def ssvqe_minimize(
    context: LandscapeContext,
    lam,
    spec: SsvqeSpec,
    options: VqeOptions | None = None,
    theta0=None,
) -> SsvqeResult:
    """Minimize the weighted subspace cost at a fixed parameter point."""
    options = options or VqeOptions()
    theta0 = _initial_theta(context.ansatz.parameter_count, theta0, options)
    theta, value, grad_norm, iterations, converged, history, _ = _descend(
        lambda t: ssvqe_cost(context, t, lam, spec)[0],
        lambda t: ssvqe_grad(context, t, lam, spec),
        theta0,
        options,
    )
    _, energies = ssvqe_cost(context, theta, lam, spec)
    return SsvqeResult(
        theta=theta,
        cost=value,
        state_energies=energies,
        grad_norm=grad_norm,
        iterations=iterations,
        converged=converged,
        history_cost=np.array(history) if options.keep_history else None,
    )
