"""Energy landscape evaluation: E(theta, lambda) = c(lambda) . L(theta).

``L(theta)`` is the vector of Pauli-term expectations of the prepared
state. It only depends on the circuit, so it is cached per distinct
circuit evaluation and reused across parameter-coefficient queries; this
is what makes the lambda phase of mutual gradient descent free of quantum
work. ``quantum_evals`` counts cache misses, i.e. distinct circuits
actually simulated.

Gradients over theta come from the parameter-shift identity: each factor
``exp(-i phi P)`` makes the energy a sinusoid of period pi in ``phi``, so
``dE/dphi = E(phi + pi/4) - E(phi - pi/4)`` exactly, and a generator's
derivative is the prefactor-weighted sum over its factors. A
central-difference mode serves as an independent cross-check.
"""

from __future__ import annotations

from collections import OrderedDict

import numpy as np

from .family import HamiltonianFamily
from .simulator import evolve_factors, reference_index
from .ucc import Ansatz

PARAMETER_SHIFT = "parameter-shift"
CENTRAL_DIFFERENCE = "central-difference"
_SHIFT = np.pi / 4


class LandscapeContext:
    """Cached evaluator for one (family, ansatz) pair.

    Parameters
    ----------
    family, ansatz:
        Must agree on qubit count.
    gradient_method:
        ``"parameter-shift"`` (default) or ``"central-difference"``.
    fd_step:
        Step for the central-difference gradient mode.
    hessian_step:
        Step for the finite-difference Hessian over theta.
    """

    def __init__(
        self,
        family: HamiltonianFamily,
        ansatz: Ansatz,
        gradient_method: str = PARAMETER_SHIFT,
        fd_step: float = 1e-5,
        hessian_step: float = 1e-4,
        cache_limit: int = 200_000,
    ):
        if family.n_qubits != ansatz.n_qubits:
            raise ValueError(
                f"family acts on {family.n_qubits} qubits, "
                f"ansatz on {ansatz.n_qubits}"
            )
        if gradient_method not in (PARAMETER_SHIFT, CENTRAL_DIFFERENCE):
            raise ValueError(f"unknown gradient method {gradient_method!r}")
        self.family = family
        self.ansatz = ansatz
        self.gradient_method = gradient_method
        self.fd_step = float(fd_step)
        self.hessian_step = float(hessian_step)
        self._factors = ansatz.flat_factors()
        self._slots = np.array([slot for slot, _, _ in self._factors], dtype=np.intp)
        self._prefs = np.array([pref for _, pref, _ in self._factors], dtype=np.float64)
        self._strings = [ps for _, _, ps in self._factors]
        self._term_strings = family._strings
        self._default_ref = reference_index(ansatz.reference)
        self._cache: OrderedDict[tuple[int, bytes], np.ndarray] = OrderedDict()
        self._jac_cache: OrderedDict[tuple, np.ndarray] = OrderedDict()
        self._cache_limit = int(cache_limit)
        self.quantum_evals = 0

    # -- circuit-level primitives -------------------------------------------

    def _ref_index(self, reference: str | None) -> int:
        if reference is None:
            return self._default_ref
        if len(reference) != self.ansatz.n_qubits:
            raise ValueError(
                f"reference {reference!r} does not match {self.ansatz.n_qubits} qubits"
            )
        return reference_index(reference)

    def _angles(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.ansatz.parameter_count,):
            raise ValueError(
                f"theta has shape {theta.shape}, ansatz takes "
                f"{self.ansatz.parameter_count} parameters"
            )
        return theta[self._slots] * self._prefs

    def _expectations(self, ref: int, angles: np.ndarray) -> np.ndarray:
        key = (ref, angles.tobytes())
        hit = self._cache.get(key)
        if hit is not None:
            self._cache.move_to_end(key)
            return hit
        amps = evolve_factors(self.ansatz.n_qubits, ref, self._strings, angles)
        values = np.empty(len(self._term_strings), dtype=np.float64)
        for m, ps in enumerate(self._term_strings):
            values[m] = np.vdot(amps, ps.apply(amps)).real
        self.quantum_evals += 1
        self._cache[key] = values
        if len(self._cache) > self._cache_limit:
            self._cache.popitem(last=False)
        return values

    # -- public surface ------------------------------------------------------

    def pauli_expectations(self, theta, reference: str | None = None) -> np.ndarray:
        """Expectation vector L(theta) over the family's term set."""
        return self._expectations(self._ref_index(reference), self._angles(theta))

    def energy(self, theta, lam, reference: str | None = None) -> float:
        """E = c(lambda) . L(theta), sharing the cached expectation path."""
        c = self.family.coefficients_at(lam)
        return float(c @ self.pauli_expectations(theta, reference))

    def expectation_jacobian(
        self, theta, reference: str | None = None, method: str | None = None
    ) -> np.ndarray:
        """Matrix ``J[k, m] = d L_m / d theta_k``.

        Cached per (reference, theta, method); the lambda-direction
        derivatives reuse it without new circuit evaluations.
        """
        method = method or self.gradient_method
        theta = np.asarray(theta, dtype=np.float64)
        ref = self._ref_index(reference)
        key = (ref, theta.tobytes(), method)
        hit = self._jac_cache.get(key)
        if hit is not None:
            self._jac_cache.move_to_end(key)
            return hit
        n_params = self.ansatz.parameter_count
        jac = np.zeros((n_params, len(self._term_strings)), dtype=np.float64)
        if method == PARAMETER_SHIFT:
            base = self._angles(theta)
            for f, (slot, pref, _) in enumerate(self._factors):
                up = base.copy()
                up[f] += _SHIFT
                down = base.copy()
                down[f] -= _SHIFT
                jac[slot] += pref * (
                    self._expectations(ref, up) - self._expectations(ref, down)
                )
        elif method == CENTRAL_DIFFERENCE:
            h = self.fd_step
            for k in range(n_params):
                up = theta.copy()
                up[k] += h
                down = theta.copy()
                down[k] -= h
                jac[k] = (
                    self._expectations(ref, self._angles(up))
                    - self._expectations(ref, self._angles(down))
                ) / (2.0 * h)
        else:
            raise ValueError(f"unknown gradient method {method!r}")
        self._jac_cache[key] = jac
        if len(self._jac_cache) > self._cache_limit:
            self._jac_cache.popitem(last=False)
        return jac

    def grad_theta(
        self, theta, lam, reference: str | None = None, method: str | None = None
    ) -> np.ndarray:
        """Gradient of the energy over the ansatz parameters."""
        c = self.family.coefficients_at(lam)
        return self.expectation_jacobian(theta, reference, method) @ c

    def grad_lambda(self, theta, lam, reference: str | None = None) -> np.ndarray:
        """Gradient over the family parameters, one entry per axis.

        Purely classical given cached expectations: dE/dlambda_a =
        (dc/dlambda_a) . L(theta).
        """
        values = self.pauli_expectations(theta, reference)
        out = np.empty(self.family.lambda_dims, dtype=np.float64)
        for axis in range(self.family.lambda_dims):
            out[axis] = self.family.coefficient_derivative(lam, axis) @ values
        return out

    def mixed_theta_lambda(
        self, theta, lam, axis: int = 0, reference: str | None = None
    ) -> np.ndarray:
        """Vector ``b_k = d^2 E / d theta_k d lambda_axis``."""
        dc = self.family.coefficient_derivative(lam, axis)
        return self.expectation_jacobian(theta, reference) @ dc

    def hessian_theta(
        self, theta, lam, reference: str | None = None, symmetrize: bool = True
    ) -> np.ndarray:
        """Hessian over theta by central differences of the gradient.

        With ``symmetrize`` the raw matrix is replaced by ``(A + A^T)/2``;
        pass ``False`` to inspect the asymmetry of the raw differences.
        """
        theta = np.asarray(theta, dtype=np.float64)
        n_params = self.ansatz.parameter_count
        h = self.hessian_step
        hess = np.empty((n_params, n_params), dtype=np.float64)
        for j in range(n_params):
            up = theta.copy()
            up[j] += h
            down = theta.copy()
            down[j] -= h
            hess[:, j] = (
                self.grad_theta(up, lam, reference) - self.grad_theta(down, lam, reference)
            ) / (2.0 * h)
        if symmetrize:
            hess = 0.5 * (hess + hess.T)
        return hess
