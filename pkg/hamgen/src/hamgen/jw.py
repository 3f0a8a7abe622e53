"""Jordan-Wigner mapping of second-quantized operators to Pauli terms.

Conventions match the family files this package emits: spin orbital
``j`` is qubit ``j``, qubit 0 is the leftmost label character and the
most significant bit of a basis index, and ``a_j`` carries a Z string
on all qubits ``k < j``.

Operators live in two layers: a mask form ``{(xmask, zmask): coeff}``
used for products (Y enters as XZ = -iY), and a label form
``{"IXYZ...": coeff}`` used for assembly and output.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

MaskOp = dict[tuple[int, int], complex]

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def multiply(a: MaskOp, b: MaskOp) -> MaskOp:
    out: MaskOp = {}
    for (x1, z1), c1 in a.items():
        for (x2, z2), c2 in b.items():
            sign = -1.0 if (z1 & x2).bit_count() & 1 else 1.0
            key = (x1 ^ x2, z1 ^ z2)
            out[key] = out.get(key, 0.0) + sign * c1 * c2
    return {k: v for k, v in out.items() if abs(v) > 1e-14}


def ladder(j: int, n: int, dagger: bool) -> MaskOp:
    zstring = 0
    for k in range(j):
        zstring |= 1 << (n - 1 - k)
    bit = 1 << (n - 1 - j)
    s = 0.5 if dagger else -0.5
    return {(bit, zstring): 0.5, (bit, zstring | bit): s}


def mask_to_label(x: int, z: int, n: int) -> tuple[complex, str]:
    chars = []
    phase: complex = 1.0
    for j in range(n):
        bit = 1 << (n - 1 - j)
        xj, zj = bool(x & bit), bool(z & bit)
        if xj and zj:
            chars.append("Y")
            phase *= -1j
        elif xj:
            chars.append("X")
        elif zj:
            chars.append("Z")
        else:
            chars.append("I")
    return phase, "".join(chars)


def to_labels(op: MaskOp, n: int) -> dict[str, complex]:
    out: dict[str, complex] = {}
    for (x, z), c in op.items():
        phase, label = mask_to_label(x, z, n)
        value = out.get(label, 0.0) + phase * c
        out[label] = value
    return {k: v for k, v in out.items() if abs(v) > 1e-14}


@lru_cache(maxsize=None)
def _one_body_template(p: int, q: int, n: int) -> tuple:
    op = multiply(ladder(p, n, True), ladder(q, n, False))
    return tuple(to_labels(op, n).items())


@lru_cache(maxsize=None)
def _two_body_template(p: int, q: int, s: int, r: int, n: int) -> tuple:
    op = multiply(
        multiply(ladder(p, n, True), ladder(q, n, True)),
        multiply(ladder(s, n, False), ladder(r, n, False)),
    )
    return tuple(to_labels(op, n).items())


class NonHermitianError(ValueError):
    pass


def jordan_wigner(
    h1: np.ndarray, g2: np.ndarray | None, constant: float, *, tol: float = 1e-10
) -> dict[str, float]:
    """Qubit terms of ``const + sum h1[p,q] a+p aq + 1/2 sum g2[pqrs] a+p a+q as ar``.

    ``g2`` is indexed in physicist convention ``<pq|rs>``. Imaginary
    residue above ``tol`` on any Pauli coefficient aborts; a Hermitian
    input cannot produce one.
    """
    n = h1.shape[0]
    acc: dict[str, complex] = {"I" * n: complex(constant)}

    def add(template, weight):
        for label, c in template:
            acc[label] = acc.get(label, 0.0) + weight * c

    for p in range(n):
        for q in range(n):
            w = h1[p, q]
            if abs(w) > 1e-14:
                add(_one_body_template(p, q, n), w)
    if g2 is not None:
        for p in range(n):
            for q in range(n):
                if p == q:
                    continue
                for r in range(n):
                    for s in range(n):
                        if r == s:
                            continue
                        w = g2[p, q, r, s]
                        if abs(w) > 1e-14:
                            add(_two_body_template(p, q, s, r, n), 0.5 * w)
    out: dict[str, float] = {}
    for label, c in acc.items():
        if abs(c.imag) > tol:
            raise NonHermitianError(
                f"coefficient of {label} has imaginary part {c.imag:.3e}"
            )
        if abs(c.real) > 1e-12:
            out[label] = float(c.real)
    return out


def dense_pauli(label: str) -> np.ndarray:
    mat = np.eye(1, dtype=complex)
    for ch in label:
        mat = np.kron(mat, _SINGLE[ch])
    return mat


def dense_operator(terms: dict[str, float], n_qubits: int) -> np.ndarray:
    mat = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    for label, c in terms.items():
        if len(label) != n_qubits:
            raise ValueError(f"label {label!r} does not act on {n_qubits} qubits")
        mat += c * dense_pauli(label)
    return mat


def project_to_paulis(matrix: np.ndarray, *, tol: float = 1e-10) -> dict[str, float]:
    """Exact Pauli-basis expansion of a Hermitian matrix.

    Inverse of :func:`dense_operator` for any matrix of size 2^n; the
    Pauli strings form a complete orthogonal basis under the trace inner
    product, so the expansion is lossless.
    """
    dim = matrix.shape[0]
    n = int(np.log2(dim))
    if 2**n != dim or matrix.shape != (dim, dim):
        raise ValueError(f"matrix shape {matrix.shape} is not a qubit operator")
    out: dict[str, float] = {}
    for chars in product("IXYZ", repeat=n):
        label = "".join(chars)
        c = np.trace(dense_pauli(label).conj().T @ matrix) / dim
        if abs(c.imag) > tol:
            raise NonHermitianError(
                f"coefficient of {label} has imaginary part {c.imag:.3e}"
            )
        if abs(c.real) > 1e-12:
            out[label] = float(c.real)
    return out


def creation_string_state(orbitals: list[int], n: int) -> np.ndarray:
    """Statevector of ``a+_{o1} a+_{o2} ... |vac>`` applied right to left.

    Keeps fermionic signs explicit so configuration-state functions built
    from determinants carry consistent phases.
    """
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    for j in reversed(orbitals):
        op = ladder(j, n, True)
        mat = np.zeros((2**n, 2**n), dtype=complex)
        for (x, z), c in op.items():
            phase, label = mask_to_label(x, z, n)
            mat += phase * c * dense_pauli(label)
        state = mat @ state
    norm = np.linalg.norm(state)
    if norm < 1e-12:
        raise ValueError(f"creation string {orbitals} annihilates the vacuum")
    return state / norm
