"""Ansatz construction: hardcoded circuits and Jordan-Wigner UCC factors.

A :class:`Generator` is a set of mutually commuting Pauli strings with real
prefactors sharing one variational angle; the circuit applies
``prod_f exp(-i * theta * prefactor_f * string_f)``. For fermionic
excitations ``T`` the generator realizes ``exp(theta * (T - T^dagger))``
because ``i (T - T^dagger)`` expands to exactly such a real combination.

Spin-orbital convention: orbital ``j`` maps to qubit ``j`` with a Z string
on all ``k < j`` (qubit 0 leftmost). Spatial orbital ``m`` with spin up /
down sits at ``2m`` / ``2m + 1``, so a Hartree-Fock state with ``k``
electrons is ``k`` ones followed by zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .pauli import PauliString

# ---------------------------------------------------------------------------
# Tiny symbolic Pauli algebra in X/Z mask form, private to this module.
# An operator is a dict {(xmask, zmask): complex} meaning
# coeff * prod_j X^x_j Z^z_j. Y enters as XZ = -iY.
# ---------------------------------------------------------------------------


def _mul(a: dict, b: dict) -> dict:
    out: dict[tuple[int, int], complex] = {}
    for (x1, z1), c1 in a.items():
        for (x2, z2), c2 in b.items():
            sign = -1.0 if (bin(z1 & x2).count("1") & 1) else 1.0
            key = (x1 ^ x2, z1 ^ z2)
            out[key] = out.get(key, 0.0) + sign * c1 * c2
    return {k: v for k, v in out.items() if abs(v) > 1e-14}


def _dagger(a: dict) -> dict:
    out = {}
    for (x, z), c in a.items():
        sign = -1.0 if (bin(x & z).count("1") & 1) else 1.0
        out[(x, z)] = sign * c.conjugate()
    return out


def _ladder(j: int, n: int, dagger: bool) -> dict:
    """Jordan-Wigner ``a_j`` or ``a_j^dagger`` with Z string on k < j."""
    zstring = 0
    for k in range(j):
        zstring |= 1 << (n - 1 - k)
    bit = 1 << (n - 1 - j)
    # (X - iY)/2 = (X + XZ)/2 for a^dag, (X + iY)/2 = (X - XZ)/2 for a
    s = 0.5 if dagger else -0.5
    return {(bit, zstring): 0.5, (bit, zstring | bit): s}


def _masks_to_term(x: int, z: int, n: int) -> tuple[complex, str]:
    """Pauli label and conversion phase for an X/Z mask pair.

    Positions with both masks set become Y; since XZ = -iY the
    coefficient picks up one factor of -i per such position.
    """
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


def _strings_commute(a: PauliString, b: PauliString) -> bool:
    anti = (bin(a._xmask & b._yzmask).count("1") + bin(b._xmask & a._yzmask).count("1")) & 1
    return not anti


@dataclass(frozen=True)
class Generator:
    """Mutually commuting Pauli factors sharing one angle."""

    factors: tuple[tuple[float, PauliString], ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("generator needs at least one factor")
        for pref, ps in self.factors:
            if pref == 0.0:
                raise ValueError(f"zero prefactor on {ps.label}")
        strings = [ps for _, ps in self.factors]
        n = strings[0].n_qubits
        for ps in strings:
            if ps.n_qubits != n:
                raise ValueError("generator factors act on different registers")
        for a, b in combinations(strings, 2):
            if not _strings_commute(a, b):
                raise ValueError(
                    f"generator factors {a.label} and {b.label} do not commute"
                )

    @property
    def n_qubits(self) -> int:
        return self.factors[0][1].n_qubits


@dataclass(frozen=True)
class Ansatz:
    """Ordered generators applied to a computational basis reference.

    ``param_slots[k]`` names the variational parameter driving generator
    ``k``; slots repeat when Trotter repetitions share amplitudes. For a
    single repetition ``parameter_count == len(generators)``.
    """

    n_qubits: int
    reference: str
    generators: tuple[Generator, ...]
    param_slots: tuple[int, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if len(self.reference) != self.n_qubits:
            raise ValueError(
                f"reference {self.reference!r} does not match {self.n_qubits} qubits"
            )
        if any(b not in "01" for b in self.reference):
            raise ValueError(f"reference must be a 0/1 string, got {self.reference!r}")
        if self.param_slots is None:
            object.__setattr__(
                self, "param_slots", tuple(range(len(self.generators)))
            )
        if len(self.param_slots) != len(self.generators):
            raise ValueError("param_slots must name one slot per generator")
        slots = sorted(set(self.param_slots))
        if slots != list(range(len(slots))):
            raise ValueError(f"parameter slots must cover 0..K-1, got {slots}")
        for g in self.generators:
            if g.n_qubits != self.n_qubits:
                raise ValueError("generator register size mismatch")

    @property
    def parameter_count(self) -> int:
        return max(self.param_slots) + 1 if self.param_slots else 0

    def flat_factors(self) -> list[tuple[int, float, PauliString]]:
        """Factors in application order as (slot, prefactor, string)."""
        out = []
        for g, slot in zip(self.generators, self.param_slots):
            for pref, ps in g.factors:
                out.append((slot, pref, ps))
        return out

    def factor_schedule(self, theta: np.ndarray):
        strings = []
        angles = []
        for slot, pref, ps in self.flat_factors():
            strings.append(ps)
            angles.append(float(theta[slot]) * pref)
        return strings, angles


def _generator_from_fermionic(t_op: dict, n: int) -> Generator:
    """Build the gate generator for ``exp(theta (T - T^dag))``.

    Expands ``i (T - T^dag)`` in Pauli-label form; the result must have
    real coefficients or the excitation was malformed.
    """
    anti = dict(t_op)
    for key, c in _dagger(t_op).items():
        anti[key] = anti.get(key, 0.0) - c
    factors = []
    for (x, z), c in anti.items():
        phase, label = _masks_to_term(x, z, n)
        coeff = 1j * c * phase
        if abs(coeff) < 1e-14:
            continue
        if abs(coeff.imag) > 1e-12:
            raise ValueError(
                f"excitation produced a non-real prefactor {coeff} on {label}"
            )
        factors.append((float(coeff.real), PauliString(label)))
    factors.sort(key=lambda f: f[1].label)
    return Generator(tuple(factors))


def jw_single_excitation(p: int, q: int, n_qubits: int) -> Generator:
    """Generator of ``exp(theta (a_p^dag a_q - a_q^dag a_p))``.

    Non-adjacent index pairs pick up the intervening Z parity string.
    """
    if p == q:
        raise ValueError("single excitation needs two distinct orbitals")
    for j in (p, q):
        if not 0 <= j < n_qubits:
            raise ValueError(f"orbital {j} outside register of {n_qubits}")
    t_op = _mul(_ladder(p, n_qubits, True), _ladder(q, n_qubits, False))
    return _generator_from_fermionic(t_op, n_qubits)


def jw_double_excitation(p: int, q: int, r: int, s: int, n_qubits: int) -> Generator:
    """Generator of ``exp(theta (a_p^dag a_q^dag a_r a_s - h.c.))``."""
    idx = (p, q, r, s)
    if len(set(idx)) != 4:
        raise ValueError(f"double excitation needs four distinct orbitals, got {idx}")
    for j in idx:
        if not 0 <= j < n_qubits:
            raise ValueError(f"orbital {j} outside register of {n_qubits}")
    t_op = _mul(
        _mul(_ladder(p, n_qubits, True), _ladder(q, n_qubits, True)),
        _mul(_ladder(r, n_qubits, False), _ladder(s, n_qubits, False)),
    )
    return _generator_from_fermionic(t_op, n_qubits)


def h2_ansatz() -> Ansatz:
    """One-parameter circuit ``exp(-i theta X0 Y1)`` on ``|01>``."""
    return Ansatz(2, "01", (Generator(((1.0, PauliString("XY")),)),))


def lih_ansatz() -> Ansatz:
    """Two-parameter circuit ``exp(-i t2 X0 Y2) exp(-i t1 X0 Y1)`` on ``|001>``."""
    return Ansatz(
        3,
        "001",
        (
            Generator(((1.0, PauliString("XYI")),)),
            Generator(((1.0, PauliString("XIY")),)),
        ),
    )


def uccsd_ansatz(
    n_spin_orbitals: int, n_electrons: int, trotter_steps: int = 1
) -> Ansatz:
    """Trotterized UCCSD over spin-conserving excitations.

    Singles run over occupied ``q`` to virtual ``p`` with matching spin
    (``p = q mod 2``), ordered by ``(q, p)``; doubles over occupied pairs
    ``r < s`` to virtual pairs ``p < q`` with matching spin multisets,
    ordered by ``(r, s, p, q)``. One amplitude per excitation, shared
    across Trotter repetitions.
    """
    n, k = n_spin_orbitals, n_electrons
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= electrons <= spin orbitals, got {k} of {n}")
    if trotter_steps < 1:
        raise ValueError("trotter_steps must be >= 1")
    occupied = range(k)
    virtual = range(k, n)
    excitations: list[Generator] = []
    for q in occupied:
        for p in virtual:
            if (p - q) % 2 == 0:
                excitations.append(jw_single_excitation(p, q, n))
    for r, s in combinations(occupied, 2):
        for p, q in combinations(virtual, 2):
            if sorted((p % 2, q % 2)) == sorted((r % 2, s % 2)):
                excitations.append(jw_double_excitation(p, q, r, s, n))
    reference = "1" * k + "0" * (n - k)
    generators = tuple(excitations) * trotter_steps
    slots = tuple(range(len(excitations))) * trotter_steps
    return Ansatz(n, reference, generators, slots)


def two_electron_sector_ansatz() -> Ansatz:
    """Sector-diagonalizing ansatz for 2 electrons in 4 spin orbitals.

    Extends the UCCSD(4, 2) generators with the open-shell pair exchange
    ``a_1^dag a_2^dag a_3 a_0 - h.c.``, which rotates ``|1001>`` against
    ``|0110>``. With that factor one unitary can map all six two-electron
    basis states onto eigenstates of a spin-symmetric Hamiltonian, which
    plain UCCSD cannot (it leaves the open-shell pair at the exchange
    midpoint).
    """
    return Ansatz(
        4,
        "1100",
        (
            jw_single_excitation(2, 0, 4),
            jw_single_excitation(3, 1, 4),
            jw_double_excitation(2, 3, 0, 1, 4),
            jw_double_excitation(1, 2, 3, 0, 4),
        ),
    )


def resolve_ansatz(name: str) -> Ansatz:
    """Look up an ansatz by CLI name.

    Recognized: ``h2``, ``lih``, ``h2s`` and ``uccsd:<orbitals>,<electrons>,<trotter>``.
    """
    if name == "h2":
        return h2_ansatz()
    if name == "lih":
        return lih_ansatz()
    if name == "h2s":
        return two_electron_sector_ansatz()
    if name.startswith("uccsd:"):
        parts = name[len("uccsd:"):].split(",")
        if len(parts) not in (2, 3):
            raise ValueError(
                "uccsd ansatz spec must be uccsd:<orbitals>,<electrons>[,<trotter>], "
                f"got {name!r}"
            )
        try:
            fields = [int(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"non-integer field in ansatz spec {name!r}") from exc
        n, k = fields[0], fields[1]
        trotter = fields[2] if len(fields) == 3 else 1
        return uccsd_ansatz(n, k, trotter)
    raise ValueError(f"unknown ansatz {name!r} (try h2, lih, h2s, uccsd:n,e,t)")
