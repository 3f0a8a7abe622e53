"""Gaussian one- and two-electron integrals over contracted s/p functions.

McMurchie-Davidson scheme: Cartesian Gaussian products are expanded in
Hermite Gaussians (coefficients ``E``), and Coulomb-type integrals
reduce to derivatives of the Boys function (tensor ``R``). The code is
written for general angular momentum but is only exercised up to p
functions here, so no effort went into high-L performance.

Everything is in Hartree atomic units; centers are in Bohr.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import hyp1f1


def boys(n: int, t):
    """Boys function F_n(t), vectorized over t."""
    t = np.asarray(t, dtype=np.float64)
    return hyp1f1(n + 0.5, n + 1.5, -t) / (2.0 * n + 1.0)


def _double_factorial(n: int) -> float:
    out = 1.0
    while n > 1:
        out *= n
        n -= 2
    return out


def primitive_norm(alpha: float, powers) -> float:
    i, j, k = powers
    l = i + j + k
    front = (2.0 * alpha / np.pi) ** 0.75
    top = (4.0 * alpha) ** (l / 2.0)
    bottom = np.sqrt(
        _double_factorial(2 * i - 1)
        * _double_factorial(2 * j - 1)
        * _double_factorial(2 * k - 1)
    )
    return front * top / bottom


@dataclass
class Contracted:
    """One contracted Cartesian Gaussian basis function.

    ``coeffs`` multiply normalized primitives; ``normalize()`` rescales
    them so the contracted function itself has unit norm.
    """

    center: np.ndarray
    powers: tuple[int, int, int]
    exps: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=np.float64)
        self.exps = np.asarray(self.exps, dtype=np.float64)
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        self.norms = np.array(
            [primitive_norm(a, self.powers) for a in self.exps]
        )

    def normalize(self) -> "Contracted":
        s = overlap(self, self)
        self.coeffs = self.coeffs / np.sqrt(s)
        return self


def _e_tables(la: int, lb: int, a: float, b: float, ab: float) -> np.ndarray:
    """Hermite expansion coefficients E_t^{ij} for one dimension.

    Returns an array indexed [i, j, t] for i <= la, j <= lb,
    t <= i + j. ``ab`` is A_x - B_x.
    """
    p = a + b
    mu = a * b / p
    table = np.zeros((la + 1, lb + 1, la + lb + 2))
    table[0, 0, 0] = np.exp(-mu * ab * ab)
    # X_PA = -b/p * AB, X_PB = +a/p * AB
    xpa = -b / p * ab
    xpb = a / p * ab
    for i in range(la + 1):
        for j in range(lb + 1):
            if i == 0 and j == 0:
                continue
            if j == 0:
                src = table[i - 1, 0]
                x = xpa
            else:
                src = table[i, j - 1]
                x = xpb
            dst = np.zeros_like(src)
            for t in range(i + j + 1):
                value = x * src[t]
                if t > 0:
                    value += src[t - 1] / (2.0 * p)
                value += (t + 1) * src[t + 1]
                dst[t] = value
            table[i, j] = dst
    return table


def _pair_iter(fa: Contracted, fb: Contracted):
    """All primitive pair data needed by every integral type."""
    ab = fa.center - fb.center
    for ca, aa, na in zip(fa.coeffs, fa.exps, fa.norms):
        for cb, bb, nb in zip(fb.coeffs, fb.exps, fb.norms):
            p = aa + bb
            center = (aa * fa.center + bb * fb.center) / p
            weight = ca * cb * na * nb
            es = [
                _e_tables(fa.powers[d], fb.powers[d], aa, bb, ab[d])
                for d in range(3)
            ]
            yield p, center, weight, es


def overlap(fa: Contracted, fb: Contracted) -> float:
    total = 0.0
    for p, _, weight, es in _pair_iter(fa, fb):
        value = weight * (np.pi / p) ** 1.5
        for d in range(3):
            value *= es[d][fa.powers[d], fb.powers[d], 0]
        total += value
    return total


def _overlap_1d(e_table, i: int, j: int) -> float:
    """E_0^{ij} lookup guarding against out-of-range angular momenta."""
    if i < 0 or j < 0:
        return 0.0
    return e_table[i, j, 0]


def kinetic(fa: Contracted, fb: Contracted) -> float:
    total = 0.0
    for ca, aa, na in zip(fa.coeffs, fa.exps, fa.norms):
        for cb, bb, nb in zip(fb.coeffs, fb.exps, fb.norms):
            p = aa + bb
            weight = ca * cb * na * nb * (np.pi / p) ** 1.5
            ab = fa.center - fb.center
            # tables big enough for the +2 shifted momenta
            es = [
                _e_tables(fa.powers[d], fb.powers[d] + 2, aa, bb, ab[d])
                for d in range(3)
            ]
            s = [es[d][fa.powers[d], fb.powers[d], 0] for d in range(3)]
            t_dim = []
            for d in range(3):
                i, j = fa.powers[d], fb.powers[d]
                term = -2.0 * bb * bb * _overlap_1d(es[d], i, j + 2)
                term += bb * (2 * j + 1) * _overlap_1d(es[d], i, j)
                term -= 0.5 * j * (j - 1) * _overlap_1d(es[d], i, j - 2)
                t_dim.append(term)
            value = (
                t_dim[0] * s[1] * s[2]
                + s[0] * t_dim[1] * s[2]
                + s[0] * s[1] * t_dim[2]
            )
            total += weight * value
    return total


def _hermite_coulomb(t: int, u: int, v: int, n: int, p, pc, memo) -> np.ndarray:
    """R^n_{tuv}, vectorized over a batch of Gaussian products.

    ``p`` is the (batched) total exponent, ``pc`` the (batched, 3)
    displacement from the product center to the charge center.
    """
    key = (t, u, v, n)
    if key in memo:
        return memo[key]
    if t == u == v == 0:
        t2 = p * np.sum(pc * pc, axis=-1)
        value = (-2.0 * p) ** n * boys(n, t2)
    elif t > 0:
        value = pc[..., 0] * _hermite_coulomb(t - 1, u, v, n + 1, p, pc, memo)
        if t > 1:
            value += (t - 1) * _hermite_coulomb(t - 2, u, v, n + 1, p, pc, memo)
    elif u > 0:
        value = pc[..., 1] * _hermite_coulomb(t, u - 1, v, n + 1, p, pc, memo)
        if u > 1:
            value += (u - 1) * _hermite_coulomb(t, u - 2, v, n + 1, p, pc, memo)
    else:
        value = pc[..., 2] * _hermite_coulomb(t, u, v - 1, n + 1, p, pc, memo)
        if v > 1:
            value += (v - 1) * _hermite_coulomb(t, u, v - 2, n + 1, p, pc, memo)
    memo[key] = value
    return value


def nuclear_attraction(fa: Contracted, fb: Contracted, charges) -> float:
    """Sum of -Z/|r - C| attraction integrals over all nuclei.

    ``charges`` is a sequence of (Z, center) pairs.
    """
    total = 0.0
    la, lb = sum(fa.powers), sum(fb.powers)
    for p, center, weight, es in _pair_iter(fa, fb):
        for z, c in charges:
            pc = (center - np.asarray(c, dtype=np.float64))[None, :]
            memo: dict = {}
            value = 0.0
            for t in range(fa.powers[0] + fb.powers[0] + 1):
                for u in range(fa.powers[1] + fb.powers[1] + 1):
                    for v in range(fa.powers[2] + fb.powers[2] + 1):
                        e_prod = (
                            es[0][fa.powers[0], fb.powers[0], t]
                            * es[1][fa.powers[1], fb.powers[1], u]
                            * es[2][fa.powers[2], fb.powers[2], v]
                        )
                        if e_prod == 0.0:
                            continue
                        r = _hermite_coulomb(t, u, v, 0, p, pc, memo)
                        value += e_prod * float(r[0])
            total += -z * weight * (2.0 * np.pi / p) * value
    del la, lb
    return total


@dataclass
class _HermitePair:
    """Per-primitive-pair Hermite data for one function pair."""

    p: np.ndarray            # (m,) combined exponents
    centers: np.ndarray      # (m, 3) product centers
    lam: np.ndarray          # (m, T, U, V) E-coefficient products x weight


def _hermite_pair(fa: Contracted, fb: Contracted) -> _HermitePair:
    shape = tuple(fa.powers[d] + fb.powers[d] + 1 for d in range(3))
    ps, centers, lams = [], [], []
    for p, center, weight, es in _pair_iter(fa, fb):
        lam = np.zeros(shape)
        for t in range(shape[0]):
            for u in range(shape[1]):
                for v in range(shape[2]):
                    lam[t, u, v] = (
                        es[0][fa.powers[0], fb.powers[0], t]
                        * es[1][fa.powers[1], fb.powers[1], u]
                        * es[2][fa.powers[2], fb.powers[2], v]
                    )
        ps.append(p)
        centers.append(center)
        lams.append(weight * lam)
    return _HermitePair(
        p=np.array(ps), centers=np.array(centers), lam=np.array(lams)
    )


def electron_repulsion_tensor(functions: list[Contracted]) -> np.ndarray:
    """Full (ab|cd) tensor in chemist notation with 8-fold symmetry."""
    n = len(functions)
    pairs = {}
    for a in range(n):
        for b in range(a + 1):
            pairs[(a, b)] = _hermite_pair(functions[a], functions[b])
    eri = np.zeros((n, n, n, n))
    unique = [(a, b) for a in range(n) for b in range(a + 1)]
    for idx_ab, (a, b) in enumerate(unique):
        hp_ab = pairs[(a, b)]
        for c, d in unique[: idx_ab + 1]:
            hp_cd = pairs[(c, d)]
            value = _contract_pairs(hp_ab, hp_cd)
            for i, j, k, l in (
                (a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a),
            ):
                eri[i, j, k, l] = value
    return eri


def _contract_pairs(hp_ab: _HermitePair, hp_cd: _HermitePair) -> float:
    m1, m2 = len(hp_ab.p), len(hp_cd.p)
    p = np.repeat(hp_ab.p, m2)
    q = np.tile(hp_cd.p, m1)
    alpha = p * q / (p + q)
    pq = (
        np.repeat(hp_ab.centers, m2, axis=0)
        - np.tile(hp_cd.centers, (m1, 1))
    )
    prefactor = 2.0 * np.pi**2.5 / (p * q * np.sqrt(p + q))
    memo: dict = {}
    shape_ab = hp_ab.lam.shape[1:]
    shape_cd = hp_cd.lam.shape[1:]
    total = np.zeros(m1 * m2)
    for t in range(shape_ab[0]):
        for u in range(shape_ab[1]):
            for v in range(shape_ab[2]):
                lam_ab = hp_ab.lam[:, t, u, v]
                if not np.any(lam_ab):
                    continue
                lam_ab = np.repeat(lam_ab, m2)
                for tt in range(shape_cd[0]):
                    for uu in range(shape_cd[1]):
                        for vv in range(shape_cd[2]):
                            lam_cd = hp_cd.lam[:, tt, uu, vv]
                            if not np.any(lam_cd):
                                continue
                            sign = (-1.0) ** (tt + uu + vv)
                            r = _hermite_coulomb(
                                t + tt, u + uu, v + vv, 0, alpha, pq, memo
                            )
                            total += (
                                sign * lam_ab * np.tile(lam_cd, m1) * r
                            )
    return float(np.sum(prefactor * total))


def one_electron_matrices(functions: list[Contracted], charges):
    """Overlap, kinetic, and nuclear-attraction matrices."""
    n = len(functions)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1):
            s[a, b] = s[b, a] = overlap(functions[a], functions[b])
            t[a, b] = t[b, a] = kinetic(functions[a], functions[b])
            v[a, b] = v[b, a] = nuclear_attraction(
                functions[a], functions[b], charges
            )
    return s, t, v


def nuclear_repulsion(charges) -> float:
    total = 0.0
    items = [(z, np.asarray(c, dtype=np.float64)) for z, c in charges]
    for i in range(len(items)):
        for j in range(i):
            zi, ci = items[i]
            zj, cj = items[j]
            total += zi * zj / np.linalg.norm(ci - cj)
    return total
