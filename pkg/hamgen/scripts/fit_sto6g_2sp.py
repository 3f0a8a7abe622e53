"""Refit the shared-exponent 6-Gaussian expansion of Slater 2s/2p radials.

Produces the frozen constants in hamgen.basis (STO6G_2SP_*). The 2s and
2p shells share one exponent set, as in the historical STO-NG tables;
for fixed exponents the optimal contraction coefficients solve a small
linear system, so only the six exponents are optimized (in log space).

The mixed Slater-Gaussian moments
    I_n(a) = int_0^inf r^n exp(-a r^2 - r) dr
come from I_0 = (1/2) sqrt(pi/a) erfcx(1/(2 sqrt(a))) and the
integration-by-parts recursion I_n = ((n-1) I_{n-2} - I_{n-1}) / (2a).

Run:  python3 scripts/fit_sto6g_2sp.py
"""
import numpy as np
from scipy.optimize import minimize
from scipy.special import erfcx

N_SLATER = np.sqrt(4.0 / 3.0)  # zeta=1 node-less 2s/2p radial: N r exp(-r)


def slater_gaussian_moments(a, n_max):
    a = np.asarray(a, dtype=float)
    i = [0.5 * np.sqrt(np.pi / a) * erfcx(1.0 / (2.0 * np.sqrt(a)))]
    i.append((1.0 - i[0]) / (2.0 * a))
    for n in range(2, n_max + 1):
        i.append(((n - 1) * i[n - 2] - i[n - 1]) / (2.0 * a))
    return i


def cross_overlaps(exps, l):
    """<normalized Gaussian primitive | Slater radial> per exponent."""
    moments = slater_gaussian_moments(exps, 4)
    if l == 0:
        pref = np.sqrt(4 * np.pi) * (2 * exps / np.pi) ** 0.75
        return pref * N_SLATER * moments[3]
    pref = np.sqrt(4 * np.pi / 3) * (2 * exps / np.pi) ** 0.75 * 2 * np.sqrt(exps)
    return pref * N_SLATER * moments[4]


def gaussian_overlap_matrix(exps, l):
    ai = exps[:, None]
    aj = exps[None, :]
    power = 1.5 if l == 0 else 2.5
    return (2 * np.sqrt(ai * aj) / (ai + aj)) ** power


def best_overlap(exps, l):
    s = cross_overlaps(exps, l)
    m = gaussian_overlap_matrix(exps, l)
    c = np.linalg.solve(m, s)
    achieved = float(np.sqrt(s @ c))
    return achieved, c / np.sqrt(s @ c)


def objective(log_exps):
    exps = np.exp(log_exps)
    s2s, _ = best_overlap(exps, 0)
    s2p, _ = best_overlap(exps, 1)
    return (1 - s2s**2) + (1 - s2p**2)


def fit_1s():
    """Same machinery on the 1s shell, checked against the published table."""

    def cross_1s(exps):
        moments = slater_gaussian_moments(exps, 2)
        pref = np.sqrt(4 * np.pi) * (2 * exps / np.pi) ** 0.75
        return pref * 2.0 * moments[2]

    def best_1s(exps):
        s = cross_1s(exps)
        m = gaussian_overlap_matrix(exps, 0)
        c = np.linalg.solve(m, s)
        return float(np.sqrt(s @ c)), c / np.sqrt(s @ c)

    x0 = np.log(np.geomspace(25.0, 0.06, 6))
    res = minimize(lambda x: 1 - best_1s(np.exp(x))[0] ** 2, x0,
                   method="Nelder-Mead",
                   options=dict(maxiter=40000, maxfev=40000, xatol=1e-12, fatol=1e-16))
    exps = np.sort(np.exp(res.x))[::-1]
    s1, c1 = best_1s(exps)
    print("\n1s cross-check, overlap", s1)
    print("exps =", repr(exps))
    print("coef =", repr(c1))
    published = np.array([23.1030320, 4.2359157, 1.1850565, 0.4070989, 0.1580884, 0.0651095])
    print("ratio fitted/published:", exps / published)


def main():
    x0 = np.log(np.geomspace(30.0, 0.05, 6))
    res = minimize(objective, x0, method="Nelder-Mead",
                   options=dict(maxiter=40000, maxfev=40000, xatol=1e-12, fatol=1e-16))
    res = minimize(objective, res.x, method="Nelder-Mead",
                   options=dict(maxiter=40000, maxfev=40000, xatol=1e-13, fatol=1e-17))
    exps = np.exp(res.x)
    order = np.argsort(-exps)
    exps = exps[order]
    s2s, c2s = best_overlap(exps, 0)
    s2p, c2p = best_overlap(exps, 1)
    print("final objective", res.fun)
    print("overlap 2s", s2s)
    print("overlap 2p", s2p)
    with np.printoptions(precision=10, suppress=False):
        print("exps =", repr(exps))
        print("c2s  =", repr(c2s))
        print("c2p  =", repr(c2p))
    fit_1s()


if __name__ == "__main__":
    main()
