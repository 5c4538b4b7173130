"""One function per inequality: compute both sides, return a CheckReport.

Functions on the cube are :class:`CubeFunction` objects and use the
number operator (Poincare constant 1).  Functions on a general finite
space are plain arrays paired with a :class:`MarkovGenerator`.
"""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .. import core, markov
from .._validation import check_exponent
from ..core import CubeFunction
from .kappa import kappa, kappa_solve
from .report import DiscreteRV, equality_report, report

SWEEP_TOL = 1e-10
POINTWISE_TOL = 1e-12
SOLVER_TOL = 1e-8
MEAN_TOL = 1e-12


def phi(x, s):
    """Signed power ``sign(x) |x|^s``."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.abs(x) ** s


class _Setting:
    """Values, measure and the two operators for one check."""

    def __init__(self, f, L=None):
        if L is None:
            if not isinstance(f, CubeFunction):
                raise TypeError("pass a CubeFunction, or values together with a MarkovGenerator")
            self.values = f.values
            self.mu = None
            self.C = 1.0
            self.heat = lambda g, t: core.heat(CubeFunction(g), t).values
            self.gen = lambda g: core.laplacian(CubeFunction(g)).values
            self.n = f.n
        else:
            vals = f.values if isinstance(f, CubeFunction) else f
            self.values = L._check_state_function(vals)
            self.mu = L.mu
            self.C = markov.poincare_constant(L)
            self.heat = lambda g, t: markov.semigroup_apply(L, t, g)
            self.gen = L.apply
            self.n = None

    def E(self, g):
        g = np.asarray(g, dtype=np.float64)
        return float(g.mean()) if self.mu is None else float(np.dot(self.mu, g))

    def norm(self, g, p):
        return core.lp_norm_values(g, p, self.mu)

    def require_mean_zero(self):
        m = self.E(self.values)
        if abs(m) > MEAN_TOL * max(1.0, float(np.abs(self.values).max())):
            raise ValueError(f"function must have mean zero, has mean {m:.3e}")


def heat_exponent(p, C=1.0, mode="base"):
    """Decay rate ``r`` in ``||P_t f||_p <= exp(-r t) ||f||_p``."""
    p = check_exponent(p, allow_inf=False)
    if not p > 1:
        raise ValueError("p must exceed 1")
    if mode == "base":
        return (2 * p - 2) / ((p * p - 2 * p + 2) * C)
    if mode == "kappa":
        if p == 2:
            return 1.0 / C
        return (4 * p - 4) / (C * p * p * (1 + kappa(p) ** -2))
    raise ValueError(f"unknown mode {mode!r}")


def check_heat_smoothing(f, p, t, L=None, mode="base", tol=SWEEP_TOL):
    st = _Setting(f, L)
    st.require_mean_zero()
    rate = heat_exponent(p, st.C, mode)
    lhs = st.norm(st.heat(st.values, t), p)
    rhs = math.exp(-rate * t) * st.norm(st.values, p)
    return report("heat_smoothing", {"p": p, "t": t, "C": st.C, "mode": mode, "n": st.n}, lhs, rhs, tol,
                  details={"rate": rate})


def check_lp_poincare(f, p, L=None, tol=SWEEP_TOL):
    """``E phi_{p-1}(f) L f >= (2p-2)/((p^2-2p+2) C) E |f|^p``."""
    st = _Setting(f, L)
    st.require_mean_zero()
    v = st.values
    lhs = st.E(phi(v, p - 1) * st.gen(v))
    rhs = heat_exponent(p, st.C, "base") * st.E(np.abs(v) ** p)
    return report("lp_poincare", {"p": p, "C": st.C, "n": st.n}, lhs, rhs, tol, relation="ge")


def check_phi_dirichlet(f, p, L=None, tol=SWEEP_TOL):
    """``E phi_{p/2}(f) L phi_{p/2}(f) >= C^-1 / (1 + kappa^-2) E |f|^p``."""
    st = _Setting(f, L)
    st.require_mean_zero()
    v = st.values
    h = phi(v, p / 2)
    lhs = st.E(h * st.gen(h))
    k2 = 0.0 if p == 2 else kappa(p) ** -2
    rhs = st.E(np.abs(v) ** p) / (st.C * (1 + k2))
    return report("phi_dirichlet", {"p": p, "C": st.C, "n": st.n}, lhs, rhs, tol, relation="ge")


def check_ternary_tail_contraction(f: CubeFunction, k, p, t, tol=SWEEP_TOL):
    """``||P_t f||_p <= exp(-2 t k min((p-1)/p, 1/p)) ||f||_p`` for ``{-1,0,1}``-valued tail ``f``."""
    if f.kind not in ("pm01", "pm1", "01") or not np.all(np.isin(f.values, (-1.0, 0.0, 1.0))):
        raise ValueError("f must take values in {-1, 0, 1}")
    if k < 1:
        raise ValueError("k must be at least 1")
    cert = core.tail_certificate(f, k - 1, include_constant=True)
    if not cert.member:
        raise ValueError(f"f has a nonzero coefficient of degree < {k} (at {cert.worst_subset})")
    lhs = core.lp_norm(core.heat(f, t), p)
    rate = 2 * k * min((p - 1) / p, 1 / p)
    rhs = math.exp(-rate * t) * core.lp_norm(f, p)
    return report("ternary_tail_contraction", {"p": p, "t": t, "k": k, "n": f.n}, lhs, rhs, tol)


def _halves(X: DiscreteRV, p):
    if abs(X.expect()) > MEAN_TOL * max(1.0, float(np.abs(X.values).max())):
        raise ValueError(f"X must have mean zero, has mean {X.expect():.3e}")
    return X.pos_moment(p / 2), X.neg_moment(p / 2)


def check_half_moment_sum(X: DiscreteRV, p, tol=SWEEP_TOL):
    if p == 2 or not p > 1:
        raise ValueError("need p in (1, inf) without 2")
    a, b = _halves(X, p)
    if a == 0 or b == 0:
        raise ValueError("X must not vanish almost surely")
    e1, e2 = -2 / (p - 2), (2 * p - 2) / (p - 2)
    lhs = a * a + b * b + a**e1 * b**e2 + b**e1 * a**e2
    return report("half_moment_sum", {"p": p}, lhs, X.abs_moment(p), tol)


def check_two_point_power(a, b, p, tol=POINTWISE_TOL):
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    if p == 2 or not p > 1:
        raise ValueError("need p in (1, inf) without 2")
    e1, e2 = 2 / (2 - p), (2 * p - 2) / (p - 2)
    coef = (p * p - 4 * p + 4) / (2 * p * p - 4 * p + 4)
    rhs = coef * (a * a + b * b + a**e1 * b**e2 + b**e1 * a**e2)
    return report("two_point_power", {"a": a, "b": b, "p": p}, (a - b) ** 2, rhs, tol)


def check_half_moment_gap(X: DiscreteRV, p, tol=SWEEP_TOL):
    a, b = _halves(X, p)
    rhs = (1 - p * p / (2 * (p * p - 2 * p + 2))) * X.abs_moment(p)
    return report("half_moment_gap", {"p": p}, (a - b) ** 2, rhs, tol)


def check_stroock_varopoulos(a, b, p, tol=POINTWISE_TOL):
    lhs = float((phi(a, p - 1) - phi(b, p - 1)) * (a - b))
    rhs = float(4 * (p - 1) / p**2 * (phi(a, p / 2) - phi(b, p / 2)) ** 2)
    return report("stroock_varopoulos", {"a": a, "b": b, "p": p}, lhs, rhs, tol, relation="ge")


def check_weak_sv(P, mu, f, p, tol=SWEEP_TOL):
    """``(p-2)^2 E|f|^p + 4(p-1) E phi_{p/2}(f) P phi_{p/2}(f) >= p^2 E phi_{p-1}(f) P f``."""
    P, mu = markov.check_markov_operator(P, mu)
    f = np.asarray(f, dtype=np.float64)
    h = phi(f, p / 2)
    lhs = (p - 2) ** 2 * np.dot(mu, np.abs(f) ** p) + 4 * (p - 1) * np.dot(mu, h * (P @ h))
    rhs = p * p * np.dot(mu, phi(f, p - 1) * (P @ f))
    return report("weak_sv", {"p": p, "size": mu.size}, lhs, rhs, tol, relation="ge")


def check_semigroup_increment(L: markov.MarkovGenerator, eps, t, tol=POINTWISE_TOL):
    """``||P_{eps+t} - P_eps||`` on ``L^2(mu)`` against ``2t/eps``.

    The norm is read off the spectrum; the dense route through the
    symmetrised matrix is kept in ``details`` as a cross-check.
    """
    if not (eps > 0 and t > 0):
        raise ValueError("eps and t must be positive")
    lam = L.eigenvalues
    lhs = float(np.max(np.abs(np.exp(-(eps + t) * lam) - np.exp(-eps * lam))))
    s = np.sqrt(L.mu)
    D = L.semigroup(eps + t) - L.semigroup(eps)
    dense = float(np.linalg.norm(s[:, None] * D / s[None, :], 2))
    return report("semigroup_increment", {"eps": eps, "t": t, "size": L.size}, lhs, 2 * t / eps, tol,
                  details={"dense_norm": dense})


def contraction_gap(P, mu) -> float:
    """Largest ``eps`` with ``||P g||_2^2 <= (1 - eps) ||g||_2^2`` for mean-zero ``g``."""
    P, mu = markov.check_markov_operator(P, mu)
    s = np.sqrt(mu)
    A = s[:, None] * P / s[None, :]
    top = np.linalg.norm(A - np.outer(s, s), 2)
    return float(max(0.0, 1.0 - top**2))


def nazarov_constant(p, eps):
    return 2.0 if p >= 2 else 1.0 / (2 ** (1 / (p - 1)) - 2 * eps)


def extension_norms(P, mu, eps, c):
    """Norms of ``T f = (c P f, f - E f)`` into ``L^r`` of ``mu ++ c^2 eps mu``."""
    N = mu.size
    K = np.vstack([c * P, np.eye(N) - np.tile(mu, (N, 1))])
    mu_t = np.concatenate([mu, c * c * eps * mu])
    one = float(np.max((mu_t[:, None] * np.abs(K)).sum(axis=0) / mu))
    inf = float(np.max(np.abs(K).sum(axis=1)))
    two = float(np.linalg.norm(np.sqrt(mu_t)[:, None] * K / np.sqrt(mu)[None, :], 2))
    return {"one": one, "inf": inf, "two": two}


def check_nazarov(P, mu, g, p, eps=None, with_extension=True, tol=SWEEP_TOL):
    P, mu = markov.check_markov_operator(P, mu)
    g = np.asarray(g, dtype=np.float64)
    if abs(np.dot(mu, g)) > MEAN_TOL * max(1.0, float(np.abs(g).max())):
        raise ValueError("g must have mean zero")
    if eps is None:
        eps = contraction_gap(P, mu)
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    pstar = max(p, p / (p - 1))
    lhs = core.lp_norm_values(P @ g, p, mu)
    rhs = (1 - 2 ** (2 - pstar) * eps) ** (1 / pstar) * core.lp_norm_values(g, p, mu)
    details = {"eps": eps, "p_star": pstar}
    if with_extension:
        c = nazarov_constant(p, eps)
        norms = extension_norms(P, mu, eps, c)
        bounds = {"one": c + 2 * c * c * eps, "inf": max(c, 2.0), "two": c}
        details.update({"c": c, "norms": norms, "bounds": bounds,
                        "extension_ok": all(norms[k] <= bounds[k] * (1 + 1e-12) + 1e-12 for k in norms)})
    rep = report("nazarov", {"p": p, "size": mu.size}, lhs, rhs, tol, details=details)
    if with_extension and not details["extension_ok"]:
        return replace(rep, passed=False)
    return rep


def _talagrand_sums(f: CubeFunction, k):
    q = 1 + math.exp(-2 / k)
    first = second = 0.0
    for i in range(1, f.n + 1):
        d = core.discrete_derivative(f, i).values
        two = core.lp_norm_values(d, 2)
        if two == 0:
            continue
        e2 = two * two
        first += e2 / max(1.0, math.log(two / core.lp_norm_values(d, q)))
        second += e2 / (k + math.log(two / core.lp_norm_values(d, 1)))
    return 3 / k * first, 8 * second


def check_talagrand_tail(f: CubeFunction, k, tol=SWEEP_TOL):
    """The two links of the tail-space Talagrand chain, as two reports."""
    if k < 1:
        raise ValueError("k must be at least 1")
    cert = core.tail_certificate(f, k - 1, include_constant=True)
    if not cert.passes(1e-10):
        raise ValueError(f"f has a nonzero coefficient of degree < {k}")
    if not np.any(f.values):
        raise ValueError("f must not vanish identically")
    mid, right = _talagrand_sums(f, k)
    params = {"k": k, "n": f.n}
    lhs = float(np.mean(f.values**2))
    return (
        report("talagrand_first", params, lhs, mid, tol),
        report("talagrand_second", params, mid, right, tol),
    )


def check_hypercontractivity(f: CubeFunction, t, tol=SWEEP_TOL):
    q = 1 + math.exp(-2 * t)
    lhs = core.lp_norm(core.heat(f, t), 2)
    return report("hypercontractivity", {"t": t, "n": f.n}, lhs, core.lp_norm(f, q), tol, details={"q": q})


def check_beckner(f: CubeFunction, p, tol=SWEEP_TOL):
    """``(2 - p) E f L f >= E f^2 - (E|f|^p)^(2/p)`` for ``1 <= p <= 2``."""
    if not 1 <= p <= 2:
        raise ValueError("Beckner's inequality needs p in [1, 2]")
    v = f.values
    lhs = (2 - p) * float(np.mean(v * core.laplacian(f).values))
    rhs = float(np.mean(v * v)) - core.lp_norm(f, p) ** 2
    return report("beckner", {"p": p, "n": f.n}, lhs, rhs, tol, relation="ge")


def two_point_extremal(p, C=1.0, tol=SOLVER_TOL):
    """Two-point variable and generator attaining the constants with ``kappa(p)``.

    Returns ``(X, [moment_report, generator_report])``.
    """
    res = kappa_solve(p)
    kap, v = res.value, res.u
    alpha = 1 / (1 + v ** (4 / (p - 2)))
    beta = 1 - alpha
    X = DiscreteRV([beta, -alpha], [alpha, beta])
    a, b = X.pos_moment(p / 2), X.neg_moment(p / 2)
    details = {"kappa": kap, "v": v, "alpha": alpha, "beta": beta}
    moment = equality_report("extremal_moment", {"p": p}, (kap**2 + 1) * (a - b) ** 2, X.abs_moment(p), tol, details)

    L = markov.extremal_generator(alpha, beta, C)
    f = np.array(L.space.labels, dtype=np.float64)
    h = phi(f, p / 2)
    lhs = markov.dirichlet_form(L, h, h)
    rhs = L.space.expect(np.abs(f) ** p) / (C * (1 + kap**-2))
    gen = equality_report("extremal_generator", {"p": p, "C": C}, lhs, rhs, tol, details)
    return X, [moment, gen]


def check_harper(f: CubeFunction, tol=POINTWISE_TOL):
    """``sum_i P[f(x) != f(x^i)] >= (2/ln 2) E f ln(1/E f)`` for ``{0,1}``-valued ``f``."""
    if f.kind != "01":
        raise ValueError("Harper's inequality needs a {0,1}-valued function")
    total = float(sum(core.pivotal_profile(f)))
    Ef = float(f.exact_mean())
    if Ef in (0.0, 1.0):
        return report("harper", {"n": f.n}, total, 0.0, tol, relation="ge", details={"degenerate": True})
    rhs = 2 / math.log(2) * Ef * math.log(1 / Ef)
    return report("harper", {"n": f.n}, total, rhs, tol, relation="ge",
                  details={"degenerate": False, "ratio": total / rhs})


def check_kkl_ratio(f: CubeFunction):
    """Informational: ``max_i P[f(x) != f(x^i)] / (Var f ln n / n)``; always passes."""
    if f.kind != "pm1" or f.n < 2:
        raise ValueError("need a +-1 valued function on at least 2 bits")
    var = float(np.var(f.values))
    if var == 0:
        raise ValueError("f is constant")
    worst = float(max(core.pivotal_profile(f)))
    base = var * math.log(f.n) / f.n
    return report("kkl_ratio", {"n": f.n}, worst, base, math.inf, relation="ge",
                  details={"ratio": worst / base, "variance": var})


def estimate_decay_exponent(functions, p, k, t_grid=(0.05, 0.1, 0.25, 0.5, 1.0)):
    """Largest ``c`` with ``||P_t f||_p <= exp(-t k c) ||f||_p`` over the family.

    Empirical only: a finite family and grid cannot prove the rate.
    """
    functions = list(functions)
    if not functions:
        raise ValueError("empty family")
    best = math.inf
    for f in functions:
        base = core.lp_norm(f, p)
        for t in t_grid:
            ratio = core.lp_norm(core.heat(f, t), p) / base
            best = min(best, -math.log(ratio) / (t * k))
    return best
