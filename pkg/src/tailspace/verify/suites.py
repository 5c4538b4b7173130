"""Fixed-instance suites: closed-form values, equality cases, constructions."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import constructions, core
from ..core import CubeFunction
from . import checks
from .kappa import conjugate, kappa, kappa_lower_bounds
from .report import DiscreteRV, equality_report, report

DUALITY_GRID = (1.1, 1.2, 1.25, 1.5, 1.75, 2.5, 3.0, 4.0, 5.0, 8.0)


def kappa_suite(tol=1e-9):
    out = [
        equality_report("kappa_value", {"p": 4}, kappa(4), 2 * math.sqrt(2), tol),
        equality_report("kappa_value", {"p": 6}, kappa(6), 2.0, tol),
        equality_report("kappa_value", {"p": 4 / 3}, kappa(4 / 3), 2 * math.sqrt(2), tol),
        equality_report("kappa_value", {"p": 1.2}, kappa(1.2), 2.0, tol),
    ]
    for p in DUALITY_GRID:
        out.append(report("kappa_duality", {"p": p}, abs(kappa(p) - kappa(conjugate(p))), 0.0, tol))
        lo1, lo2 = kappa_lower_bounds(p)
        out.append(report("kappa_lower_abs_s", {"p": p}, kappa(p), lo1, tol, relation="ge"))
        out.append(report("kappa_lower_sqrt", {"p": p}, kappa(p), lo2, tol, relation="ge"))
    return out


def extremal_suite(p_grid=(1.5, 3.0, 4.0, 6.0), C=1.0, tol=1e-8):
    out = []
    for p in p_grid:
        _, reps = checks.two_point_extremal(p, C=C, tol=tol)
        out.extend(reps)
    return out


def equality_suite():
    """Instances where the inequalities hold with equality."""
    out = []
    x1 = core.coordinate(4, 1)
    for t in (0.01, 0.5, 2.0):
        r = checks.check_heat_smoothing(x1, 2.0, t, tol=1e-12)
        out.append(equality_report("heat_equality_dictator", {"t": t}, r.lhs, r.rhs, 1e-12))
    rng = np.random.default_rng(11)
    for _ in range(50):
        a, b = rng.normal(size=2)
        r = checks.check_stroock_varopoulos(a, b, 2.0)
        out.append(report("sv_equality_p2", {"a": a, "b": b}, abs(r.lhs - r.rhs), 0.0, 1e-12))
    for p in (1.5, 3.0, 4.0):
        P, mu = np.eye(5), np.full(5, 0.2)
        r = checks.check_weak_sv(P, mu, rng.normal(size=5), p)
        out.append(report("weak_sv_identity", {"p": p}, abs(r.lhs - r.rhs), 0.0, 1e-12))
    for p in (1.5, 3.0, 4.0):
        r = checks.check_half_moment_sum(DiscreteRV([1.0, -1.0], [0.5, 0.5]), p)
        out.append(equality_report("half_moment_sum_rademacher", {"p": p}, r.lhs, r.rhs, 1e-12))
    for k in (1, 2, 3):
        W = core.character(4, (1 << k) - 1)
        W = W.with_values(W.values, "pm1")
        r = checks.check_ternary_tail_contraction(W, k, 2.0, 0.7)
        out.append(equality_report("ternary_tail_eigen_p2", {"k": k}, r.lhs, r.rhs, 1e-12))
    return out


def harper_suite():
    out = [checks.check_harper(CubeFunction([1.0, 0.0], "01"))]
    point = np.zeros(16)
    point[0] = 1.0
    out.append(checks.check_harper(CubeFunction(point, "01")))
    for m in (2, 3, 4):
        rec = constructions.harper_witness(m, seed=0)
        out.append(checks.check_harper(rec.function))
    return out


def matched_tribes(n):
    """Plain tribes with ``b r = n`` and ``|E f|`` least."""
    best = None
    for r in range(1, n + 1):
        if n % r:
            continue
        f = constructions.tribes(n // r, r)
        score = abs(f.exact_mean())
        if best is None or score < best[0]:
            best = (score, n // r, r, f)
    return best[1], best[2], best[3]


def kkl_comparison(r=3):
    """KKL ratios of the coding tribes (OR of ALLEQ blocks, ``b`` chosen to
    centre the mean) against plain tribes on the same number of bits."""
    p1 = Fraction(1, 2**r)
    b = constructions.choose_b(p1, r, mode="closest")
    coding = constructions.or_compose(constructions.alleq(r), b).function
    tb, tr, plain = matched_tribes(coding.n)
    rc = checks.check_kkl_ratio(coding)
    rp = checks.check_kkl_ratio(plain)
    ratio = rc.details["ratio"] / rp.details["ratio"]
    within = report(
        "kkl_within_4x",
        {"n": coding.n, "coding_b": b, "coding_r": r + 1, "tribes_b": tb, "tribes_r": tr},
        max(ratio, 1 / ratio),
        4.0,
        0.0,
        details={"coding_ratio": rc.details["ratio"], "tribes_ratio": rp.details["ratio"]},
    )
    return [rc, rp, within]


SUITES = {
    "kappa": kappa_suite,
    "extremal": extremal_suite,
    "equality": equality_suite,
    "harper": harper_suite,
    "kkl": kkl_comparison,
}
