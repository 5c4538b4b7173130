"""The constant ``kappa(p) = inf_{u>1} (u^s + u^-s) / (u - 1/u)``, ``s = p/(p-2)``.

With ``u = e^y`` the objective is ``cosh(s y) / sinh(y)``, which blows up
at both ends of ``(0, inf)`` because ``|s| > 1``.  We minimise its log on
``y`` by golden-section search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.optimize import brentq

INV_PHI = (math.sqrt(5) - 1) / 2
TOL = 1e-10


class KappaSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class KappaResult:
    value: float
    u: float
    bracket: tuple
    iterations: int


def _log_objective(y, s):
    a = abs(s * y)
    log_cosh = a + math.log1p(math.exp(-2 * a)) - math.log(2)
    log_sinh = y + math.log1p(-math.exp(-2 * y)) - math.log(2)
    return log_cosh - log_sinh


def _exponent(p):
    p = float(p)
    if not p > 1 or math.isinf(p):
        raise ValueError(f"kappa needs 1 < p < inf, got {p}")
    if p == 2:
        raise ValueError("kappa is undefined at p = 2 (it tends to infinity)")
    return p / (p - 2)


@lru_cache(maxsize=256)
def kappa_solve(p: float, tol: float = 1e-13, max_iter: int = 500) -> KappaResult:
    s = _exponent(p)
    obj = lambda y: _log_objective(y, s)  # noqa: E731

    # expand a bracket lo < mid < hi with obj(mid) below both ends
    lo, mid, hi = 1e-8, 0.5, 1.0
    while obj(hi) <= obj(mid):
        mid, hi = hi, 2 * hi
        if hi > 1e6:
            raise KappaSolverError(f"no bracket for p={p}: objective still falling at y={hi}")
    while obj(mid) >= obj(lo):
        mid /= 2
        if mid < lo:
            raise KappaSolverError(f"no bracket for p={p}: objective rising at y={mid}")
    bracket = (lo, hi)

    a, b = lo, hi
    c, d = b - INV_PHI * (b - a), a + INV_PHI * (b - a)
    fc, fd = obj(c), obj(d)
    it = 0
    while b - a > tol * max(1.0, abs(c)) and it < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = obj(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = obj(d)
        it += 1
    if it >= max_iter:
        raise KappaSolverError(f"golden section did not converge for p={p}, bracket {bracket}")
    y = (a + b) / 2
    # the minimum is flat, so polish the minimiser on the stationarity
    # condition s tanh(s y) = coth(y) instead
    slope = lambda z: s * math.tanh(s * z) - 1 / math.tanh(z)  # noqa: E731
    if slope(lo) < 0 < slope(hi):
        y = brentq(slope, lo, hi, xtol=1e-15)
    return KappaResult(min(math.exp(obj(y)), math.exp(obj((a + b) / 2))), math.exp(y), bracket, it)


def kappa(p: float) -> float:
    return kappa_solve(p).value


def kappa_lower_bounds(p: float) -> tuple[float, float]:
    """``|p/(p-2)|`` and ``sqrt((p^2+4p-4)/(p^2-4p+4))``."""
    s = abs(_exponent(p))
    return s, math.sqrt((p * p + 4 * p - 4) / (p * p - 4 * p + 4))


def conjugate(p: float) -> float:
    return p / (p - 1)
