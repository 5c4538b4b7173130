"""Seeded sweeps of the checks over random instances.

Instance ``i`` of a sweep draws from ``default_rng([seed, i])``, so the
reports depend on the seed and the instance count only.  ``workers``
splits the index range across processes; the merged list is in index
order either way.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .. import codes, core, markov
from ..core import CubeFunction
from . import checks
from .report import DiscreteRV

P_GRID = (1.1, 1.5, 2.0, 3.0, 4.0, 6.0)
T_GRID = (0.01, 0.1, 0.5, 1.0, 2.0)


def instance_rng(seed, index):
    return np.random.default_rng([int(seed), int(index)])


def _run_chunk(task, seed, indices):
    out = []
    for i in indices:
        out.extend(task(i, instance_rng(seed, i)))
    return out


def run_indexed(task, count, seed, workers=1):
    """Concatenate ``task(i, rng_i)`` over ``i < count`` in index order."""
    if workers <= 1 or count < 2:
        return _run_chunk(task, seed, range(count))
    chunks = [range(lo, min(count, lo + math.ceil(count / workers))) for lo in range(0, count, math.ceil(count / workers))]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(partial(_run_chunk, task, seed), chunks)
        return [r for part in parts for r in part]


def summarize(reports) -> dict:
    out = {}
    for r in reports:
        s = out.setdefault(r.check_id, {"count": 0, "failures": 0, "min_slack": math.inf})
        s["count"] += 1
        s["failures"] += int(not r.passed)
        s["min_slack"] = min(s["min_slack"], r.slack)
    return out


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)


# random instances ---------------------------------------------------------


def random_mean_zero(n, rng) -> CubeFunction:
    """One of three families: Gaussian values, centred Boolean values, or
    a spectrum concentrated on low degrees (where the bounds are tight)."""
    family = int(rng.integers(3))
    size = 1 << n
    if family == 0:
        v = rng.normal(size=size)
    elif family == 1:
        v = rng.choice([-1.0, 1.0], size=size)
    else:
        coeffs = rng.normal(size=size) * np.exp(-2.0 * core.popcounts(n))
        v = core.walsh_hadamard(coeffs)
    v = v - v.mean()
    if not np.any(np.abs(v) > 1e-12):
        v = core.coordinate(n, 1).values.copy()
    return CubeFunction(v)


def random_mean_zero_rv(rng, max_atoms=6) -> DiscreteRV:
    """Mean-zero variable with ``2..max_atoms`` atoms of both signs."""
    k = int(rng.integers(2, max_atoms + 1))
    probs = rng.dirichlet(np.ones(k))
    vals = rng.normal(size=k)
    vals -= np.dot(probs, vals)
    if not (np.any(vals > 0) and np.any(vals < 0)):
        vals = np.array([1.0, -1.0] + [0.0] * (k - 2))
        probs = np.full(k, 1.0 / k)
        probs[:2] = (1 - (k - 2) / k) / 2
    return DiscreteRV(vals, probs)


def random_tail_pm01(rng, max_bits=10) -> tuple[CubeFunction, int]:
    """``(f(x) - f(y)) / 2`` for a random code indicator ``f``; with the
    level ``k`` such that all coefficients of degree below ``k`` vanish."""
    from ..constructions import zero_mean_difference

    length = int(rng.integers(2, max_bits // 2 + 1))
    while True:
        C = codes._random_code(length, int(rng.integers(1, length + 1)), rng)
        w = codes.min_weight(codes.dual(C))
        if w != codes.INFINITE_WEIGHT and C.dim < length:
            break
    g = zero_mean_difference(codes.indicator(C))
    return g, int(w)


def random_tail_function(n, k, rng) -> CubeFunction:
    """Random real function with every coefficient of degree ``< k`` removed."""
    f = core.project_tail(CubeFunction(rng.normal(size=1 << n)), k - 1, include_constant=True)
    if not np.any(np.abs(f.values) > 1e-9):
        f = core.character(n, (1 << n) - 1)
    return f


# tasks (module level so that they pickle) --------------------------------


def _heat_task(i, rng, n_max, p_grid, t_grid, modes):
    f = random_mean_zero(int(rng.integers(1, n_max + 1)), rng)
    return [checks.check_heat_smoothing(f, p, t, mode=m) for m in modes for p in p_grid for t in t_grid]


def _markov_heat_task(i, rng, max_states, p_grid, t_grid, modes):
    L = markov.random_generator(int(rng.integers(2, max_states + 1)), rng)
    f = rng.normal(size=L.size)
    f -= L.space.expect(f)
    return [checks.check_heat_smoothing(f, p, t, L=L, mode=m) for m in modes for p in p_grid for t in t_grid]


def _poincare_task(i, rng, n_max, p_grid):
    f = random_mean_zero(int(rng.integers(1, n_max + 1)), rng)
    out = [checks.check_lp_poincare(f, p) for p in p_grid]
    out += [checks.check_phi_dirichlet(f, p) for p in p_grid]
    L = markov.random_generator(int(rng.integers(2, 8)), rng)
    g = rng.normal(size=L.size)
    g -= L.space.expect(g)
    out += [checks.check_lp_poincare(g, p, L=L) for p in p_grid]
    out += [checks.check_phi_dirichlet(g, p, L=L) for p in p_grid]
    return out


def _scalar_task(i, rng, p_grid):
    out = []
    X = random_mean_zero_rv(rng)
    X = X.scaled(1.0 / max(1e-300, float(np.abs(X.values).max())))
    for p in p_grid:
        out.append(checks.check_half_moment_sum(X, p))
        out.append(checks.check_half_moment_gap(X, p))
        a, b = np.exp(rng.uniform(-2, 2, size=2))
        out.append(checks.check_two_point_power(a, b, p))
        a, b = rng.uniform(-2, 2, size=2)
        out.append(checks.check_stroock_varopoulos(a, b, p))
    P, mu = markov.random_markov_operator(int(rng.integers(2, 8)), rng)
    f = rng.normal(size=mu.size)
    out += [checks.check_weak_sv(P, mu, f, p) for p in p_grid]
    L = markov.random_generator(int(rng.integers(2, 7)), rng)
    eps, t = np.exp(rng.uniform(-3, 1, size=2))
    out.append(checks.check_semigroup_increment(L, eps, t))
    return out


def _ternary_tail_task(i, rng, p_grid, t_grid):
    g, k = random_tail_pm01(rng)
    return [checks.check_ternary_tail_contraction(g, k, p, t) for p in p_grid for t in t_grid]


def _nazarov_task(i, rng, max_states, p_grid):
    P, mu = markov.random_markov_operator(int(rng.integers(2, max_states + 1)), rng)
    g = rng.normal(size=mu.size)
    g -= np.dot(mu, g)
    return [checks.check_nazarov(P, mu, g, p) for p in p_grid]


def _talagrand_task(i, rng, n_max, k_max):
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(1, min(k_max, n) + 1))
    f = random_tail_function(n, k, rng)
    out = list(checks.check_talagrand_tail(f, k))
    out.append(checks.check_hypercontractivity(f, float(rng.uniform(0.01, 2.0))))
    return out


def _beckner_task(i, rng, n_max):
    f = CubeFunction(rng.normal(size=1 << int(rng.integers(1, n_max + 1))))
    return [checks.check_beckner(f, p) for p in (1.0, 1.25, 1.5, 1.75, 2.0)]


# public sweeps ------------------------------------------------------------


def sweep_heat(trials=1000, n_max=6, p_grid=P_GRID, t_grid=T_GRID, seed=0, modes=("base", "kappa"), workers=1):
    task = partial(_heat_task, n_max=n_max, p_grid=tuple(p_grid), t_grid=tuple(t_grid), modes=tuple(modes))
    return run_indexed(task, trials, seed, workers)


def sweep_markov_heat(trials=200, max_states=8, p_grid=P_GRID, t_grid=T_GRID, seed=0, modes=("base", "kappa"), workers=1):
    task = partial(_markov_heat_task, max_states=max_states, p_grid=tuple(p_grid), t_grid=tuple(t_grid), modes=tuple(modes))
    return run_indexed(task, trials, seed, workers)


def sweep_poincare(trials=1000, n_max=6, p_grid=P_GRID, seed=0, workers=1):
    return run_indexed(partial(_poincare_task, n_max=n_max, p_grid=tuple(p_grid)), trials, seed, workers)


def sweep_scalar(trials=1000, p_grid=(1.2, 1.5, 3.0, 4.0, 6.0), seed=0, workers=1):
    return run_indexed(partial(_scalar_task, p_grid=tuple(p_grid)), trials, seed, workers)


def sweep_ternary_tail(trials=200, p_grid=P_GRID, t_grid=T_GRID, seed=0, workers=1):
    return run_indexed(partial(_ternary_tail_task, p_grid=tuple(p_grid), t_grid=tuple(t_grid)), trials, seed, workers)


def sweep_nazarov(trials=200, max_states=8, p_grid=(1.5, 2.0, 3.0, 5.0), seed=0, workers=1):
    return run_indexed(partial(_nazarov_task, max_states=max_states, p_grid=tuple(p_grid)), trials, seed, workers)


def sweep_talagrand(trials=500, n_max=8, k_max=3, seed=0, workers=1):
    return run_indexed(partial(_talagrand_task, n_max=n_max, k_max=k_max), trials, seed, workers)


def sweep_beckner(trials=500, n_max=6, seed=0, workers=1):
    return run_indexed(partial(_beckner_task, n_max=n_max), trials, seed, workers)


SWEEPS = {
    "heat-smoothing": sweep_heat,
    "markov-heat": sweep_markov_heat,
    "lp-poincare": sweep_poincare,
    "scalar-inequalities": sweep_scalar,
    "ternary-tail": sweep_ternary_tail,
    "nazarov": sweep_nazarov,
    "talagrand": sweep_talagrand,
    "beckner": sweep_beckner,
}
