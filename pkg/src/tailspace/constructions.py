"""Explicit Boolean functions in tail spaces.

All ``{-1,1}``-valued functions here read ``1`` as TRUE.  Blocks of a
composition sit on consecutive coordinates, first block on the low bits.
Claims are stored as exact rationals and compared exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import codes
from ._validation import CapacityError, MAX_N, check_dimension
from .core import CubeFunction, infer_kind, pivotal_profile, tail_level
from .dyadic import dyadic_exponent, to_str

RELATIONS = {"eq": lambda a, b: a == b, "le": lambda a, b: a <= b, "ge": lambda a, b: a >= b}


@dataclass(frozen=True)
class Claim:
    claim: str
    relation: str
    bound: Fraction
    achieved: Fraction

    @property
    def holds(self) -> bool:
        return RELATIONS[self.relation](self.achieved, self.bound)

    def to_json(self):
        return {
            "claim": self.claim,
            "relation": self.relation,
            "bound": to_str(self.bound),
            "achieved": to_str(self.achieved),
            "holds": self.holds,
        }


@dataclass
class ConstructionRecord:
    function: CubeFunction
    params: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)
    report: dict = field(default_factory=dict)

    def claim(self, name, relation, bound, achieved):
        self.claims.append(Claim(name, relation, Fraction(bound), Fraction(achieved)))

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.claims)

    def __getitem__(self, name) -> Claim:
        for c in self.claims:
            if c.claim == name:
                return c
        raise KeyError(name)


def _check_capacity(bits):
    if bits > MAX_N:
        raise CapacityError(f"construction needs {bits} bits, limit is {MAX_N}")


def prob_true(g: CubeFunction) -> Fraction:
    """``P[g = 1]`` for a Boolean function, exactly."""
    if not g.is_boolean:
        raise ValueError("need a Boolean function")
    return Fraction(int(np.count_nonzero(g.values == 1)), g.size)


def and_function(r: int) -> CubeFunction:
    check_dimension(r)
    vals = np.full(1 << r, -1.0)
    vals[0] = 1.0
    return CubeFunction(vals, kind="pm1")


def alleq(r: int) -> CubeFunction:
    """1 exactly when all ``r + 1`` inputs agree."""
    return codes.indicator(codes.repetition_code(r + 1))


_COMBINERS = {
    "pm1": {
        "or": lambda v: v.max(axis=0),
        "and": lambda v: v.min(axis=0),
        "xor": lambda v: v.prod(axis=0),
        "first": lambda v: v[0],
    },
    "01": {
        "or": lambda v: v.max(axis=0),
        "and": lambda v: v.min(axis=0),
        "xor": lambda v: v.sum(axis=0) % 2,
        "first": lambda v: v[0],
    },
}


def block_compose(F, gs) -> CubeFunction:
    """``F(g_1(x^1), ..., g_b(x^b))`` on disjoint consecutive blocks.

    ``F`` is one of ``"or"``, ``"and"``, ``"xor"``, ``"first"`` or a
    callable mapping the stacked block values (shape ``(b, N)``) to ``N``
    output values.
    """
    gs = list(gs)
    if not gs:
        raise ValueError("need at least one block")
    kinds = {g.kind for g in gs}
    if len(kinds) != 1 or kinds <= {"real"}:
        raise ValueError(f"blocks must share one Boolean convention, got {sorted(kinds)}")
    kind = kinds.pop()
    total = sum(g.n for g in gs)
    _check_capacity(total)
    idx = np.arange(1 << total)
    stacked = np.empty((len(gs), idx.size))
    off = 0
    for row, g in enumerate(gs):
        stacked[row] = g.values[(idx >> off) & (g.size - 1)]
        off += g.n
    if isinstance(F, str):
        if kind not in _COMBINERS or F not in _COMBINERS[kind]:
            raise ValueError(f"combiner {F!r} is not defined for kind {kind!r}")
        out = _COMBINERS[kind][F](stacked)
    else:
        out = np.asarray(F(stacked), dtype=np.float64)
    return CubeFunction(out, kind=infer_kind(out))


def or_compose(g: CubeFunction, b: int) -> ConstructionRecord:
    """OR of ``b`` copies of ``g`` on disjoint blocks, with its exact claims."""
    if g.kind != "pm1":
        raise ValueError("or_compose needs a +-1 valued block function")
    if b < 1:
        raise ValueError("b must be positive")
    _check_capacity(b * g.n)
    f = block_compose("or", [g] * b)
    p1 = prob_true(g)
    rec = ConstructionRecord(f, {"b": b, "r": g.n, "n": f.n})
    rec.claim("mean_formula", "eq", 2 * (1 - (1 - p1) ** b) - 1, f.exact_mean())
    rec.claim("max_pivotal", "le", 2 * p1, max(pivotal_profile(f)))
    rec.report["p_block_true"] = to_str(p1)
    return rec


def tribes(b: int, r: int) -> CubeFunction:
    return or_compose(and_function(r), b).function


def or_mean(p1: Fraction, b: int) -> Fraction:
    return 2 * (1 - (1 - Fraction(p1)) ** b) - 1


def choose_b(p1, m: int | None = None, mode: str = "nonpositive", max_b: int = 4096) -> int:
    """Number of OR blocks for block probability ``p1``.

    ``"nonpositive"``: largest ``b`` whose OR still has mean ``<= 0``.
    ``"closest"``: the ``b`` with ``|E f|`` least, ties to the smaller.
    """
    p1 = Fraction(p1)
    if not 0 < p1 <= 1:
        raise ValueError("p1 must lie in (0, 1]")
    if m is not None and p1 > Fraction(1, 2**m):
        raise ValueError(f"p1 = {p1} exceeds 2^-{m}")
    if mode not in ("nonpositive", "closest"):
        raise ValueError(f"unknown mode {mode!r}")
    # the OR mean increases with b, so scan until it turns positive
    b = 1
    while b < max_b and or_mean(p1, b + 1) <= 0:
        b += 1
    if mode == "nonpositive" or or_mean(p1, b) > 0:
        return b
    return b if abs(or_mean(p1, b)) <= abs(or_mean(p1, b + 1)) else b + 1


def zero_mean_difference(f: CubeFunction) -> CubeFunction:
    """``(f(x) - f(y)) / 2`` with ``x`` on the low bits."""
    if f.kind != "pm1":
        raise ValueError("need a +-1 valued function")
    _check_capacity(2 * f.n)
    vals = (f.values[None, :] - f.values[:, None]) / 2.0
    return CubeFunction(vals.ravel(), kind="pm01")


def mean_adjust(n_target: int, t: int, code: codes.LinearCode, seed: int = 0) -> CubeFunction:
    """``{0,1}``-valued ``h`` with ``E h = t / 2**n_target`` in ``L_+^{>n_target}``.

    ``h`` is a sum of ``t * 2**d`` indicators of pairwise disjoint cosets
    of ``code``, where ``P[code] = 2**-(n_target + d)``.  The cosets are
    a seeded random choice among all of them.
    """
    if not 0 <= t < 2**n_target:
        raise ValueError(f"t = {t} outside [0, 2^{n_target})")
    codim = code.length - code.dim
    d = codim - n_target
    if d < 0:
        raise ValueError(f"code has P = 2^-{codim}, need at most 2^-{n_target}")
    if not codes.macwilliams_tail(code, n_target):
        raise ValueError(f"base code indicator is not in the tail space above {n_target}")
    count = t << d
    reps = codes.coset_representatives(code)
    if count > len(reps):
        raise ValueError(f"need {count} disjoint cosets, only {len(reps)} exist")
    chosen = np.random.default_rng(seed).choice(len(reps), size=count, replace=False)
    words = code.codewords()
    vals = np.zeros(1 << code.length)
    for j in sorted(chosen):
        vals[words ^ reps[j]] = 1.0
    return CubeFunction(vals, kind="01", meta={"cosets": int(count), "d": int(d)})


def _mul_on_disjoint(a: CubeFunction, b: CubeFunction) -> np.ndarray:
    """``a(x) b(y)`` with ``x`` on the low bits."""
    return (b.values[:, None] * a.values[None, :]).ravel()


def balanced_coding_tribes(m: int = 3, seed: int = 0, k: int | None = None) -> ConstructionRecord:
    """Zero-mean ``+-1`` function ``G(x, y) = f(x) - 2 1_{g_0 = 1}(x) h(y)``.

    ``f = g_0 or g_1 or ... or g_b`` with ``P[g_i = 1] = 2^-m`` for
    ``i >= 1`` and ``P[g_0 = 1] = 4 * 2^-m``, every block in
    ``L_+^{>k}``; ``h`` corrects the mean so that ``E G = 0``.
    ``b`` is the largest count with ``0 <= E f <= 2^-m``; when no such
    ``b`` exists the least ``b`` with ``E f >= 0`` is used.
    """
    if m < 3:
        raise ValueError("m must be at least 3 so that P[g_0 = 1] < 1")
    k = m if k is None else k
    p, p0 = Fraction(1, 2**m), Fraction(4, 2**m)

    def mean_f(b):
        return 1 - 2 * (1 - p0) * (1 - p) ** b

    b = 0
    while mean_f(b) < 0:
        b += 1
    if mean_f(b) <= p:
        while mean_f(b + 1) <= p:
            b += 1
    Ef = mean_f(b)

    Eh = Ef / (2 * p0)
    n_h = max(dyadic_exponent(Eh), m, k)
    # Griesmer lengths bound the block widths from below before any search
    _check_capacity(
        codes.griesmer_bound(m - 2, k + 1) + b * codes.griesmer_bound(m, k + 1) + codes.griesmer_bound(n_h, n_h + 1)
    )
    g0_code = codes.tail_code(m - 2, k, seed)
    g_code = codes.tail_code(m, k, seed + 1)
    g0, g = codes.indicator(g0_code), codes.indicator(g_code)
    t = int(Eh * 2**n_h)
    h_code = codes.tail_code(n_h, n_h, seed + 2)
    total = g0.n + b * g.n + h_code.length
    _check_capacity(total)
    h = mean_adjust(n_h, t, h_code, seed + 3)

    f = block_compose("or", [g0] + [g] * b)
    g0_true = block_compose("first", [g0] + [g] * b)
    one_g0 = (g0_true.values + 1) / 2
    G_vals = np.tile(f.values, h.size) - 2 * _mul_on_disjoint(CubeFunction(one_g0), h)
    G = CubeFunction(G_vals, kind=infer_kind(G_vals))

    rec = ConstructionRecord(
        G,
        {"m": m, "k": k, "b": b, "n": G.n, "x_bits": f.n, "y_bits": h.n, "seed": seed,
         "codes": {"g0": g0_code.to_bitstrings(), "g": g_code.to_bitstrings(), "h": h_code.to_bitstrings()}},
    )
    rec.claim("mean_f", "eq", Ef, f.exact_mean())
    rec.claim("mean_f_upper", "le", p, f.exact_mean())
    rec.claim("mean_f_lower", "ge", 0, f.exact_mean())
    rec.claim("mean_h", "eq", Eh, h.exact_mean())
    rec.claim("mean_G", "eq", 0, G.exact_mean())
    rec.claim("pm1_valued", "eq", 1, int(G.kind == "pm1"))
    level = tail_level(G, include_constant=True)
    rec.claim("tail_level", "ge", k, level)
    piv = pivotal_profile(G)
    worst = max(piv)
    rec.claim("max_pivotal", "le", 8 * p, worst)
    rec.report.update(
        {
            "max_pivotal": float(worst),
            "achieved_constant": float(worst) * G.n / math.log(G.n),
            "tail_level": level,
        }
    )
    return rec


def harper_witness(m: int, delta: float = 0.5, seed: int = 0, code: codes.LinearCode | None = None) -> ConstructionRecord:
    """``{0,1}``-valued ``f = 1_{g = 1}`` with ``g`` the indicator of ``C^perp``.

    ``C`` is a good code of length ``ceil(gamma m)`` (searched for unless
    given), so ``f`` has small mean, tail level ``w(C) - 1`` and total
    influence within ``gamma m P[g = 1]``.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    gamma = max(4.0, 1.0 / delta)
    if code is None:
        mprime = math.ceil(gamma * m - 1e-12)
        _check_capacity(mprime)
        code = codes.good_code_search(mprime, delta, seed)
    else:
        mprime = code.length
    g = codes.indicator(codes.dual(code))
    f = CubeFunction((g.values + 1) / 2, kind="01")
    P = f.exact_mean()
    total = sum(pivotal_profile(f), Fraction(0))
    w = codes.min_weight(code)
    rec = ConstructionRecord(f, {"m": m, "delta": delta, "gamma": gamma, "n": mprime, "seed": seed,
                                 "code": code.to_bitstrings()})
    rec.claim("mean_upper", "le", Fraction(1, 2**m), P)
    rec.claim("total_pivotal", "le", 2 * mprime * P, total)
    rec.claim("tail_level", "ge", w - 1, tail_level(f, include_constant=False))
    if P.numerator == 1 and P.denominator & (P.denominator - 1) == 0:
        # E f = 2^-a, so log2(1/E f) = a and the normalized ratio is rational
        a = P.denominator.bit_length() - 1
        rec.claim("harper_ratio", "le", Fraction(gamma), total / 2 / (P * a))
    rec.report.update(harper_ratio(f))
    rec.report["gamma"] = gamma
    return rec


def harper_ratio(f: CubeFunction) -> dict:
    """Total influence of a ``{0,1}`` function against ``E f log(1/E f)``.

    ``ratio_natural`` divides the total pivotal probability by
    ``E f ln(1/E f)``; ``ratio_harper`` further divides by ``2/ln 2``,
    the constant of the edge-isoperimetric inequality, so that the
    subcube ``(1+x_1)/2`` scores exactly 1.
    """
    Ef = float(f.exact_mean())
    total = float(sum(pivotal_profile(f), Fraction(0)))
    if Ef in (0.0, 1.0):
        return {"degenerate": True, "total_pivotal": total, "mean": Ef}
    base = Ef * math.log(1 / Ef)
    return {
        "degenerate": False,
        "total_pivotal": total,
        "mean": Ef,
        "ratio_natural": total / base,
        "ratio_harper": total / (2 / math.log(2) * base),
    }
