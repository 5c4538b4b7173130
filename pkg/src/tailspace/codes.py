"""Binary linear codes and their indicator functions on the cube.

Words are Python ints, little-endian: bit ``i`` is coordinate ``i + 1``.
A word doubles as a point index of the cube, where a set bit means the
coordinate equals ``-1``, so the indicator of a code is a lookup table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import CapacityError, check_dimension
from .core import CubeFunction, tail_certificate

MAX_ENUM_DIM = 22
INFINITE_WEIGHT = math.inf


class SearchExhaustedError(RuntimeError):
    pass


def rref(rows, length):
    """Reduced row echelon form over GF(2).

    Returns ``(rows, pivots)`` where ``pivots[j]`` is the pivot bit of
    row ``j``.  Pivots ascend, so the result is canonical for the span.
    """
    rows = [int(r) for r in rows if int(r)]
    out, pivots = [], []
    for col in range(length):
        bit = 1 << col
        hit = next((k for k, r in enumerate(rows) if r & bit), None)
        if hit is None:
            continue
        piv = rows.pop(hit)
        rows = [r ^ piv if r & bit else r for r in rows]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
    return out, pivots


@dataclass(frozen=True)
class LinearCode:
    length: int
    generators: tuple = ()
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        check_dimension(self.length)
        limit = 1 << self.length
        if any(not 0 <= int(g) < limit for g in self.generators):
            raise ValueError(f"generator does not fit in length {self.length}")
        rows, _ = rref(self.generators, self.length)
        object.__setattr__(self, "generators", tuple(rows))

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def rank(self) -> int:
        return self.dim

    @property
    def pivots(self) -> list[int]:
        return rref(self.generators, self.length)[1]

    def __contains__(self, word) -> bool:
        word = int(word)
        for g, p in zip(self.generators, self.pivots):
            if word >> p & 1:
                word ^= g
        return word == 0

    def codewords(self) -> np.ndarray:
        if self.dim > MAX_ENUM_DIM:
            raise CapacityError(f"dim {self.dim} exceeds the enumeration limit {MAX_ENUM_DIM}")
        words = np.zeros(1, dtype=np.int64)
        for g in self.generators:
            words = np.concatenate([words, words ^ g])
        return words

    def to_bitstrings(self) -> list[str]:
        return [word_to_bitstring(g, self.length) for g in self.generators]

    @classmethod
    def from_bitstrings(cls, rows, length=None):
        rows = list(rows)
        if length is None:
            if not rows:
                raise ValueError("length is required for an empty generator list")
            length = len(rows[0])
        if any(len(r) != length for r in rows):
            raise ValueError("all rows must have the code length")
        return cls(length, tuple(bitstring_to_word(r) for r in rows))

    def __repr__(self):
        return f"LinearCode(length={self.length}, dim={self.dim})"


def word_to_bitstring(word: int, length: int) -> str:
    return "".join("1" if word >> i & 1 else "0" for i in range(length))


def bitstring_to_word(s: str) -> int:
    if set(s) - {"0", "1"}:
        raise ValueError(f"not a bit string: {s!r}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def zero_code(n):
    return LinearCode(n, ())


def full_space(n):
    return LinearCode(n, tuple(1 << i for i in range(n)))


def repetition_code(n):
    return LinearCode(n, ((1 << n) - 1,))


def even_weight_code(n):
    return LinearCode(n, tuple((1 << i) | (1 << (i + 1)) for i in range(n - 1)))


def extended_hamming_code():
    """The self-dual [8, 4, 4] code."""
    return LinearCode.from_bitstrings(["11110000", "00111100", "00001111", "10101010"])


def simplex_code(r):
    """The [2^r - 1, r, 2^(r-1)] code whose columns are all nonzero vectors."""
    length = (1 << r) - 1
    rows = [sum(1 << (c - 1) for c in range(1, length + 1) if c >> i & 1) for i in range(r)]
    return LinearCode(length, tuple(rows))


def dual(C: LinearCode) -> LinearCode:
    """``{y : <x, y> = 0 mod 2 for all x in C}``."""
    pivots = C.pivots
    free = [c for c in range(C.length) if c not in set(pivots)]
    rows = []
    for c in free:
        v = 1 << c
        for g, p in zip(C.generators, pivots):
            if g >> c & 1:
                v |= 1 << p
        rows.append(v)
    D = LinearCode(C.length, tuple(rows))
    if C.dim + D.dim != C.length:
        raise AssertionError("dual dimension check failed")
    return D


def min_weight(C: LinearCode):
    """Least Hamming weight of a nonzero codeword; ``math.inf`` for ``{0}``."""
    if C.dim == 0:
        return INFINITE_WEIGHT
    words = C.codewords()[1:]
    return int(np.bitwise_count(words.astype(np.uint64)).min())


def indicator(C: LinearCode) -> CubeFunction:
    """``g_C``: +1 on the image of ``C`` in {-1,1}^n, -1 elsewhere."""
    vals = np.full(1 << C.length, -1.0)
    vals[C.codewords()] = 1.0
    return CubeFunction(vals, kind="pm1", meta={"code": C.to_bitstrings(), "length": C.length})


def macwilliams_tail(C: LinearCode, k: int) -> bool:
    """Whether ``g_C`` lies in ``L_+^{>k}``, decided as ``w(C^perp) > k``."""
    return min_weight(dual(C)) > k


def macwilliams_crosscheck(C: LinearCode, k: int) -> tuple[bool, bool]:
    """The MacWilliams criterion and the exact Fourier certificate."""
    return macwilliams_tail(C, k), tail_certificate(indicator(C), k, include_constant=False).member


def coset_shift(g: CubeFunction, y: int) -> CubeFunction:
    """``g_y(x) = g(y * x)`` with ``y`` given as a point index."""
    if not 0 <= int(y) < g.size:
        raise ValueError(f"shift {y} is not a point of the {g.n}-cube")
    idx = np.arange(g.size) ^ int(y)
    return CubeFunction(g.values[idx], kind=g.kind)


def coset_representatives(C: LinearCode) -> list[int]:
    """One word from every coset of ``C``, in increasing order.

    Representatives are the words supported off the pivot columns, which
    meet every coset exactly once.
    """
    pivots = set(C.pivots)
    free = [c for c in range(C.length) if c not in pivots]
    reps = []
    for mask in range(1 << len(free)):
        reps.append(sum(1 << c for b, c in enumerate(free) if mask >> b & 1))
    return reps


def griesmer_bound(k: int, d: int) -> int:
    """Least length of a binary ``[n, k, d]`` code allowed by Griesmer."""
    return sum(math.ceil(d / 2**i) for i in range(k))


def qualifies(C: LinearCode, mprime: int, delta: float) -> bool:
    return (
        C.length == mprime
        and mprime / 4 <= C.dim <= 3 * mprime / 4
        and min_weight(C) >= delta * mprime
    )


def _random_code(length, dim, rng):
    rows = [int(r) for r in rng.integers(0, 1 << length, size=dim, dtype=np.int64)]
    return LinearCode(length, tuple(rows))


def _greedy_code(length, dim, need, rng, row_tries=64):
    """Grow a code row by row, keeping a candidate row only if every new
    codeword ``row ^ c`` has weight ``>= need``.  ``None`` on a dead end."""
    words = np.zeros(1, dtype=np.int64)
    rows = []
    for _ in range(dim):
        cands = rng.integers(1, 1 << length, size=row_tries, dtype=np.int64)
        ok = np.bitwise_count((cands[:, None] ^ words[None, :]).astype(np.uint64)).min(axis=1) >= need
        if not ok.any():
            return None
        row = int(cands[np.argmax(ok)])
        rows.append(row)
        words = np.concatenate([words, words ^ row])
    return LinearCode(length, tuple(rows))


def good_code_search(mprime: int, delta: float, seed: int, budget: int = 2000) -> LinearCode:
    """Seeded search for a code with ``m'/4 <= dim <= 3m'/4`` and weight ``>= delta m'``.

    Each trial grows a random code greedily (see ``_greedy_code``).
    Dimensions are tried in increasing order, ``budget`` trials each, all
    from one seeded stream, so the result depends only on the arguments.
    Dimensions ruled out by the Griesmer bound end the search early.
    """
    check_dimension(mprime)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    gamma = max(4.0, 1.0 / delta)
    need = math.ceil(delta * mprime - 1e-12)
    rng = np.random.default_rng(seed)
    lo, hi = math.ceil(mprime / 4), math.floor(3 * mprime / 4)
    for dim in range(max(lo, 1), hi + 1):
        if griesmer_bound(dim, need) > mprime:
            break
        for trial in range(budget):
            C = _greedy_code(mprime, dim, need, rng)
            if C is not None and C.dim == dim:
                w = min_weight(C)
                meta = {"delta": delta, "gamma": gamma, "seed": seed, "trial": trial, "min_weight": w}
                return LinearCode(mprime, C.generators, meta)
    raise SearchExhaustedError(
        f"no [{mprime}, {lo}..{hi}, >= {need}] code found (budget {budget} per dimension, seed {seed})"
    )


def tail_code(codim: int, k: int, seed: int, max_length: int = 24, budget: int = 2000) -> LinearCode:
    """Shortest code whose indicator has ``P[g = 1] = 2**-codim`` and lies in ``L_+^{>k}``.

    Searches for a ``[w, codim, >= k + 1]`` code ``D`` at increasing length
    and returns ``D^perp``, so ``w(C^perp) = w(D) > k``.
    """
    if codim < 1 or k < 0:
        raise ValueError("need codim >= 1 and k >= 0")
    rng = np.random.default_rng(seed)
    for w in range(max(codim, griesmer_bound(codim, k + 1)), max_length + 1):
        for trial in range(budget):
            D = _greedy_code(w, codim, k + 1, rng)
            if D is not None and D.dim == codim:
                C = dual(D)
                return LinearCode(w, C.generators, {"codim": codim, "k": k, "seed": seed, "dual_weight": min_weight(D)})
    raise SearchExhaustedError(f"no code of codimension {codim} with dual weight > {k} up to length {max_length}")
