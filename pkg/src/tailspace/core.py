"""Functions on the discrete cube {-1, 1}^n and their Fourier analysis.

Point convention: bit ``i`` of the point index ``j`` is set exactly when
``x_{i+1} = -1``.  Subsets ``S`` are bitmasks over the same bits, so the
character ``W_S`` evaluates to ``(-1) ** popcount(j & S)`` and the Walsh
transform is the plain butterfly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import (
    check_coordinate,
    check_dimension,
    check_exponent,
    check_time,
    check_values,
    dimension_of,
)

CONVENTION = "bit_i_set_means_x_{i+1}_eq_minus1"


def _readonly(arr):
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CubeFunction:
    """A real function on {-1,1}^n stored as its ``2**n`` values.

    ``kind`` records the asserted range: ``"pm1"``, ``"01"``, ``"pm01"``
    (values in {-1, 0, 1}) or ``"real"``.  Non-real kinds are validated
    on construction and enable the exact (integer count) routines.
    """

    values: np.ndarray
    kind: str = "real"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(check_values(self.values, self.kind)))

    @property
    def n(self) -> int:
        return self.values.shape[0].bit_length() - 1

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def is_boolean(self) -> bool:
        return self.kind != "real"

    def int_values(self) -> np.ndarray:
        if not self.is_boolean:
            raise ValueError("exact integer values are only available for Boolean kinds")
        return self.values.astype(np.int64)

    def mean(self) -> float:
        return float(self.values.mean())

    def exact_mean(self) -> Fraction:
        return Fraction(int(self.int_values().sum()), self.size)

    def with_values(self, values, kind="real") -> "CubeFunction":
        return CubeFunction(values, kind=kind)

    def __repr__(self):
        return f"CubeFunction(n={self.n}, kind={self.kind!r})"


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """Fourier coefficients ``f^(S)`` indexed by subset bitmask."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("coeffs must be one-dimensional")
        dimension_of(arr.shape[0])
        object.__setattr__(self, "coeffs", _readonly(arr))

    @property
    def n(self) -> int:
        return self.coeffs.shape[0].bit_length() - 1

    def __getitem__(self, S):
        return float(self.coeffs[S])

    def degree_profile(self) -> np.ndarray:
        """Weight ``sum_{|S| = d} f^(S)^2`` for ``d = 0..n``."""
        return np.bincount(popcounts(self.n), weights=self.coeffs**2, minlength=self.n + 1)

    def __repr__(self):
        return f"FourierSpectrum(n={self.n})"


@dataclass(frozen=True)
class TailCertificate:
    """Result of testing ``f^(S) = 0`` for all ``|S| <= k``.

    With ``include_constant`` the empty set is tested too (membership in
    ``L^{>k}``); otherwise it is exempt (``L_+^{>k}``).
    """

    k: int
    include_constant: bool
    exact: bool
    max_violation: float
    worst_subset: int | None = None

    @property
    def member(self) -> bool:
        return self.max_violation == 0

    def passes(self, tol=1e-10) -> bool:
        return self.max_violation <= (0 if self.exact else tol)


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcounts(n: int) -> np.ndarray:
    """``popcount(S)`` for every ``S`` in ``[0, 2**n)`` (cached, read-only)."""
    if n not in _POPCOUNT_CACHE:
        pc = np.zeros(1, dtype=np.int64)
        for _ in range(n):
            pc = np.concatenate([pc, pc + 1])
        pc.setflags(write=False)
        _POPCOUNT_CACHE[n] = pc
    return _POPCOUNT_CACHE[n]


def walsh_hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis.

    Exact for integer dtypes.  ``O(n 2^n)`` per row.
    """
    a = np.array(a, copy=True)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        lo = v[..., 0, :].copy()
        hi = v[..., 1, :]
        v[..., 0, :] += hi
        lo -= hi
        v[..., 1, :] = lo
        h *= 2
    return a


def fwht(f: CubeFunction) -> FourierSpectrum:
    return FourierSpectrum(walsh_hadamard(f.values) / f.size)


def inverse_fwht(s: FourierSpectrum, kind="real") -> CubeFunction:
    return CubeFunction(walsh_hadamard(s.coeffs), kind=kind)


def exact_coefficient_counts(f: CubeFunction) -> np.ndarray:
    """Integer ``2**n * f^(S)`` for a Boolean-kind function."""
    return walsh_hadamard(f.int_values())


def exact_coefficient(f: CubeFunction, S: int) -> Fraction:
    return Fraction(int(exact_coefficient_counts(f)[S]), f.size)


def character(n: int, S: int) -> CubeFunction:
    """``W_S`` as a ``pm1`` function."""
    check_dimension(n)
    if not 0 <= S < (1 << n):
        raise ValueError(f"subset mask {S} out of range for n={n}")
    idx = np.arange(1 << n, dtype=np.int64)
    parity = popcounts(n)[idx & S] & 1
    return CubeFunction(1.0 - 2.0 * parity, kind="pm1")


def coordinate(n: int, i: int) -> CubeFunction:
    """The dictator ``x_i``."""
    check_coordinate(i, n)
    return character(n, 1 << (i - 1))


def constant(n: int, c: float) -> CubeFunction:
    check_dimension(n)
    kind = {1.0: "pm1", -1.0: "pm1", 0.0: "01"}.get(float(c), "real")
    return CubeFunction(np.full(1 << n, float(c)), kind=kind)


def lp_norm(f: CubeFunction, p: float) -> float:
    return lp_norm_values(f.values, p)


def lp_norm_values(values, p, weights=None) -> float:
    """``(E |f|^p)^(1/p)`` under ``weights`` (uniform by default)."""
    p = check_exponent(p)
    a = np.abs(np.asarray(values, dtype=np.float64))
    if np.isinf(p):
        return float(a.max())
    if weights is None:
        return float(np.mean(a**p) ** (1.0 / p))
    return float(np.dot(weights, a**p) ** (1.0 / p))


def _multiply_spectrum(f: CubeFunction, multiplier: np.ndarray) -> CubeFunction:
    return CubeFunction(walsh_hadamard(walsh_hadamard(f.values) * multiplier) / f.size)


def heat(f: CubeFunction, t: float) -> CubeFunction:
    """``P_t f``: multiply ``f^(S)`` by ``exp(-t |S|)``."""
    t = check_time(t)
    if t == 0:
        return f
    return _multiply_spectrum(f, np.exp(-t * popcounts(f.n)))


def laplacian(f: CubeFunction) -> CubeFunction:
    """``L f``: multiply ``f^(S)`` by ``|S|``."""
    return _multiply_spectrum(f, popcounts(f.n).astype(np.float64))


def discrete_derivative(f: CubeFunction, i: int) -> CubeFunction:
    """``D_i f(x) = (f(x) - f(x with x_i negated)) / 2``."""
    check_coordinate(i, f.n)
    idx = np.arange(f.size) ^ (1 << (i - 1))
    return CubeFunction((f.values - f.values[idx]) / 2.0)


def _require_pm1(f: CubeFunction):
    if f.kind != "pm1":
        raise ValueError(f"expected a pm1 function, got kind {f.kind!r}")


def _disagreements(f: CubeFunction, i: int) -> int:
    idx = np.arange(f.size) ^ (1 << (i - 1))
    return int(np.count_nonzero(f.values != f.values[idx]))


def pivotal_probability(f: CubeFunction, i: int) -> Fraction:
    """``P[f(x) != f(x with x_i flipped)]`` as an exact dyadic rational.

    Defined for any Boolean kind; the ``{0,1}`` case is what the Harper
    inequality counts.
    """
    if not f.is_boolean:
        raise ValueError("pivotal probability needs a Boolean-kind function")
    check_coordinate(i, f.n)
    return Fraction(_disagreements(f, i), f.size)


def influence(f: CubeFunction, i: int) -> Fraction:
    """Resampling influence: half of :func:`pivotal_probability`.

    Resampling ``x_i`` reproduces the old value half of the time, so a
    pivotal coordinate only changes ``f`` with probability one half.
    """
    _require_pm1(f)
    return pivotal_probability(f, i) / 2


def pivotal_profile(f: CubeFunction) -> list[Fraction]:
    return [pivotal_probability(f, i) for i in range(1, f.n + 1)]


def total_influence(f: CubeFunction) -> Fraction:
    """Sum of pivotal probabilities, equal to ``sum_S |S| f^(S)^2`` for pm1 ``f``."""
    _require_pm1(f)
    return sum(pivotal_profile(f), Fraction(0))


def spectral_total_influence(f: CubeFunction) -> float:
    coeffs = fwht(f).coeffs
    return float(np.dot(popcounts(f.n), coeffs**2))


def tail_certificate(f: CubeFunction, k: int, include_constant: bool = False) -> TailCertificate:
    """Test whether all coefficients with ``|S| <= k`` vanish.

    Boolean kinds are tested exactly on integer counts; the reported
    violation is then an exact dyadic magnitude (converted to float).
    """
    n = f.n
    if not 0 <= k <= n:
        raise ValueError(f"tail level k={k} must lie in [0, {n}]")
    pc = popcounts(n)
    mask = pc <= k
    if not include_constant:
        mask = mask & (pc >= 1)
    if f.is_boolean:
        coeffs = np.abs(exact_coefficient_counts(f))
        scale = f.size
    else:
        coeffs = np.abs(fwht(f).coeffs)
        scale = 1
    if not mask.any():
        return TailCertificate(k, include_constant, f.is_boolean, 0.0)
    masked = np.where(mask, coeffs, 0)
    worst = int(np.argmax(masked))
    violation = float(masked[worst]) / scale
    return TailCertificate(
        k, include_constant, f.is_boolean, violation, worst if violation else None
    )


def tail_level(f: CubeFunction, include_constant: bool = False) -> int:
    """Largest ``k`` with exact (or 1e-10) tail membership, or ``-1``.

    ``n`` is returned when every non-exempt coefficient vanishes.
    """
    pc = popcounts(f.n)
    if f.is_boolean:
        nonzero = exact_coefficient_counts(f) != 0
    else:
        nonzero = np.abs(fwht(f).coeffs) > 1e-10
    if not include_constant:
        nonzero = nonzero & (pc >= 1)
    if not nonzero.any():
        return f.n
    return int(pc[nonzero].min()) - 1


def project_tail(f: CubeFunction, k: int, include_constant: bool = True) -> CubeFunction:
    """Zero all coefficients with ``|S| <= k`` (the constant only if requested)."""
    pc = popcounts(f.n)
    keep = pc > k
    if not include_constant:
        keep = keep | (pc == 0)
    return _multiply_spectrum(f, keep.astype(np.float64))


def points(n: int) -> np.ndarray:
    """The ``2**n x n`` matrix of +-1 coordinates in index order."""
    check_dimension(n)
    idx = np.arange(1 << n, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n)) & 1
    return 1 - 2 * bits


def from_callable(n: int, func, kind="real") -> CubeFunction:
    """Tabulate ``func(x)`` for ``x`` a length-``n`` tuple of +-1 ints."""
    return CubeFunction([func(tuple(int(v) for v in row)) for row in points(n)], kind=kind)


def to_zero_one(f: CubeFunction) -> CubeFunction:
    """``(1 + f) / 2`` for pm1 ``f``."""
    _require_pm1(f)
    return CubeFunction((1.0 + f.values) / 2.0, kind="01")


def to_plus_minus(f: CubeFunction) -> CubeFunction:
    """``2 f - 1`` for ``{0,1}``-valued ``f``."""
    if f.kind != "01":
        raise ValueError(f"expected a 01 function, got kind {f.kind!r}")
    return CubeFunction(2.0 * f.values - 1.0, kind="pm1")


def tensor(f: CubeFunction, g: CubeFunction) -> CubeFunction:
    """``h(x, y) = f(x) g(y)`` with ``x`` on the low bits.

    The kind is kept when both factors agree and the product stays closed.
    """
    check_dimension(f.n + g.n)
    vals = np.multiply.outer(g.values, f.values).reshape(-1)
    kind = infer_kind(vals) if f.is_boolean and g.is_boolean else "real"
    return CubeFunction(vals, kind=kind)


def infer_kind(values) -> str:
    """Narrowest Boolean kind containing ``values``, else ``"real"``."""
    vals = np.unique(np.asarray(values, dtype=np.float64))
    for kind, allowed in (("01", (0.0, 1.0)), ("pm1", (-1.0, 1.0)), ("pm01", (-1.0, 0.0, 1.0))):
        if np.all(np.isin(vals, allowed)):
            return kind
    return "real"
