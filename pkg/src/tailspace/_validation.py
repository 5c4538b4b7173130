"""Input validation shared by the functional API and the estimators."""
from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils import check_array

MAX_N = 24

KINDS = ("pm1", "01", "pm01", "real")
KIND_VALUES = {
    "pm1": (-1.0, 1.0),
    "01": (0.0, 1.0),
    "pm01": (-1.0, 0.0, 1.0),
}


class CapacityError(ValueError):
    """Raised when an exhaustive operation would exceed desk scale."""


def check_dimension(n, max_n=MAX_N):
    if not isinstance(n, numbers.Integral) or n < 0:
        raise ValueError(f"dimension must be a nonnegative integer, got {n!r}")
    if n > max_n:
        raise CapacityError(f"n={n} exceeds the exhaustive limit of {max_n} bits")
    return int(n)


def dimension_of(length):
    """Return ``n`` with ``2**n == length`` or raise."""
    n = int(length).bit_length() - 1
    if length < 1 or (1 << n) != length:
        raise ValueError(f"length {length} is not a power of two")
    return check_dimension(n)


def check_values(values, kind="real"):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"values must be one-dimensional, got shape {arr.shape}")
    dimension_of(arr.shape[0])
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if kind != "real":
        allowed = np.asarray(KIND_VALUES[kind])
        if not np.all(np.isin(arr, allowed)):
            raise ValueError(f"values fall outside the {kind!r} range {tuple(allowed)}")
    return arr


def check_coordinate(i, n):
    if not isinstance(i, numbers.Integral) or not 1 <= i <= n:
        raise ValueError(f"coordinate must satisfy 1 <= i <= {n}, got {i!r}")
    return int(i)


def check_exponent(p, allow_inf=True):
    p = float(p)
    if np.isnan(p) or p < 1 or (np.isinf(p) and not allow_inf):
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    return p


def check_time(t):
    t = float(t)
    if not t >= 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    return t


def check_cube_array(X):
    """Validate a batch of functions, one per row, each of length ``2**n``.

    Returns the float64 array and ``n``.
    """
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    n = dimension_of(X.shape[1])
    return X, n
