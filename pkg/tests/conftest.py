import itertools

import numpy as np
import pytest


def naive_transform(values):
    """O(4^n) Fourier coefficients straight from the definition."""
    values = np.asarray(values, dtype=float)
    size = values.shape[0]
    n = size.bit_length() - 1
    out = np.zeros(size)
    for S in range(size):
        total = 0.0
        for j in range(size):
            total += values[j] * (-1) ** bin(j & S).count("1")
        out[S] = total / size
    return out


def cube_points(n):
    """Points of {-1,1}^n in index order, computed without the library."""
    return [tuple(-1 if (j >> i) & 1 else 1 for i in range(n)) for j in range(1 << n)]


def noise_kernel(n, rho):
    """Matrix K with (T_rho f)(x) = sum_y K[x, y] f(y)."""
    pts = np.array(cube_points(n), dtype=float)
    K = np.ones((1 << n, 1 << n))
    for i in range(n):
        K *= 1 + rho * np.outer(pts[:, i], pts[:, i])
    return K / (1 << n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def all_subsets(n):
    return itertools.chain.from_iterable(itertools.combinations(range(n), r) for r in range(n + 1))
