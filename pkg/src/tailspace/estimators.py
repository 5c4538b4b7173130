"""scikit-learn compatible wrappers over the cube transforms.

Each row of ``X`` is one function on {-1,1}^n given by its ``2**n``
values in the repo-wide point order.  The estimators are stateless apart
from the dimension recorded at ``fit``, so they compose with
:class:`sklearn.pipeline.Pipeline` and :func:`sklearn.base.clone`.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_cube_array, check_time
from .core import popcounts, walsh_hadamard


class _CubeTransformer(TransformerMixin, BaseEstimator):
    def fit(self, X, y=None):
        X, n = check_cube_array(X)
        self.n_bits_ = n
        self.n_features_in_ = X.shape[1]
        return self

    def _validate(self, X):
        check_is_fitted(self, "n_bits_")
        X, n = check_cube_array(X)
        if n != self.n_bits_:
            raise ValueError(f"fitted on n={self.n_bits_} bits, got n={n}")
        return X


class WalshHadamardTransformer(_CubeTransformer):
    """Map function values to Fourier coefficients ``f^(S)``."""

    def transform(self, X):
        X = self._validate(X)
        return walsh_hadamard(X) / X.shape[1]

    def inverse_transform(self, X):
        X = self._validate(X)
        return walsh_hadamard(X)


class HeatSemigroup(_CubeTransformer):
    """Apply ``P_t``, the Fourier multiplier ``exp(-t |S|)``."""

    def __init__(self, t=1.0):
        self.t = t

    def fit(self, X, y=None):
        check_time(self.t)
        return super().fit(X, y)

    def transform(self, X):
        X = self._validate(X)
        mult = np.exp(-check_time(self.t) * popcounts(self.n_bits_))
        return walsh_hadamard(walsh_hadamard(X) * mult) / X.shape[1]


class TailProjector(_CubeTransformer):
    """Orthogonal projection onto functions with ``f^(S) = 0`` for ``|S| <= k``.

    With ``include_constant=False`` the mean is kept.
    """

    def __init__(self, k=1, include_constant=True):
        self.k = k
        self.include_constant = include_constant

    def fit(self, X, y=None):
        super().fit(X, y)
        if not 0 <= self.k <= self.n_bits_:
            raise ValueError(f"k={self.k} outside [0, {self.n_bits_}]")
        return self

    def transform(self, X):
        X = self._validate(X)
        pc = popcounts(self.n_bits_)
        keep = pc > self.k
        if not self.include_constant:
            keep = keep | (pc == 0)
        return walsh_hadamard(walsh_hadamard(X) * keep) / X.shape[1]


class InfluenceProfile(_CubeTransformer):
    """Per-coordinate influence of each row.

    ``convention="pivotal"`` gives ``P[f(x) != f(x^i)]`` for Boolean rows
    and ``E (D_i f)^2`` in general (the two agree on +-1 rows);
    ``"resampling"`` halves it.
    """

    def __init__(self, convention="pivotal"):
        self.convention = convention

    def fit(self, X, y=None):
        if self.convention not in ("pivotal", "resampling"):
            raise ValueError(f"unknown convention {self.convention!r}")
        return super().fit(X, y)

    def transform(self, X):
        X = self._validate(X)
        idx = np.arange(X.shape[1])
        out = np.empty((X.shape[0], self.n_bits_))
        for i in range(self.n_bits_):
            d = (X - X[:, idx ^ (1 << i)]) / 2.0
            out[:, i] = np.mean(d**2, axis=1)
        if self.convention == "resampling":
            out /= 2.0
        return out
