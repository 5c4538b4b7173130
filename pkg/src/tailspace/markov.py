"""Reversible Markov generators on finite probability spaces.

A generator ``L`` acts on functions as ``(Lf)(x) = sum_y L[x, y] f(y)``;
the semigroup is ``P_t = exp(-t L)``.  Reversibility with respect to
``mu`` makes ``D^{1/2} L D^{-1/2}`` symmetric (``D = diag(mu)``), which is
what the eigendecomposition below relies on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_dimension, check_time

GENERATOR_TOL = 1e-10
GAP_TOL = 1e-12


class DisconnectedGeneratorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    mu: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        mu = np.array(self.mu, dtype=np.float64)
        if mu.ndim != 1 or mu.size == 0:
            raise ValueError("mu must be a nonempty vector")
        if np.any(mu <= 0):
            raise ValueError("mu must be strictly positive")
        if abs(mu.sum() - 1) > 1e-12:
            raise ValueError(f"mu must sum to 1, sums to {mu.sum()!r}")
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        labels = tuple(self.labels) if len(self.labels) else tuple(range(mu.size))
        if len(labels) != mu.size:
            raise ValueError("labels and mu differ in length")
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.mu.size

    def expect(self, f) -> float:
        return float(np.dot(self.mu, f))

    @classmethod
    def uniform(cls, size, labels=()):
        return cls(np.full(size, 1.0 / size), labels)


@dataclass(frozen=True, eq=False)
class MarkovGenerator:
    """Validated generator with an eager spectral decomposition.

    ``eigenvalues`` are ascending; ``_modes`` holds the ``L^2(mu)``
    orthonormal eigenfunctions as columns.
    """

    space: FiniteSpace
    matrix: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False)
    _modes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        L = np.array(self.matrix, dtype=np.float64)
        N = self.space.size
        if L.shape != (N, N):
            raise ValueError(f"matrix shape {L.shape} does not match |Omega| = {N}")
        scale = max(1.0, float(np.abs(L).max()))
        tol = GENERATOR_TOL * scale
        mu = self.space.mu
        if np.abs(L.sum(axis=1)).max() > tol:
            raise ValueError("generator rows must sum to zero")
        flux = mu[:, None] * L
        if np.abs(flux - flux.T).max() > tol:
            raise ValueError("generator is not reversible with respect to mu")
        # -E 1_x L 1_y = -mu(x) L[x, y] must be >= 0 off the diagonal
        if (-flux)[~np.eye(N, dtype=bool)].min(initial=0.0) < -1e-12 * scale:
            raise ValueError("off-diagonal jump rates must be nonnegative")
        s = np.sqrt(mu)
        A = s[:, None] * L / s[None, :]
        A = (A + A.T) / 2
        lam, U = np.linalg.eigh(A)
        if lam[0] < -GENERATOR_TOL * scale:
            raise ValueError(f"generator is not positive semidefinite (min eigenvalue {lam[0]})")
        L.setflags(write=False)
        modes = U / s[:, None]
        modes.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "matrix", L)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "_modes", modes)

    @property
    def mu(self) -> np.ndarray:
        return self.space.mu

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def spectral_gap(self) -> float:
        return float(self.eigenvalues[1]) if self.size > 1 else np.inf

    def _check_state_function(self, f):
        f = np.asarray(f, dtype=np.float64)
        if f.shape[-1] != self.size:
            raise ValueError(f"function has {f.shape[-1]} entries, space has {self.size}")
        return f

    def apply(self, f) -> np.ndarray:
        return self.matrix @ self._check_state_function(f)

    def spectral_multiplier(self, f, weights) -> np.ndarray:
        """``sum_k weights[k] <f, phi_k>_mu phi_k``; ``f`` may be a row batch."""
        f = self._check_state_function(f)
        coeffs = (f * self.mu) @ self._modes
        return (coeffs * weights) @ self._modes.T

    def semigroup(self, t: float) -> np.ndarray:
        """Dense matrix of ``P_t`` acting on column vectors."""
        t = check_time(t)
        return (self._modes * np.exp(-t * self.eigenvalues)) @ (self._modes.T * self.mu)


def semigroup_apply(L: MarkovGenerator, t: float, f) -> np.ndarray:
    t = check_time(t)
    f = L._check_state_function(f)
    if t == 0:
        return f.copy()
    return L.spectral_multiplier(f, np.exp(-t * L.eigenvalues))


def poincare_constant(L: MarkovGenerator) -> float:
    """``1 / lambda_1``, the least ``C`` with ``Var f <= C E f L f``."""
    gap = L.spectral_gap
    if L.size < 2:
        raise DisconnectedGeneratorError("a one-point space has no spectral gap")
    if gap <= GAP_TOL:
        raise DisconnectedGeneratorError(f"spectral gap {gap:.3e} is not positive")
    return 1.0 / gap


def dirichlet_form(L: MarkovGenerator, g, h) -> float:
    """``E_mu g L h``."""
    g = L._check_state_function(g)
    return float(np.dot(L.mu * g, L.apply(h)))


def dirichlet_form_edges(L: MarkovGenerator, g, h) -> float:
    """Edge-sum form ``1/2 sum_{x,y} mu(x) (-L[x,y]) (g(x)-g(y)) (h(x)-h(y))``."""
    g = L._check_state_function(g)
    h = L._check_state_function(h)
    w = -(L.mu[:, None] * L.matrix)
    np.fill_diagonal(w, 0.0)
    dg = g[:, None] - g[None, :]
    dh = h[:, None] - h[None, :]
    return float(0.5 * np.sum(w * dg * dh))


def hypercube_generator(n: int) -> MarkovGenerator:
    """Number operator on {-1,1}^n: ``L = sum_i D_i``, eigenvalues ``|S|``."""
    n = check_dimension(n, max_n=12)
    size = 1 << n
    L = np.zeros((size, size))
    idx = np.arange(size)
    L[idx, idx] = n / 2.0
    for i in range(n):
        L[idx, idx ^ (1 << i)] = -0.5
    return MarkovGenerator(FiniteSpace.uniform(size), L)


def averaging_generator(space: FiniteSpace, C: float = 1.0) -> MarkovGenerator:
    """``C^{-1} (Id - E_mu)``."""
    if not C > 0:
        raise ValueError("C must be positive")
    N = space.size
    return MarkovGenerator(space, (np.eye(N) - np.tile(space.mu, (N, 1))) / C)


def extremal_generator(alpha: float, beta: float, C: float) -> MarkovGenerator:
    """Two-point space ``{-alpha, beta}`` with ``mu = (beta, alpha)`` and ``L = C^{-1}(Id - E)``.

    The Poincare inequality holds with equality for every function.
    """
    if not (alpha > 0 and beta > 0 and C > 0):
        raise ValueError("alpha, beta and C must be positive")
    if abs(alpha + beta - 1) > 1e-12:
        raise ValueError(f"alpha + beta must equal 1, got {alpha + beta!r}")
    space = FiniteSpace(np.array([beta, alpha]), labels=(-alpha, beta))
    return averaging_generator(space, C)


def two_state_generator(rate_01: float, rate_10: float) -> MarkovGenerator:
    """Chain on {0, 1} jumping 0->1 at ``rate_01`` and 1->0 at ``rate_10``."""
    total = rate_01 + rate_10
    mu = np.array([rate_10, rate_01]) / total
    L = np.array([[rate_01, -rate_01], [-rate_10, rate_10]])
    return MarkovGenerator(FiniteSpace(mu), L)


def random_generator(size: int, rng: np.random.Generator, density: float = 1.0) -> MarkovGenerator:
    """Random reversible generator with a random invariant measure.

    Symmetric edge conductances ``c(x,y)`` give rates ``c(x,y) / mu(x)``.
    A spanning path keeps the chain connected.
    """
    mu = rng.uniform(0.2, 1.0, size)
    mu /= mu.sum()
    c = rng.uniform(0.0, 1.0, (size, size)) * (rng.uniform(size=(size, size)) < density)
    c = np.triu(c, 1)
    path = np.arange(size - 1)
    c[path, path + 1] += rng.uniform(0.1, 1.0, size - 1)
    c = c + c.T
    rates = c / mu[:, None]
    L = np.diag(rates.sum(axis=1)) - rates
    return MarkovGenerator(FiniteSpace(mu), L)


def random_markov_operator(size: int, rng: np.random.Generator):
    """Random ``mu``-symmetric stochastic matrix and its ``mu``.

    Built as the random walk ``D^{-1} W`` on symmetric nonnegative
    weights ``W`` (with self-loops), so ``mu`` is proportional to the
    weighted degrees.
    """
    W = rng.uniform(0.0, 1.0, (size, size)) * (rng.uniform(size=(size, size)) < 0.7)
    W = np.triu(W) + np.triu(W, 1).T
    W += np.diag(rng.uniform(0.05, 1.0, size))
    path = np.arange(size - 1)
    bump = rng.uniform(0.1, 0.5, size - 1)
    W[path, path + 1] += bump
    W[path + 1, path] += bump
    deg = W.sum(axis=1)
    return W / deg[:, None], deg / deg.sum()


def check_markov_operator(P, mu, tol=1e-10):
    """Validate a ``mu``-symmetric stochastic matrix with nonnegative entries."""
    P = np.asarray(P, dtype=np.float64)
    mu = FiniteSpace(mu).mu
    if P.shape != (mu.size, mu.size):
        raise ValueError("operator shape does not match mu")
    if P.min() < -tol:
        raise ValueError("Markov operator must have nonnegative entries")
    if np.abs(P.sum(axis=1) - 1).max() > tol:
        raise ValueError("Markov operator rows must sum to one")
    flux = mu[:, None] * P
    if np.abs(flux - flux.T).max() > tol:
        raise ValueError("Markov operator is not symmetric in L^2(mu)")
    return P, mu
