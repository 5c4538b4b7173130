import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailspace import core, markov
from tailspace.core import CubeFunction
from tailspace.markov import FiniteSpace, MarkovGenerator


def generators():
    return st.tuples(st.integers(2, 7), st.integers(0, 2**32 - 1)).map(
        lambda a: markov.random_generator(a[0], np.random.default_rng(a[1]))
    )


class TestConstruction:
    def test_rejects_bad_measure(self):
        with pytest.raises(ValueError):
            FiniteSpace([0.5, 0.6])
        with pytest.raises(ValueError):
            FiniteSpace([1.0, 0.0])

    def test_rejects_rows_not_summing_to_zero(self):
        with pytest.raises(ValueError, match="sum to zero"):
            MarkovGenerator(FiniteSpace.uniform(2), [[1, -0.5], [-1, 1]])

    def test_rejects_irreversible(self):
        # constant-rate cycle on 3 states: uniform is invariant but not reversible
        L = np.array([[1, -1, 0], [0, 1, -1], [-1, 0, 1]], dtype=float)
        with pytest.raises(ValueError, match="reversible"):
            MarkovGenerator(FiniteSpace.uniform(3), L)

    def test_rejects_negative_rates(self):
        with pytest.raises(ValueError):
            MarkovGenerator(FiniteSpace.uniform(2), [[-1, 1], [1, -1]])

    def test_dimension_mismatch(self):
        L = markov.two_state_generator(1, 1)
        with pytest.raises(ValueError):
            markov.semigroup_apply(L, 1.0, np.ones(3))
        with pytest.raises(ValueError):
            markov.dirichlet_form(L, np.ones(2), np.ones(3))


class TestSemigroup:
    def test_time_zero(self, rng):
        L = markov.random_generator(5, rng)
        f = rng.normal(size=5)
        np.testing.assert_array_equal(markov.semigroup_apply(L, 0.0, f), f)

    def test_constants_fixed(self, rng):
        L = markov.random_generator(6, rng)
        for t in (0.1, 1.0, 10.0):
            np.testing.assert_allclose(markov.semigroup_apply(L, t, np.ones(6)), 1, atol=1e-12)

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            markov.semigroup_apply(markov.two_state_generator(1, 1), -1, [1, 2])

    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_hypercube_agrees_with_core(self, n, rng):
        L = markov.hypercube_generator(n)
        f = rng.normal(size=1 << n)
        for t in (0.01, 0.5, 2.0):
            np.testing.assert_allclose(
                markov.semigroup_apply(L, t, f), core.heat(CubeFunction(f), t).values, atol=1e-10
            )
        np.testing.assert_allclose(L.apply(f), core.laplacian(CubeFunction(f)).values, atol=1e-10)

    def test_matches_expm(self, rng):
        from scipy.linalg import expm

        L = markov.random_generator(5, rng)
        f = rng.normal(size=5)
        np.testing.assert_allclose(
            markov.semigroup_apply(L, 0.7, f), expm(-0.7 * L.matrix) @ f, atol=1e-10
        )
        np.testing.assert_allclose(L.semigroup(0.7), expm(-0.7 * L.matrix), atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(generators(), st.floats(0.01, 3), st.floats(0.01, 3))
    def test_semigroup_law_and_positivity(self, L, s, t):
        rng = np.random.default_rng(0)
        f = rng.normal(size=L.size)
        a = markov.semigroup_apply(L, s, markov.semigroup_apply(L, t, f))
        np.testing.assert_allclose(a, markov.semigroup_apply(L, s + t, f), atol=1e-9)
        assert markov.semigroup_apply(L, t, np.abs(f)).min() >= -1e-12
        assert abs(L.space.expect(markov.semigroup_apply(L, t, f)) - L.space.expect(f)) < 1e-9

    @settings(max_examples=40, deadline=None)
    @given(generators())
    def test_spectral_contraction(self, L):
        C = markov.poincare_constant(L) + 1e-9
        rng = np.random.default_rng(1)
        f = rng.normal(size=L.size)
        f -= L.space.expect(f)
        norm = np.sqrt(L.space.expect(f**2))
        for t in (0.05, 0.5, 2.0):
            pf = markov.semigroup_apply(L, t, f)
            assert np.sqrt(L.space.expect(pf**2)) <= np.exp(-t / C) * norm + 1e-9


class TestPoincare:
    def test_hypercube(self):
        assert markov.poincare_constant(markov.hypercube_generator(4)) == pytest.approx(1, abs=1e-10)
        np.testing.assert_allclose(
            markov.hypercube_generator(3).eigenvalues, [0, 1, 1, 1, 2, 2, 2, 3], atol=1e-12
        )

    def test_two_state(self):
        L = markov.two_state_generator(1.0, 1.0)
        np.testing.assert_allclose(L.eigenvalues, [0, 2], atol=1e-14)
        assert markov.poincare_constant(L) == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize("C", [0.3, 1.0, 4.0])
    def test_extremal(self, C):
        L = markov.extremal_generator(0.3, 0.7, C)
        assert markov.poincare_constant(L) == pytest.approx(C, abs=1e-10)

    def test_disconnected(self):
        L = np.zeros((3, 3))
        L[:2, :2] = [[1, -1], [-1, 1]]
        with pytest.raises(markov.DisconnectedGeneratorError):
            markov.poincare_constant(MarkovGenerator(FiniteSpace.uniform(3), L))

    def test_least_constant(self, rng):
        # Var f / E fLf is maximised by the first nonconstant eigenfunction
        L = markov.random_generator(6, rng)
        C = markov.poincare_constant(L)
        best = 0.0
        for _ in range(2000):
            f = rng.normal(size=6)
            var = L.space.expect(f**2) - L.space.expect(f) ** 2
            best = max(best, var / markov.dirichlet_form(L, f, f))
        assert best <= C * (1 + 1e-9)
        assert best >= 0.5 * C


class TestDirichlet:
    def test_constants(self, rng):
        L = markov.random_generator(4, rng)
        assert abs(markov.dirichlet_form(L, np.ones(4), np.ones(4))) < 1e-12

    def test_hypercube_dictator(self):
        L = markov.hypercube_generator(3)
        x1 = core.coordinate(3, 1).values
        assert markov.dirichlet_form(L, x1, x1) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(generators(), st.integers(0, 1000))
    def test_matrix_equals_edges(self, L, seed):
        rng = np.random.default_rng(seed)
        g, h = rng.normal(size=(2, L.size))
        a = markov.dirichlet_form(L, g, h)
        assert abs(a - markov.dirichlet_form_edges(L, g, h)) < 1e-10
        assert abs(a - markov.dirichlet_form(L, h, g)) < 1e-10


class TestExtremal:
    def test_symmetric(self):
        L = markov.extremal_generator(0.5, 0.5, 1.0)
        np.testing.assert_allclose(L.eigenvalues, [0, 1], atol=1e-14)
        assert L.space.labels == (-0.5, 0.5)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            markov.extremal_generator(0.5, 0.6, 1.0)

    def test_poincare_equality(self, rng):
        C = 2.5
        L = markov.extremal_generator(0.2113, 0.7887, C)
        for _ in range(100):
            f = rng.normal(size=2)
            var = L.space.expect(f**2) - L.space.expect(f) ** 2
            assert abs(var - C * markov.dirichlet_form(L, f, f)) < 1e-12


def test_markov_operator_validation(rng):
    P, mu = markov.random_markov_operator(6, rng)
    markov.check_markov_operator(P, mu)
    with pytest.raises(ValueError):
        markov.check_markov_operator(P.T, mu) if not np.allclose(P, P.T) else markov.check_markov_operator(-P, mu)
