import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailspace import codes, core
from tailspace import constructions as cons
from tailspace._validation import CapacityError
from tailspace.core import CubeFunction


def test_claim_relations():
    assert cons.Claim("a", "le", Fraction(1, 2), Fraction(1, 4)).holds
    assert not cons.Claim("a", "eq", Fraction(1, 2), Fraction(1, 4)).holds
    assert cons.Claim("a", "ge", Fraction(0), Fraction(1, 4)).to_json() == {
        "claim": "a", "relation": "ge", "bound": "0/1", "achieved": "1/4", "holds": True
    }


class TestBasicFunctions:
    def test_and_or(self):
        np.testing.assert_array_equal(cons.tribes(1, 2).values, [1, -1, -1, -1])
        np.testing.assert_array_equal(cons.tribes(2, 1).values, [1, 1, 1, -1])

    def test_tribes_mean(self):
        assert cons.prob_true(cons.tribes(2, 2)) == Fraction(7, 16)

    def test_tribes_against_definition(self):
        f = cons.tribes(3, 2)
        want = core.from_callable(6, lambda x: 1 if any(x[2 * j] == x[2 * j + 1] == 1 for j in range(3)) else -1, "pm1")
        np.testing.assert_array_equal(f.values, want.values)

    @pytest.mark.parametrize("r", [1, 2, 3, 5])
    def test_alleq(self, r):
        g = cons.alleq(r)
        assert cons.prob_true(g) == Fraction(1, 2**r)
        assert core.tail_certificate(g, 1).member
        # the weight-2 words x_i x_j of the even-weight dual show up at level 2
        assert not core.tail_certificate(g, 2).member

    def test_alleq3_level(self):
        g = cons.alleq(3)
        assert core.tail_certificate(g, 1).member
        assert not core.tail_certificate(g, 2).member


class TestOrCompose:
    def test_tribes_claims(self):
        rec = cons.or_compose(cons.and_function(2), 2)
        np.testing.assert_array_equal(rec.function.values, cons.tribes(2, 2).values)
        assert rec["mean_formula"].achieved == Fraction(-1, 8)
        assert rec.all_hold

    def test_alleq_single_block(self):
        rec = cons.or_compose(cons.alleq(3), 1)
        assert rec.function.exact_mean() == Fraction(-3, 4)
        assert rec["max_pivotal"].bound == Fraction(1, 4)
        assert rec.all_hold

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4))
    def test_claims_hold_for_alleq_blocks(self, r, b):
        if b * (r + 1) > 16:
            return
        assert cons.or_compose(cons.alleq(r), b).all_hold

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 3))
    def test_claims_hold_for_code_blocks(self, seed, b):
        rng = np.random.default_rng(seed)
        C = codes._random_code(5, int(rng.integers(1, 4)), rng)
        assert cons.or_compose(codes.indicator(C), b).all_hold

    def test_rejects(self):
        with pytest.raises(ValueError):
            cons.or_compose(core.to_zero_one(cons.alleq(2)), 2)
        with pytest.raises(CapacityError):
            cons.or_compose(cons.alleq(4), 5)


class TestChooseB:
    def test_half(self):
        assert cons.choose_b(Fraction(1, 2), 1) == 1
        assert cons.or_mean(Fraction(1, 2), 1) == 0

    def test_eighth(self):
        b = cons.choose_b(Fraction(1, 8), 3, mode="closest")
        assert abs(cons.or_mean(Fraction(1, 8), b)) <= Fraction(1, 4)
        nb = cons.choose_b(Fraction(1, 8), 3)
        assert cons.or_mean(Fraction(1, 8), nb) <= 0 < cons.or_mean(Fraction(1, 8), nb + 1)

    def test_closest_is_best(self):
        p = Fraction(1, 16)
        b = cons.choose_b(p, 4, mode="closest")
        assert all(abs(cons.or_mean(p, b)) <= abs(cons.or_mean(p, c)) for c in range(1, 65))

    def test_monotone(self):
        p = Fraction(1, 16)
        means = [cons.or_mean(p, b) for b in range(1, 65)]
        assert all(a < b for a, b in zip(means, means[1:]))

    def test_bad_input(self):
        with pytest.raises(ValueError):
            cons.choose_b(Fraction(1, 2), 3)
        with pytest.raises(ValueError):
            cons.choose_b(Fraction(1, 8), mode="largest")


class TestBlockCompose:
    def test_projection(self):
        g1, g2 = cons.alleq(2), cons.tribes(1, 2)
        f = cons.block_compose("first", [g1, g2])
        np.testing.assert_array_equal(f.values, np.tile(g1.values, 4))

    def test_or_of_alleq_in_tail(self):
        f = cons.block_compose("or", [cons.alleq(3)] * 3)
        assert core.tail_certificate(f, 1).member

    def test_xor_of_parities(self):
        p1, p2 = core.character(2, 0b11), core.character(3, 0b111)
        f = cons.block_compose("xor", [p1.with_values(p1.values, "pm1"), p2.with_values(p2.values, "pm1")])
        assert core.tail_level(f) == 4
        np.testing.assert_array_equal(f.values, core.character(5, 0b11111).values)

    def test_callable_combiner(self):
        g = cons.alleq(1)
        f = cons.block_compose(lambda v: v.max(axis=0), [g, g])
        np.testing.assert_array_equal(f.values, cons.block_compose("or", [g, g]).values)

    def test_mixed_conventions(self):
        with pytest.raises(ValueError):
            cons.block_compose("or", [cons.alleq(1), core.to_zero_one(cons.alleq(1))])

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["or", "and", "xor"]))
    def test_tail_preserved(self, seed, F):
        # blocks in the tail space above k compose into it
        rng = np.random.default_rng(seed)
        k = int(rng.integers(0, 3))
        blocks = [codes.indicator(codes.tail_code(int(rng.integers(1, 3)), k, int(rng.integers(100)))) for _ in range(2)]
        if sum(g.n for g in blocks) > 14:
            return
        f = cons.block_compose(F, blocks)
        assert core.tail_certificate(f, k).member


class TestZeroMeanDifference:
    def test_dictator(self):
        g = cons.zero_mean_difference(core.coordinate(1, 1).with_values(core.coordinate(1, 1).values, "pm1"))
        assert g.n == 2
        np.testing.assert_array_equal(g.values, [0, -1, 1, 0])
        assert Fraction(int((g.values == 1).sum()), 4) == Fraction(1, 4)

    def test_constant(self):
        g = cons.zero_mean_difference(CubeFunction(np.ones(4), "pm1"))
        assert not g.values.any()

    @pytest.mark.parametrize("b,r", [(2, 2), (1, 3)])
    def test_coding_tribes(self, b, r):
        f = cons.or_compose(cons.alleq(r), b).function
        g = cons.zero_mean_difference(f)
        assert g.exact_mean() == 0
        assert core.tail_certificate(g, 1, include_constant=True).member
        p = cons.prob_true(f)
        assert Fraction(int((g.values == 1).sum()), g.size) == p * (1 - p)


class TestMeanAdjust:
    def test_zero(self):
        h = cons.mean_adjust(3, 0, codes.extended_hamming_code())
        assert not h.values.any()

    def test_hamming_two_cosets(self):
        h = cons.mean_adjust(3, 1, codes.extended_hamming_code(), seed=0)
        assert h.meta["cosets"] == 2
        assert h.exact_mean() == Fraction(1, 8)
        assert core.tail_certificate(h, 3).member

    @pytest.mark.parametrize("t", range(8))
    def test_every_t(self, t):
        C = codes.tail_code(3, 3, seed=0)
        h = cons.mean_adjust(3, t, C, seed=t)
        assert h.kind == "01"
        assert h.exact_mean() == Fraction(t, 8)
        assert core.tail_certificate(h, 3).member

    def test_errors(self):
        H = codes.extended_hamming_code()
        with pytest.raises(ValueError):
            cons.mean_adjust(3, 8, H)
        with pytest.raises(ValueError):
            cons.mean_adjust(5, 1, H)  # P = 2^-4 is too large for 2^-5
        with pytest.raises(ValueError):
            cons.mean_adjust(2, 1, codes.even_weight_code(4))  # codimension 1 gives P = 1/2 > 1/4
        with pytest.raises(ValueError):
            cons.mean_adjust(2, 1, codes.LinearCode(4, (0b0011, 0b1100)))  # dual weight 2, not above 2


@pytest.fixture(scope="module")
def rec():
    return cons.balanced_coding_tribes(3, seed=0)


class TestBalanced:
    def test_claims(self, rec):
        assert rec.all_hold, [c.to_json() for c in rec.claims if not c.holds]

    def test_range_and_mean(self, rec):
        G = rec.function
        assert set(np.unique(G.values)) == {-1.0, 1.0}
        assert G.exact_mean() == 0

    def test_tail(self, rec):
        assert core.tail_certificate(rec.function, rec.params["k"], include_constant=True).member

    def test_structure(self, rec):
        # G equals f off the g0 block, and 1 - 2h on it
        G = rec.function.values.reshape(1 << rec.params["y_bits"], 1 << rec.params["x_bits"])
        assert rec.params["b"] == 1
        rows_equal = np.all(G == G[0], axis=0)
        assert rows_equal.mean() == pytest.approx(1 - 0.5)  # g0 holds on half of x

    def test_deterministic(self, rec):
        again = cons.balanced_coding_tribes(3, seed=0)
        np.testing.assert_array_equal(again.function.values, rec.function.values)

    def test_m_too_small(self):
        with pytest.raises(ValueError):
            cons.balanced_coding_tribes(2)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            cons.balanced_coding_tribes(4)


class TestHarper:
    def test_extended_hamming(self):
        rec = cons.harper_witness(2, code=codes.extended_hamming_code())
        assert rec.all_hold
        assert rec["harper_ratio"].achieved == 2
        assert rec.report["ratio_natural"] == pytest.approx(16 / math.log(16))
        assert rec["tail_level"].achieved == 3

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_searched(self, m):
        rec = cons.harper_witness(m, seed=0)
        assert rec.all_hold
        assert rec.report["ratio_harper"] <= rec.report["gamma"] + 1e-9

    def test_half_cube_calibration(self):
        f = CubeFunction([1.0, 0.0], "01")
        r = cons.harper_ratio(f)
        assert r["ratio_natural"] == pytest.approx(2 / math.log(2))
        assert r["ratio_harper"] == pytest.approx(1.0)

    def test_degenerate(self):
        assert cons.harper_ratio(CubeFunction(np.ones(4), "01"))["degenerate"]
