from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import laurent, nonzero_laurent, random_point, ratfn
from knotreform.errors import EssentialSingularity, NotZExpressible, ZeroDenominator
from knotreform.ring import (
    ONE,
    S,
    ZERO,
    LaurentQL,
    RatFn,
    YSeries,
    adams,
    as_ratfn,
    expand_y,
    from_z,
    l_pow,
    lql_arith,
    monomial,
    q_pow,
    ratfn_normalize,
    rewrite_in_z,
)

U = l_pow(1) - l_pow(-1)
DIM_BOX = RatFn(U, S)


class TestLaurent:
    def test_s_is_difference_of_half_powers(self):
        assert lql_arith(q_pow(1), q_pow(-1), "sub") == S
        assert S.terms == {(1, 0): 1, (-1, 0): -1}

    def test_s_squared(self):
        assert lql_arith(S, S, "mul") == q_pow(2) - 2 + q_pow(-2)

    @given(laurent())
    def test_additive_identity(self, p):
        assert lql_arith(p, ZERO, "add") == p

    @given(laurent(), laurent(), laurent())
    def test_ring_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == ZERO

    def test_zero_coefficients_are_dropped(self):
        p = LaurentQL({(1, 0): 0, (2, 2): Fraction(3, 2)})
        assert p.terms == {(2, 2): Fraction(3, 2)}
        assert not LaurentQL({(5, 5): 0})

    def test_negative_power_needs_monomial(self):
        assert q_pow(3) ** -2 == q_pow(-6)
        with pytest.raises((ValueError, ZeroDenominator, TypeError)):
            S ** -1

    def test_evaluate(self):
        assert S.evaluate(Fraction(2), Fraction(1)) == Fraction(3, 2)

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            lql_arith(ONE, ONE, "div")


class TestRatFn:
    def test_normalize_matches_cross_multiplication(self, rng):
        num, den = l_pow(2) - 1, U
        r = ratfn_normalize(num, den)
        assert r.den == ONE  # (l - 1)/(l^1/2 - l^-1/2) = l^(1/2)
        for _ in range(5):
            qh, lh = random_point(rng)
            assert r.evaluate(qh, lh) * den.evaluate(qh, lh) == num.evaluate(qh, lh)

    def test_zero_is_canonical(self):
        r = ratfn_normalize(ZERO, S * 7 + q_pow(4))
        assert r == as_ratfn(ZERO)
        assert r.den == ONE and not r.num

    def test_exact_cancellation(self):
        assert ratfn_normalize(S * S, S) == as_ratfn(S)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            ratfn_normalize(ONE, ZERO)
        with pytest.raises(ZeroDenominator):
            as_ratfn(S) / 0

    @given(ratfn(), ratfn(), ratfn())
    def test_field_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if b:
            assert (a / b) * b == a

    @given(ratfn(), st.randoms(use_true_random=False))
    def test_canonical_form_agrees_with_evaluation(self, r, rnd):
        qh, lh = random_point(rnd)
        try:
            expected = r.num.evaluate(qh, lh) / r.den.evaluate(qh, lh)
        except ZeroDivisionError:
            return
        assert r.evaluate(qh, lh) == expected

    @given(laurent(), nonzero_laurent(), nonzero_laurent())
    def test_equal_fractions_have_equal_forms(self, n, d, c):
        a = RatFn(n, d)
        b = RatFn(n * c, d * c)
        assert a == b and hash(a) == hash(b)
        assert (a.num, a.den) == (b.num, b.den)


class TestAdams:
    def test_on_s(self):
        assert adams(S, 2) == q_pow(2) - q_pow(-2)

    def test_on_unknot_dimension(self):
        assert adams(DIM_BOX, 2) == RatFn(l_pow(2) - l_pow(-2), q_pow(2) - q_pow(-2))

    @given(ratfn())
    def test_composition(self, f):
        assert adams(adams(f, 3), 2) == adams(f, 6)

    @given(ratfn(), ratfn(), st.integers(1, 4))
    def test_ring_homomorphism(self, f, g, d):
        assert adams(f * g, d) == adams(f, d) * adams(g, d)
        assert adams(f + g, d) == adams(f, d) + adams(g, d)


def _exp_series_oracle(a: Fraction, K: int):
    """Coefficients of e^(a y) up to y^K."""
    return [a**n / factorial(n) for n in range(K + 1)]


class TestExpandY:
    def test_s(self):
        series = expand_y(S, 3)
        expected = [Fraction(0), Fraction(1), Fraction(0), Fraction(1, 24)]
        assert [series[n].constant_value() if series[n] else 0 for n in range(4)] == expected
        # oracle: e^(y/2) - e^(-y/2) term by term
        plus, minus = _exp_series_oracle(Fraction(1, 2), 3), _exp_series_oracle(Fraction(-1, 2), 3)
        assert [p - m for p, m in zip(plus, minus)] == expected

    def test_unknot_dimension(self):
        series = expand_y(DIM_BOX, 1)
        assert series.leading_power() == -1
        assert series[-1] == U
        assert series[0] == ZERO
        assert series[1] == U * Fraction(-1, 24)
        with pytest.raises(IndexError):
            series[2]

    def test_l_only_is_constant(self):
        series = expand_y(l_pow(2), 4)
        assert series[0] == l_pow(2)
        assert all(series[n] == ZERO for n in range(1, 5))

    def test_essential_singularity(self):
        # leading y-coefficient of the denominator is l - 1, not a unit
        with pytest.raises(EssentialSingularity):
            expand_y(RatFn(ONE, l_pow(2) - q_pow(2)), 2)

    @given(laurent(max_terms=3), laurent(max_terms=3), st.integers(0, 4))
    def test_multiplicative(self, f, g, K):
        f = RatFn(f, S)
        g = RatFn(g, q_pow(2) + 1)
        lhs = expand_y(f * g, K)
        rhs = expand_y(f, K + 2) * expand_y(g, K + 2)
        for n in range(-2, K + 1):
            assert lhs[n] == rhs[n]

    def test_series_arithmetic(self):
        a = YSeries([ONE, ONE], 0, 1)
        assert (a * a)[1] == ONE * 2
        assert (a - a).leading_power() is None


class TestRewriteInZ:
    def test_z_itself(self):
        assert rewrite_in_z(q_pow(2) - 2 + q_pow(-2)) == [ZERO, ONE]

    def test_symmetric_with_l(self):
        assert rewrite_in_z(l_pow(2) * (q_pow(2) + q_pow(-2))) == [l_pow(2) * 2, l_pow(2)]

    def test_antisymmetric_fails(self):
        with pytest.raises(NotZExpressible):
            rewrite_in_z(q_pow(2) - q_pow(-2))

    def test_half_integer_q_power_fails(self):
        with pytest.raises(NotZExpressible):
            rewrite_in_z(S)

    @given(st.lists(laurent(max_terms=3, exps=st.tuples(st.just(0), st.integers(-4, 4))), max_size=5))
    def test_round_trip(self, coeffs):
        p = from_z(coeffs)
        back = rewrite_in_z(p)
        assert from_z(back) == p
        trimmed = list(coeffs)
        while trimmed and not trimmed[-1]:
            trimmed.pop()
        assert back == trimmed

    def test_monomial_helper(self):
        assert monomial(1, -1, 3).terms == {(1, -1): 3}
