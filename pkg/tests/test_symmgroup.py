from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from knotreform.errors import NotDivisible, SizeMismatch
from knotreform.ring import ZERO, q_pow
from knotreform.symmgroup import (
    cg_coefficient,
    character,
    class_size,
    class_to_rep,
    class_weight,
    conjugate,
    cycle_type,
    dimension,
    divisors,
    hook_lengths,
    hook_monomial,
    kvec_divide,
    kvec_from_cycle_type,
    kvec_size,
    kvec_stretch,
    kvectors,
    moebius,
    partitions,
    rep_to_class,
)


def _perm_cycle_type(perm):
    seen, lengths = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        n, j = 0, start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            n += 1
        lengths.append(n)
    return kvec_from_cycle_type(lengths)


def _frobenius_oracle(R, k):
    """chi_R(k) as the coefficient of x^(R + delta) in a_delta * p_k (sympy)."""
    n = sum(R)
    xs = sympy.symbols(f"x0:{n}")
    vandermonde = sympy.prod([xs[i] - xs[j] for i in range(n) for j in range(i + 1, n)])
    power_sums = sympy.prod([sum(x**j for x in xs) ** kj for j, kj in enumerate(k, start=1)])
    poly = sympy.Poly(sympy.expand(vandermonde * power_sums), *xs)
    exps = [(R[i] if i < len(R) else 0) + n - 1 - i for i in range(n)]
    return int(poly.coeff_monomial(sympy.prod([x**e for x, e in zip(xs, exps)])))


class TestPartitions:
    def test_counts(self):
        assert [len(partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]

    def test_reverse_lex(self):
        assert partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))

    def test_conjugate(self):
        assert conjugate((3, 1)) == (2, 1, 1)
        for n in range(7):
            for p in partitions(n):
                assert conjugate(conjugate(p)) == p

    def test_hook_lengths_and_dimension(self):
        assert sorted(hook_lengths((2, 1))) == [1, 1, 3]
        assert dimension((2, 1)) == 2
        assert dimension((3, 2)) == 5


class TestClasses:
    @pytest.mark.parametrize("k,size", [((1, 1), 3), ((0, 0, 1), 2), ((2,), 1)])
    def test_class_size(self, k, size):
        assert class_size(k) == size

    @pytest.mark.parametrize("n", range(1, 9))
    def test_class_sizes_sum_to_factorial(self, n):
        assert sum(class_size(k) for k in kvectors(n)) == factorial(n)

    def test_class_weight(self):
        assert class_weight((0, 1)) == Fraction(1, 2)

    def test_divide_and_stretch(self):
        assert kvec_divide((0, 2, 0, 0, 0, 1), 2) == (2, 0, 1)
        assert kvec_stretch((2, 0, 1), 2) == (0, 2, 0, 0, 0, 1)
        with pytest.raises(NotDivisible):
            kvec_divide((1,), 2)

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.integers(1, 4))
    def test_stretch_then_divide(self, k, d):
        k = tuple(k)
        while k and not k[-1]:
            k = k[:-1]
        assert kvec_divide(kvec_stretch(k, d), d) == k
        assert kvec_size(kvec_stretch(k, d)) == d * kvec_size(k)

    def test_cycle_type_round_trip(self):
        for n in range(7):
            for k in kvectors(n):
                assert kvec_from_cycle_type(cycle_type(k)) == k


class TestCharacters:
    def test_trivial_representation(self):
        for n in range(1, 6):
            for k in kvectors(n):
                assert character((n,), k) == 1

    def test_standard_of_s3_brute_force(self):
        # the standard representation's character is (fixed points - 1)
        brute = {}
        for perm in permutations(range(3)):
            brute[_perm_cycle_type(perm)] = sum(1 for i, p in enumerate(perm) if i == p) - 1
        assert brute == {(3,): 2, (1, 1): 0, (0, 0, 1): -1}
        for k, v in brute.items():
            assert character((2, 1), k) == v

    def test_sign_representation(self):
        assert character((1, 1), (0, 1)) == -1

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            character((2, 1), (1,))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_against_frobenius_formula(self, n):
        for R in partitions(n):
            for k in kvectors(n):
                assert character(R, k) == _frobenius_oracle(R, k)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_column_orthogonality(self, n):
        classes = kvectors(n)
        for a in classes:
            for b in classes:
                total = sum(character(R, a) * character(R, b) for R in partitions(n))
                expected = Fraction(factorial(n), class_size(a)) if a == b else 0
                assert total == expected

    @pytest.mark.parametrize("n", range(1, 7))
    def test_identity_class_gives_dimension(self, n):
        for R in partitions(n):
            assert character(R, (n,)) == dimension(R)


class TestCG:
    def test_examples(self):
        assert cg_coefficient((1,), (1,), (1,)) == 1
        assert cg_coefficient((2,), (2,), (1, 1)) == 0
        assert cg_coefficient((2,), (1, 1), (1, 1)) == 1
        assert cg_coefficient((2, 1), (3,), (2, 1)) == 1

    @pytest.mark.parametrize("n", range(1, 5))
    def test_symmetric_and_non_negative(self, n):
        ps = partitions(n)
        for a in ps:
            for b in ps:
                for c in ps:
                    v = cg_coefficient(a, b, c)
                    assert v >= 0
                    assert {cg_coefficient(*perm) for perm in permutations((a, b, c))} == {v}

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            cg_coefficient((1,), (2,), (1,))


class TestHookMonomial:
    def test_values(self):
        assert hook_monomial((1,)) == q_pow(0)
        assert hook_monomial((2,)) == q_pow(-1)
        assert hook_monomial((1, 1)) == -q_pow(1)
        assert hook_monomial((2, 2)) == ZERO


class TestMoebius:
    def test_examples(self):
        assert (moebius(1), moebius(6), moebius(12)) == (1, 1, 0)
        assert moebius(30) == -1

    def test_divisor_sum(self):
        for n in range(1, 1001):
            assert sum(moebius(d) for d in divisors(n)) == (1 if n == 1 else 0), n

    def test_against_sympy(self):
        for n in range(1, 300):
            assert moebius(n) == sympy.mobius(n)


class TestFrobeniusChange:
    def test_ell_one(self):
        assert rep_to_class({(1,): 7}) == {(1,): 7}
        assert class_to_rep({(1,): 7}) == {(1,): 7}

    def test_delta_on_symmetric(self):
        assert rep_to_class({(2,): 1}) == {(2,): Fraction(1, 2), (0, 1): Fraction(1, 2)}

    @given(st.integers(1, 5), st.data())
    def test_round_trip(self, n, data):
        a = {R: data.draw(st.integers(-20, 20)) for R in partitions(n)}
        assert class_to_rep(rep_to_class(a, n), n) == a

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            rep_to_class({(1,): 1, (2,): 1})
