"""Integer polynomials, correlation data and Sturm root counting."""

from fractions import Fraction
from itertools import permutations
from math import prod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import abstract, digits
from subshift_escape.errors import DivisionByZero, NonExpandable
from subshift_escape.poly import (
    IntPolynomial,
    RationalFunction,
    SturmSequence,
    Z,
    adjugate_sum,
    adjugate_sum_by_rank_one,
    coefficient_staircase_ok,
    correlation_data,
    correlation_matrix,
    count_real_roots,
    cross_difference,
    cross_difference_bound,
    determinant,
    determinant_bareiss,
    determinant_cofactor,
    eval_rational,
    generating_function,
    lagrange_bound,
    perron_polynomial,
    poly_gcd,
    product_coefficient_bound,
    r_function,
    series_coefficients,
    square_free_part,
)
from subshift_escape.spectral import build_avoidance_automaton, count_words
from subshift_escape.words import Word, WordCollection, is_subword

polynomials = st.lists(st.integers(-6, 6), min_size=2, max_size=7).map(IntPolynomial).filter(
    lambda f: f.degree >= 1
)


@st.composite
def reduced_collections(draw, q_max=3, max_length=4, t_max=4):
    """Reduced collections of distinct words, possibly of mixed lengths."""
    q = draw(st.integers(2, q_max))
    raw = draw(st.lists(
        st.lists(st.integers(0, q - 1), min_size=1, max_size=max_length).map(tuple),
        min_size=1, max_size=t_max, unique=True,
    ))
    chosen: list[Word] = []
    for symbols in sorted(raw, key=len):
        word = Word(symbols, q)
        if not any(is_subword(u, word) for u in chosen):
            chosen.append(word)
    return WordCollection(q, tuple(chosen))


@st.composite
def equal_length_collections(draw, q_max=4, p_max=4, t_max=3):
    """Reduced collections of t distinct words of one length p >= 2."""
    q = draw(st.integers(2, q_max))
    p = draw(st.integers(2, p_max))
    words = draw(st.lists(
        st.lists(st.integers(0, q - 1), min_size=p, max_size=p).map(tuple),
        min_size=1, max_size=t_max, unique=True,
    ))
    return WordCollection.of(q, *words)


def leibniz_det(values: list[list[int]]) -> int:
    """Determinant of a small integer matrix as a signed sum over permutations."""
    n = len(values)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * prod(values[i][perm[i]] for i in range(n))
    return total


def evaluated(collection: WordCollection, x: int) -> list[list[int]]:
    m = correlation_matrix(collection)
    return [[m[i, j](x) for j in range(m.order)] for i in range(m.order)]


class TestIntPolynomial:
    def test_trimmed_and_printed(self):
        assert IntPolynomial((1, 0, 0)).coeffs == (1,)
        assert str(IntPolynomial((2, 0, 1))) == "z^2+2"
        assert str(IntPolynomial((-1, 0, -3))) == "-3z^2-1"
        assert str(IntPolynomial()) == "0"
        assert IntPolynomial().degree == -1

    def test_arithmetic(self):
        f = IntPolynomial.from_roots([1, 2])
        assert f == Z ** 2 - 3 * Z + 2
        assert f(Fraction(3, 2)) == Fraction(-1, 4)
        assert (f * (Z + 1)).exact_div(Z + 1) == f

    def test_exact_division_with_remainder(self):
        with pytest.raises(ValueError):
            (Z ** 2 + 1).exact_div(Z + 1)

    def test_exact_division_with_a_fractional_quotient(self):
        with pytest.raises(ValueError):
            (2 * Z).exact_div(IntPolynomial((4,)))
        with pytest.raises(ZeroDivisionError):
            Z.exact_div(IntPolynomial())

    def test_sympy_conversion_keeps_the_zero_polynomial(self):
        assert IntPolynomial.from_sympy(IntPolynomial().to_sympy()).is_zero()
        assert IntPolynomial.from_sympy((3 * Z ** 4 - Z).to_sympy()) == 3 * Z ** 4 - Z

    def test_sign_at_is_exact(self):
        f = 3 * Z - 1
        assert f.sign_at(Fraction(1, 3)) == 0
        assert f.sign_at(Fraction(1, 3) + Fraction(1, 10 ** 30)) == 1

    def test_gcd_and_square_free_part(self):
        f = IntPolynomial.from_roots([1, 1, 2])
        assert poly_gcd(f, Z ** 2 - 1) == Z - 1
        assert poly_gcd(2 * f, -4 * (Z - 2)) == Z - 2
        assert square_free_part(f) == IntPolynomial.from_roots([1, 2])
        assert square_free_part(-6 * f) == IntPolynomial.from_roots([1, 2])

    @given(st.lists(st.integers(-4, 4), min_size=1, max_size=6),
           st.lists(st.integers(-4, 4), min_size=1, max_size=6))
    @settings(max_examples=60, deadline=None)
    def test_gcd_of_split_polynomials(self, roots_a, roots_b):
        common = []
        remaining = list(roots_b)
        for r in roots_a:
            if r in remaining:
                remaining.remove(r)
                common.append(r)
        f, g = IntPolynomial.from_roots(roots_a), IntPolynomial.from_roots(roots_b)
        assert poly_gcd(f, g) == IntPolynomial.from_roots(common)
        assert square_free_part(f) == IntPolynomial.from_roots(set(roots_a))

    @given(polynomials)
    @settings(max_examples=100)
    def test_lagrange_bound_holds_for_every_root(self, f):
        bound = float(lagrange_bound(f))
        roots = np.roots(list(reversed(f.coeffs)))
        assert all(abs(r) <= bound * (1 + 1e-9) for r in roots)

    def test_lagrange_bound_of_zero(self):
        with pytest.raises(ValueError):
            lagrange_bound(IntPolynomial())

    @given(polynomials, polynomials)
    @settings(max_examples=100)
    def test_product_coefficient_bound(self, f, g):
        assert (f * g).max_abs_coefficient() <= product_coefficient_bound(f, g)

    def test_product_coefficient_bound_is_reached(self):
        f = IntPolynomial((1, 1, 1))
        assert product_coefficient_bound(f, f) == 3 == (f * f).max_abs_coefficient()
        assert product_coefficient_bound(f, IntPolynomial()) == 0


class TestRationalFunction:
    def test_equality_uses_the_reduced_form(self):
        unreduced = RationalFunction(2 * (Z + 1), (Z + 1) ** 2)
        assert unreduced == RationalFunction(IntPolynomial((2,)), Z + 1)
        assert hash(unreduced) == hash(RationalFunction(IntPolynomial((4,)), 2 * Z + 2))
        assert str(unreduced.reduced()) == "2/(z+1)"

    def test_reduced_denominator_has_a_positive_lead(self):
        r = RationalFunction(3 * Z, -6 * Z ** 2).reduced()
        assert r.numerator == IntPolynomial((-1,))
        assert r.denominator == 2 * Z

    def test_zero_numerator(self):
        r = RationalFunction(IntPolynomial(), Z ** 2 + 1).reduced()
        assert r.numerator.is_zero()
        assert r.denominator == IntPolynomial((1,))

    def test_zero_denominator(self):
        with pytest.raises(DivisionByZero):
            RationalFunction(Z, IntPolynomial())

    def test_evaluation(self):
        r = RationalFunction(IntPolynomial((2,)), Z + 1)
        assert eval_rational(r, 3) == Fraction(1, 2)
        with pytest.raises(DivisionByZero):
            eval_rational(r, -1)


class TestCorrelationData:
    @pytest.mark.parametrize("words, numerator, denominator", [
        ("aa,bb", (2,), (1, 1)),
        ("aaa,aba", (1, 2), (1, 2, 1, 1)),
        ("aba,aca", (2,), (2, 0, 1)),
        ("ab,ac", (2,), (0, 1)),
    ])
    def test_r_function_examples(self, words, numerator, denominator):
        r = r_function(abstract(words)).reduced()
        assert r.numerator == IntPolynomial(numerator)
        assert r.denominator == IntPolynomial(denominator)

    def test_single_word(self):
        delta, s = correlation_data(abstract("aba"))
        assert delta == Z ** 2 + 1
        assert s == IntPolynomial((1,))

    def test_empty_collection(self):
        delta, s = correlation_data(WordCollection(3))
        assert delta == IntPolynomial((1,))
        assert s.is_zero()

    def test_matrix_orientation(self):
        # M[i][j] = (w_j, w_i): row 0 holds correlations into the first word
        m = correlation_matrix(digits("01,00", 2))
        assert m[0, 1] == IntPolynomial((1,))
        assert m[1, 0].is_zero()

    def test_generating_function_of_the_golden_mean_shift(self):
        numerator, denominator = generating_function(digits("11", 2), 2)
        assert numerator == Z ** 2 + Z
        assert denominator == Z ** 2 - Z - 1
        assert series_coefficients(numerator, denominator, 7) == [1, 2, 3, 5, 8, 13, 21, 34]

    def test_full_shift_series(self):
        numerator, denominator = generating_function(WordCollection(3), 3)
        assert series_coefficients(numerator, denominator, 5) == [3 ** n for n in range(6)]

    @given(reduced_collections(q_max=3, max_length=4, t_max=4))
    @settings(max_examples=40, deadline=None)
    def test_series_counts_the_avoiding_words(self, collection):
        q = collection.alphabet_size
        automaton = build_avoidance_automaton(collection, q)
        series = series_coefficients(*generating_function(collection, q), 7)
        assert series == [count_words(automaton, n) for n in range(8)]

    def test_series_errors(self):
        with pytest.raises(NonExpandable):
            series_coefficients(Z ** 2, Z + 1, 3)
        with pytest.raises(ValueError):
            series_coefficients(Z, 2 * Z + 1, 3)

    def test_perron_polynomial_of_two_squares(self):
        assert perron_polynomial(abstract("aa,bb", 3), 3) == (Z + 1) * (Z ** 2 - 2 * Z - 1)

    def test_cross_difference_of_equal_collections(self):
        assert cross_difference(abstract("aab,abb"), abstract("aab,abb")).is_zero()

    @given(equal_length_collections(), equal_length_collections())
    @settings(max_examples=60, deadline=None)
    def test_cross_difference_respects_the_product_bound(self, first, second):
        q = max(first.alphabet_size, second.alphabet_size)
        first, second = first.over(q), second.over(q)
        difference = cross_difference(first, second)
        assert difference.max_abs_coefficient() <= cross_difference_bound(first, second)

    @given(reduced_collections(q_max=3, max_length=4, t_max=4))
    @settings(max_examples=60, deadline=None)
    def test_determinant_matches_integer_points(self, collection):
        # 13 points pin down a polynomial of degree <= 12
        m = correlation_matrix(collection)
        delta = determinant(m)
        assert all(delta(x) == leibniz_det(evaluated(collection, x)) for x in range(-6, 7))
        assert determinant_bareiss(m) == determinant_cofactor(m) == delta

    @given(reduced_collections(q_max=3, max_length=4, t_max=4))
    @settings(max_examples=60, deadline=None)
    def test_adjugate_sum_matches_integer_points(self, collection):
        s = adjugate_sum(correlation_matrix(collection))
        for x in range(-6, 7):
            values = evaluated(collection, x)
            shifted = [[v + 1 for v in row] for row in values]
            assert s(x) == leibniz_det(shifted) - leibniz_det(values)

    @given(reduced_collections(q_max=3, max_length=4, t_max=3))
    @settings(max_examples=40, deadline=None)
    def test_r_is_the_sum_of_the_inverse_entries(self, collection):
        x = 10
        r = eval_rational(r_function(collection), x)
        inverse = np.linalg.inv(np.array(evaluated(collection, x), dtype=float))
        assert float(r) == pytest.approx(inverse.sum(), rel=1e-9, abs=1e-12)

    @given(reduced_collections(q_max=3, max_length=4, t_max=4))
    @settings(max_examples=40, deadline=None)
    def test_r_of_the_transpose_is_the_same(self, collection):
        transposed = correlation_matrix(collection).transpose()
        assert RationalFunction(adjugate_sum(transposed), determinant(transposed)) == r_function(collection)

    @given(equal_length_collections(q_max=4, p_max=5, t_max=4))
    @settings(max_examples=80, deadline=None)
    def test_degree_laws_for_equal_lengths(self, collection):
        t, p = collection.t, collection.p
        delta, s = correlation_data(collection)
        assert delta.degree == t * (p - 1)
        assert delta.leading == 1
        assert s.degree == (t - 1) * (p - 1)
        assert s.leading == t

    @given(reduced_collections(q_max=4, max_length=5, t_max=5))
    @settings(max_examples=60, deadline=None)
    def test_adjugate_sum_by_rank_one_update(self, collection):
        m = correlation_matrix(collection)
        assert adjugate_sum(m) == adjugate_sum_by_rank_one(m)

    def test_bareiss_on_a_large_collection(self):
        collection = digits("0001,0010,0100,1000,0111,1011", 2)
        m = correlation_matrix(collection)
        assert determinant_bareiss(m) == determinant_cofactor(m)
        assert adjugate_sum(m) == adjugate_sum_by_rank_one(m)
        assert determinant(m)(2) == leibniz_det(evaluated(collection, 2))

    @given(st.integers(2, 3), st.data())
    @settings(max_examples=60, deadline=None)
    def test_two_word_coefficient_staircase(self, p_minus_one, data):
        p = p_minus_one + 1
        q = data.draw(st.integers(2, 4))
        letters = st.lists(st.integers(0, q - 1), min_size=p, max_size=p).map(tuple)
        u, w = data.draw(st.lists(letters, min_size=2, max_size=2, unique=True))
        assert coefficient_staircase_ok(WordCollection(q, (Word(u, q), Word(w, q))))


class TestSturm:
    def test_counts_distinct_roots(self):
        f = IntPolynomial.from_roots([1, 2, 3])
        assert count_real_roots(f, 0, 3) == 3
        assert count_real_roots(f, 0, Fraction(5, 2)) == 2
        assert count_real_roots(f, 3, 10) == 0

    def test_repeated_roots_count_once(self):
        f = IntPolynomial.from_roots([1, 1, 2])
        assert count_real_roots(f, 0, 3) == 2

    def test_no_real_roots(self):
        assert count_real_roots(Z ** 2 + 1, -10, 10) == 0

    def test_chain_ends_in_a_constant(self):
        sturm = SturmSequence(IntPolynomial.from_roots([-1, 2, 5]))
        assert sturm.chain[-1].degree == 0
        assert sturm.chain[0] == sturm.base

    def test_constant_polynomial(self):
        sturm = SturmSequence(IntPolynomial((-7,)))
        assert sturm.count(-5, 5) == 0

    def test_zero_polynomial(self):
        with pytest.raises(ValueError):
            SturmSequence(IntPolynomial())

    @given(
        st.lists(st.integers(-5, 5), min_size=1, max_size=6),
        st.integers(0, 2),
        st.fractions(-8, 8, max_denominator=7),
        st.fractions(-8, 8, max_denominator=7),
    )
    @settings(max_examples=100, deadline=None)
    def test_against_known_roots(self, roots, complex_pairs, a, b):
        f = IntPolynomial.from_roots(roots) * (Z ** 2 + 1) ** complex_pairs
        expected = len({r for r in roots if a < r <= b})
        assert count_real_roots(f, a, b) == expected
