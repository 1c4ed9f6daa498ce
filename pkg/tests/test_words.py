"""Words, parsing, correlations and minimal periods."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import abstract, digits
from subshift_escape.errors import BadCharacter, InsufficientAlphabet, NotReduced
from subshift_escape.poly import IntPolynomial
from subshift_escape.words import (
    Word,
    WordCollection,
    WordMode,
    all_words,
    correlation,
    format_word,
    has_zero_cross_correlations,
    is_subword,
    minimal_period_from_autocorrelation,
    minimal_period_hole,
    minimal_period_word,
    parse_collection,
    parse_word,
    permute_collection,
    permute_symbols,
    symbols_used,
    union,
)


@st.composite
def words(draw, q_min=2, q_max=4, max_length=8):
    q = draw(st.integers(q_min, q_max))
    symbols = draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=max_length))
    return Word(tuple(symbols), q)


@st.composite
def word_pairs(draw, max_length=7):
    q = draw(st.integers(2, 4))
    letters = st.integers(0, q - 1)
    u = draw(st.lists(letters, min_size=1, max_size=max_length))
    w = draw(st.lists(letters, min_size=1, max_size=max_length))
    perm = draw(st.permutations(range(q)))
    return Word(tuple(u), q), Word(tuple(w), q), perm


class TestParsing:
    def test_digit_mode(self):
        assert parse_word("102", 3) == Word((1, 0, 2), 3)
        assert parse_word("a9", 11) == Word((10, 9), 11)

    def test_abstract_mode_maps_by_first_occurrence(self):
        assert parse_word("bab", 2, WordMode.ABSTRACT) == Word((0, 1, 0), 2)

    def test_abstract_mapping_is_shared_across_a_collection(self):
        collection = parse_collection("ab,ca", 3, WordMode.ABSTRACT)
        assert [w.symbols for w in collection] == [(0, 1), (2, 0)]

    def test_braces_and_spaces_are_ignored(self):
        assert parse_collection("{01, 10}", 2).texts() == ["01", "10"]

    @pytest.mark.parametrize("text, mode", [("1-2", WordMode.DIGIT), ("aB", WordMode.ABSTRACT), ("", WordMode.DIGIT)])
    def test_bad_character(self, text, mode):
        with pytest.raises(BadCharacter):
            parse_word(text, 4, mode)

    def test_insufficient_alphabet(self):
        with pytest.raises(InsufficientAlphabet):
            parse_collection("ab,cd", 3, WordMode.ABSTRACT)
        with pytest.raises(InsufficientAlphabet):
            parse_word("3", 3)
        with pytest.raises(InsufficientAlphabet):
            WordCollection(1)

    def test_not_reduced(self):
        with pytest.raises(NotReduced):
            digits("0,01", 2)
        with pytest.raises(NotReduced):
            digits("01,01", 2)

    def test_format_word(self):
        assert format_word(Word((0, 1, 0), 2), WordMode.ABSTRACT) == "aba"
        assert str(Word((10, 35), 36)) == "az"
        assert str(Word((3, 40), 41)) == "3.40"


class TestCollections:
    def test_properties(self):
        collection = abstract("aab,bba")
        assert collection.t == 2
        assert collection.p == 3
        assert collection.is_equal_length

    def test_mixed_lengths_have_no_common_length(self):
        with pytest.raises(ValueError):
            _ = digits("01,112", 3).p

    def test_union_rejects_a_word_inside_another(self):
        with pytest.raises(NotReduced):
            union(digits("00", 2), digits("000", 2))

    def test_union_drops_duplicates(self):
        assert union(digits("00,11", 3), digits("11,12", 3)).texts() == ["00", "11", "12"]

    def test_is_subword(self):
        assert is_subword(Word((1, 0), 2), Word((0, 1, 0), 2))
        assert not is_subword(Word((1, 1), 2), Word((0, 1, 0), 2))

    def test_symbols_used(self):
        assert symbols_used(abstract("abc,bbd", 6)) == 4
        assert symbols_used(digits("00", 5)) == 1
        assert symbols_used(WordCollection(3)) == 0


class TestCorrelation:
    @pytest.mark.parametrize("u, w, expected", [
        ("aba", "aca", "1"),
        ("aa", "aa", "z+1"),
        ("aba", "aba", "z^2+1"),
        ("abc", "def", "0"),
        ("aab", "abb", "z"),
    ])
    def test_examples(self, u, w, expected):
        mapping: dict[str, int] = {}
        first = parse_word(u, 36, WordMode.ABSTRACT, mapping)
        second = parse_word(w, 36, WordMode.ABSTRACT, mapping)
        assert str(correlation(first, second)) == expected

    def test_mixed_lengths(self):
        # the shorter word still contributes where it overlaps a suffix
        assert correlation(Word((0, 1, 0), 2), Word((0,), 2)) == IntPolynomial((1, 0, 1))
        assert correlation(Word((0,), 2), Word((0, 1, 0), 2)) == IntPolynomial((1,))

    @given(words())
    @settings(max_examples=100)
    def test_autocorrelation_is_monic_of_degree_length_minus_one(self, u):
        auto = correlation(u, u)
        assert auto.degree == len(u) - 1
        assert auto.leading == 1
        assert set(auto.coeffs) <= {0, 1}

    @given(word_pairs())
    @settings(max_examples=100)
    def test_cross_correlation_degree(self, pair):
        u, w, _ = pair
        if u == w or len(u) != len(w):
            return
        assert correlation(u, w).degree <= len(u) - 2

    @given(word_pairs())
    @settings(max_examples=100)
    def test_invariant_under_symbol_permutation(self, pair):
        u, w, perm = pair
        assert correlation(permute_symbols(u, perm), permute_symbols(w, perm)) == correlation(u, w)


class TestMinimalPeriod:
    @pytest.mark.parametrize("text, expected", [("aaa", 1), ("aba", 2), ("abab", 2), ("abc", 3), ("aabaa", 3)])
    def test_word_examples(self, text, expected):
        word = parse_word(text, 36, WordMode.ABSTRACT)
        assert minimal_period_word(word) == expected

    def test_digit_example(self):
        assert minimal_period_word(Word((1, 0, 0, 0, 0), 2)) == 5

    def test_hole_examples(self):
        assert minimal_period_hole(digits("01000,10000", 2)) == 4
        assert minimal_period_hole(abstract("abc,bcd")) == 3

    def test_empty_hole(self):
        with pytest.raises(ValueError):
            minimal_period_hole(WordCollection(2))

    @pytest.mark.parametrize("q, p", [(2, p) for p in range(1, 7)] + [(3, p) for p in range(1, 7)])
    def test_both_definitions_agree_exhaustively(self, q, p):
        for word in all_words(q, p):
            assert minimal_period_word(word) == minimal_period_from_autocorrelation(word), word

    @given(words(max_length=12))
    @settings(max_examples=200)
    def test_both_definitions_agree(self, word):
        assert minimal_period_word(word) == minimal_period_from_autocorrelation(word)


class TestZeroCrossCorrelations:
    def test_examples(self):
        assert has_zero_cross_correlations(abstract("aaaa,bbbb"))
        assert not has_zero_cross_correlations(abstract("abc,bcd"))
        assert has_zero_cross_correlations(abstract("aba"))

    def test_permuted_collection_keeps_the_property(self):
        collection = digits("0000,1111", 3)
        image = permute_collection(collection, [2, 0, 1])
        assert image.texts() == ["2222", "0000"]
        assert has_zero_cross_correlations(image)

    def test_permutation_must_be_a_bijection(self):
        with pytest.raises(ValueError):
            permute_symbols(Word((0, 1), 2), [0, 0])
