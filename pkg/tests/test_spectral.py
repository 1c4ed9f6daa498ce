"""Avoidance automata, word counts and both Perron root engines."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import abstract, digits
from subshift_escape.errors import CapExceeded, EmptySubshift, InsufficientAlphabet
from subshift_escape.spectral import (
    PerronResult,
    _states_reaching,
    brute_force_count,
    build_avoidance_automaton,
    count_words,
    is_allowed_word,
    is_irreducible,
    nontrivial_components,
    perron_root,
    perron_root_matrix,
    perron_root_poly,
    recurrent_states,
    spectral_radius,
    strongly_connected_components,
    topological_entropy,
    transfer_matrix,
    transition_digraph,
    value_inside,
)
from subshift_escape.words import Word, WordCollection, is_subword, permute_collection

GOLDEN = (1 + math.sqrt(5)) / 2


@st.composite
def forbidden_collections(draw, q_max=4, max_length=4, t_max=3):
    q = draw(st.integers(2, q_max))
    raw = draw(st.lists(
        st.lists(st.integers(0, q - 1), min_size=2, max_size=max_length).map(tuple),
        min_size=1, max_size=t_max, unique=True,
    ))
    chosen: list[Word] = []
    for symbols in sorted(raw, key=len):
        word = Word(symbols, q)
        if not any(is_subword(u, word) for u in chosen):
            chosen.append(word)
    return WordCollection(q, tuple(chosen))


class TestCounting:
    @pytest.mark.parametrize("forbidden, q, n, expected", [
        ("11", 2, 5, 13),
        ("00,11", 3, 2, 7),
        ("", 2, 3, 8),
        ("00,11", 2, 7, 2),
        ("0,1", 2, 1, 0),
    ])
    def test_examples(self, forbidden, q, n, expected):
        collection = digits(forbidden, q) if forbidden else WordCollection(q)
        assert count_words(build_avoidance_automaton(collection, q), n) == expected
        assert brute_force_count(collection, q, n) == expected

    def test_length_zero(self):
        assert count_words(build_avoidance_automaton(digits("11", 2), 2), 0) == 1

    def test_brute_force_cap(self):
        with pytest.raises(CapExceeded):
            brute_force_count(digits("00", 4), 4, 12, cap=1000)

    def test_word_too_large_for_the_alphabet(self):
        with pytest.raises(InsufficientAlphabet):
            build_avoidance_automaton(digits("02", 3), 2)

    def test_dead_states_are_pruned(self):
        automaton = build_avoidance_automaton(digits("011", 2), 2)
        assert automaton.size == 3
        assert [automaton.label_text(s) for s in range(automaton.size)] == ["", "0", "01"]

    @given(forbidden_collections(), st.integers(0, 7))
    @settings(max_examples=80, deadline=None)
    def test_automaton_matches_brute_force(self, collection, n):
        q = collection.alphabet_size
        automaton = build_avoidance_automaton(collection, q)
        assert count_words(automaton, n) == brute_force_count(collection, q, n)

    @given(forbidden_collections(), st.integers(0, 10))
    @settings(max_examples=60, deadline=None)
    def test_counts_grow_at_most_by_q(self, collection, n):
        q = collection.alphabet_size
        automaton = build_avoidance_automaton(collection, q)
        assert count_words(automaton, n + 1) <= q * count_words(automaton, n)


class TestComponents:
    def test_cycle_is_irreducible(self):
        assert is_irreducible(np.array([[0, 1], [1, 0]]))

    def test_two_loops_are_not(self):
        matrix = np.array([[1, 0], [0, 1]])
        assert len(strongly_connected_components(matrix)) == 2
        assert not is_irreducible(matrix)

    def test_transient_states_carry_no_cycle(self):
        matrix = np.array([[0, 1, 0], [0, 1, 1], [0, 1, 0]])
        assert [sorted(c) for c in nontrivial_components(matrix)] == [[1, 2]]

    def test_components_are_sorted_by_smallest_state(self):
        matrix = np.array([[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0]])
        assert strongly_connected_components(matrix) == [[0, 2, 3], [1]]
        assert transition_digraph(matrix).has_edge(1, 1)

    def test_states_reaching_a_cycle(self):
        # 0 -> 1 -> 2 <-> 3, and 4 is a sink
        matrix = np.zeros((5, 5), dtype=np.int64)
        for s, t in [(0, 1), (1, 2), (2, 3), (3, 2), (1, 4)]:
            matrix[s, t] = 1
        assert recurrent_states(matrix) == [2, 3]
        assert _states_reaching(matrix, {2, 3}) == {0, 1, 2, 3}
        assert _states_reaching(matrix, set()) == set()

    def test_transfer_matrix_json(self):
        transfer = transfer_matrix(build_avoidance_automaton(digits("11", 2), 2))
        payload = transfer.to_json()
        assert payload["dimension"] == 2
        assert payload["labels"] == ["", "1"]
        assert sorted(map(tuple, payload["entries"])) == [(0, 0, 1), (0, 1, 1), (1, 0, 1)]


class TestPerronRoot:
    def test_golden_mean(self):
        result = perron_root(digits("11", 2), 2)
        assert result.value == pytest.approx(GOLDEN, abs=1e-10)
        assert result.lo <= Fraction(result.value) <= result.hi

    def test_exact_root_one(self):
        result = perron_root(digits("00,11", 2), 2)
        assert result.lo == result.hi == 1

    def test_full_shift(self):
        result = perron_root(WordCollection(5), 5)
        assert result.method == "exact"
        assert result.value == 5

    def test_rational_root_is_exact(self):
        result = perron_root_poly(abstract("ab,ac", 3), 3)
        assert result.lo == result.hi == 2

    def test_five_forbidden_blocks(self):
        result = perron_root(digits("02,10,11,21,22", 3), 3)
        assert result.value == pytest.approx(1.466, abs=5e-4)

    def test_empty_subshift_falls_back_to_the_matrix_engine(self):
        result = perron_root(digits("0,1", 2), 2)
        assert result.hi == 0
        assert result.diagnostics["polynomial_root"] == "none"

    def test_bracket_width_follows_the_tolerance(self):
        result = perron_root_poly(abstract("aab,abb", 4), 4, tol=1e-6)
        assert result.width <= Fraction(1e-6) * result.hi

    def test_spectral_radius_of_a_reducible_matrix(self):
        automaton = build_avoidance_automaton(digits("01,10", 2), 2)
        result = spectral_radius(transfer_matrix(automaton))
        assert result.diagnostics["components"] == 2
        assert result.value == pytest.approx(1.0)

    def test_engine_gap_is_absolute(self):
        result = perron_root(digits("11", 9), 9)
        assert result.value > 8
        assert result.diagnostics["engine_gap"] <= 1e-9
        assert "engine_disagreement" not in result.diagnostics

    def test_result_json(self):
        payload = PerronResult.exact(Fraction(3, 2)).to_json()
        assert payload["lo"] == payload["hi"] == "3/2"

    def test_value_inside(self):
        lo, hi = Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10 ** 40)
        assert lo <= Fraction(value_inside(lo, hi)) <= hi

    @given(forbidden_collections(q_max=4, max_length=4, t_max=3))
    @settings(max_examples=60, deadline=None)
    def test_engines_agree_on_irreducible_subshifts(self, collection):
        q = collection.alphabet_size
        matrix = transfer_matrix(build_avoidance_automaton(collection, q)).matrix
        if not is_irreducible(matrix):
            return
        by_matrix = perron_root_matrix(collection, q)
        by_poly = perron_root_poly(collection, q)
        assert abs(by_poly.value - by_matrix.value) <= 1e-9

    @given(forbidden_collections(q_max=4, max_length=3, t_max=3), st.data())
    @settings(max_examples=40, deadline=None)
    def test_invariant_under_symbol_permutation(self, collection, data):
        q = collection.alphabet_size
        perm = data.draw(st.permutations(range(q)))
        image = permute_collection(collection, perm)
        assert perron_root(image, q).value == pytest.approx(perron_root(collection, q).value, abs=1e-9)


class TestEntropy:
    def test_full_shift(self):
        assert topological_entropy(WordCollection(4), 4).value == pytest.approx(math.log(4))

    def test_golden_mean(self):
        assert topological_entropy(digits("11", 2), 2).value == pytest.approx(math.log(GOLDEN), abs=1e-10)

    def test_zero_entropy(self):
        assert topological_entropy(digits("00,11", 2), 2).value == 0.0

    def test_empty_subshift(self):
        with pytest.raises(EmptySubshift):
            topological_entropy(digits("0,1", 2), 2)

    def test_json(self):
        payload = topological_entropy(digits("11", 2), 2).to_json()
        assert set(payload) == {"entropy", "lo", "hi", "theta"}


class TestAllowedWords:
    def test_golden_mean(self):
        automaton = build_avoidance_automaton(digits("11", 2), 2)
        assert is_allowed_word(automaton, Word((1, 0, 1), 2))
        assert not is_allowed_word(automaton, Word((0, 1, 1), 2))

    def test_word_that_cannot_be_extended(self):
        automaton = build_avoidance_automaton(digits("00,01", 2), 2)
        assert is_allowed_word(automaton, Word((1, 1), 2))
        assert not is_allowed_word(automaton, Word((1, 0), 2))
