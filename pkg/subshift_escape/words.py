"""
Words and Word Collections

This module holds the symbolic layer: immutable words over a q-letter
alphabet, reduced word collections, correlation polynomials and minimal
periods.

Key Components:
- Word: an immutable tuple of symbol indices in [0, q)
- WordCollection: a reduced collection (no word inside another)
- parse_word / parse_collection: digit ("102") and abstract ("aba") text modes
- correlation: the 0/1 overlap polynomial of two words
- minimal_period_word / minimal_period_hole: periods by self-overlap
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, permutations, product

from subshift_escape.errors import BadCharacter, InsufficientAlphabet, NotReduced
from subshift_escape.poly import IntPolynomial

logger = logging.getLogger(__name__)

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
MAX_TEXT_ALPHABET = len(DIGITS)


class WordMode(str, Enum):
    """Text encodings accepted by parse_word."""

    DIGIT = "digit"
    ABSTRACT = "abstract"


@dataclass(frozen=True, order=True)
class Word:
    """
    A finite word over the alphabet {0, ..., q-1}.

    Attributes:
        symbols: Symbol indices, each in [0, q)
        q: Alphabet size the word was declared over
    """

    symbols: tuple[int, ...]
    q: int = field(compare=True)

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if not self.symbols:
            raise ValueError("a word has length at least 1")
        if self.q < 1:
            raise InsufficientAlphabet(f"alphabet size must be positive, got {self.q}")
        bad = [s for s in self.symbols if not 0 <= s < self.q]
        if bad:
            raise InsufficientAlphabet(
                f"symbol {max(bad)} does not fit an alphabet of {self.q} symbols"
            )

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, index):
        return self.symbols[index]

    def __str__(self) -> str:
        return format_word(self)

    def over(self, q: int) -> "Word":
        """The same symbols declared over another alphabet size."""
        return self if q == self.q else Word(self.symbols, q)


def format_word(word: Word, mode: WordMode | str = WordMode.DIGIT) -> str:
    """
    Text of a word: digit mode renders symbols from 0-9a-z (dotted indices
    above 36 symbols), abstract mode renders symbol k as the k-th letter.
    """
    mode = WordMode(mode)
    if mode is WordMode.ABSTRACT:
        if max(word.symbols) >= 26:
            raise InsufficientAlphabet(f"abstract mode covers 26 letters, word uses symbol {max(word.symbols)}")
        return "".join(chr(ord("a") + s) for s in word.symbols)
    if word.q <= MAX_TEXT_ALPHABET:
        return "".join(DIGITS[s] for s in word.symbols)
    return ".".join(str(s) for s in word.symbols)


def _map_character(char: str, q: int, mode: WordMode, mapping: dict[str, int]) -> int:
    if mode is WordMode.DIGIT:
        index = DIGITS.find(char.lower())
        if index < 0:
            raise BadCharacter(f"character {char!r} is not one of 0-9a-z")
    else:
        if not ("a" <= char <= "z"):
            raise BadCharacter(f"character {char!r} is not a lowercase letter")
        if char not in mapping:
            mapping[char] = len(mapping)
        index = mapping[char]
    if index >= q:
        raise InsufficientAlphabet(
            f"character {char!r} needs symbol {index}, alphabet has only {q} symbols"
        )
    return index


def parse_word(
    text: str,
    q: int,
    mode: WordMode | str = WordMode.DIGIT,
    mapping: dict[str, int] | None = None,
) -> Word:
    """
    Parse a word from text.

    In digit mode each character of 0-9a-z maps to its position in that
    string. In abstract mode letters map to 0, 1, 2, ... in order of first
    occurrence; pass the same mapping dict for every word of a collection so
    the order is shared across the whole collection.

    Args:
        text: Word text, e.g. "102" or "aba"
        q: Alphabet size
        mode: WordMode.DIGIT or WordMode.ABSTRACT
        mapping: Shared letter-to-index map for abstract mode (updated in place)

    Returns:
        Word: The parsed word

    Raises:
        BadCharacter: If a character is not valid for the mode
        InsufficientAlphabet: If a mapped index is >= q
    """
    mode = WordMode(mode)
    text = text.strip()
    if not text:
        raise BadCharacter("empty word")
    if mapping is None:
        mapping = {}
    return Word(tuple(_map_character(c, q, mode, mapping) for c in text), q)


def split_words(text: str) -> list[str]:
    """Split a comma-separated word list, dropping braces and blanks."""
    cleaned = text.strip().strip("{}")
    return [part.strip() for part in cleaned.split(",") if part.strip()]


def parse_collection(
    text: str | Sequence[str],
    q: int,
    mode: WordMode | str = WordMode.DIGIT,
    mapping: dict[str, int] | None = None,
) -> "WordCollection":
    """
    Parse a comma-separated collection such as "aa,bb" or "{01, 10}".

    Abstract letters share one first-occurrence map across all words.
    """
    parts = split_words(text) if isinstance(text, str) else list(text)
    if mapping is None:
        mapping = {}
    words = [parse_word(part, q, mode, mapping) for part in parts]
    return WordCollection(q, tuple(words))


def is_subword(u: Word, w: Word) -> bool:
    """True if u occurs as a contiguous block of w."""
    n, m = len(u), len(w)
    if n > m:
        return False
    return any(w.symbols[i:i + n] == u.symbols for i in range(m - n + 1))


@dataclass(frozen=True)
class WordCollection:
    """
    A reduced collection of distinct words over one alphabet.

    Reducedness (no word occurs inside another) is checked at construction.
    The empty collection is allowed and stands for "nothing forbidden".

    Attributes:
        alphabet_size: q >= 2
        words: The words, in the order given
    """

    alphabet_size: int
    words: tuple[Word, ...] = ()

    def __post_init__(self):
        if self.alphabet_size < 2:
            raise InsufficientAlphabet(f"alphabet size must be at least 2, got {self.alphabet_size}")
        words = tuple(w.over(self.alphabet_size) for w in self.words)
        object.__setattr__(self, "words", words)
        seen = set()
        for w in words:
            if w.symbols in seen:
                raise NotReduced(f"word {w} appears twice")
            seen.add(w.symbols)
        for u, w in permutations(words, 2):
            if len(u) < len(w) and is_subword(u, w):
                raise NotReduced(f"word {u} occurs inside {w}")

    @classmethod
    def of(cls, q: int, *words: Sequence[int]) -> "WordCollection":
        """Build a collection from raw symbol sequences."""
        return cls(q, tuple(Word(tuple(w), q) for w in words))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __str__(self) -> str:
        return "{" + ",".join(format_word(w) for w in self.words) + "}"

    @property
    def t(self) -> int:
        return len(self.words)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.words)

    @property
    def is_equal_length(self) -> bool:
        return len(set(self.lengths)) <= 1

    @property
    def p(self) -> int:
        """Common word length; raises ValueError on mixed lengths."""
        if not self.words or not self.is_equal_length:
            raise ValueError(f"collection {self} has no common word length")
        return self.lengths[0]

    def texts(self) -> list[str]:
        return [format_word(w) for w in self.words]

    def sorted(self) -> "WordCollection":
        return WordCollection(self.alphabet_size, tuple(sorted(self.words)))

    def over(self, q: int) -> "WordCollection":
        """Re-declare the collection over a (possibly larger) alphabet."""
        return WordCollection(q, tuple(w.over(q) for w in self.words))


def union(first: WordCollection, second: WordCollection) -> WordCollection:
    """
    F ∪ G with duplicates removed, order preserved.

    Raises:
        NotReduced: If a word of one collection occurs inside a word of the other
    """
    if first.alphabet_size != second.alphabet_size:
        raise ValueError(
            f"alphabet sizes differ: {first.alphabet_size} and {second.alphabet_size}"
        )
    merged: list[Word] = list(first.words)
    for w in second.words:
        if w.symbols not in {u.symbols for u in merged}:
            merged.append(w)
    return WordCollection(first.alphabet_size, tuple(merged))


def symbols_used(collection: WordCollection) -> int:
    """Number of distinct symbols occurring in the collection."""
    return len({s for w in collection for s in w})


def correlation(u: Word, w: Word) -> IntPolynomial:
    """
    Correlation polynomial (u, w)_z.

    Coefficient b_l (1 <= l <= |u|) is 1 when the suffix of u starting at
    position l agrees with w on their overlap of length
    min(|u| - l + 1, |w|); it sits on z^(|u| - l).

    Args:
        u: First word
        w: Second word

    Returns:
        IntPolynomial: Polynomial with 0/1 coefficients
    """
    p1, p2 = len(u), len(w)
    coeffs = [0] * p1
    for ell in range(1, p1 + 1):
        suffix = u.symbols[ell - 1:]
        overlap = min(len(suffix), p2)
        if suffix[:overlap] == w.symbols[:overlap]:
            coeffs[p1 - ell] = 1
    return IntPolynomial(coeffs)


def minimal_period_word(u: Word) -> int:
    """Smallest l >= 1 with u[i + l] == u[i] for every valid i; |u| if none."""
    p = len(u)
    for ell in range(1, p):
        if u.symbols[ell:] == u.symbols[:p - ell]:
            return ell
    return p


def minimal_period_from_autocorrelation(u: Word) -> int:
    """Minimal period read off the gap below the leading term of (u, u)_z."""
    auto = correlation(u, u)
    p = len(u)
    lower = [k for k, c in enumerate(auto.coeffs[:-1]) if c]
    if not lower:
        return p
    return p - 1 - max(lower)


def minimal_period_hole(collection: WordCollection) -> int:
    """τ_G: the smallest minimal period over the words of a nonempty collection."""
    if not collection.words:
        raise ValueError("minimal period of an empty collection is undefined")
    return min(minimal_period_word(w) for w in collection)


def has_zero_cross_correlations(collection: WordCollection) -> bool:
    """True iff (u, w)_z = 0 for every ordered pair of distinct words."""
    for u, w in combinations(collection.words, 2):
        if not correlation(u, w).is_zero() or not correlation(w, u).is_zero():
            return False
    return True


def _check_permutation(perm: Sequence[int], q: int) -> None:
    if sorted(perm) != list(range(q)):
        raise ValueError(f"{list(perm)} is not a permutation of range({q})")


def permute_symbols(word: Word, perm: Sequence[int]) -> Word:
    """Symbol-wise image of word under perm, a bijection on [0, q)."""
    _check_permutation(perm, word.q)
    return Word(tuple(perm[s] for s in word.symbols), word.q)


def permute_collection(collection: WordCollection, perm: Sequence[int]) -> WordCollection:
    _check_permutation(perm, collection.alphabet_size)
    return WordCollection(
        collection.alphabet_size,
        tuple(Word(tuple(perm[s] for s in w.symbols), w.q) for w in collection),
    )


def all_words(q: int, p: int) -> Iterable[Word]:
    """Every word of length p over q symbols, in lexicographic order."""
    for symbols in product(range(q), repeat=p):
        yield Word(symbols, q)
