"""
Collection Enumeration and Sampling

Exhaustive suites walk one representative per orbit of the symbol
permutation action; sampled suites draw seeded random collections whose
words are periodic extensions of random blocks, so every minimal period
shows up with useful frequency.
"""

import logging
import random
from collections.abc import Iterator
from itertools import combinations, permutations, product
from math import comb, factorial

from subshift_escape.config import get_settings
from subshift_escape.errors import CapExceeded, NotReduced
from subshift_escape.words import Word, WordCollection, has_zero_cross_correlations

logger = logging.getLogger(__name__)

Symbols = tuple[int, ...]


def is_restricted_growth(symbols: Symbols) -> bool:
    """True if symbols first appear in the order 0, 1, 2, ..."""
    seen = -1
    for s in symbols:
        if s > seen + 1:
            return False
        seen = max(seen, s)
    return True


def _used_symbols(words: tuple[Symbols, ...]) -> list[int]:
    return sorted({s for w in words for s in w})


def canonical_form(words: tuple[Symbols, ...]) -> tuple[Symbols, ...]:
    """
    Lexicographically smallest sorted tuple over all symbol relabellings.

    Only bijections from the used symbols onto 0..k-1 need checking: any
    other relabelling compresses to one of these without growing a word.
    """
    used = _used_symbols(words)
    best: tuple[Symbols, ...] | None = None
    for image in permutations(range(len(used))):
        relabel = dict(zip(used, image))
        candidate = tuple(sorted(tuple(relabel[s] for s in w) for w in words))
        if best is None or candidate < best:
            best = candidate
    return best if best is not None else ()


def automorphism_count(words: tuple[Symbols, ...]) -> int:
    """Number of relabellings of the used symbols that fix the collection."""
    used = _used_symbols(words)
    target = tuple(sorted(words))
    count = 0
    for image in permutations(used):
        relabel = dict(zip(used, image))
        if tuple(sorted(tuple(relabel[s] for s in w) for w in words)) == target:
            count += 1
    return count


def orbit_size(words: tuple[Symbols, ...], q: int) -> int:
    """Size of the orbit of a collection under all permutations of q symbols."""
    k = len(_used_symbols(words))
    return factorial(q) // factorial(q - k) // automorphism_count(words)


def raw_collection_count(q: int, p: int, t: int) -> int:
    """Number of t-element sets of length-p words over q symbols."""
    return comb(q ** p, t)


def enumerate_canonical_collections(
    q: int,
    p: int,
    t: int,
    cap: int | None = None,
) -> Iterator[WordCollection]:
    """
    One representative per symbol-permutation orbit of t distinct words of
    length p, in canonical form and lexicographic order.

    Raises:
        CapExceeded: If q^(p t) exceeds the enumeration cap
    """
    cap = cap if cap is not None else get_settings().enumeration_cap
    if q ** (p * t) > cap:
        raise CapExceeded(f"enumerating {q}^{p * t} word tuples exceeds the cap {cap}")
    all_symbols = list(product(range(q), repeat=p))
    emitted = 0
    for first_index, first in enumerate(all_symbols):
        # the smallest word of a canonical collection is a restricted growth string
        if not is_restricted_growth(first):
            continue
        for rest in combinations(all_symbols[first_index + 1:], t - 1):
            words = (first,) + rest
            if canonical_form(words) != words:
                continue
            emitted += 1
            yield WordCollection(q, tuple(Word(w, q) for w in words))
    logger.debug(f"[Enumeration] q={q} p={p} t={t}: {emitted} canonical collections")


def random_periodic_word(q: int, p: int, rng: random.Random, pool: int | None = None) -> Word:
    """Periodic extension of a random block of random length 1..p."""
    pool = min(pool or q, q)
    period = rng.randint(1, p)
    block = [rng.randrange(pool) for _ in range(period)]
    return Word(tuple(block[i % period] for i in range(p)), q)


def random_collection(
    q: int,
    p: int,
    t: int,
    rng: random.Random,
    pool: int | None = None,
    zero_cross: bool = False,
    max_attempts: int = 10_000,
) -> WordCollection:
    """
    t distinct random words of length p.

    Args:
        pool: Draw symbols from the first `pool` symbols only
        zero_cross: Require vanishing cross-correlations

    Raises:
        ValueError: If no collection qualifies within max_attempts
    """
    for _ in range(max_attempts):
        words = {random_periodic_word(q, p, rng, pool).symbols for _ in range(t)}
        if len(words) < t:
            continue
        collection = WordCollection(q, tuple(Word(w, q) for w in sorted(words)))
        if zero_cross and not has_zero_cross_correlations(collection):
            continue
        return collection
    raise ValueError(f"no collection with q={q} p={p} t={t} found in {max_attempts} attempts")


def random_mixed_collection(
    q: int,
    max_length: int,
    t: int,
    rng: random.Random,
    max_attempts: int = 10_000,
) -> WordCollection:
    """t distinct random words of lengths 1..max_length forming a reduced collection."""
    for _ in range(max_attempts):
        words = {random_periodic_word(q, rng.randint(1, max_length), rng).symbols for _ in range(t)}
        if len(words) < t:
            continue
        try:
            return WordCollection(q, tuple(Word(w, q) for w in sorted(words)))
        except NotReduced:
            continue
    raise ValueError(f"no reduced collection with q={q} found in {max_attempts} attempts")


def random_permutation(q: int, rng: random.Random) -> list[int]:
    perm = list(range(q))
    rng.shuffle(perm)
    return perm
