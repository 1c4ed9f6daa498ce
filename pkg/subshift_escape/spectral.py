"""
Spectral Engines

Automata for avoidance languages, exact word counting and the two Perron
root engines:

- the matrix engine: power iteration on T + I per strongly connected
  component, certified by an exact Collatz–Wielandt bracket
- the polynomial engine: the largest real root of (z - q)Δ(z) + S(z),
  isolated with Sturm counts and bisected in exact rationals

The matrix engine is the reference; the polynomial engine is the fast path.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any

import networkx as nx
import numpy as np

from subshift_escape.config import get_settings
from subshift_escape.errors import (
    CapExceeded,
    EmptySubshift,
    InsufficientAlphabet,
    NoRealRootFound,
    NonConvergence,
)
from subshift_escape.poly import SturmSequence, perron_polynomial
from subshift_escape.words import DIGITS, Word, WordCollection

logger = logging.getLogger(__name__)


def _fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PerronResult:
    """
    A Perron root with a certified exact bracket.

    Attributes:
        value: Float estimate, lo <= value <= hi
        lo: Exact lower end of the bracket
        hi: Exact upper end of the bracket
        method: "matrix", "polynomial" or "exact"
        iterations: Power iterations or bisection steps spent
        diagnostics: Free-form provenance (components, engine gap, ...)
    """

    value: float
    lo: Fraction
    hi: Fraction
    method: str
    iterations: int = 0
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def exact(cls, value: int | Fraction, method: str = "exact", **diagnostics) -> "PerronResult":
        v = Fraction(value)
        return cls(float(v), v, v, method, 0, dict(diagnostics))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def to_json(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "lo": _fraction_text(self.lo),
            "hi": _fraction_text(self.hi),
            "method": self.method,
            "iterations": self.iterations,
            "diagnostics": self.diagnostics,
        }


def value_inside(lo: Fraction, hi: Fraction) -> float:
    """Float midpoint nudged so that lo <= value <= hi holds exactly."""
    value = float((lo + hi) / 2)
    if Fraction(value) < lo:
        value = math.nextafter(value, math.inf)
    elif Fraction(value) > hi:
        value = math.nextafter(value, -math.inf)
    return value


# ---------------------------------------------------------------------------
# Automaton
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AvoidanceAutomaton:
    """
    Aho–Corasick automaton of the words avoiding a forbidden collection.

    Live states are prefixes of forbidden words that contain no forbidden
    word. transitions[s][a] is the next live state or None (dead).
    State 0 is the empty prefix.
    """

    q: int
    labels: tuple[tuple[int, ...], ...]
    transitions: tuple[tuple[int | None, ...], ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def label_text(self, state: int) -> str:
        label = self.labels[state]
        return "".join(DIGITS[s] for s in label) if self.q <= len(DIGITS) else ".".join(map(str, label))


def build_avoidance_automaton(forbidden: WordCollection, q: int) -> AvoidanceAutomaton:
    """
    Build the avoidance automaton for a reduced collection over q symbols.

    Args:
        forbidden: Forbidden words
        q: Alphabet size

    Returns:
        AvoidanceAutomaton: Live-state automaton; paths from state 0 of
        length n are exactly the allowed words of length n

    Raises:
        InsufficientAlphabet: If a forbidden word uses a symbol >= q
    """
    for w in forbidden:
        if max(w.symbols) >= q:
            raise InsufficientAlphabet(f"word {w} does not fit an alphabet of {q} symbols")

    # Step 1: trie of all prefixes
    children: list[dict[int, int]] = [{}]
    labels: list[tuple[int, ...]] = [()]
    terminal = [False]
    for w in forbidden:
        node = 0
        for a in w.symbols:
            if a not in children[node]:
                children.append({})
                labels.append(labels[node] + (a,))
                terminal.append(False)
                children[node][a] = len(children) - 1
            node = children[node][a]
        terminal[node] = True

    # Step 2: failure links and complete transitions in BFS order
    n = len(children)
    fail = [0] * n
    delta = [[0] * q for _ in range(n)]
    dead = list(terminal)
    queue: deque[int] = deque()
    for a in range(q):
        child = children[0].get(a)
        if child is None:
            delta[0][a] = 0
        else:
            delta[0][a] = child
            fail[child] = 0
            queue.append(child)
    while queue:
        node = queue.popleft()
        dead[node] = dead[node] or dead[fail[node]]
        for a in range(q):
            child = children[node].get(a)
            if child is None:
                delta[node][a] = delta[fail[node]][a]
            else:
                fail[child] = delta[fail[node]][a]
                delta[node][a] = child
                queue.append(child)

    # Step 3: drop dead states and renumber
    live = [s for s in range(n) if not dead[s]]
    index = {s: i for i, s in enumerate(live)}
    transitions = tuple(
        tuple(index.get(delta[s][a]) for a in range(q)) for s in live
    )
    automaton = AvoidanceAutomaton(q, tuple(labels[s] for s in live), transitions)
    logger.debug(f"[Automaton] {forbidden} over q={q}: {automaton.size} live states")
    return automaton


def word_state(automaton: AvoidanceAutomaton, word: Word | tuple[int, ...], start: int = 0) -> int | None:
    """
    State reached by reading word from start.

    Args:
        automaton: Avoidance automaton
        word: Symbols to read
        start: State to read from (the root by default)

    Returns:
        int | None: End state, or None when the word hits a forbidden block
    """
    state: int | None = start
    for a in word:
        state = automaton.transitions[state][a]
        if state is None:
            return None
    return state


def count_words(automaton: AvoidanceAutomaton, n: int) -> int:
    """
    f(n): number of allowed words of length n, by dynamic programming.

    Args:
        automaton: Avoidance automaton of the subshift
        n: Word length, n >= 0

    Returns:
        int: Exact count; f(0) = 1

    Raises:
        ValueError: If n is negative
    """
    if n < 0:
        raise ValueError("word length must be nonnegative")
    counts = [0] * automaton.size
    counts[0] = 1
    for _ in range(n):
        nxt = [0] * automaton.size
        for s, c in enumerate(counts):
            if c:
                for t in automaton.transitions[s]:
                    if t is not None:
                        nxt[t] += c
        counts = nxt
    return sum(counts)


def brute_force_count(forbidden: WordCollection, q: int, n: int, cap: int | None = None) -> int:
    """
    Count words of length n avoiding the collection by explicit enumeration.

    Raises:
        CapExceeded: If q**n exceeds the cap
    """
    cap = cap if cap is not None else get_settings().brute_force_cap
    if q ** n > cap:
        raise CapExceeded(f"brute force over {q}^{n} words exceeds the cap {cap}")
    patterns = [w.symbols for w in forbidden]
    if q <= len(DIGITS):
        texts = ["".join(DIGITS[s] for s in p) for p in patterns]
        alphabet = DIGITS[:q]
        return sum(
            1
            for candidate in product(alphabet, repeat=n)
            if not any(t in "".join(candidate) for t in texts)
        )

    def contains(candidate: tuple[int, ...], pattern: tuple[int, ...]) -> bool:
        m = len(pattern)
        return any(candidate[i:i + m] == pattern for i in range(len(candidate) - m + 1))

    return sum(
        1
        for candidate in product(range(q), repeat=n)
        if not any(contains(candidate, p) for p in patterns)
    )


# ---------------------------------------------------------------------------
# Transfer matrix and the matrix engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferMatrix:
    """Nonnegative integer matrix: entry (s, s') counts symbols driving s to s'."""

    matrix: np.ndarray
    labels: tuple[str, ...] = ()

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    def to_json(self) -> dict[str, Any]:
        rows, cols = np.nonzero(self.matrix)
        return {
            "dimension": self.dimension,
            "labels": list(self.labels),
            "entries": [[int(i), int(j), int(self.matrix[i, j])] for i, j in zip(rows, cols)],
        }


def transfer_matrix(automaton: AvoidanceAutomaton) -> TransferMatrix:
    """Transfer matrix of the live states, labelled by their trie prefixes."""
    n = automaton.size
    matrix = np.zeros((n, n), dtype=np.int64)
    for s, row in enumerate(automaton.transitions):
        for t in row:
            if t is not None:
                matrix[s, t] += 1
    return TransferMatrix(matrix, tuple(automaton.label_text(s) for s in range(n)))


def transition_digraph(matrix: np.ndarray) -> nx.DiGraph:
    """Directed graph with an edge s -> t wherever matrix[s, t] > 0."""
    return nx.from_numpy_array(matrix, create_using=nx.DiGraph)


def strongly_connected_components(matrix: np.ndarray) -> list[list[int]]:
    """Strongly connected components as sorted state lists, ordered by smallest state."""
    graph = transition_digraph(matrix)
    return sorted(sorted(int(s) for s in c) for c in nx.strongly_connected_components(graph))


def nontrivial_components(matrix: np.ndarray) -> list[list[int]]:
    """Components carrying a cycle: size > 1 or a self-loop."""
    return [
        c for c in strongly_connected_components(matrix)
        if len(c) > 1 or matrix[c[0], c[0]] > 0
    ]


def recurrent_states(matrix: np.ndarray) -> list[int]:
    return sorted(s for c in nontrivial_components(matrix) for s in c)


def is_irreducible(matrix: np.ndarray) -> bool:
    """Exactly one component carries cycles (the recurrent part is irreducible)."""
    return len(nontrivial_components(matrix)) == 1


def _collatz_wielandt(block: np.ndarray, x: np.ndarray) -> tuple[Fraction, Fraction]:
    """Exact min/max of (Bx)_i / x_i for a positive float vector x."""
    xs = [Fraction(float(v)) for v in x]
    rows = block.tolist()
    ratios = [
        sum((Fraction(int(b)) * xj for b, xj in zip(row, xs) if b), Fraction(0)) / xi
        for row, xi in zip(rows, xs)
    ]
    return min(ratios), max(ratios)


def perron_vector(
    block: np.ndarray,
    tol: float,
    max_iterations: int,
) -> tuple[np.ndarray, Fraction, Fraction, int]:
    """
    Power iteration on B + I for an irreducible block B.

    Returns:
        tuple: (positive eigenvector estimate normalised to max 1, exact
        Collatz–Wielandt lower bound, exact upper bound, iterations)

    Raises:
        NonConvergence: If the bracket does not close within max_iterations
    """
    n = block.shape[0]
    b = block.astype(np.float64)
    shifted = b + np.eye(n)
    x = np.ones(n)
    for iteration in range(1, max_iterations + 1):
        y = b @ x
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol * max(1.0, hi):
            exact_lo, exact_hi = _collatz_wielandt(block, x)
            return x, exact_lo, exact_hi, iteration
        x = shifted @ x
        x = x / x.max()
    raise NonConvergence(f"power iteration did not converge in {max_iterations} iterations")


def spectral_radius(
    transfer: TransferMatrix,
    tol: float | None = None,
    max_iterations: int | None = None,
) -> PerronResult:
    """
    Perron root of a nonnegative matrix with a certified exact bracket.

    Each nontrivial strongly connected component is iterated separately
    and the largest root is kept, so reducible matrices are handled too.
    A matrix without cycles has spectral radius exactly 0.

    Args:
        transfer: Transfer matrix
        tol: Relative bracket width (default from settings)
        max_iterations: Iteration cap per component

    Returns:
        PerronResult: method "matrix"

    Raises:
        NonConvergence: If any component fails to converge
    """
    settings = get_settings()
    tol = tol if tol is not None else settings.root_tol
    max_iterations = max_iterations if max_iterations is not None else settings.max_iterations
    matrix = transfer.matrix
    components = nontrivial_components(matrix)
    diagnostics = {
        "components": len(components),
        "irreducible": len(components) == 1,
        "recurrent_states": sum(len(c) for c in components),
    }
    if not components:
        return PerronResult.exact(0, method="matrix", **diagnostics)
    best_lo, best_hi = Fraction(0), Fraction(0)
    total = 0
    for component in components:
        block = matrix[np.ix_(component, component)]
        _, lo, hi, iterations = perron_vector(block, tol, max_iterations)
        total += iterations
        best_lo, best_hi = max(best_lo, lo), max(best_hi, hi)
    return PerronResult(value_inside(best_lo, best_hi), best_lo, best_hi, "matrix", total, diagnostics)


# ---------------------------------------------------------------------------
# Polynomial engine
# ---------------------------------------------------------------------------


def _canonical_key(collection: WordCollection) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(w.symbols for w in collection))


def perron_root_poly(collection: WordCollection, q: int, tol: float | None = None) -> PerronResult:
    """
    Largest real root of P(z) = (z - q)Δ(z) + S(z) in [1, q].

    Sturm counts certify that the bracket (lo, hi] holds the largest root:
    the search starts from (q - 1, q] when that interval holds a root and
    from (1, q] otherwise, then bisects in exact rationals until the width
    is below tol * hi.

    Args:
        collection: Forbidden words (the survivor collection of a hole)
        q: Alphabet size
        tol: Relative bracket width (default from settings)

    Returns:
        PerronResult: method "polynomial", exact when a bisection point or
        q itself is a root

    Raises:
        NoRealRootFound: If P has no real root in [1, q]
    """
    tol = tol if tol is not None else get_settings().root_tol
    return _perron_root_poly_cached(_canonical_key(collection), q, tol)


@lru_cache(maxsize=65536)
def _perron_root_poly_cached(key: tuple[tuple[int, ...], ...], q: int, tol: float) -> PerronResult:
    collection = WordCollection(q, tuple(Word(symbols, q) for symbols in key))
    poly = perron_polynomial(collection, q)
    if poly.sign_at(q) == 0:
        return PerronResult.exact(q, method="polynomial")
    sturm = SturmSequence(poly)
    base = sturm.base
    one, top = Fraction(1), Fraction(q)

    # Step 1: locate an interval (lo, hi] that holds the largest root
    v_top = sturm.variations(top)
    if q - 1 > 1 and sturm.variations(top - 1) - v_top >= 1:
        lo = top - 1
    elif sturm.variations(one) - v_top >= 1:
        lo = one
    elif base.sign_at(one) == 0:
        return PerronResult.exact(1, method="polynomial")
    else:
        raise NoRealRootFound(f"P(z) = {poly} has no real root in [1, {q}]")
    hi = top
    v_hi = v_top

    # Step 2: bisect; once a single simple root is isolated, plain sign
    # bisection on the square-free part is enough
    steps = 0
    isolated = False
    sign_hi = base.sign_at(hi)
    while hi - lo > Fraction(tol) * hi:
        steps += 1
        mid = (lo + hi) / 2
        if isolated:
            s = base.sign_at(mid)
            if s == 0:
                return PerronResult.exact(mid, method="polynomial", steps=steps)
            if s == sign_hi:
                hi = mid
            else:
                lo = mid
            continue
        v_mid = sturm.variations(mid)
        if v_mid - v_hi >= 1:
            lo = mid
            if v_mid - v_hi == 1 and base.sign_at(lo) * sign_hi < 0:
                isolated = True
        else:
            hi, v_hi = mid, v_mid
            sign_hi = base.sign_at(hi)
            if sign_hi == 0:
                return PerronResult.exact(hi, method="polynomial", steps=steps)
    return PerronResult(value_inside(lo, hi), lo, hi, "polynomial", steps, {})


def topological_entropy_bracket(theta: PerronResult) -> tuple[float, float, float]:
    """(ln θ, ln lo, ln hi) for a positive Perron result."""
    return math.log(theta.value), math.log(float(theta.lo)), math.log(float(theta.hi))


@dataclass(frozen=True)
class EntropyResult:
    """Topological entropy ln θ with the Perron result it came from."""

    value: float
    lo: float
    hi: float
    theta: PerronResult

    def to_json(self) -> dict[str, Any]:
        return {"entropy": self.value, "lo": self.lo, "hi": self.hi, "theta": self.theta.to_json()}


def perron_root_matrix(forbidden: WordCollection, q: int, tol: float | None = None) -> PerronResult:
    """
    Matrix-engine Perron root of the subshift avoiding forbidden.

    Args:
        forbidden: Words the subshift avoids
        q: Alphabet size
        tol: Relative bracket width (default from settings)

    Returns:
        PerronResult: method "matrix", with component counts in diagnostics

    Raises:
        NonConvergence: If power iteration does not converge
    """
    tol = tol if tol is not None else get_settings().root_tol
    return _perron_root_matrix_cached(_canonical_key(forbidden), q, tol)


@lru_cache(maxsize=65536)
def _perron_root_matrix_cached(key: tuple[tuple[int, ...], ...], q: int, tol: float) -> PerronResult:
    collection = WordCollection(q, tuple(Word(symbols, q) for symbols in key))
    return spectral_radius(transfer_matrix(build_avoidance_automaton(collection, q)), tol)


def perron_root(
    forbidden: WordCollection,
    q: int,
    tol: float | None = None,
    cross_check: bool = True,
) -> PerronResult:
    """
    Perron root of the subshift avoiding forbidden, from both engines.

    The polynomial engine answers when it agrees with the matrix engine to
    within the absolute engine tolerance; otherwise the matrix result is
    returned with the disagreement recorded in its diagnostics. Results are
    cached on the canonical word tuple, q and the tolerances.

    Args:
        forbidden: Words the subshift avoids (empty for the full shift)
        q: Alphabet size
        tol: Relative bracket width (default from settings)
        cross_check: Run the matrix engine as well; False trusts the
            polynomial engine and falls back to the matrix engine only
            when P has no root in [1, q]

    Returns:
        PerronResult: method "polynomial", "matrix" or "exact", with
        engine_gap in diagnostics when both engines ran

    Raises:
        NonConvergence: If the matrix engine is needed and fails to converge
    """
    settings = get_settings()
    tol = tol if tol is not None else settings.root_tol
    return _perron_root_cached(_canonical_key(forbidden), q, tol, cross_check, settings.engine_tol)


@lru_cache(maxsize=65536)
def _perron_root_cached(
    key: tuple[tuple[int, ...], ...],
    q: int,
    tol: float,
    cross_check: bool,
    engine_tol: float,
) -> PerronResult:
    collection = WordCollection(q, tuple(Word(symbols, q) for symbols in key))
    if not key:
        return PerronResult.exact(q, method="exact", components=1, irreducible=True)
    matrix_result = None
    if cross_check:
        matrix_result = _perron_root_matrix_cached(key, q, tol)
    try:
        poly_result = perron_root_poly(collection, q, tol)
    except NoRealRootFound as e:
        logger.info(f"[Perron] {collection} q={q}: {e}; using the matrix engine")
        if matrix_result is None:
            matrix_result = _perron_root_matrix_cached(key, q, tol)
        return _with_diagnostics(matrix_result, polynomial_root="none")
    if matrix_result is None:
        return poly_result
    gap = abs(poly_result.value - matrix_result.value)
    diagnostics = dict(matrix_result.diagnostics, engine_gap=gap)
    if gap > engine_tol:
        logger.warning(
            f"[Perron] Engines disagree on {collection} q={q}: "
            f"polynomial {poly_result.value!r}, matrix {matrix_result.value!r}"
        )
        return _with_diagnostics(matrix_result, **diagnostics, engine_disagreement=True)
    return _with_diagnostics(poly_result, **diagnostics)


def _with_diagnostics(result: PerronResult, **extra) -> PerronResult:
    return PerronResult(
        result.value, result.lo, result.hi, result.method, result.iterations,
        {**result.diagnostics, **extra},
    )


def topological_entropy(forbidden: WordCollection, q: int, tol: float | None = None) -> EntropyResult:
    """
    h_top = ln θ of the subshift avoiding forbidden.

    Args:
        forbidden: Words the subshift avoids
        q: Alphabet size
        tol: Relative Perron bracket width (default from settings)

    Returns:
        EntropyResult: ln θ with the logarithms of the bracket ends

    Raises:
        EmptySubshift: If the automaton has no recurrent part
    """
    theta = perron_root(forbidden, q, tol)
    if theta.hi == 0:
        raise EmptySubshift(f"no infinite sequence avoids {forbidden} over {q} symbols")
    value, lo, hi = topological_entropy_bracket(theta)
    return EntropyResult(value, lo, hi, theta)


def is_allowed_word(automaton: AvoidanceAutomaton, word: Word) -> bool:
    """
    Whether word occurs in some infinite sequence of the subshift.

    A word is allowed when it is readable from the root and its end state
    reaches a recurrent state.

    Args:
        automaton: Avoidance automaton of the subshift
        word: Word over the automaton's alphabet

    Returns:
        bool: True if word extends to an infinite allowed sequence
    """
    end = word_state(automaton, word)
    if end is None:
        return False
    matrix = transfer_matrix(automaton).matrix
    return end in _states_reaching(matrix, set(recurrent_states(matrix)))


def _states_reaching(matrix: np.ndarray, targets: set[int]) -> set[int]:
    """
    Backward closure of targets in the transition graph.

    Args:
        matrix: Transfer matrix, entry (s, t) > 0 for an edge s -> t
        targets: States to reach

    Returns:
        set[int]: targets together with every state that has a path into them
    """
    graph = transition_digraph(matrix)
    reaching = set(targets)
    for t in targets:
        reaching |= nx.ancestors(graph, t)
    return {int(s) for s in reaching}
