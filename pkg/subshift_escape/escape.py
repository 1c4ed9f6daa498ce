"""
Escape Rates

Escape rates of the shift into Markov holes, certified comparisons between
holes, Parry measures of cylinders and the threshold predicates that decide
when the correlation rational function orders escape rates.

Key Components:
- HoleSpec: a hole G, an optional ambient base F and the alphabet size q
- escape_rate: ρ(G; Σ_F) = ln θ_F - ln λ_{F∪G}
- compare_escape: LESS / GREATER / TIE with disjoint exact brackets
- parry_data / cylinder_measure / hole_measure: the measure of maximal entropy
- d_threshold / d_instance / gen_period_condition: theorem thresholds
- extremal_words / find_small_escape_hole: constructive helpers
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import islice
from typing import Any

import numpy as np

from subshift_escape.config import get_settings
from subshift_escape.errors import (
    EmptySubshift,
    EmptySurvivorSet,
    HypothesisViolation,
    InsufficientAlphabet,
    InvalidHole,
    NonConvergence,
    NotAllowedWord,
    NotIrreducible,
)
from subshift_escape.poly import IntPolynomial, correlation_data, lagrange_bound
from subshift_escape.spectral import (
    AvoidanceAutomaton,
    PerronResult,
    build_avoidance_automaton,
    is_allowed_word,
    nontrivial_components,
    perron_root,
    perron_root_matrix,
    perron_vector,
    transfer_matrix,
    value_inside,
    word_state,
)
from subshift_escape.words import Word, WordCollection, union

logger = logging.getLogger(__name__)

# Refinement schedule for comparisons; the last step is the requested tolerance.
COMPARISON_TOLERANCES = (1e-6, 1e-9)


@dataclass(frozen=True)
class HoleSpec:
    """
    A Markov hole: the union of the cylinders of G inside Σ_F.

    Attributes:
        hole: The collection G
        q: Alphabet size
        base: Forbidden words F of the ambient subshift (None for the full shift)
    """

    hole: WordCollection
    q: int
    base: WordCollection | None = None

    def __post_init__(self):
        object.__setattr__(self, "hole", self.hole.over(self.q))
        if self.base is not None:
            object.__setattr__(self, "base", self.base.over(self.q))

    @property
    def is_full_shift(self) -> bool:
        return self.base is None or len(self.base) == 0

    def ambient(self) -> WordCollection:
        return self.base if self.base is not None else WordCollection(self.q)

    def survivor(self) -> WordCollection:
        """F ∪ G; raises NotReduced if the union is not reduced."""
        return union(self.ambient(), self.hole)

    def validate(self) -> None:
        """
        Check that every hole word is allowed in Σ_F and F ∪ G is reduced.

        Raises:
            InvalidHole: If a hole word does not occur in Σ_F
            NotReduced: If F ∪ G is not reduced
        """
        self.survivor()
        if self.is_full_shift:
            return
        automaton = build_avoidance_automaton(self.ambient(), self.q)
        for w in self.hole:
            if not is_allowed_word(automaton, w):
                raise InvalidHole(f"hole word {w} is not allowed in the subshift avoiding {self.base}")

    def to_json(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "hole": self.hole.texts(),
            "base": self.base.texts() if self.base is not None else [],
        }


@dataclass(frozen=True)
class EscapeRateResult:
    """
    A certified escape rate.

    rho = ln θ - ln λ; rho_lo/rho_hi follow from the exact brackets of θ
    and λ. rho_matrix repeats the computation on transfer matrices alone.
    """

    spec: HoleSpec
    rho: float
    rho_lo: float
    rho_hi: float
    lam: PerronResult
    theta: PerronResult
    method: str
    entropy_ambient: float
    entropy_survivor: float
    rho_matrix: float | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def bracket_width(self) -> float:
        return self.rho_hi - self.rho_lo

    def to_json(self) -> dict[str, Any]:
        return {
            **self.spec.to_json(),
            "rho": self.rho,
            "rho_bracket": [self.rho_lo, self.rho_hi],
            "rho_matrix": self.rho_matrix,
            "lambda": self.lam.to_json(),
            "theta": self.theta.to_json(),
            "method": self.method,
            "entropy_ambient": self.entropy_ambient,
            "entropy_survivor": self.entropy_survivor,
            "diagnostics": self.diagnostics,
        }

    def csv_row(self) -> dict[str, Any]:
        return {
            "q": self.spec.q,
            "hole": ",".join(self.spec.hole.texts()),
            "base": ",".join(self.spec.base.texts()) if self.spec.base is not None else "",
            "rho": self.rho,
            "bracket_width": self.bracket_width,
        }


def _log_bracket(theta: PerronResult, lam: PerronResult) -> tuple[float, float]:
    lo = math.log(float(theta.lo)) - math.log(float(lam.hi))
    hi = math.log(float(theta.hi)) - math.log(float(lam.lo))
    return lo, hi


def ambient_root(spec: HoleSpec, tol: float | None = None) -> PerronResult:
    """
    θ of the ambient subshift; exactly q for the full shift.

    Raises:
        EmptySubshift: If no infinite sequence avoids the base words
    """
    if spec.is_full_shift:
        return PerronResult.exact(spec.q)
    theta = perron_root(spec.ambient(), spec.q, tol)
    if theta.hi == 0:
        raise EmptySubshift(f"the subshift avoiding {spec.base} is empty")
    return theta


def survivor_root(spec: HoleSpec, tol: float | None = None) -> PerronResult:
    """
    λ of the survivor subshift Σ_{F∪G}.

    Args:
        spec: The hole inside its ambient subshift
        tol: Perron bracket tolerance (default from settings)

    Returns:
        PerronResult: Perron root of the subshift avoiding base and hole words

    Raises:
        EmptySurvivorSet: If no orbit avoids the hole
    """
    lam = perron_root(spec.survivor(), spec.q, tol)
    if lam.hi == 0:
        raise EmptySurvivorSet(f"every orbit falls into {spec.hole}; the escape rate is infinite")
    return lam


def escape_rate(spec: HoleSpec, tol: float | None = None, validate: bool = True) -> EscapeRateResult:
    """
    Escape rate ρ(G; Σ_F) = h_top(Σ_F) - h_top(Σ_{F∪G}).

    Full-shift holes use θ = q exactly, so ρ = ln q - ln λ.

    Args:
        spec: The hole
        tol: Perron bracket tolerance (default from settings)
        validate: Check hole allowedness first

    Returns:
        EscapeRateResult: rate, brackets and both entropies

    Raises:
        InvalidHole: If a hole word is not allowed in Σ_F
        EmptySurvivorSet: If nothing survives
        EmptySubshift: If Σ_F itself is empty
    """
    # Step 1: validate
    if validate:
        spec.validate()

    # Step 2: survivor and ambient Perron roots
    lam = survivor_root(spec, tol)
    theta = ambient_root(spec, tol)

    # Step 3: entropies and the rate
    entropy_ambient = math.log(theta.value)
    entropy_survivor = math.log(lam.value)
    rho = entropy_ambient - entropy_survivor
    rho_lo, rho_hi = _log_bracket(theta, lam)

    # Step 4: matrix-only route as an independent check
    lam_matrix = perron_root_matrix(spec.survivor(), spec.q, tol)
    theta_matrix = theta if spec.is_full_shift else perron_root_matrix(spec.ambient(), spec.q, tol)
    rho_matrix = None
    if lam_matrix.value > 0 and theta_matrix.value > 0:
        rho_matrix = math.log(theta_matrix.value) - math.log(lam_matrix.value)

    method = "full-shift" if spec.is_full_shift else "subshift"
    diagnostics = {
        "survivor_irreducible": lam.diagnostics.get("irreducible"),
        "engine_gap": lam.diagnostics.get("engine_gap"),
    }
    if not spec.is_full_shift and theta.diagnostics.get("irreducible") is False:
        logger.info(f"[Escape] Ambient subshift avoiding {spec.base} is not irreducible")
        diagnostics["ambient_irreducible"] = False
    logger.debug(f"[Escape] {spec.hole} q={spec.q} base={spec.base}: rho={rho!r}")
    return EscapeRateResult(
        spec=spec,
        rho=rho,
        rho_lo=rho_lo,
        rho_hi=rho_hi,
        lam=lam,
        theta=theta,
        method=f"{method}/{lam.method}",
        entropy_ambient=entropy_ambient,
        entropy_survivor=entropy_survivor,
        rho_matrix=rho_matrix,
        diagnostics=diagnostics,
    )


def full_shift_rate(collection: WordCollection, q: int) -> float:
    """Shortcut: ρ(G) on the full shift over q symbols."""
    return escape_rate(HoleSpec(collection.over(q), q)).rho


class Ordering(str, Enum):
    """Order of ρ(h1) relative to ρ(h2)."""

    LESS = "LESS"
    GREATER = "GREATER"
    TIE = "TIE"


@dataclass(frozen=True)
class ComparisonResult:
    """
    Outcome of compare_escape.

    certified is True only for LESS/GREATER, whose λ brackets are disjoint;
    gap is then the distance between the brackets. For TIE, gap is the
    residual span of the two overlapping brackets.
    """

    ordering: Ordering
    certified: bool
    gap: Fraction
    first: EscapeRateResult
    second: EscapeRateResult

    def to_json(self) -> dict[str, Any]:
        return {
            "ordering": self.ordering.value,
            "certified": self.certified,
            "gap": float(self.gap),
            "first": self.first.to_json(),
            "second": self.second.to_json(),
        }


def compare_escape(first: HoleSpec, second: HoleSpec, tol: float | None = None) -> ComparisonResult:
    """
    Compare ρ(first) with ρ(second).

    Both λ brackets are refined (1e-6, 1e-9, then tol) until they are
    disjoint. Overlap at the final tolerance is reported as TIE.

    Args:
        first: First hole
        second: Second hole, over the same alphabet and base
        tol: Final Perron bracket tolerance (default from settings)

    Returns:
        ComparisonResult: Ordering of ρ(first) against ρ(second), certified
        when the λ brackets separate

    Raises:
        ValueError: If the holes live over different alphabets or bases
        InvalidHole: If either hole fails validation
    """
    if first.q != second.q:
        raise ValueError(f"holes over different alphabets: {first.q} and {second.q}")
    if first.ambient().sorted() != second.ambient().sorted():
        raise ValueError("holes over different ambient subshifts")
    tol = tol if tol is not None else get_settings().root_tol
    first.validate()
    second.validate()
    schedule = [t for t in COMPARISON_TOLERANCES if t > tol] + [tol]
    for step in schedule:
        lam1 = survivor_root(first, step)
        lam2 = survivor_root(second, step)
        # larger λ means fewer orbits escape, so a smaller ρ
        if lam1.lo > lam2.hi:
            ordering, gap = Ordering.LESS, lam1.lo - lam2.hi
            break
        if lam2.lo > lam1.hi:
            ordering, gap = Ordering.GREATER, lam2.lo - lam1.hi
            break
    else:
        ordering = Ordering.TIE
        gap = max(lam1.hi, lam2.hi) - min(lam1.lo, lam2.lo)
    result1 = escape_rate(first, step, validate=False)
    result2 = escape_rate(second, step, validate=False)
    logger.debug(f"[Compare] {first.hole} vs {second.hole} q={first.q}: {ordering.value}")
    return ComparisonResult(ordering, ordering is not Ordering.TIE, gap, result1, result2)


# ---------------------------------------------------------------------------
# Parry measure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParryData:
    """
    Perron data of an irreducible subshift.

    Attributes:
        theta: Perron root
        automaton: One-step presentation of the subshift
        states: Recurrent states (indices into the automaton)
        right: Right Perron vector on the recurrent states
        left: Left Perron vector, scaled so that left @ right == 1
    """

    theta: PerronResult
    automaton: AvoidanceAutomaton
    states: tuple[int, ...]
    right: np.ndarray
    left: np.ndarray

    def to_json(self) -> dict[str, Any]:
        return {
            "theta": self.theta.to_json(),
            "states": [self.automaton.label_text(s) for s in self.states],
            "right": [float(x) for x in self.right],
            "left": [float(x) for x in self.left],
        }


def parry_data(forbidden: WordCollection, q: int, tol: float | None = None) -> ParryData:
    """
    Parry eigenvector pair of the subshift avoiding forbidden.

    The right vector sums to 1 and the left vector is scaled so that
    left · right = 1, which makes left_s right_s the stationary weight of s.

    Args:
        forbidden: Words the subshift avoids
        q: Alphabet size
        tol: Power iteration bracket width (default from settings)

    Returns:
        ParryData: θ, the automaton, its recurrent states and both vectors

    Raises:
        EmptySubshift: If there is no recurrent part
        NotIrreducible: If the recurrent part has several components
    """
    settings = get_settings()
    tol = tol if tol is not None else settings.root_tol
    automaton = build_avoidance_automaton(forbidden.over(q), q)
    matrix = transfer_matrix(automaton).matrix
    components = nontrivial_components(matrix)
    if not components:
        raise EmptySubshift(f"no infinite sequence avoids {forbidden} over {q} symbols")
    if len(components) > 1:
        raise NotIrreducible(
            f"the subshift avoiding {forbidden} has {len(components)} recurrent components"
        )
    states = components[0]
    block = matrix[np.ix_(states, states)]
    right, lo, hi, iterations = perron_vector(block, tol, settings.max_iterations)
    left, _, _, _ = perron_vector(block.T.copy(), tol, settings.max_iterations)
    right = right / right.sum()
    left = left / float(left @ right)
    theta = PerronResult(value_inside(lo, hi), lo, hi, "matrix", iterations, {"irreducible": True})
    return ParryData(theta, automaton, tuple(states), right, left)


def cylinder_measure(word: Word, pd: ParryData) -> float:
    """
    Parry measure μ(C_w) = Σ_s u_s v_δ(s,w) / θ^|w| over recurrent states s.

    Raises:
        NotAllowedWord: If the cylinder is empty in the subshift
    """
    position = {s: i for i, s in enumerate(pd.states)}
    total = 0.0
    for s in pd.states:
        end = word_state(pd.automaton, word, s)
        if end is not None and end in position:
            total += pd.left[position[s]] * pd.right[position[end]]
    if total <= 0.0:
        raise NotAllowedWord(f"word {word} does not occur in the subshift")
    return total / pd.theta.value ** len(word)


def hole_measure(hole: WordCollection, pd: ParryData) -> float:
    """Measure of a hole of equal-length (hence disjoint) cylinders."""
    if not hole.is_equal_length:
        raise ValueError("hole measure needs words of one length")
    return sum(cylinder_measure(w, pd) for w in hole)


# ---------------------------------------------------------------------------
# Thresholds and predicates
# ---------------------------------------------------------------------------


class ThresholdVariant(str, Enum):
    TWO_WORDS = "two_words"
    MIXED = "mixed"
    GENERIC = "generic"


def d_threshold(
    t: int,
    p: int,
    variant: ThresholdVariant | str = ThresholdVariant.TWO_WORDS,
    p1: int | None = None,
    p2: int | None = None,
) -> int:
    """
    Threshold D beyond which r(D) ordering implies escape-rate ordering.

    two_words: 3p^2 + 2; mixed: 3 p1 p2 + 2; generic: 2 t^2 (t!)^2 p^(2t-2) + 1.
    """
    variant = ThresholdVariant(variant)
    if variant is ThresholdVariant.TWO_WORDS:
        return 3 * p * p + 2
    if variant is ThresholdVariant.MIXED:
        if p1 is None or p2 is None:
            raise ValueError("the mixed threshold needs both word lengths")
        return 3 * p1 * p2 + 2
    return 2 * t * t * math.factorial(t) ** 2 * p ** (2 * t - 2) + 1


def _coefficient_maxima(collection: WordCollection) -> tuple[int, int]:
    delta, s = correlation_data(collection)
    a = max(1, delta.max_abs_coefficient(skip_leading=True))
    b = max(s.max_abs_coefficient(), collection.t)
    return a, b


def d_instance(first: WordCollection, second: WordCollection) -> int:
    """
    Instance threshold (a1 b2 + a2 b1) t p + 1.

    a_i is the largest |coefficient| of Δ_i below the leading term (at least
    1, the leading coefficient), b_i = max(|coefficients of S_i|, t).

    Raises:
        HypothesisViolation: If t or p differ between the collections
    """
    if first.t != second.t or not first.is_equal_length or not second.is_equal_length \
            or first.p != second.p:
        raise HypothesisViolation("d_instance needs equal t and equal word length p")
    a1, b1 = _coefficient_maxima(first)
    a2, b2 = _coefficient_maxima(second)
    return (a1 * b2 + a2 * b1) * first.t * first.p + 1


def cross_difference_radius(first: WordCollection, second: WordCollection) -> int:
    """Smaller root radius (a1 b2 + a2 b1)((t - 1)(p - 1) + 1) + 1 of r1 - r2."""
    a1, b1 = _coefficient_maxima(first)
    a2, b2 = _coefficient_maxima(second)
    t, p = first.t, first.p
    return (a1 * b2 + a2 * b1) * ((t - 1) * (p - 1) + 1) + 1


def gen_period_condition(q: int, t: int) -> bool:
    """(q - 1)(t + 1) - t q (q + 1)^(t-1) / q^(t-1) >= 0, exactly."""
    value = Fraction((q - 1) * (t + 1)) - Fraction(t * q * (q + 1) ** (t - 1), q ** (t - 1))
    return value >= 0


def gen_period_threshold(t: int) -> int:
    """t 2^(t-1) + 1, from which the gen-period inequality holds."""
    return t * 2 ** (t - 1) + 1


def lambda_bracket(q: int, p: int) -> tuple[Fraction, Fraction]:
    """(q - q^(-p+2), q): where λ lies for two words of length p >= 3, q >= 5."""
    return Fraction(q) - Fraction(1, q ** (p - 2)), Fraction(q)


def outer_root_count(poly: IntPolynomial, radius: float) -> int:
    """
    Number of complex roots of modulus >= radius (numpy companion roots).

    Roots beyond the Lagrange bound would mean a broken root solver and are
    logged.
    """
    if poly.degree < 1:
        return 0
    roots = np.roots(list(reversed(poly.coeffs)))
    moduli = np.abs(roots)
    bound = float(lagrange_bound(poly))
    if np.any(moduli > bound * (1 + 1e-9)):
        logger.warning(f"[Escape] Root of modulus {moduli.max()} beyond Lagrange bound {bound}")
    return int(np.count_nonzero(moduli >= radius))


def extremal_words(word: Word, q: int) -> tuple[Word, Word]:
    """
    u0 = a^p and u1 = a b^(p-1), with a < b the two smallest symbols other
    than the first and last symbols of word.

    Raises:
        InsufficientAlphabet: If fewer than two such symbols exist
    """
    excluded = {word[0], word[-1]}
    eligible = [s for s in range(q) if s not in excluded]
    if len(eligible) < 2:
        raise InsufficientAlphabet(
            f"need two symbols outside {sorted(excluded)} but the alphabet has {q}"
        )
    a, b = eligible[0], eligible[1]
    p = len(word)
    u0 = Word((a,) * p, q)
    u1 = Word((a,) + (b,) * (p - 1), q)
    return u0, u1


def find_small_escape_hole(
    x: Iterable[int],
    y: Iterable[int],
    q: int,
    delta: float,
    max_p: int = 64,
) -> int:
    """
    Smallest p >= 3 with ρ({x_1..x_p, y_1..y_p}) < delta on the full shift.

    x and y may be infinite iterators; they are read lazily.

    Raises:
        NonConvergence: If no p <= max_p qualifies
    """
    xs_iter, ys_iter = iter(x), iter(y)
    xs: list[int] = []
    ys: list[int] = []
    for p in range(3, max_p + 1):
        xs.extend(islice(xs_iter, p - len(xs)))
        ys.extend(islice(ys_iter, p - len(ys)))
        if len(xs) < p or len(ys) < p:
            raise ValueError(f"sequences end before length {p}")
        words = [tuple(xs[:p])]
        if tuple(ys[:p]) != words[0]:
            words.append(tuple(ys[:p]))
        rho = full_shift_rate(WordCollection.of(q, *words), q)
        logger.debug(f"[Escape] small hole search p={p}: rho={rho!r}")
        if rho < delta:
            return p
    raise NonConvergence(f"no p <= {max_p} gives an escape rate below {delta}")


def escape_rate_decreases_in_q(collection_words: Sequence[Sequence[int]], qs: Sequence[int]) -> dict[str, Any]:
    """
    Soft report: ρ of a fixed symbol pattern across alphabet sizes.

    Returns:
        dict: {"q": [...], "rho": [...], "decreasing": bool}
    """
    rates = [full_shift_rate(WordCollection.of(q, *collection_words), q) for q in qs]
    decreasing = all(a > b for a, b in zip(rates, rates[1:]))
    return {"q": list(qs), "rho": rates, "decreasing": decreasing}
