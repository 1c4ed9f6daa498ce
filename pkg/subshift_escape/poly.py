"""
Exact Polynomial Algebra

Integer-coefficient polynomials, rational functions and polynomial matrices
for the correlation machinery. Everything here is exact: IntPolynomial is a
thin hashable wrapper over integer coefficient tuples, and the heavy
operations (gcd, square-free part, Sturm chains, cancellation, determinants)
run on sympy's Poly and Matrix over ZZ. Floating point never enters this
module.

Key Components:
- IntPolynomial: canonical integer polynomial, index = exponent
- RationalFunction: numerator/denominator pair, equality on the reduced form
- PolyMatrix: square matrix of IntPolynomial (the correlation matrix)
- determinant / adjugate_sum / r_function: Δ(z), S(z) and r(z) = S/Δ
- series_coefficients: expansion of F(z) in powers of 1/z
- SturmSequence / count_real_roots: certified real-root counting
- lagrange_bound: modulus bound for every complex root
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd as int_gcd
from typing import TYPE_CHECKING, Union

from sympy import Matrix, Poly, Symbol, cancel
from sympy.polys.polyerrors import ExactQuotientFailed

from subshift_escape.errors import DivisionByZero, NonExpandable, SingularCorrelationMatrix

if TYPE_CHECKING:
    from subshift_escape.words import WordCollection

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

# Orders up to this size use cofactor expansion, larger ones Bareiss.
COFACTOR_MAX_ORDER = 5

_z = Symbol("z")


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    values = [int(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class IntPolynomial:
    """
    Polynomial with arbitrary-precision integer coefficients.

    coeffs[k] is the coefficient of z^k. The top coefficient is never zero;
    the zero polynomial has an empty tuple.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPolynomial:
        return cls((0,) * k + (c,))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> IntPolynomial:
        """Monic polynomial with the given integer roots."""
        result = cls.constant(1)
        for r in roots:
            result = result * cls((-r, 1))
        return result

    @classmethod
    def from_sympy(cls, poly: Poly) -> IntPolynomial:
        """
        Wrap a sympy Poly in z with integer coefficients.

        Raises:
            ValueError: If a coefficient is not an integer
        """
        coeffs = poly.all_coeffs()
        if any(not c.is_integer for c in coeffs):
            raise ValueError(f"{poly.as_expr()} has non-integer coefficients")
        return cls(int(c) for c in reversed(coeffs))

    def to_sympy(self) -> Poly:
        """The same polynomial as a sympy Poly in z over ZZ."""
        return Poly.from_list(list(reversed(self.coeffs)) or [0], _z, domain="ZZ")

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    # arithmetic

    def _coerce(self, other) -> IntPolynomial:
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other) -> IntPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self.coefficient(k) + other.coefficient(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> IntPolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> IntPolynomial:
        return (-self) + other

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPolynomial:
        result = IntPolynomial.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __call__(self, x):
        """Horner evaluation at an int, Fraction or float."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Number) -> int:
        """Exact sign of f(x) using integer arithmetic only."""
        x = Fraction(x)
        num, den = x.numerator, x.denominator
        d = self.degree
        if d < 0:
            return 0
        # den^d * f(num/den) = sum c_k num^k den^(d-k), den > 0
        acc = 0
        den_power = 1
        for c in reversed(self.coeffs):
            acc = acc * num + c * den_power
            den_power *= den
        return (acc > 0) - (acc < 0)

    def content(self) -> int:
        return reduce(int_gcd, (abs(c) for c in self.coeffs), 0)

    def without_content(self) -> IntPolynomial:
        """Divide by the (positive) content, keeping every sign."""
        if self.is_zero():
            return self
        c = self.content()
        return IntPolynomial(x // c for x in self.coeffs)

    def primitive(self) -> IntPolynomial:
        """Divide by the content and make the leading coefficient positive."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading < 0:
            c = -c
        return IntPolynomial(x // c for x in self.coeffs)

    def max_abs_coefficient(self, skip_leading: bool = False) -> int:
        values = self.coeffs[:-1] if skip_leading else self.coeffs
        return max((abs(c) for c in values), default=0)

    def exact_div(self, other: IntPolynomial) -> IntPolynomial:
        """
        Quotient of an exact division over Z[z].

        Raises:
            ZeroDivisionError: If other is zero
            ValueError: If the division leaves a remainder or a fractional quotient
        """
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        try:
            return IntPolynomial.from_sympy(self.to_sympy().exquo(other.to_sympy()))
        except ExactQuotientFailed as e:
            raise ValueError(f"{other} does not divide {self} over the integers") from e

    def to_json(self) -> dict[str, int]:
        """Exponent:coefficient map of the nonzero terms."""
        return {str(k): c for k, c in enumerate(self.coeffs) if c}

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                head = "" if mag == 1 else str(mag)
                body = head + ("z" if k == 1 else f"z^{k}")
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += sign + body
        return text


Z = IntPolynomial((0, 1))


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Greatest common divisor over Q, returned primitive with positive lead."""
    return IntPolynomial.from_sympy(a.to_sympy().gcd(b.to_sympy())).primitive()


def square_free_part(f: IntPolynomial) -> IntPolynomial:
    """f / gcd(f, f'), primitive."""
    if f.degree <= 0:
        return f.primitive()
    return IntPolynomial.from_sympy(f.to_sympy().sqf_part()).primitive()


def product_coefficient_bound(f: IntPolynomial, g: IntPolynomial) -> int:
    """Bound on |coefficients| of f*g: (min(deg f, deg g) + 1) * max|f| * max|g|."""
    if f.is_zero() or g.is_zero():
        return 0
    return (min(f.degree, g.degree) + 1) * f.max_abs_coefficient() * g.max_abs_coefficient()


def lagrange_bound(f: IntPolynomial) -> Fraction:
    """
    1 + max |a_k / a_lead| over the non-leading coefficients.

    Every complex root of f has modulus at most this value.

    Raises:
        ValueError: If f is the zero polynomial
    """
    if f.is_zero():
        raise ValueError("Lagrange bound of the zero polynomial is undefined")
    lead = abs(f.leading)
    return 1 + Fraction(f.max_abs_coefficient(skip_leading=True), lead)


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """
    numerator / denominator over Z[z].

    Both the as-built pair and the reduced form are available; equality and
    hashing use the reduced form.
    """

    numerator: IntPolynomial
    denominator: IntPolynomial

    def __post_init__(self):
        if self.denominator.is_zero():
            raise DivisionByZero("rational function with zero denominator")

    def reduced(self) -> RationalFunction:
        """Cancel the gcd and the common integer content; denominator lead > 0."""
        num_poly, den_poly = self.numerator.to_sympy().cancel(self.denominator.to_sympy(), include=True)
        num, den = IntPolynomial.from_sympy(num_poly), IntPolynomial.from_sympy(den_poly)
        if num.is_zero():
            return RationalFunction(IntPolynomial(), IntPolynomial.constant(1))
        c = int_gcd(num.content(), den.content())
        if den.leading < 0:
            c = -c
        return RationalFunction(
            IntPolynomial(x // c for x in num.coeffs),
            IntPolynomial(x // c for x in den.coeffs),
        )

    def __call__(self, x: Number) -> Fraction:
        return eval_rational(self, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        a, b = self.reduced(), other.reduced()
        return a.numerator == b.numerator and a.denominator == b.denominator

    def __hash__(self) -> int:
        r = self.reduced()
        return hash((r.numerator, r.denominator))

    def __sub__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(
            self.numerator * other.denominator - other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __str__(self) -> str:
        def wrap(p: IntPolynomial) -> str:
            text = str(p)
            return f"({text})" if sum(1 for c in p.coeffs if c) > 1 else text

        return f"{wrap(self.numerator)}/{wrap(self.denominator)}"

    def to_json(self) -> dict:
        r = self.reduced()
        return {
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "reduced": {"numerator": r.numerator.to_json(), "denominator": r.denominator.to_json()},
            "text": str(r),
        }


def eval_rational(f: RationalFunction | IntPolynomial, x: Number) -> Fraction:
    """
    Exact value of a rational function or polynomial at a rational point.

    Raises:
        DivisionByZero: If x is a pole
    """
    x = Fraction(x)
    if isinstance(f, IntPolynomial):
        return Fraction(f(x))
    den = f.denominator(x)
    if den == 0:
        raise DivisionByZero(f"{f} has a pole at {x}")
    return Fraction(f.numerator(x)) / den


@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix of IntPolynomial entries."""

    rows: tuple[tuple[IntPolynomial, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("polynomial matrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def order(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: tuple[int, int]) -> IntPolynomial:
        i, j = index
        return self.rows[i][j]

    def transpose(self) -> PolyMatrix:
        n = self.order
        return PolyMatrix(tuple(tuple(self.rows[j][i] for j in range(n)) for i in range(n)))

    def plus_ones(self) -> PolyMatrix:
        """M + J, with J the all-ones matrix."""
        return PolyMatrix(tuple(tuple(e + 1 for e in row) for row in self.rows))

    def to_sympy(self) -> Matrix:
        """Entries as sympy expressions in z."""
        return Matrix(self.order, self.order, [e.to_sympy().as_expr() for row in self.rows for e in row])

    def to_json(self) -> list[list[dict[str, int]]]:
        return [[e.to_json() for e in row] for row in self.rows]


def correlation_matrix(collection: WordCollection) -> PolyMatrix:
    """M(z) with M[i][j] = (w_j, w_i)_z."""
    from subshift_escape.words import correlation

    words = collection.words
    return PolyMatrix(tuple(tuple(correlation(wj, wi) for wj in words) for wi in words))


def _expand(expr) -> IntPolynomial:
    """Polynomial in z from a sympy expression whose divisions are exact."""
    return IntPolynomial.from_sympy(Poly(cancel(expr), _z, domain="ZZ"))


def determinant_cofactor(m: PolyMatrix) -> IntPolynomial:
    """Laplace (cofactor) expansion."""
    if m.order == 0:
        return IntPolynomial.constant(1)
    return _expand(m.to_sympy().det(method="laplace"))


def determinant_bareiss(m: PolyMatrix) -> IntPolynomial:
    """Fraction-free Gaussian elimination; every division is exact in Z[z]."""
    if m.order == 0:
        return IntPolynomial.constant(1)
    return _expand(m.to_sympy().det(method="bareiss"))


@lru_cache(maxsize=65536)
def determinant(m: PolyMatrix) -> IntPolynomial:
    """Exact determinant: cofactors for small orders, Bareiss above."""
    if m.order <= COFACTOR_MAX_ORDER:
        return determinant_cofactor(m)
    return determinant_bareiss(m)


@lru_cache(maxsize=65536)
def adjugate_sum(m: PolyMatrix) -> IntPolynomial:
    """
    Sum of the entries of adj(M).

    Small orders sum the cofactor matrix directly. Larger orders use
    det(M + J) - det(M) = 1ᵀ adj(M) 1 for the all-ones matrix J.
    """
    n = m.order
    if n == 0:
        return IntPolynomial()
    if n == 1:
        return IntPolynomial.constant(1)
    if n > COFACTOR_MAX_ORDER:
        return adjugate_sum_by_rank_one(m)
    return _expand(sum(m.to_sympy().adjugate(method="laplace")))


def adjugate_sum_by_rank_one(m: PolyMatrix) -> IntPolynomial:
    """Cross-check of adjugate_sum through det(M + J) - det(M)."""
    if m.order == 0:
        return IntPolynomial()
    return determinant_bareiss(m.plus_ones()) - determinant_bareiss(m)


def correlation_data(collection: WordCollection) -> tuple[IntPolynomial, IntPolynomial]:
    """
    (Δ, S) for a collection; the empty collection gives (1, 0).

    Raises:
        SingularCorrelationMatrix: If Δ vanishes identically
    """
    if not collection.words:
        return IntPolynomial.constant(1), IntPolynomial()
    m = correlation_matrix(collection)
    delta = determinant(m)
    if delta.is_zero():
        raise SingularCorrelationMatrix(f"correlation matrix of {collection} is singular")
    return delta, adjugate_sum(m)


def r_function(collection: WordCollection) -> RationalFunction:
    """
    r(z) = S(z) / Δ(z), the sum of the entries of M(z)^-1.

    The returned object keeps the unreduced pair; call .reduced() for the
    canonical form. Equality already compares reduced forms.

    Raises:
        SingularCorrelationMatrix: If Δ ≡ 0
    """
    delta, s = correlation_data(collection)
    return RationalFunction(s, delta)


def generating_function(collection: WordCollection, q: int) -> tuple[IntPolynomial, IntPolynomial]:
    """(zΔ, (z - q)Δ + S): numerator and denominator of F(z) = Σ f(n) z^-n."""
    delta, s = correlation_data(collection)
    return Z * delta, (Z - q) * delta + s


def perron_polynomial(collection: WordCollection, q: int) -> IntPolynomial:
    """P(z) = (z - q)Δ(z) + S(z); its largest real root is the Perron root."""
    return generating_function(collection, q)[1]


def cross_difference(first: WordCollection, second: WordCollection) -> IntPolynomial:
    """Δ₂S₁ - Δ₁S₂: the numerator of r₁ - r₂ over the common denominator Δ₁Δ₂."""
    delta1, s1 = correlation_data(first)
    delta2, s2 = correlation_data(second)
    return delta2 * s1 - delta1 * s2


def cross_difference_bound(first: WordCollection, second: WordCollection) -> int:
    """Coefficient bound of Δ₂S₁ - Δ₁S₂ from the product bound of each term."""
    delta1, s1 = correlation_data(first)
    delta2, s2 = correlation_data(second)
    return product_coefficient_bound(delta2, s1) + product_coefficient_bound(delta1, s2)


def coefficient_staircase_ok(collection: WordCollection) -> bool:
    """
    Check the coefficient bounds of Δ and S for two words of equal length p:
    |a_l| <= l + 1 for l <= p - 1, |a_l| <= 2p - (l + 1) for l >= p, |b_m| <= 2.
    """
    if collection.t != 2 or not collection.is_equal_length:
        raise ValueError("staircase bounds apply to two words of equal length")
    p = collection.p
    delta, s = correlation_data(collection)
    for ell, a in enumerate(delta.coeffs):
        bound = ell + 1 if ell <= p - 1 else 2 * p - (ell + 1)
        if abs(a) > bound:
            return False
    return s.max_abs_coefficient() <= 2


def series_coefficients(numerator: IntPolynomial, denominator: IntPolynomial, n_max: int) -> list[int]:
    """
    f(0..n_max) of numerator/denominator expanded in w = 1/z.

    Args:
        numerator: F numerator, degree <= degree of denominator
        denominator: F denominator with leading coefficient ±1
        n_max: Last coefficient index

    Returns:
        list[int]: Exact coefficients

    Raises:
        NonExpandable: If deg numerator > deg denominator
        ValueError: If the denominator is not monic up to sign
    """
    if numerator.degree > denominator.degree:
        raise NonExpandable(
            f"numerator degree {numerator.degree} exceeds denominator degree {denominator.degree}"
        )
    lead = denominator.leading
    if abs(lead) != 1:
        raise ValueError(f"denominator {denominator} is not monic")
    d = denominator.degree
    # reverse both to get polynomials in w
    num_w = [numerator.coefficient(d - j) for j in range(d + 1)]
    den_w = [denominator.coefficient(d - j) for j in range(d + 1)]
    out: list[int] = []
    for n in range(n_max + 1):
        acc = num_w[n] if n <= d else 0
        for j in range(1, min(n, d) + 1):
            acc -= den_w[j] * out[n - j]
        out.append(acc * lead)
    return out


class SturmSequence:
    """
    Sturm chain of the square-free part of a polynomial.

    The chain comes from sympy over QQ; each member is scaled by its positive
    common denominator into Z[z] so that sign evaluation stays in integers.
    variations(x) counts sign changes with zeros dropped; the number of
    distinct real roots in (a, b] is variations(a) - variations(b).
    """

    def __init__(self, f: IntPolynomial):
        if f.is_zero():
            raise ValueError("Sturm sequence of the zero polynomial")
        chain = [
            IntPolynomial.from_sympy(p.clear_denoms(convert=True)[1])
            for p in f.to_sympy().sturm()
        ]
        self.base = square_free_part(f)
        self.chain = tuple(p.without_content() for p in chain if not p.is_zero())

    def variations(self, x: Number) -> int:
        signs = [s for s in (p.sign_at(x) for p in self.chain) if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, a: Number, b: Number) -> int:
        """Distinct real roots in (a, b]."""
        if Fraction(a) >= Fraction(b):
            return 0
        return self.variations(a) - self.variations(b)


def count_real_roots(f: IntPolynomial, a: Number, b: Number) -> int:
    """Number of distinct real roots of f in (a, b]."""
    return SturmSequence(f).count(a, b)
