"""Exact truncated series in q whose coefficients are Laurent polynomials in t.

Everything here is exact: coefficients are ``fractions.Fraction`` and a series
of order N carries the coefficients of q^0 .. q^N. Mixing orders truncates to
the smaller one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence, Tuple, Union

from app.core.errors import InexactDivision, NonUnitConstantTerm

Scalar = Union[int, Fraction]


def _normalize(terms: Iterable[Tuple[int, Scalar]]) -> Tuple[Tuple[int, Fraction], ...]:
    acc: dict[int, Fraction] = {}
    for exponent, coefficient in terms:
        acc[int(exponent)] = acc.get(int(exponent), Fraction(0)) + Fraction(coefficient)
    return tuple(sorted((e, c) for e, c in acc.items() if c != 0))


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of c * t^e with exact rational c; zero coefficients are never stored."""

    terms: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _normalize(self.terms))

    @classmethod
    def from_dict(cls, terms: Mapping[int, Scalar]) -> "LaurentPoly":
        return cls(tuple(terms.items()))

    @classmethod
    def monomial(cls, exponent: int, coefficient: Scalar = 1) -> "LaurentPoly":
        return cls(((exponent, coefficient),))

    @classmethod
    def constant(cls, coefficient: Scalar) -> "LaurentPoly":
        return cls(((0, coefficient),))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def coefficient(self, exponent: int) -> Fraction:
        for e, c in self.terms:
            if e == exponent:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    @property
    def min_exponent(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[0][0]

    @property
    def max_exponent(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[-1][0]

    def __iter__(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self.terms)

    def __add__(self, other: object) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return lp_add(self, other)

    __radd__ = __add__

    def __sub__(self, other: object) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return lp_sub(self, other)

    def __rsub__(self, other: object) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return lp_sub(other, self)

    def __neg__(self) -> "LaurentPoly":
        return lp_scale(self, -1)

    def __mul__(self, other: object) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return lp_scale(self, other)
        if isinstance(other, LaurentPoly):
            return lp_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.terms:
            if e == 0:
                body = str(c)
            else:
                power = "t" if e == 1 else f"t^{e}"
                body = power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}"
            pieces.append(body)
        return " + ".join(pieces).replace("+ -", "- ")


def _coerce(value: object) -> object:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly.constant(value)
    return NotImplemented


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)


def lp_monomial(exponent: int, coefficient: Scalar = 1) -> LaurentPoly:
    return LaurentPoly.monomial(exponent, coefficient)


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(a.terms + b.terms)


def lp_sub(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(a.terms + tuple((e, -c) for e, c in b.terms))


def lp_scale(a: LaurentPoly, factor: Scalar) -> LaurentPoly:
    return LaurentPoly(tuple((e, c * factor) for e, c in a.terms))


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Convolution product of two Laurent polynomials."""
    return LaurentPoly(tuple((ea + eb, ca * cb) for ea, ca in a.terms for eb, cb in b.terms))


def lp_substitute_t_inverse(a: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(tuple((-e, c) for e, c in a.terms))


def lp_exact_divide(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Return q with q * b == a.

    Long division from the top exponent down. Raises InexactDivision when b does
    not divide a, and ZeroDivisionError for b == 0.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return ZERO

    # an exact quotient has lowest exponent a.min - b.min
    lowest = a.min_exponent - b.min_exponent
    lead_exponent, lead_coefficient = b.terms[-1]
    quotient: dict[int, Fraction] = {}
    remainder = a
    while not remainder.is_zero():
        exponent = remainder.max_exponent - lead_exponent
        if exponent < lowest:
            raise InexactDivision(f"({a}) is not divisible by ({b})")
        coefficient = remainder.terms[-1][1] / lead_coefficient
        quotient[exponent] = coefficient
        remainder = lp_sub(remainder, lp_mul(LaurentPoly.monomial(exponent, coefficient), b))
    return LaurentPoly.from_dict(quotient)


@dataclass(frozen=True)
class QSeries:
    """Power series in q truncated after q^order."""

    coeffs: Tuple[LaurentPoly, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the q^0 coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[Union[LaurentPoly, Scalar]], order: int) -> "QSeries":
        """Build a series of the given order, padding with zeros or truncating."""
        if order < 0:
            raise ValueError(f"order must be non-negative (got {order})")
        lifted = [c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c) for c in coeffs[: order + 1]]
        lifted.extend([ZERO] * (order + 1 - len(lifted)))
        return cls(tuple(lifted))

    @classmethod
    def constant(cls, value: Union[LaurentPoly, Scalar], order: int) -> "QSeries":
        return cls.from_coefficients([value], order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.constant(ONE, order)

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls.constant(ZERO, order)

    def coefficient(self, n: int) -> LaurentPoly:
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient q^{n} outside order {self.order}")
        return self.coeffs[n]

    def truncate(self, order: int) -> "QSeries":
        return QSeries.from_coefficients(self.coeffs, min(order, self.order))

    def __add__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return qs_sub(self, other)

    def __mul__(self, other: "QSeries") -> "QSeries":
        return qs_mul(self, other)

    def __neg__(self) -> "QSeries":
        return qs_scale(self, LaurentPoly.constant(-1))

    def __str__(self) -> str:
        parts = []
        for n, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            body = f"({c})" if len(c.terms) > 1 else str(c)
            if n:
                body += "*q" if n == 1 else f"*q^{n}"
            parts.append(body)
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(q^{self.order + 1})"


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    order = min(a.order, b.order)
    return QSeries(tuple(lp_add(a.coeffs[n], b.coeffs[n]) for n in range(order + 1)))


def qs_sub(a: QSeries, b: QSeries) -> QSeries:
    order = min(a.order, b.order)
    return QSeries(tuple(lp_sub(a.coeffs[n], b.coeffs[n]) for n in range(order + 1)))


def qs_scale(a: QSeries, factor: Union[LaurentPoly, Scalar]) -> QSeries:
    if not isinstance(factor, LaurentPoly):
        factor = LaurentPoly.constant(factor)
    return QSeries(tuple(lp_mul(c, factor) for c in a.coeffs))


def qs_divide_coefficients(a: QSeries, divisor: LaurentPoly) -> QSeries:
    """Exact coefficientwise division by a Laurent polynomial."""
    return QSeries(tuple(lp_exact_divide(c, divisor) for c in a.coeffs))


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated to the smaller order."""
    order = min(a.order, b.order)
    out = []
    for n in range(order + 1):
        total = ZERO
        for j in range(n + 1):
            if a.coeffs[j].is_zero() or b.coeffs[n - j].is_zero():
                continue
            total = lp_add(total, lp_mul(a.coeffs[j], b.coeffs[n - j]))
        out.append(total)
    return QSeries(tuple(out))


def qs_power(a: QSeries, exponent: int) -> QSeries:
    if exponent < 0:
        raise ValueError("use qs_inverse for negative powers")
    result = QSeries.one(a.order)
    for _ in range(exponent):
        result = qs_mul(result, a)
    return result


def qs_inverse(a: QSeries) -> QSeries:
    """Multiplicative inverse; the q^0 coefficient must be a single term c*t^k."""
    head = a.coeffs[0]
    if not head.is_unit():
        raise NonUnitConstantTerm(f"constant coefficient {head} is not a unit Laurent monomial")
    (exponent, coefficient), = head.terms
    head_inverse = LaurentPoly.monomial(-exponent, 1 / coefficient)

    inverse = [head_inverse]
    for n in range(1, a.order + 1):
        total = ZERO
        for j in range(1, n + 1):
            if a.coeffs[j].is_zero():
                continue
            total = lp_add(total, lp_mul(a.coeffs[j], inverse[n - j]))
        inverse.append(lp_mul(lp_scale(total, -1), head_inverse))
    return QSeries(tuple(inverse))


def generalized_binomial(power: int, k: int) -> int:
    """Coefficient of x^k in (1 + x)^power for any integer power."""
    if power >= 0:
        return math.comb(power, k)
    return (-1) ** k * math.comb(-power + k - 1, k)


def qs_product_factor(a: QSeries, sign: int, t_exp: int, q_exp: int, power: int) -> QSeries:
    """Multiply ``a`` by (1 + sign * t^t_exp * q^q_exp) ** power."""
    if q_exp < 1:
        raise ValueError(f"q_exp must be positive (got {q_exp})")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1 (got {sign})")
    if power == 0:
        return a

    factor: list[tuple[int, LaurentPoly]] = []
    k = 0
    while k * q_exp <= a.order:
        if power >= 0 and k > power:
            break
        coefficient = generalized_binomial(power, k) * sign**k
        factor.append((k * q_exp, LaurentPoly.monomial(k * t_exp, coefficient)))
        k += 1

    out = []
    for n in range(a.order + 1):
        total = ZERO
        for shift, term in factor:
            if shift > n:
                break
            if not a.coeffs[n - shift].is_zero():
                total = lp_add(total, lp_mul(a.coeffs[n - shift], term))
        out.append(total)
    return QSeries(tuple(out))


class ProductFactor(NamedTuple):
    """One factor (1 + sign * t^t_exponent(m) * q^m) ** power of an infinite product."""

    sign: int
    t_exponent: Callable[[int], int]
    power: int


def qs_infinite_product(factors: Sequence[Tuple[int, Callable[[int], int], int]], order: int) -> QSeries:
    """Evaluate prod_{m>=1} of the given factors modulo q^(order+1).

    Factors with m > order are congruent to 1, so the product is exact.
    """
    if order < 0:
        raise ValueError(f"order must be non-negative (got {order})")
    result = QSeries.one(order)
    for m in range(1, order + 1):
        for sign, t_exponent, power in factors:
            result = qs_product_factor(result, sign, t_exponent(m), m, power)
    return result


def qs_substitute_t_inverse(a: QSeries) -> QSeries:
    return QSeries(tuple(lp_substitute_t_inverse(c) for c in a.coeffs))


def qs_substitute_q_times_t(a: QSeries, power: int = 1) -> QSeries:
    """Replace q by q * t^power: the q^n coefficient is multiplied by t^(power*n)."""
    return QSeries(tuple(lp_mul(c, LaurentPoly.monomial(power * n)) for n, c in enumerate(a.coeffs)))


__all__ = [
    "LaurentPoly",
    "ONE",
    "ProductFactor",
    "QSeries",
    "ZERO",
    "generalized_binomial",
    "lp_add",
    "lp_exact_divide",
    "lp_monomial",
    "lp_mul",
    "lp_scale",
    "lp_sub",
    "lp_substitute_t_inverse",
    "qs_add",
    "qs_divide_coefficients",
    "qs_infinite_product",
    "qs_inverse",
    "qs_mul",
    "qs_power",
    "qs_product_factor",
    "qs_scale",
    "qs_sub",
    "qs_substitute_q_times_t",
    "qs_substitute_t_inverse",
]
