"""Generating functions for Hilbert schemes of points.

Normalized series use P^(t) = sum b_i t^(i - 2n) for the space of n points, so
the q^n coefficient of a normalized series is symmetric under t -> 1/t whenever
Poincare duality holds. ``betti_table`` undoes the shift.
"""
from __future__ import annotations

import logging
from typing import Dict

from app.core.errors import NegativeOrFractionalBetti
from app.schemas.betti import CurveBetti, SurfaceBetti

from .laurent_series import (
    LaurentPoly,
    ProductFactor,
    QSeries,
    qs_divide_coefficients,
    qs_infinite_product,
    qs_inverse,
    qs_mul,
    qs_scale,
    qs_sub,
    qs_substitute_t_inverse,
)

logger = logging.getLogger(__name__)

# t^2 - 1, the virtual Poincare polynomial of C*
C_STAR = LaurentPoly.from_dict({2: 1, 0: -1})


def goettsche_series(s: SurfaceBetti, order: int) -> QSeries:
    """Unnormalized H_S(q, t) = sum_n P(S^[n], t) q^n.

    Args:
        s: Betti numbers of the surface.
        order: last power of q kept.
    """
    factors = [
        ProductFactor(1, lambda m: 2 * m - 1, s.b1),
        ProductFactor(1, lambda m: 2 * m + 1, s.b3),
        ProductFactor(-1, lambda m: 2 * m - 2, -s.b0),
        ProductFactor(-1, lambda m: 2 * m, -s.b2),
        ProductFactor(-1, lambda m: 2 * m + 2, -s.b4),
    ]
    return qs_infinite_product(factors, order)


def goettsche_normalized(s: SurfaceBetti, order: int) -> QSeries:
    """Normalized H^_S(q, t); substituting q -> q t^2 gives goettsche_series."""
    factors = [
        ProductFactor(1, lambda m: -1, s.b1),
        ProductFactor(1, lambda m: 1, s.b3),
        ProductFactor(-1, lambda m: -2, -s.b0),
        ProductFactor(-1, lambda m: 0, -s.b2),
        ProductFactor(-1, lambda m: 2, -s.b4),
    ]
    return qs_infinite_product(factors, order)


def c_series(d: CurveBetti, order: int) -> QSeries:
    """The divisor factor prod (1 + t^-1 q^m)^b1 / ((1 - t^-2 q^m)^b0 (1 - q^m)^b2)."""
    factors = [
        ProductFactor(1, lambda m: -1, d.b1),
        ProductFactor(-1, lambda m: -2, -d.b0),
        ProductFactor(-1, lambda m: 0, -d.b2),
    ]
    return qs_infinite_product(factors, order)


def _divide_by_denominator(numerator: QSeries, denominator: QSeries) -> QSeries:
    # the q^0 term of every denominator here is t^2 - 1; strip it so the rest is a unit
    reduced = qs_divide_coefficients(denominator, C_STAR)
    return qs_mul(numerator, qs_inverse(reduced))


def relative_series(s: SurfaceBetti, d: CurveBetti, order: int) -> QSeries:
    """Normalized series of the relative Hilbert schemes of S relative to D.

    Computes (t^2 - 1) H^_S(q, t) / (t^2 C_D(q, t) - C_D(q, 1/t)).
    """
    curve = c_series(d, order)
    denominator = qs_sub(qs_scale(curve, LaurentPoly.monomial(2)), qs_substitute_t_inverse(curve))
    logger.debug(f"relative series for surface={s.as_tuple()} curve={d.as_tuple()} to order {order}")
    return _divide_by_denominator(goettsche_normalized(s, order), denominator)


def plane_relative_series(order: int) -> QSeries:
    """(t^2 - 1) / (t^2 prod (1 - t^2 q^m) - prod (1 - t^-2 q^m))."""
    upper = qs_infinite_product([ProductFactor(-1, lambda m: 2, 1)], order)
    lower = qs_infinite_product([ProductFactor(-1, lambda m: -2, 1)], order)
    denominator = qs_sub(qs_scale(upper, LaurentPoly.monomial(2)), lower)
    return _divide_by_denominator(QSeries.one(order), denominator)


def open_complement_series(s: SurfaceBetti, d: CurveBetti, order: int) -> QSeries:
    """Normalized series of the Hilbert schemes of S minus D."""
    return qs_mul(goettsche_normalized(s, order), qs_inverse(c_series(d, order)))


def punctured_normal_bundle_series(d: CurveBetti, order: int) -> QSeries:
    """Normalized series for points on D x C*: C_D(q, 1/t) / C_D(q, t)."""
    curve = c_series(d, order)
    return qs_mul(qs_substitute_t_inverse(curve), qs_inverse(curve))


def _geometric_sum(x: QSeries) -> QSeries:
    """sum_{i >= 0} x^i for x with vanishing constant term."""
    if not x.coeffs[0].is_zero():
        raise ValueError("geometric sum needs a series without constant term")
    return qs_inverse(qs_sub(QSeries.one(x.order), x))


def relative_series_by_strata(s: SurfaceBetti, d: CurveBetti, order: int) -> QSeries:
    """Relative series summed over the number of bubbles.

    Each bubble contributes the points on D x C* modulo the scaling C*, with at
    least one point in every bubble.
    """
    bubble = qs_sub(punctured_normal_bundle_series(d, order), QSeries.one(order))
    per_bubble = qs_divide_coefficients(bubble, C_STAR)
    return qs_mul(open_complement_series(s, d, order), _geometric_sum(per_bubble))


def _plane_points(order: int) -> QSeries:
    # prod 1/(1 - t^2 q^m): points of the plane supported on the whole surface
    return qs_infinite_product([ProductFactor(-1, lambda m: 2, -1)], order)


def canonical_form_series(order: int) -> QSeries:
    """Generating function of canonical product classes, graded by length and tau."""
    base = _plane_points(order)
    bubble = qs_scale(
        qs_sub(base, QSeries.one(order)),
        LaurentPoly.from_dict({-2: 1, -4: 1}),
    )
    return qs_mul(base, _geometric_sum(bubble))


def normal_form_series(order: int) -> QSeries:
    """Generating function of normal product classes, graded by length and tau."""
    base = _plane_points(order)
    ratio = qs_mul(qs_infinite_product([ProductFactor(-1, lambda m: -2, 1)], order), base)
    bubble = qs_divide_coefficients(qs_sub(ratio, QSeries.one(order)), C_STAR)
    return qs_mul(base, _geometric_sum(bubble))


def betti_table(series: QSeries, n: int) -> Dict[int, int]:
    """Betti numbers by cohomological degree read off the q^n coefficient.

    Exponent e of the normalized coefficient sits in degree e + 2n.

    Raises:
        NegativeOrFractionalBetti: a coefficient is negative or not an integer.
    """
    if n < 0 or n > series.order:
        raise ValueError(f"n={n} outside the series order {series.order}")
    table: Dict[int, int] = {}
    for exponent, coefficient in series.coefficient(n):
        if coefficient.denominator != 1 or coefficient < 0:
            raise NegativeOrFractionalBetti(
                f"coefficient {coefficient} of t^{exponent} q^{n} is not a non-negative integer"
            )
        table[exponent + 2 * n] = int(coefficient)
    return table


__all__ = [
    "C_STAR",
    "betti_table",
    "c_series",
    "canonical_form_series",
    "goettsche_normalized",
    "goettsche_series",
    "normal_form_series",
    "open_complement_series",
    "plane_relative_series",
    "punctured_normal_bundle_series",
    "relative_series",
    "relative_series_by_strata",
]
