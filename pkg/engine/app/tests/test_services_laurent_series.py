"""Tests for exact Laurent polynomials and truncated q-series."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from app.core.errors import InexactDivision, NonUnitConstantTerm
from app.services.laurent_series import (
    ONE,
    ZERO,
    LaurentPoly,
    ProductFactor,
    QSeries,
    generalized_binomial,
    lp_exact_divide,
    lp_mul,
    lp_substitute_t_inverse,
    qs_add,
    qs_infinite_product,
    qs_inverse,
    qs_mul,
    qs_power,
    qs_product_factor,
    qs_substitute_q_times_t,
    qs_substitute_t_inverse,
)

SEEDS = [3, 17, 2024, 31337]


def lp(terms):
    return LaurentPoly.from_dict(terms)


def random_poly(rng: random.Random) -> LaurentPoly:
    return lp({rng.randint(-3, 3): Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(0, 3))})


def random_series(rng: random.Random, order: int) -> QSeries:
    return QSeries.from_coefficients([random_poly(rng) for _ in range(order + 1)], order)


def random_unit_series(rng: random.Random, order: int) -> QSeries:
    head = LaurentPoly.monomial(rng.randint(-3, 3), Fraction(rng.choice([-3, -1, 1, 2, 5]), rng.randint(1, 4)))
    tail = [random_poly(rng) for _ in range(order)]
    return QSeries.from_coefficients([head] + tail, order)


def partition_count(n: int, largest: int) -> int:
    """Partitions of n into parts no larger than ``largest``, by direct recursion."""
    if n == 0:
        return 1
    return sum(partition_count(n - part, part) for part in range(1, min(n, largest) + 1))


class TestLaurentPoly:
    """Arithmetic on sparse Laurent polynomials."""

    def test_zero_coefficients_dropped(self):
        """Should drop zero coefficients on construction and after subtraction."""
        p = lp({-2: 1, 0: 0, 3: Fraction(1, 2)})
        assert p.as_dict() == {-2: 1, 3: Fraction(1, 2)}
        assert lp({1: 1}) - lp({1: 1}) == ZERO

    def test_multiply(self):
        # (t^-1 + t)(t^-1 - t) = t^-2 - t^2
        assert lp_mul(lp({-1: 1, 1: 1}), lp({-1: 1, 1: -1})) == lp({-2: 1, 2: -1})

    def test_operators_accept_scalars(self):
        """Should mix Laurent polynomials with plain numbers."""
        p = lp({1: 2})
        assert p + 1 == lp({0: 1, 1: 2})
        assert 1 - p == lp({0: 1, 1: -2})
        assert p * Fraction(1, 2) == lp({1: 1})
        assert -p == lp({1: -2})

    def test_substitute_t_inverse(self):
        assert lp_substitute_t_inverse(lp({-2: 3, 1: 1})) == lp({2: 3, -1: 1})

    def test_exact_divide(self):
        # t^4 - 1 = (t^2 - 1)(t^2 + 1)
        assert lp_exact_divide(lp({4: 1, 0: -1}), lp({2: 1, 0: -1})) == lp({2: 1, 0: 1})

    def test_exact_divide_negative_exponents(self):
        """Should divide exactly when the quotient has negative exponents."""
        numerator = lp_mul(lp({-3: 1, 0: 2}), lp({2: 1, 0: -1}))
        assert lp_exact_divide(numerator, lp({2: 1, 0: -1})) == lp({-3: 1, 0: 2})

    def test_inexact_division(self):
        """Should raise InexactDivision when a remainder is left."""
        with pytest.raises(InexactDivision):
            lp_exact_divide(ONE, lp({2: 1, 0: -1}))

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            lp_exact_divide(ONE, ZERO)

    def test_extremes(self):
        """Should report exponent bounds and refuse them for zero."""
        p = lp({-4: 1, 2: 5})
        assert (p.min_exponent, p.max_exponent) == (-4, 2)
        with pytest.raises(ValueError):
            ZERO.min_exponent

    def test_str(self):
        assert str(lp({-2: 1, 0: 3, 2: -1})) == "t^-2 + 3 - t^2"
        assert str(ZERO) == "0"


class TestQSeries:
    """Truncated power series in q."""

    def test_padding_and_order(self):
        """Should pad missing coefficients with zero up to the order."""
        s = QSeries.from_coefficients([1, 2], 3)
        assert s.order == 3
        assert s.coefficient(3) == ZERO
        with pytest.raises(IndexError):
            s.coefficient(4)

    def test_mixed_orders_truncate(self):
        """Should truncate to the smaller order instead of failing."""
        a = QSeries.from_coefficients([1, 1, 1], 2)
        b = QSeries.from_coefficients([1, 1], 1)
        assert (a + b).order == 1
        assert (a * b).order == 1

    def test_inverse_of_one_minus_q(self):
        one_minus_q = QSeries.from_coefficients([1, -1], 5)
        assert qs_inverse(one_minus_q) == QSeries.from_coefficients([1] * 6, 5)

    def test_inverse_long_division(self):
        """Should invert (t^2 - 1) - (t^4 - t^-2) q after stripping t^2 - 1."""
        series = QSeries.from_coefficients([ONE, lp({2: -1, 0: -1, -2: -1})], 3)
        inverse = qs_inverse(series)
        assert inverse.coefficient(1) == lp({2: 1, 0: 1, -2: 1})

    def test_inverse_roundtrip(self):
        s = QSeries.from_coefficients([lp({2: 3}), lp({-1: 1, 1: 1}), lp({0: 7})], 4)
        assert qs_mul(s, qs_inverse(s)) == QSeries.one(4)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_inverse_roundtrip_random(self, seed):
        """Should give exactly 1 for any series with a unit head."""
        rng = random.Random(seed)
        for order in range(5):
            s = random_unit_series(rng, order)
            assert qs_mul(s, qs_inverse(s)) == QSeries.one(order)
            assert qs_mul(qs_inverse(s), s) == QSeries.one(order)

    def test_inverse_needs_unit_head(self):
        """Should refuse to invert a series whose constant term has two terms."""
        with pytest.raises(NonUnitConstantTerm):
            qs_inverse(QSeries.from_coefficients([lp({2: 1, 0: -1})], 2))

    def test_power(self):
        s = QSeries.from_coefficients([1, 1], 3)
        assert qs_power(s, 3) == QSeries.from_coefficients([1, 3, 3, 1], 3)
        assert qs_power(s, 0) == QSeries.one(3)

    def test_substitutions(self):
        """Should substitute 1/t and q t^2 coefficientwise."""
        s = QSeries.from_coefficients([1, lp({-2: 1}), lp({1: 1})], 2)
        assert qs_substitute_t_inverse(s).coefficient(1) == lp({2: 1})
        shifted = qs_substitute_q_times_t(s, power=2)
        assert shifted.coefficient(1) == lp({0: 1})
        assert shifted.coefficient(2) == lp({5: 1})

    def test_substitute_q_times_t_power_one(self):
        s = QSeries.from_coefficients([1, lp({-2: 1, 0: 1, 2: 1})], 1)
        assert qs_substitute_q_times_t(s).coefficient(1) == lp({-1: 1, 1: 1, 3: 1})


class TestRingLaws:
    """Randomized checks of the series ring structure."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_multiplication_commutes_and_associates(self, seed):
        """Should satisfy ab = ba and (ab)c = a(bc)."""
        rng = random.Random(seed)
        a, b, c = (random_series(rng, 4) for _ in range(3))
        assert qs_mul(a, b) == qs_mul(b, a)
        assert qs_mul(qs_mul(a, b), c) == qs_mul(a, qs_mul(b, c))

    @pytest.mark.parametrize("seed", SEEDS)
    def test_addition_commutes_and_associates(self, seed):
        rng = random.Random(seed)
        a, b, c = (random_series(rng, 4) for _ in range(3))
        assert qs_add(a, b) == qs_add(b, a)
        assert qs_add(qs_add(a, b), c) == qs_add(a, qs_add(b, c))

    @pytest.mark.parametrize("seed", SEEDS)
    def test_distributivity(self, seed):
        """Should satisfy a(b + c) = ab + ac."""
        rng = random.Random(seed)
        a, b, c = (random_series(rng, 4) for _ in range(3))
        assert qs_mul(a, qs_add(b, c)) == qs_add(qs_mul(a, b), qs_mul(a, c))

    @pytest.mark.parametrize("seed", SEEDS)
    def test_t_inverse_is_an_involution(self, seed):
        """Should undo itself and commute with multiplication."""
        rng = random.Random(seed)
        a, b = random_series(rng, 4), random_series(rng, 4)
        assert qs_substitute_t_inverse(qs_substitute_t_inverse(a)) == a
        assert qs_substitute_t_inverse(qs_mul(a, b)) == qs_mul(qs_substitute_t_inverse(a), qs_substitute_t_inverse(b))


class TestProducts:
    """Binomial factors and infinite products."""

    @pytest.mark.parametrize(
        "power,k,expected",
        [(3, 2, 3), (3, 4, 0), (-1, 5, -1), (-2, 2, 3)],
    )
    def test_generalized_binomial(self, power, k, expected):
        assert generalized_binomial(power, k) == expected

    def test_product_factor_negative_power(self):
        # (1 - q)^-1
        out = qs_product_factor(QSeries.one(4), -1, 0, 1, -1)
        assert out == QSeries.from_coefficients([1, 1, 1, 1, 1], 4)

    def test_successive_product_factors(self):
        """Should expand (1 - t^2 q)(1 - t^2 q^2)(1 - t^2 q^3) applied to 1."""
        out = QSeries.one(3)
        for m in (1, 2, 3):
            out = qs_product_factor(out, -1, 2, m, 1)
        assert out == QSeries.from_coefficients([ONE, lp({2: -1}), lp({2: -1}), lp({4: 1, 2: -1})], 3)

    def test_product_factor_rejects_bad_sign(self):
        """Should accept only +1 and -1 as the sign."""
        with pytest.raises(ValueError):
            qs_product_factor(QSeries.one(2), 2, 0, 1, 1)

    def test_partition_generating_function(self):
        partitions = qs_infinite_product([ProductFactor(-1, lambda m: 0, -1)], 5)
        assert [p.coefficient(0) for p in partitions.coeffs] == [1, 1, 2, 3, 5, 7]

    def test_partition_counts_match_recursion(self):
        """Should match brute-force partition counts for every n up to 20."""
        partitions = qs_infinite_product([ProductFactor(-1, lambda m: 0, -1)], 20)
        assert [c.as_dict() for c in partitions.coeffs] == [{0: partition_count(n, n)} for n in range(21)]

    def test_t_weighted_product(self):
        """Should expand prod (1 - t^-2 q^m) to order 2."""
        product = qs_infinite_product([ProductFactor(-1, lambda m: -2, 1)], 2)
        assert product == QSeries.from_coefficients([ONE, lp({-2: -1}), lp({-2: -1})], 2)

    def test_euler_pentagonal(self):
        product = qs_infinite_product([ProductFactor(-1, lambda m: 0, 1)], 7)
        assert [p.coefficient(0) for p in product.coeffs] == [1, -1, -1, 0, 0, 1, 0, 1]
