"""Exact rational scalars and truncated q-series."""

from fractions import Fraction

import pytest

from orbicorr.exactnum import QSeries, parse_rational, render_rational


class TestParseRational:
    def test_integer(self):
        assert parse_rational("7") == Fraction(7)

    def test_fraction(self):
        assert parse_rational("3/4") == Fraction(3, 4)

    def test_negative(self):
        assert parse_rational("-1/24") == Fraction(-1, 24)

    def test_whitespace(self):
        assert parse_rational(" 2/9 ") == Fraction(2, 9)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_rational("one third")

    def test_decimal_text_is_exact(self):
        assert parse_rational("0.5") == Fraction(1, 2)


class TestRenderRational:
    def test_integer(self):
        assert render_rational(Fraction(5)) == "5"

    def test_fraction(self):
        assert render_rational(Fraction(3, 4)) == "3/4"

    def test_negative(self):
        assert render_rational(Fraction(-1, 2)) == "-1/2"

    def test_roundtrip(self):
        for v in (Fraction(0), Fraction(22, 7), Fraction(-1112183, 262144)):
            assert parse_rational(render_rational(v)) == v


class TestQSeriesConstruction:
    def test_zero_coefficients_dropped(self):
        s = QSeries({0: 0, 1: Fraction(1, 3)}, order=4)
        assert s.items() == [(1, Fraction(1, 3))]

    def test_degree_at_order_rejected(self):
        with pytest.raises(ValueError):
            QSeries({4: 1}, order=4)

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            QSeries({-1: 1}, order=4)

    def test_nonpositive_order_rejected(self):
        with pytest.raises(ValueError):
            QSeries({}, order=0)

    def test_from_coefficients(self):
        s = QSeries.from_coefficients([Fraction(1, 4), 0, 0, 0, 1])
        assert s.order == 5
        assert s.coefficients() == [
            Fraction(1, 4),
            Fraction(0),
            Fraction(0),
            Fraction(0),
            Fraction(1),
        ]

    def test_zero_and_one(self):
        assert QSeries.zero(3).is_zero()
        assert QSeries.one(3).coefficient(0) == 1
        assert not QSeries.one(3).is_zero()


class TestQSeriesAccess:
    def test_coefficient(self):
        s = QSeries({0: Fraction(1, 3), 2: -2}, order=5)
        assert s.coefficient(0) == Fraction(1, 3)
        assert s.coefficient(1) == 0
        assert s.coefficient(2) == -2

    def test_coefficient_beyond_order_rejected(self):
        s = QSeries({0: 1}, order=2)
        with pytest.raises(ValueError):
            s.coefficient(2)

    def test_coefficient_negative_degree_rejected(self):
        s = QSeries({0: 1}, order=2)
        with pytest.raises(ValueError):
            s.coefficient(-1)


class TestQSeriesArithmetic:
    def test_addition(self):
        a = QSeries({0: 1, 1: 2}, order=4)
        b = QSeries({1: -2, 3: 5}, order=4)
        assert (a + b).items() == [(0, Fraction(1)), (3, Fraction(5))]

    def test_subtraction_and_negation(self):
        a = QSeries({1: Fraction(1, 2)}, order=3)
        assert (a - a).is_zero()
        assert (-a).coefficient(1) == Fraction(-1, 2)

    def test_product(self):
        one_plus = QSeries({0: 1, 1: 1}, order=4)
        one_minus = QSeries({0: 1, 1: -1}, order=4)
        assert (one_plus * one_minus).items() == [(0, Fraction(1)), (2, Fraction(-1))]

    def test_product_truncates_to_min_order(self):
        a = QSeries({0: 1}, order=6)
        b = QSeries({0: 1}, order=3)
        assert (a * b).order == 3
        assert (a + b).order == 3

    def test_scalar_multiplication(self):
        a = QSeries({2: Fraction(1, 3)}, order=4)
        assert (3 * a).coefficient(2) == 1
        assert (a * Fraction(1, 2)).coefficient(2) == Fraction(1, 6)

    def test_geometric_inverse_identity(self):
        # (1 - q) * (1 + q + q^2 + ... ) == 1 up to truncation
        n = 8
        geo = QSeries({d: 1 for d in range(n)}, order=n)
        one_minus = QSeries({0: 1, 1: -1}, order=n)
        assert (one_minus * geo) == QSeries.one(n)

    def test_equality_and_hash(self):
        a = QSeries({1: Fraction(2, 4)}, order=3)
        b = QSeries({1: Fraction(1, 2)}, order=3)
        c = QSeries({1: Fraction(1, 2)}, order=4)
        assert a == b
        assert hash(a) == hash(b)
        assert a != c
