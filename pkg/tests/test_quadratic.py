import math
from fractions import Fraction

import pytest
from mpmath import iv

from irrmeter.core.exceptions import IndeterminateComparisonError
from irrmeter.engine.exactmath import nu
from irrmeter.engine.intervals import (
    decide,
    endpoints,
    fraction_to_decimal,
    hull,
    less_or_equal,
    to_interval,
    width,
    working_precision,
)
from irrmeter.engine.quadratic import QuadraticNumber, compare_with_radical
from irrmeter.models.reports import IntervalValue

RHO2 = QuadraticNumber(17, 12, 2)


def test_radicand_normalization():
    """Radicands are reduced to squarefree integers."""
    assert QuadraticNumber(0, 1, 8) == QuadraticNumber(0, 2, 2)
    assert QuadraticNumber(1, 1, Fraction(1, 2)) == QuadraticNumber(1, Fraction(1, 2), 2)
    assert QuadraticNumber(3, 1, 9) == 6
    assert QuadraticNumber(3, 1, 9).is_rational


def test_field_arithmetic():
    """Products, powers and inverses stay exact."""
    s = QuadraticNumber.sqrt(2)
    assert (1 + s) * (1 - s) == -1
    assert QuadraticNumber(3, 2, 2) ** 2 == RHO2
    assert RHO2.inverse() == QuadraticNumber(17, -12, 2)
    assert RHO2.norm() == 1
    assert RHO2 / RHO2 == 1
    assert str(RHO2) == "17 + 12*sqrt(2)"


def test_mixed_fields_rejected():
    """sqrt(2) + sqrt(3) has no representation."""
    with pytest.raises(ValueError):
        QuadraticNumber.sqrt(2) + QuadraticNumber.sqrt(3)


def test_exact_signs():
    """17 - 12 sqrt(2) is tiny but positive."""
    assert QuadraticNumber(17, -12, 2).sign() == 1
    assert QuadraticNumber(-17, 12, 2).sign() == -1
    assert QuadraticNumber.sqrt(2) < Fraction(3, 2)
    assert abs(QuadraticNumber(-17, 12, 2)) == QuadraticNumber(17, -12, 2)


def test_enclosure():
    """The enclosure of sqrt(2) brackets it."""
    with working_precision(128):
        lo, hi = endpoints(to_interval(QuadraticNumber.sqrt(2)))
    assert lo * lo <= 2 <= hi * hi


def test_compare_with_radical():
    """Comparisons against 3^(3/2) by clearing exponent denominators."""
    r = nu(Fraction(1, 3))
    assert compare_with_radical(RHO2, r) == 1
    assert compare_with_radical(QuadraticNumber.sqrt(27), r) == 0
    assert compare_with_radical(QuadraticNumber(1), r, scale=5) == -1
    assert compare_with_radical(QuadraticNumber(1), r, scale=6) == 1
    assert compare_with_radical(QuadraticNumber(-1), r) == -1


def test_decide_refines_and_gives_up():
    """Signs are decided when possible; an exact zero stays indeterminate up to the cap."""

    def gap():
        return to_interval(QuadraticNumber.sqrt(2)) - to_interval(Fraction(141421356237, 10**11))

    assert decide(gap, "sqrt(2) > 1.41421356237")[0] == 1

    def zero():
        s = to_interval(QuadraticNumber.sqrt(2))
        return s * s - 2

    with pytest.raises(IndeterminateComparisonError):
        decide(zero, "sqrt(2)^2 = 2", prec_bits=64, cap_bits=256)


def test_interval_helpers():
    """hull, width and certified comparisons."""
    with working_precision(64):
        a, b = to_interval(1), to_interval(Fraction(3, 2))
        assert endpoints(hull(a, b)) == (Fraction(1), Fraction(3, 2))
        assert width(hull(a, b)) == Fraction(1, 2)
        assert less_or_equal(a, b) is True
        assert less_or_equal(b, a) is False
        assert less_or_equal(hull(a, b), to_interval(Fraction(5, 4))) is None


def test_endpoints_of_tiny_and_huge_intervals():
    """Endpoints far outside the float range still have plain int parts."""
    with working_precision(256):
        tiny = to_interval(Fraction(1, 3**700))
        huge = iv.mpf(2) ** 1500 * to_interval(Fraction(7, 3))
        for x in (tiny, huge):
            lo, hi = endpoints(x)
            for part in (lo.numerator, lo.denominator, hi.numerator, hi.denominator):
                assert type(part) is int
            assert lo <= hi
        lo, _ = endpoints(tiny)
        assert math.log(lo.denominator) - math.log(lo.numerator) > 700


def test_decimal_rendering():
    """Directed rounding of decimal strings."""
    assert fraction_to_decimal(Fraction(-1, 3), 3, "floor") == "-0.334"
    assert fraction_to_decimal(Fraction(-1, 3), 3, "ceiling") == "-0.333"
    assert fraction_to_decimal(Fraction(7, 2), 0, "floor") == "3"
    assert IntervalValue(lo="2.7428", hi="2.7429", prec_bits=64).truncated(2) == "2.74"
    assert IntervalValue(lo="2.7399", hi="2.7401", prec_bits=64).truncated(2) is None
