import math
from fractions import Fraction

import pytest

from irrmeter.core.exceptions import HypothesisError
from irrmeter.engine.intervals import endpoints, to_interval, working_precision
from irrmeter.engine.pade import pade_general, remainder_value
from irrmeter.engine.quadratic import QuadraticNumber
from irrmeter.engine.recurrence import (
    CharRoots,
    RecurrenceSpec,
    alpha_zero_remainder_profile,
    char_roots,
    evaluate_spec,
    growth_bound,
    pade_trace,
    poincare_threshold,
    ratio_estimate,
    remainder_trace,
    u_decompose,
)

RHO2 = QuadraticNumber(17, 12, 2)
RHO1 = QuadraticNumber(17, -12, 2)


def test_char_roots_at_nine():
    """X^2 - 34X + 1 has roots 17 +- 12 sqrt(2)."""
    roots = char_roots(1, 9)
    assert roots.lambda1 == RHO1
    assert roots.lambda2 == RHO2
    assert roots.rho1 == RHO1 and roots.rho2 == RHO2


def test_char_roots_negative_beta():
    """For beta = -9 both roots are negative."""
    roots = char_roots(1, -9)
    assert roots.lambda2 == QuadraticNumber(-19, -6, 10)
    assert roots.rho2 == QuadraticNumber(19, 6, 10)


def test_char_roots_hypotheses():
    """Complex, double and out-of-range cases are refused."""
    with pytest.raises(HypothesisError):
        char_roots(1, Fraction(1, 2))
    with pytest.raises(HypothesisError):
        CharRoots.from_monic(0, 1)
    with pytest.raises(HypothesisError):
        CharRoots.from_monic(-2, 1)


def test_pade_spec_limits(binomial_third):
    """The Padé recurrence at beta = 9 has characteristic polynomial X^2 - 34X + 1."""
    spec = RecurrenceSpec.from_pade(binomial_third, 9)
    assert spec.char == (Fraction(1), Fraction(-34))
    assert spec.perturbations_vanish()


def test_forward_evaluation_matches_direct(binomial_third, shifted_exp_minus_one):
    """The recurrence reproduces both Padé polynomials at beta."""
    for params, beta in ((binomial_third, Fraction(9)), (shifted_exp_minus_one, Fraction(2))):
        traces = pade_trace(params, beta, 30, 0), pade_trace(params, beta, 30, 1)
        for n in range(31):
            assert (traces[0][n], traces[1][n]) == pade_general(n, params).evaluate(beta)


def test_constant_recurrence_and_threshold():
    """Fibonacci: threshold 1, dominant index 2 throughout."""
    spec = RecurrenceSpec.constant([-1, -1])
    trace = evaluate_spec(spec, [0, 1], 20)
    assert trace[10] == 55
    report = poincare_threshold(spec, trace)
    assert report.N == 1
    assert report.limit_index == 2
    assert report.violations == ()
    with pytest.raises(ValueError):
        evaluate_spec(spec, [1], 5)


def test_pade_and_remainder_indices(binomial_third):
    """P_{n,0}(9) follows the dominant root, R_n(9) the small one."""
    spec = RecurrenceSpec.from_pade(binomial_third, 9)
    report = poincare_threshold(spec, pade_trace(binomial_third, 9, 60))
    assert report.limit_index == 2
    assert report.violations == ()
    remainder = poincare_threshold(spec, remainder_trace(binomial_third, 9, 30, 128), prec_bits=128)
    assert remainder.limit_index == 1


def test_growth_rate_of_pade_values(binomial_third):
    """|P_{200,0}(9)|^(1/200) lies within 2% of 17 + 12 sqrt(2)."""
    value = pade_trace(binomial_third, 9, 200)[200]
    log_abs = math.log(abs(value.numerator)) - math.log(value.denominator)
    rate = math.exp(log_abs / 200)
    assert rate == pytest.approx(float(RHO2), rel=0.02)


def test_ratio_residuals_are_second_order(binomial_third):
    """n^2 |X_{n+1}/X_n - lambda2 (1 - 1/(2n))| is bounded and level across the two half-windows."""
    trace = pade_trace(binomial_third, 9, 401)
    report = ratio_estimate(trace, RHO2, (50, 400), 256)
    first, second = (endpoints(x)[1] for x in report.half_sups)
    assert endpoints(report.scaled_sup)[1] < 10**4
    assert abs(second - first) <= first * Fraction(1, 10)


def test_remainder_ratio_tends_to_small_root(binomial_third):
    """R_{n+1}(9)/R_n(9) approaches 17 - 12 sqrt(2)."""
    with working_precision(256):
        r200 = remainder_value(200, binomial_third, 9, 256)
        r201 = remainder_value(201, binomial_third, 9, 256)
        gap = abs(r201 / r200 - to_interval(RHO1))
        size = abs(r200)
        root = to_interval(RHO1)
        lo_size = endpoints(size)[0]
    assert endpoints(gap)[1] < Fraction(1, 10**4)
    rate = math.exp((math.log(lo_size.numerator) - math.log(lo_size.denominator)) / 200)
    assert rate == pytest.approx(float(endpoints(root)[0]), rel=0.05)


def test_growth_bound(binomial_third):
    """C bounds |X_n| sqrt(n) / rho2^n on the prefix."""
    report = growth_bound(pade_trace(binomial_third, 9, 40), RHO2, 128)
    lo, hi = endpoints(report.C)
    assert 0 < lo <= hi < 10
    assert report.certified_prefix


def test_u_decompose_order_two():
    """Binet: the Fibonacci components are -+1/sqrt(5)."""
    spec = RecurrenceSpec.constant([-1, -1])
    roots = spec.roots()
    u1, u2 = u_decompose(spec, [0, 1])
    assert u1 + u2 == 0
    assert u2 * u2 == Fraction(1, 5)
    assert roots.lambda1 * u1 + roots.lambda2 * u2 == 1


def test_u_decompose_order_three():
    """g(n) = 4^n lives entirely on the root 4 of (X-1)(X-2)(X-4)."""
    spec = RecurrenceSpec.constant([-8, 14, -7])
    u1, u2, u3 = u_decompose(spec, [1, 4, 16], prec_bits=128)
    eps = Fraction(1, 10**20)
    for component, target in ((u1, 0), (u2, 0), (u3, 1)):
        lo, hi = endpoints(component)
        assert target - eps <= lo <= hi <= target + eps


def test_alpha_zero_profile(shifted_exp_minus_one, binomial_third):
    """For gamma = -1 the normalized remainder is flat in log n."""
    profile = alpha_zero_remainder_profile(shifted_exp_minus_one, 2, 30, 128)
    assert len(profile.ns) == 30
    assert abs(profile.slope) < 0.5
    with pytest.raises(ValueError):
        alpha_zero_remainder_profile(binomial_third, 9, 10)
