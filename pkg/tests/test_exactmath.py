import math
from fractions import Fraction

import pytest

from irrmeter.engine.exactmath import (
    Dn,
    FactoredRadical,
    Gn,
    Regime,
    den_set,
    detect_regime,
    dn,
    gbinom,
    kappa_n,
    nu,
    nu_n,
    parse_rational,
    pochhammer,
    prime_factors,
    progression_lcm_rate,
    to_rational,
    totient,
    valuation,
)
from irrmeter.engine.intervals import endpoints, working_precision
from irrmeter.models.params import HypergeomParams


@pytest.mark.parametrize(
    "text,expected",
    [
        ("1/3", Fraction(1, 3)),
        ("-8^3", Fraction(-512)),
        ("467^3/5", Fraction(467**3, 5)),
        ("-(253)^3/19", Fraction(-(253**3), 19)),
        ("1.25", Fraction(5, 4)),
        ("(2/3)^-2", Fraction(9, 4)),
        ("9^3", Fraction(729)),
    ],
)
def test_parse_rational(text, expected):
    """Rational expressions are parsed exactly."""
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["", "1/0", "2^(1/2)", "3 4", "(1", "x"])
def test_parse_rational_rejects(text):
    """Malformed expressions raise ValueError."""
    with pytest.raises(ValueError):
        parse_rational(text)


def test_to_rational_refuses_floats():
    """Binary floats and booleans are not exact inputs."""
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(TypeError):
        to_rational(True)
    assert to_rational("2/4") == Fraction(1, 2)


def test_denominators_and_primes():
    """den_set, prime_factors, totient and valuation."""
    assert den_set([]) == 1
    assert den_set(["1/6", "3/4", 2]) == 12
    assert prime_factors(360) == ((2, 3), (3, 2), (5, 1))
    assert totient(12) == 4
    assert totient(1) == 1
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 5), 5) == -1
    with pytest.raises(ValueError):
        valuation(0, 3)


@pytest.mark.parametrize(
    "first,second",
    [(["1/6", "3/4"], ["5/8", 2]), ([], ["2/9"]), (["1/10", "1/15"], ["7/10", "1/35"]), ([3, "1/2"], ["1/2"])],
)
def test_den_set_of_union_is_lcm(first, second):
    """den_set of a union is the lcm of the parts, so it grows with the set."""
    union = den_set(first + second)
    assert union == math.lcm(den_set(first), den_set(second))
    assert union % den_set(first) == 0 and union % den_set(second) == 0


def test_progression_lcm_rate():
    """Rates for small moduli; d <= 2 matches d/phi(d)."""
    assert progression_lcm_rate(1) == 1
    assert progression_lcm_rate(2) == 2
    assert progression_lcm_rate(3) == Fraction(9, 4)
    assert progression_lcm_rate(5) == Fraction(125, 48)
    assert progression_lcm_rate(6) == Fraction(18, 5)
    with pytest.raises(ValueError):
        progression_lcm_rate(0)


def test_nu_is_shift_invariant():
    """nu and nu_n depend only on den(y)."""
    assert nu(Fraction(7, 3)) == nu(Fraction(1, 3))
    assert nu(5) == FactoredRadical()
    for n in range(12):
        assert nu_n(Fraction(7, 3), n) == nu_n(Fraction(1, 3), n)


def test_nu_n_values():
    """nu_n(y) = prod q^(n + floor(n/(q-1)))."""
    assert nu_n(Fraction(1, 3), 5) == 3**7
    assert nu_n(Fraction(1, 6), 4) == 2**8 * 3**6
    assert nu_n(Fraction(2, 1), 9) == 1


@pytest.mark.parametrize(
    "a", [Fraction(1, 3), Fraction(2, 5), Fraction(-1, 3), Fraction(1, 6), Fraction(5, 7), Fraction(1, 2)]
)
def test_nu_n_clears_pochhammer_quotients(a):
    """nu_n(a) (a)_k / k! is an integer for 0 <= k <= n <= 40."""
    for n in range(41):
        scale = nu_n(a, n)
        for k in range(n + 1):
            assert (scale * pochhammer(a, k) / math.factorial(k)).denominator == 1


def test_factored_radical_exact_powers():
    """nu(1/12) = 2^2 * 3^(3/2) squares to 432."""
    r = nu(Fraction(1, 12))
    assert r.exponents == {2: Fraction(2), 3: Fraction(3, 2)}
    assert r.exponent_lcm() == 2
    assert r.power_clearing_denominators() == (2, Fraction(432))
    assert not r.is_rational
    with pytest.raises(ValueError):
        r.power(3)


def test_factored_radical_enclosure():
    """The enclosure of 3^(3/2) brackets sqrt(27)."""
    with working_precision(128):
        lo, hi = endpoints(nu(Fraction(1, 3)).to_interval())
    assert lo * lo <= 27 <= hi * hi
    assert hi - lo < Fraction(1, 2**100)


def test_factored_radical_validation():
    """Composite bases and nonpositive exponents are rejected."""
    with pytest.raises(ValueError):
        FactoredRadical(((4, Fraction(1)),))
    with pytest.raises(ValueError):
        FactoredRadical(((3, Fraction(-1, 2)),))
    with pytest.raises(ValueError):
        FactoredRadical(((3, Fraction(1)), (2, Fraction(1))))


def test_pochhammer_and_gbinom():
    """Rising factorials and generalized binomials."""
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(7, 0) == 1
    assert gbinom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gbinom(5, 2) == 10
    assert gbinom(3, 5) == 0


def test_Dn_and_dn():
    """D_n and d_n on small cases."""
    assert Dn(-1, 10) == 1
    assert Dn(0, 4) == 12
    assert dn(0, 4) == 12
    assert dn(Fraction(1, 2), 2) == 15
    with pytest.raises(ValueError):
        dn(1, 2)
    with pytest.raises(ValueError):
        Dn(Fraction(-3, 2), 3)


@pytest.mark.parametrize("gamma", [0, Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(7, 3), -1])
def test_Dn_divides_progression_lcm(gamma):
    """D_n(gamma) divides the lcm of the numerators of gamma + 2, ..., gamma + n."""
    a, d = (gamma + 2).numerator, (gamma + 2).denominator
    for n in range(2, 61):
        terms = [a + d * i for i in range(n - 1)]
        assert math.lcm(*terms) % Dn(gamma, n) == 0


@pytest.mark.parametrize("gamma", [0, Fraction(1, 2)])
def test_Dn_envelope(gamma):
    """log D_n / n stays within 1/4 of den/phi(den) up to n = 500."""
    rate = float(progression_lcm_rate(den_set([gamma])))
    assert rate == den_set([gamma]) / totient(den_set([gamma]))
    for n in [*range(1, 501, 7), 500]:
        assert math.log(Dn(gamma, n)) / n <= rate + 0.25


def test_Dn_outgrows_totient_ratio_for_thirds():
    """D_30(1/3) exceeds exp(30 * (3/2 + 1/4)) yet stays below the progression-lcm rate."""
    value = Dn(Fraction(1, 3), 30)
    for p in (31, 37, 43, 61, 67, 73, 79, 41):
        assert value % p == 0
    assert math.log(value) > 30 * 1.75
    assert math.log(value) / 30 < float(progression_lcm_rate(3)) + 0.25


def test_Gn_small_index():
    """G_2(1/3) = gcd(-3, 36, 81, 63, 81) = 3."""
    assert Gn(Fraction(1, 3), 2) == 3
    with pytest.raises(ValueError):
        Gn(3, 2)
    with pytest.raises(ValueError):
        Gn(Fraction(1, 3), 0)


def test_Gn_lower_bound_for_one_third():
    """5563 G_n(1/3) >= 2^n for n <= 40."""
    for n in range(1, 41):
        assert 5563 * Gn(Fraction(1, 3), n) >= 2**n


def test_detect_regime(binomial_third, shifted_log_zero, shifted_exp_minus_one):
    """Each preset lands in its denominator regime."""
    assert detect_regime(binomial_third) is Regime.BINOMIAL
    assert detect_regime(shifted_log_zero) is Regime.SHIFTED_LOG
    assert detect_regime(shifted_exp_minus_one) is Regime.ALPHA_ZERO
    general = HypergeomParams(alpha=1, gamma=Fraction(1, 2), delta=Fraction(1, 3))
    assert detect_regime(general) is Regime.GENERAL


def test_kappa_n_examples(binomial_third, shifted_log_zero):
    """kappa_2 in the binomial, shifted_log and alpha_zero regimes."""
    assert kappa_n(binomial_third, 9, 2).kappa_n == 9
    assert kappa_n(binomial_third, 9, 2).Gn == 3
    alpha_zero = HypergeomParams(alpha=0, gamma=-1, delta=1)
    assert kappa_n(shifted_log_zero, Fraction(1, 2), 2).kappa_n == 8
    assert kappa_n(alpha_zero, Fraction(1, 2), 2).kappa_n == 8
    assert kappa_n(shifted_log_zero, 2, 2).kappa_n == 2
    assert kappa_n(alpha_zero, 2, 2).kappa_n == 2


def test_kappa_n_rejects_wrong_regime(binomial_third):
    """Forcing a regime whose shape does not match fails."""
    with pytest.raises(ValueError):
        kappa_n(binomial_third, 9, 2, regime="shifted_log")
    with pytest.raises(ValueError):
        kappa_n(binomial_third, 9, -1)
