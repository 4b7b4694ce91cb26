from fractions import Fraction

import mpmath
import pytest

from irrmeter.core.exceptions import HypothesisError
from irrmeter.engine.cubic_roots import CUBIC_ROOTS, CubicRootTable
from irrmeter.engine.intervals import endpoints, working_precision
from irrmeter.engine.measure import (
    DeltaKind,
    DeltaMode,
    delta_binomial,
    delta_log,
    delta_main,
    effective_constants,
    effective_measure,
    evaluate_f,
    mu_binomial,
    mu_exp,
    mu_log,
    mu_main,
)
from irrmeter.models.params import HypergeomParams
from irrmeter.models.reports import Outcome


def log_route_oracle(log_delta, beta):
    """1 + (log rho2 + log Delta)/(log rho2 - log Delta) with rho2 = 2 beta - 1 + 2 sqrt(beta^2 - beta)."""
    with mpmath.workdps(40):
        log_rho2 = mpmath.log((2 * beta - 1) + 2 * mpmath.sqrt(beta * beta - beta))
        return float(1 + (log_rho2 + log_delta) / (log_rho2 - log_delta))


def test_bennett_example_at_nine():
    """omega = 1/3, beta = 9 with the Bennett Delta gives 2.7428036524..."""
    report = mu_binomial(Fraction(1, 3), 9, "bennett", 128)
    assert report.outcome is Outcome.BOUND
    assert report.certified
    assert report.mu.truncated(10) == "2.7428036524"
    assert report.exit_code == 0


def test_simple_delta_at_nine():
    """omega = 1/3, beta = 9 with Delta = 3^(3/2)."""
    report = mu_binomial(Fraction(1, 3), 9, "simple")
    assert float(report.mu.lower) == pytest.approx(3.7554, abs=1e-3)
    assert report.delta_exact == "3^(3/2)"


@pytest.mark.parametrize("beta", [9, 2])
def test_log_route_at_zero(beta):
    """x = 0: mu = 1 + (log rho2 + 1)/(log rho2 - 1)."""
    report = mu_log(0, beta)
    assert report.outcome is Outcome.BOUND
    assert float(report.mu.lower) == pytest.approx(log_route_oracle(1, beta), rel=1e-12)


def test_general_route_reduces_to_log_route(shifted_log_zero):
    """The general Delta at (1, 0, 0) equals e, as in the log route."""
    general = mu_main(shifted_log_zero, 9)
    log = mu_log(0, 9)
    assert float(general.mu.lower) == pytest.approx(float(log.mu.lower), rel=1e-15)
    assert general.diagnostics["finite_n"] == 60


def test_log_route_half_at_nine():
    """x = 1/2, beta = 9: Delta = 4e^2 < rho2 and the bound is about 50.7."""
    report = mu_log(Fraction(1, 2), 9)
    assert report.outcome is Outcome.BOUND
    assert float(report.mu.lower) == pytest.approx(log_route_oracle(mpmath.log(4) + 2, 9), rel=1e-9)
    assert 50 < float(report.mu.lower) < 51


def test_log_route_no_conclusion():
    """x = 1/2, beta = 2: E <= 1 yields no number."""
    report = mu_log(Fraction(1, 2), 2)
    assert report.outcome is Outcome.NO_CONCLUSION
    assert report.mu is None
    assert "E <= 1: no conclusion" in report.warnings
    assert report.exit_code == 2


def test_general_delta_no_conclusion():
    """omega = 1/2, beta = 2 through the general Delta = 4e."""
    report = mu_main(HypergeomParams.binomial(Fraction(1, 2)), 2)
    assert report.outcome is Outcome.NO_CONCLUSION


def test_failed_hypotheses_are_reported():
    """Violated preconditions give a structured report, not an exception."""
    assert mu_log(1, 9).outcome is Outcome.HYPOTHESIS_FAILED
    report = mu_binomial(Fraction(1, 2), 9, "bennett")
    assert report.outcome is Outcome.HYPOTHESIS_FAILED
    assert [h.name for h in report.failed_hypotheses()] == ["|omega| = 1/3"]
    degenerate = mu_main(HypergeomParams(alpha=1, gamma=0, delta=2), 9)
    assert degenerate.outcome is Outcome.HYPOTHESIS_FAILED
    assert degenerate.exit_code == 2


def test_alpha_zero_is_exact(shifted_exp_minus_one):
    """alpha = 0 values have exponent exactly 2."""
    report = mu_exp(-1, 2)
    assert report.outcome is Outcome.EXACT
    assert report.mu.contains(2)
    assert mu_main(shifted_exp_minus_one, 2).route == "exp"
    assert mu_exp(-1, 0).outcome is Outcome.HYPOTHESIS_FAILED


def test_window_mode_is_not_certified():
    """The finite-window proxy is reported but flagged."""
    report = mu_binomial(Fraction(1, 3), 9, "window:1:20")
    assert report.outcome is Outcome.BOUND
    assert not report.certified
    assert any("window" in w for w in report.warnings)


def test_delta_mode_parsing():
    """simple, bennett and window:n0:n1."""
    assert DeltaMode.parse("window:3:10") == DeltaMode(DeltaKind.WINDOW, (3, 10))
    assert str(DeltaMode.parse("Bennett")) == "bennett"
    for text in ("bennett:2", "window:5:2", "window:1", "foo"):
        with pytest.raises(ValueError):
            DeltaMode.parse(text)
    with pytest.raises(HypothesisError):
        delta_binomial(Fraction(1, 2), 9, DeltaMode(DeltaKind.BENNETT))


def test_cubic_root_table():
    """Every row of the table truncates to its printed measure, in order."""
    rows = CubicRootTable(workers=2).compute()
    assert [r.theta for r in rows] == [c.theta for c in CUBIC_ROOTS]
    assert all(r.matches for r in rows), [(r.theta, r.truncated_mu) for r in rows if not r.matches]
    frame = CubicRootTable.to_frame(rows)
    assert list(frame["mu"]) == [c.printed_mu for c in CUBIC_ROOTS]


def test_evaluate_f(binomial_third):
    """f(9) for omega = 1/3 is (1/9)(8/9)^(1/3)."""
    lo, hi = endpoints(evaluate_f(binomial_third, 9, 128))
    assert lo**3 <= Fraction(8, 9**4) <= hi**3
    assert hi - lo < Fraction(1, 2**120)


@pytest.mark.parametrize(
    "compute",
    [
        lambda bits: mu_binomial(Fraction(1, 3), 9, "bennett", bits),
        lambda bits: mu_log(0, 9, bits),
        lambda bits: mu_log(Fraction(1, 2), 9, bits),
    ],
)
def test_reports_nest_under_doubled_precision(compute):
    """The 128-bit delta, Q, E and mu enclose their 256-bit counterparts."""
    coarse, fine = compute(128), compute(256)
    for name in ("delta", "Q", "E", "mu"):
        outer, inner = getattr(coarse, name), getattr(fine, name)
        assert outer.lower <= inner.lower <= inner.upper <= outer.upper
        assert inner.upper - inner.lower <= outer.upper - outer.lower


def test_evaluate_f_nests_under_doubled_precision(binomial_third, shifted_log_zero):
    """Enclosures of f(beta) shrink inside each other as precision doubles."""
    for params in (binomial_third, shifted_log_zero):
        lo, hi = endpoints(evaluate_f(params, 9, 128))
        inner_lo, inner_hi = endpoints(evaluate_f(params, 9, 256))
        assert lo <= inner_lo <= inner_hi <= hi


@pytest.mark.parametrize("beta", [9, 25, -512])
def test_bennett_delta_improves_on_simple(beta):
    """The smaller Bennett Delta never gives a weaker exponent than Delta = 3^(3/2)."""
    simple = mu_binomial(Fraction(1, 3), beta, "simple")
    bennett = mu_binomial(Fraction(1, 3), beta, "bennett")
    assert simple.outcome is Outcome.BOUND and bennett.outcome is Outcome.BOUND
    assert simple.mu.lower >= bennett.mu.upper


def test_E_grows_with_beta():
    """For integer beta, E increases with |beta| and the exponent decreases."""
    reports = [mu_binomial(Fraction(1, 3), beta, "simple") for beta in (9, 25, 49, 125)]
    for smaller, larger in zip(reports, reports[1:]):
        assert smaller.E.upper < larger.E.lower
        assert larger.mu.upper < smaller.mu.lower
    assert all(r.E.lower > 1 for r in reports)


def test_delta_exponent_for_third_denominators():
    """den 3 uses the progression-lcm rate 9/4 in place of 3/2; den <= 2 is unchanged."""
    assert delta_log(Fraction(1, 3), 9).exp_exponent == Fraction(9, 4)
    assert delta_log(Fraction(1, 2), 9).exp_exponent == 2
    assert delta_log(0, 9).exp_exponent == 1
    general = HypergeomParams(alpha=1, gamma=Fraction(1, 3), delta=Fraction(1, 4))
    assert delta_main(general, 9).exp_exponent == Fraction(9, 4)


def test_effective_constants():
    """a = b = 1, alpha = 4, beta = 2: lambda = 2 and c = 32."""
    constants = effective_constants(1, 1, 4, 2)
    assert constants.lambda_exp.contains(2)
    assert constants.c.contains(32)
    assert constants.floor == "1/2"
    assert constants.q0 == 1
    with pytest.raises(HypothesisError):
        effective_constants(1, 1, 1, 2)


def test_effective_measure(binomial_third):
    """Prefix constants for the Bennett bound at 9."""
    report = mu_binomial(Fraction(1, 3), 9, "bennett")
    constants = effective_measure(binomial_third, 9, report, 12)
    assert constants.prefix_only
    assert Fraction(constants.a) > 0 and Fraction(constants.b) > 0
    with pytest.raises(HypothesisError):
        effective_measure(binomial_third, 9, mu_log(Fraction(1, 2), 2), 12)


def test_half_delta_exceeds_rho2_at_two():
    """x = 1/2, beta = 2: Delta = 4e^2 ~ 29.556 is above rho2 = 3 + 2 sqrt(2) < 6."""
    with working_precision(128):
        lo, hi = endpoints(delta_log(Fraction(1, 2), 2).to_interval())
    assert Fraction(2955, 100) < lo <= hi < Fraction(2956, 100)
    assert lo > 3 + 2 * Fraction(3, 2)
