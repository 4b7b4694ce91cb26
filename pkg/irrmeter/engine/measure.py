"""
Irrationality-measure bounds for values of the hypergeometric family.

Every route reduces to a growth constant Delta of the denominators and the
characteristic roots rho1 < rho2 at beta:

    Q = rho2 * Delta,   E = 1 / (rho1 * Delta),   mu <= 1 + log Q / log E.

Hypotheses are checked exactly where possible; E > 1 is decided exactly when
Delta is a pure radical and by interval refinement otherwise.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

from mpmath import iv

from irrmeter.core.config import settings
from irrmeter.core.exceptions import ConsistencyError, HypothesisError
from irrmeter.core.logging import get_logger
from irrmeter.engine.exactmath import (
    FactoredRadical,
    Gn,
    Regime,
    den,
    detect_regime,
    kappa_n,
    nu,
    progression_lcm_rate,
    to_rational,
)
from irrmeter.engine.intervals import Interval, decide, endpoints, hull, to_interval, working_precision
from irrmeter.engine.pade import kappa_scaled_pair, remainder_value
from irrmeter.engine.quadratic import compare_with_radical
from irrmeter.engine.recurrence import CharRoots, char_roots
from irrmeter.models.params import HypergeomParams, Preset
from irrmeter.models.reports import EffectiveConstants, HypothesisCheck, IntervalValue, MeasureReport, Outcome, Verdict

logger = get_logger(__name__)


class DeltaKind(str, Enum):
    """How Delta is bounded in the binomial route."""

    SIMPLE = "simple"
    BENNETT = "bennett"
    WINDOW = "window"


@dataclass(frozen=True)
class DeltaMode:
    """Delta mode, with the index window for ``window``."""

    kind: DeltaKind = DeltaKind.SIMPLE
    window: Optional[tuple[int, int]] = None

    @classmethod
    def parse(cls, text: str) -> "DeltaMode":
        """Parse ``simple``, ``bennett`` or ``window:n0:n1``."""
        head, _, rest = text.strip().partition(":")
        try:
            kind = DeltaKind(head.lower())
        except ValueError as e:
            raise ValueError(f"unknown delta mode {text!r}") from e
        if kind is not DeltaKind.WINDOW:
            if rest:
                raise ValueError(f"delta mode {head} takes no window")
            return cls(kind)
        try:
            n0, n1 = (int(part) for part in rest.split(":"))
        except ValueError as e:
            raise ValueError(f"window mode needs window:n0:n1, got {text!r}") from e
        if not 1 <= n0 <= n1:
            raise ValueError("window must satisfy 1 <= n0 <= n1")
        return cls(kind, (n0, n1))

    def __str__(self) -> str:
        if self.kind is DeltaKind.WINDOW and self.window:
            return f"window:{self.window[0]}:{self.window[1]}"
        return self.kind.value


@dataclass(frozen=True)
class DeltaBound:
    """Delta = radical * exp(exp_exponent) * exp(extra_log)."""

    radical: FactoredRadical
    exp_exponent: Fraction = Fraction(0)
    extra_log: Optional[Callable[[], Interval]] = field(default=None, compare=False)
    label: str = ""

    @property
    def is_radical(self) -> bool:
        return self.exp_exponent == 0 and self.extra_log is None

    def log_interval(self) -> Interval:
        total = self.radical.log_interval() + to_interval(self.exp_exponent)
        if self.extra_log is not None:
            total = total + self.extra_log()
        return total

    def to_interval(self) -> Interval:
        if self.is_radical:
            return self.radical.to_interval()
        return iv.exp(self.log_interval())

    def describe(self) -> str:
        parts = [self.radical.describe()]
        if self.exp_exponent:
            parts.append(f"exp({self.exp_exponent})")
        if self.label:
            parts.append(self.label)
        return " * ".join(parts)

def delta_main(params: HypergeomParams, beta) -> DeltaBound:
    """den(alpha) den(beta) exp(progression_lcm_rate(den(gamma))) nu(gamma) nu(delta/alpha)."""
    radical = nu(params.gamma) * nu(params.delta / params.alpha) * (den(params.alpha) * den(beta))
    return DeltaBound(radical, progression_lcm_rate(den(params.gamma)))


def delta_log(x, beta) -> DeltaBound:
    """den(beta) exp(progression_lcm_rate(den(x))) nu(x)."""
    x = to_rational(x)
    return DeltaBound(nu(x) * den(beta), progression_lcm_rate(den(x)))


def delta_binomial(omega, beta, mode: DeltaMode) -> DeltaBound:
    """Delta for the binomial route in the chosen mode."""
    omega = to_rational(omega)
    if mode.kind is DeltaKind.BENNETT:
        if abs(omega) != Fraction(1, 3):
            raise HypothesisError("|omega| = 1/3", f"bennett mode with omega={omega}")
        return DeltaBound(FactoredRadical.from_map({3: Fraction(3, 2)}, Fraction(den(beta), 2)))
    radical = nu(omega) * den(beta)
    if mode.kind is DeltaKind.SIMPLE:
        return DeltaBound(radical)
    n0, n1 = mode.window

    def window_log() -> Interval:
        # log max_n G_n^(-1/n) = -min_n log(G_n)/n
        logs = [-iv.ln(iv.mpf(Gn(omega, n))) / n for n in range(n0, n1 + 1)]
        best = hull(*logs)
        return iv.mpf([best.b, best.b])

    return DeltaBound(radical, extra_log=window_log, label=f"max_(n in [{n0},{n1}]) G_n^(-1/n)")


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------


def _check(name: str, holds: bool, detail: str = "") -> HypothesisCheck:
    return HypothesisCheck(name=name, verdict=Verdict.PASS if holds else Verdict.FAIL, detail=detail)


def _main_hypotheses(params: HypergeomParams, beta: Fraction) -> list[HypothesisCheck]:
    return [
        _check("|beta| > |alpha|", abs(beta) > abs(params.alpha), f"beta={beta}, alpha={params.alpha}"),
        _check("gamma >= -1", params.is_arithmetic, f"gamma={params.gamma}"),
        _check("delta not in alpha*N", params.delta_not_in_alpha_n, f"delta={params.delta}"),
        _check(
            "-(alpha*gamma + delta) not in alpha*N",
            params.shifted_not_in_alpha_n,
            f"-(alpha*gamma + delta)={-(params.alpha * params.gamma + params.delta)}",
        ),
    ]


def _failed_report(route: str, regime: str, inputs: dict, hypotheses: list[HypothesisCheck]) -> MeasureReport:
    failed = [h.name for h in hypotheses if h.verdict is not Verdict.PASS]
    logger.info("Hypothesis failed", route=route, failed=failed)
    return MeasureReport(
        route=route,
        regime=regime,
        outcome=Outcome.HYPOTHESIS_FAILED,
        inputs=inputs,
        hypotheses=hypotheses,
        warnings=[f"hypothesis failed: {name}" for name in failed],
    )


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------


def _e_exceeds_one(roots: CharRoots, alpha: Fraction, delta: DeltaBound, prec_bits: int) -> tuple[bool, int]:
    """Decide rho1 * Delta < 1, i.e. rho2 / alpha^2 > Delta; returns (verdict, bits used)."""
    if delta.is_radical:
        return compare_with_radical(roots.rho2, delta.radical, scale=1 / (alpha * alpha)) > 0, prec_bits

    def margin() -> Interval:
        return iv.ln(to_interval(roots.rho2)) - 2 * iv.ln(to_interval(abs(alpha))) - delta.log_interval()

    sign, bits = decide(margin, "E > 1", prec_bits)
    return sign > 0, bits


def _finite_n_diagnostic(
    params: HypergeomParams, beta: Fraction, delta: DeltaBound, regime: Regime, prec_bits: int
) -> dict:
    n = settings.finite_n_probe
    profile = kappa_n(params, beta, n, regime)
    with working_precision(prec_bits):
        log_kappa = iv.ln(to_interval(profile.kappa_n)) / n
        log_delta = delta.log_interval()
        return {
            "finite_n": n,
            "log_kappa_n_over_n": IntervalValue.from_interval(log_kappa, prec_bits).model_dump(),
            "log_delta": IntervalValue.from_interval(log_delta, prec_bits).model_dump(),
            "note": "finite-n value shown next to the asymptotic Delta; no domination is claimed",
        }


def _assemble(
    route: str,
    regime: str,
    inputs: dict,
    hypotheses: list[HypothesisCheck],
    roots: CharRoots,
    alpha: Fraction,
    delta: DeltaBound,
    prec_bits: int,
    certified: bool,
    warnings: Optional[list[str]] = None,
    diagnostics: Optional[dict] = None,
) -> MeasureReport:
    warnings = list(warnings or [])
    diagnostics = dict(diagnostics or {})
    e_ok, bits = _e_exceeds_one(roots, alpha, delta, prec_bits)
    bits = max(bits, prec_bits)
    how = "decided exactly" if delta.is_radical else f"decided at {bits} bits"
    hypotheses = hypotheses + [_check("E > 1", e_ok, how)]

    with working_precision(bits):
        log_rho2 = iv.ln(to_interval(roots.rho2))
        log_delta = delta.log_interval()
        # rho1 = alpha^2 / rho2 avoids cancellation in (2 beta - alpha) - 2 sqrt(...)
        log_Q = log_rho2 + log_delta
        log_E = log_rho2 - 2 * iv.ln(to_interval(abs(alpha))) - log_delta
        Q, E = iv.exp(log_Q), iv.exp(log_E)
        delta_value = IntervalValue.from_interval(delta.to_interval(), bits)
        report = dict(
            route=route,
            regime=regime,
            inputs=inputs,
            hypotheses=hypotheses,
            delta=delta_value,
            delta_exact=delta.describe(),
            Q=IntervalValue.from_interval(Q, bits),
            E=IntervalValue.from_interval(E, bits),
        )
        if not e_ok:
            warnings.append("E <= 1: no conclusion")
            logger.info("No conclusion", route=route, inputs=inputs)
            return MeasureReport(outcome=Outcome.NO_CONCLUSION, warnings=warnings, diagnostics=diagnostics, **report)
        mu = 1 + log_Q / log_E
        if mu.a < 2:
            diagnostics["mu_raw"] = IntervalValue.from_interval(mu, bits).model_dump()
            hi = endpoints(mu)[1]
            mu = iv.mpf(2) if hi < 2 else iv.mpf([iv.mpf(2), mu.b])
            warnings.append("mu interval clamped to the irrationality floor 2")
        mu_value = IntervalValue.from_interval(mu, bits)
    logger.info("Measure computed", route=route, mu_lo=mu_value.lo[:12], certified=certified)
    return MeasureReport(
        outcome=Outcome.BOUND, mu=mu_value, certified=certified, warnings=warnings, diagnostics=diagnostics, **report
    )


# ---------------------------------------------------------------------------
# Routes
# ---------------------------------------------------------------------------


def mu_main(params: HypergeomParams, beta, prec_bits: Optional[int] = None) -> MeasureReport:
    """Irrationality-measure bound for f(beta) with the general Delta.

    Args:
        params: (alpha, gamma, delta); alpha = 0 delegates to :func:`mu_exp`
        beta: rational evaluation point
        prec_bits: working precision

    Returns:
        MeasureReport with outcome bound, no_conclusion or hypothesis_failed
    """
    beta = to_rational(beta)
    if params.alpha == 0:
        return mu_exp(params.gamma, beta, delta=params.delta)
    bits = prec_bits or settings.default_precision_bits
    inputs = {**params.describe(), "beta": str(beta), "prec": str(bits)}
    regime = detect_regime(params)
    hypotheses = _main_hypotheses(params, beta)
    if any(h.verdict is not Verdict.PASS for h in hypotheses):
        return _failed_report("main", regime.value, inputs, hypotheses)
    delta = delta_main(params, beta)
    roots = char_roots(params.alpha, beta)
    diagnostics = _finite_n_diagnostic(params, beta, delta, regime, bits)
    return _assemble(
        "main", regime.value, inputs, hypotheses, roots, params.alpha, delta, bits, True, diagnostics=diagnostics
    )


def mu_log(x, beta, prec_bits: Optional[int] = None) -> MeasureReport:
    """Bound for the shifted logarithm at 1/beta, 0 <= x < 1."""
    x, beta = to_rational(x), to_rational(beta)
    bits = prec_bits or settings.default_precision_bits
    inputs = {"preset": Preset.SHIFTED_LOG.value, "x": str(x), "beta": str(beta), "prec": str(bits)}
    hypotheses = [_check("0 <= x < 1", 0 <= x < 1, f"x={x}"), _check("|beta| > 1", abs(beta) > 1, f"beta={beta}")]
    if any(h.verdict is not Verdict.PASS for h in hypotheses):
        return _failed_report("log", Regime.SHIFTED_LOG.value, inputs, hypotheses)
    params = HypergeomParams.shifted_log(x)
    delta = delta_log(x, beta)
    diagnostics = _finite_n_diagnostic(params, beta, delta, Regime.SHIFTED_LOG, bits)
    return _assemble(
        "log", Regime.SHIFTED_LOG.value, inputs, hypotheses, char_roots(1, beta), Fraction(1), delta, bits, True,
        diagnostics=diagnostics,
    )


def mu_binomial(
    omega, beta, delta_mode: DeltaMode | str = DeltaMode(), prec_bits: Optional[int] = None
) -> MeasureReport:
    """Bound for (1 - 1/beta)^omega.

    ``simple`` and ``bennett`` bounds are certified; ``window`` replaces the
    limsup of G_n^(-1/n) by its maximum over a finite window and is not.
    """
    omega, beta = to_rational(omega), to_rational(beta)
    mode = DeltaMode.parse(delta_mode) if isinstance(delta_mode, str) else delta_mode
    bits = prec_bits or settings.default_precision_bits
    inputs = {
        "preset": Preset.BINOMIAL.value,
        "omega": str(omega),
        "beta": str(beta),
        "delta_mode": str(mode),
        "prec": str(bits),
    }
    hypotheses = [
        _check("omega not an integer", omega.denominator != 1, f"omega={omega}"),
        _check("|beta| > 1", abs(beta) > 1, f"beta={beta}"),
    ]
    if mode.kind is DeltaKind.BENNETT:
        hypotheses.append(_check("|omega| = 1/3", abs(omega) == Fraction(1, 3), f"omega={omega}"))
    if any(h.verdict is not Verdict.PASS for h in hypotheses):
        return _failed_report("binomial", Regime.BINOMIAL.value, inputs, hypotheses)
    delta = delta_binomial(omega, beta, mode)
    certified = mode.kind is not DeltaKind.WINDOW
    warnings = [] if certified else ["window mode: finite-window proxy for a limsup, not certified"]
    return _assemble(
        "binomial", Regime.BINOMIAL.value, inputs, hypotheses, char_roots(1, beta), Fraction(1), delta, bits, certified,
        warnings=warnings,
    )


def mu_exp(gamma, beta, delta=-1) -> MeasureReport:
    """alpha = 0: the value is irrational with exponent exactly 2."""
    gamma, beta, delta = to_rational(gamma), to_rational(beta), to_rational(delta)
    bits = settings.default_precision_bits
    inputs = {"alpha": "0", "gamma": str(gamma), "delta": str(delta), "beta": str(beta)}
    hypotheses = [
        _check("beta != 0", beta != 0, f"beta={beta}"),
        _check("gamma >= -1", gamma >= -1, f"gamma={gamma}"),
        _check("delta != 0", delta != 0, f"delta={delta}"),
    ]
    if any(h.verdict is not Verdict.PASS for h in hypotheses):
        return _failed_report("exp", Regime.ALPHA_ZERO.value, inputs, hypotheses)
    logger.info("Exact exponent", route="exp", gamma=str(gamma), beta=str(beta))
    return MeasureReport(
        route="exp",
        regime=Regime.ALPHA_ZERO.value,
        outcome=Outcome.EXACT,
        inputs=inputs,
        hypotheses=hypotheses,
        mu=IntervalValue.exact(Fraction(2), bits),
        certified=True,
        diagnostics={
            "mechanism": "kappa_n contains n! while |R_n(beta)| decays like |delta^2/beta|^n/(2n)!",
        },
    )


# ---------------------------------------------------------------------------
# f(beta)
# ---------------------------------------------------------------------------


def evaluate_f(params: HypergeomParams, beta, prec_bits: Optional[int] = None) -> Interval:
    """Certified enclosure of f(beta) from the series with a geometric tail.

    The binomial preset is cross-checked against (1/beta)(1 - 1/beta)^omega.
    """
    beta = to_rational(beta)
    bits = prec_bits or settings.default_precision_bits
    value = remainder_value(0, params, beta, bits)
    if params.preset is Preset.BINOMIAL:
        with working_precision(bits + 32):
            closed = iv.exp(to_interval(params.omega) * iv.ln(to_interval(1 - 1 / beta))) / to_interval(beta)
            lo, hi = endpoints(value)
            clo, chi = endpoints(closed)
            if hi < clo or chi < lo:
                raise ConsistencyError(f"series and closed form of f({beta}) disagree")
    return value


# ---------------------------------------------------------------------------
# Effective constants
# ---------------------------------------------------------------------------


def effective_constants(
    a, b, alpha_growth, beta_growth, prec_bits: Optional[int] = None, prefix_only: bool = False
) -> EffectiveConstants:
    """lambda = log(alpha)/log(beta) and c = 2 a alpha (2b)^lambda, with the floor 2*b*y0 >= 1.

    Args:
        a: prefactor with Q_n = a * alpha^n
        b: prefactor with E_n = beta^n / b
        alpha_growth: geometric rate alpha > 1
        beta_growth: geometric rate beta > 1
        prec_bits: working precision
        prefix_only: mark a and b as certified only on a computed prefix

    Returns:
        EffectiveConstants
    """
    a, b = to_rational(a), to_rational(b)
    alpha_growth, beta_growth = to_rational(alpha_growth), to_rational(beta_growth)
    if alpha_growth <= 1 or beta_growth <= 1:
        raise HypothesisError("growth bases > 1", f"alpha={alpha_growth}, beta={beta_growth}")
    if a <= 0 or b <= 0:
        raise HypothesisError("a, b > 0", f"a={a}, b={b}")
    bits = prec_bits or settings.default_precision_bits
    with working_precision(bits):
        lam = iv.ln(to_interval(alpha_growth)) / iv.ln(to_interval(beta_growth))
        two_b = 2 * b
        power = iv.mpf(1) if two_b == 1 else iv.exp(lam * iv.ln(to_interval(two_b)))
        c = 2 * to_interval(a) * to_interval(alpha_growth) * power
        lam_value = IntervalValue.from_interval(lam, bits)
        c_value = IntervalValue.from_interval(c, bits)
    floor = 1 / two_b
    return EffectiveConstants(
        a=str(a),
        b=str(b),
        alpha_growth=str(alpha_growth),
        beta_growth=str(beta_growth),
        lambda_exp=lam_value,
        c=c_value,
        floor=str(floor),
        q0=max(1, math.ceil(floor)),
        prefix_only=prefix_only,
    )


def effective_measure(
    params: HypergeomParams, beta, report: MeasureReport, nmax: int, prec_bits: Optional[int] = None
) -> EffectiveConstants:
    """Prefix-certified constants a, b for a successful bound report.

    a = max_{1<=n<=nmax} max(|p_n|, |q_n|)/Q^n and b = max |p_n f(beta) - q_n| E^n, where
    (p_n, q_n) are the kappa_n-scaled Padé values, Q is rounded up and E down.
    """
    if report.outcome is not Outcome.BOUND or report.Q is None or report.E is None:
        raise HypothesisError("bound report", "effective constants need a successful bound")
    if not 1 <= nmax <= settings.nmax_cap:
        raise ValueError(f"nmax must lie in [1, {settings.nmax_cap}]")
    beta = to_rational(beta)
    bits = prec_bits or settings.default_precision_bits
    regime = Regime(report.regime)
    Q_hi, E_lo = report.Q.upper, report.E.lower
    a = Fraction(0)
    b = Fraction(0)
    for n in range(1, nmax + 1):
        p, q, profile = kappa_scaled_pair(n, params, beta, regime)
        a = max(a, Fraction(max(abs(p), abs(q))) / Q_hi**n)
        with working_precision(bits):
            remainder = abs(to_interval(profile.kappa_n) * remainder_value(n, params, beta, bits))
            b = max(b, endpoints(remainder)[1] * E_lo**n)
    logger.info("Effective constants computed", nmax=nmax, route=report.route)
    return effective_constants(a, b, Q_hi, E_lo, bits, prefix_only=True)
