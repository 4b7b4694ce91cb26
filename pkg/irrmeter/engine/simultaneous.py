"""
Approximation criteria for sequences of integer matrices.

typeI: every row x of M_n satisfies |x_1|+...+|x_s| <= Q_n and |x.theta| <= 1/E_n;
then lambda(theta) <= limsup log Q_n / log E_{n-1}.
typeII: |x_0| <= Q_n and max_i |x_0 theta_i - x_i| <= 1/E_n; then the dual
exponent omega(theta) obeys the same bound. Row checks are exact on the
rational enclosures of theta.
"""

from fractions import Fraction
from typing import Optional, Sequence, Union

from mpmath import iv

from irrmeter.core.config import settings
from irrmeter.core.exceptions import HypothesisError
from irrmeter.core.logging import get_logger
from irrmeter.engine.exactmath import to_rational
from irrmeter.engine.intervals import Interval, endpoints, to_interval, working_precision
from irrmeter.engine.measure import effective_constants, effective_measure, evaluate_f, mu_binomial
from irrmeter.engine.pade import kappa_scaled_pair
from irrmeter.models.criterion import (
    ApproxMode,
    CriterionInput,
    ExponentBound,
    GeometricRates,
    LowerBound,
    RowVerdict,
)
from irrmeter.models.params import HypergeomParams
from irrmeter.models.reports import IntervalValue, Outcome, Verdict

logger = get_logger(__name__)

RationalInterval = tuple[Fraction, Fraction]


def _scale(x: int, theta: RationalInterval) -> RationalInterval:
    lo, hi = x * theta[0], x * theta[1]
    return (lo, hi) if lo <= hi else (hi, lo)


def _add(u: RationalInterval, v: RationalInterval) -> RationalInterval:
    return u[0] + v[0], u[1] + v[1]


def _abs_range(u: RationalInterval) -> RationalInterval:
    lo, hi = u
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


def _compare(u: RationalInterval, limit: Fraction) -> Verdict:
    """Verdict for |u| <= limit on an enclosure."""
    lo, hi = _abs_range(u)
    if hi <= limit:
        return Verdict.PASS
    if lo > limit:
        return Verdict.FAIL
    return Verdict.INDETERMINATE


def linear_form(row: Sequence[int], theta: Sequence[RationalInterval]) -> RationalInterval:
    """Exact enclosure of x.theta."""
    total: RationalInterval = (Fraction(0), Fraction(0))
    for x, t in zip(row, theta):
        total = _add(total, _scale(x, t))
    return total


def _row_verdict(
    n: int, i: int, row: Sequence[int], inp: CriterionInput, Q: Fraction, E: Fraction, mode: ApproxMode
) -> RowVerdict:
    limit = 1 / E
    if mode is ApproxMode.TYPE_I:
        size = sum(abs(x) for x in row[1:])
        error = linear_form(row, inp.theta)
        error_verdict = _compare(error, limit)
        error_hi = _abs_range(error)[1]
    else:
        size = abs(row[0])
        error_verdict = Verdict.PASS
        error_hi = Fraction(0)
        for j in range(1, inp.s + 1):
            # x_0 theta_j - x_j theta_0 with theta_0 = 1
            component = _add(_scale(row[0], inp.theta[j]), (Fraction(-row[j]), Fraction(-row[j])))
            verdict = _compare(component, limit)
            error_hi = max(error_hi, _abs_range(component)[1])
            if verdict is Verdict.FAIL or error_verdict is Verdict.FAIL:
                error_verdict = Verdict.FAIL
            elif verdict is Verdict.INDETERMINATE:
                error_verdict = Verdict.INDETERMINATE
    size_ok = size <= Q
    if not size_ok or error_verdict is Verdict.FAIL:
        verdict = Verdict.FAIL
    else:
        verdict = error_verdict
    return RowVerdict(
        n=n,
        row=i,
        verdict=verdict,
        size=str(size),
        size_ok=size_ok,
        error_hi=str(error_hi),
        error_verdict=error_verdict,
    )


def verify_matrix_hypotheses(inp: CriterionInput, mode: Optional[ApproxMode] = None) -> list[RowVerdict]:
    """One verdict per (n, row); undecidable comparisons are reported as indeterminate."""
    mode = mode or inp.mode
    verdicts = [
        _row_verdict(n, i, row, inp, Q, E, mode)
        for n, matrix, Q, E in zip(inp.indices, inp.matrices, inp.Q, inp.E)
        for i, row in enumerate(matrix)
    ]
    failed = sum(v.verdict is Verdict.FAIL for v in verdicts)
    logger.info("Matrix hypotheses checked", rows=len(verdicts), failed=failed, mode=mode.value)
    return verdicts


def _log_ratio(numerator: Fraction, denominator: Fraction) -> Interval:
    return iv.ln(to_interval(numerator)) / iv.ln(to_interval(denominator))


def _max_interval(values: list[Interval]) -> Interval:
    lo = max(values, key=lambda x: endpoints(x)[0]).a
    hi = max(values, key=lambda x: endpoints(x)[1]).b
    return iv.mpf([lo, hi])


def exponent_bound(inp: CriterionInput, prec_bits: Optional[int] = None) -> ExponentBound:
    """Bound for lambda (typeI) or omega (typeII); certified only for declared geometric rates."""
    bits = prec_bits or settings.default_precision_bits
    kind = "lambda" if inp.mode is ApproxMode.TYPE_I else "omega"
    with working_precision(bits):
        if inp.geometric is not None:
            value = _log_ratio(inp.geometric.alpha, inp.geometric.beta)
            return ExponentBound(
                kind=kind,
                value=IntervalValue.from_interval(value, bits),
                certified=True,
                note="declared geometric rates",
            )
        ratios = [_log_ratio(inp.Q[i], inp.E[i - 1]) for i in range(1, len(inp.Q)) if inp.E[i - 1] > 1]
        if not ratios:
            raise HypothesisError("E_(n-1) > 1 for some n", "no usable consecutive indices")
        value = _max_interval(ratios)
        window = (inp.indices[0], inp.indices[-1])
    return ExponentBound(
        kind=kind,
        value=IntervalValue.from_interval(value, bits),
        certified=False,
        window=window,
        note="finite-window proxy for a limsup",
    )


def mu_from_pairs(
    pairs: Sequence[tuple[int, int]],
    Q: Sequence,
    E: Sequence,
    window: Optional[tuple[int, int]] = None,
    geometric: Optional[GeometricRates] = None,
    prec_bits: Optional[int] = None,
) -> ExponentBound:
    """mu <= 1 + limsup log Q_{n+1}/log E_{n-1} for pairs (p_n, q_n) with |q_n theta - p_n| <= 1/E_n.

    Args:
        pairs: (p_n, q_n) for n = 0, 1, ...
        Q: Q_n for the same indices
        E: E_n for the same indices
        window: indices (n0, n1) over which the proxy maximum is taken
        geometric: declared rates; the result is then 1 + log(alpha)/log(beta), certified
        prec_bits: working precision

    Returns:
        ExponentBound of kind ``mu``
    """
    if not (len(pairs) == len(Q) == len(E)):
        raise ValueError("pairs, Q and E must have the same length")
    Q = [to_rational(x) for x in Q]
    E = [to_rational(x) for x in E]
    n0, n1 = window or (1, len(pairs) - 2)
    if not 1 <= n0 <= n1 <= len(pairs) - 2:
        raise ValueError(f"window ({n0}, {n1}) must lie in [1, {len(pairs) - 2}]")
    for n in range(n0 - 1, n1 + 1):
        (p, q), (p1, q1) = pairs[n], pairs[n + 1]
        if p * q1 - p1 * q == 0:
            raise HypothesisError("consecutive pairs independent", f"pairs {n} and {n + 1} are proportional")
    bits = prec_bits or settings.default_precision_bits
    with working_precision(bits):
        if geometric is not None:
            value = 1 + _log_ratio(geometric.alpha, geometric.beta)
            return ExponentBound(
                kind="mu",
                value=IntervalValue.from_interval(value, bits),
                certified=True,
                window=(n0, n1),
                note="declared geometric rates",
            )
        ratios = []
        for n in range(n0, n1 + 1):
            if E[n - 1] <= 1:
                raise HypothesisError("E_(n-1) > 1", f"E_{n - 1} = {E[n - 1]}")
            ratios.append(_log_ratio(Q[n + 1], E[n - 1]))
        value = 1 + _max_interval(ratios)
    logger.info("Exponent proxy computed", window=[n0, n1])
    return ExponentBound(
        kind="mu",
        value=IntervalValue.from_interval(value, bits),
        certified=False,
        window=(n0, n1),
        note="finite-window proxy for a limsup",
    )


def effective_lower_bound(
    source: Union[CriterionInput, GeometricRates],
    point: Sequence[int],
    mode: ApproxMode = ApproxMode.TYPE_I,
    prec_bits: Optional[int] = None,
) -> LowerBound:
    """Effective lower bound at an integer point under declared geometric rates.

    typeI bounds max_i |y_0 theta_i - y_i| by 1/(c y_0^lambda) once 2 b y_0 >= 1;
    typeII bounds |y.theta| by 1/(c Y^omega) with Y = sum_{i>=1} |y_i| >= 1/(2b).
    """
    rates = source.geometric if isinstance(source, CriterionInput) else source
    if rates is None:
        raise HypothesisError("geometric rates declared", "effective bounds need a, b, alpha, beta")
    point = [int(y) for y in point]
    height = point[0] if mode is ApproxMode.TYPE_I else sum(abs(y) for y in point[1:])
    floor = 1 / (2 * rates.b)
    if height < floor:
        raise HypothesisError("validity floor", f"height {height} < 1/(2b) = {floor}")
    bits = prec_bits or settings.default_precision_bits
    constants = effective_constants(rates.a, rates.b, rates.alpha, rates.beta, bits)
    with working_precision(bits):
        lam = to_interval(constants.lambda_exp.lower), to_interval(constants.lambda_exp.upper)
        exponent = iv.mpf([lam[0].a, lam[1].b])
        c = iv.mpf([to_interval(constants.c.lower).a, to_interval(constants.c.upper).b])
        bound = 1 / (c * iv.exp(exponent * iv.ln(iv.mpf(height))))
        result = LowerBound(
            mode=mode,
            point=point,
            height=height,
            bound=IntervalValue.from_interval(bound, bits),
            exponent=constants.lambda_exp,
            c=constants.c,
            floor=str(floor),
        )
    return result


def criterion_input_from_pade(omega, beta, nmax: int, prec_bits: Optional[int] = None) -> CriterionInput:
    """typeI input for theta_1 = f(beta) of the binomial preset from kappa_n-scaled Padé pairs.

    M_n has rows (-q_n, p_n) and (-q_{n+1}, p_{n+1}) with p_n = kappa_n P_{n,0}(beta),
    q_n = kappa_n P_{n,1}(beta). Q_n = a Q^(n+1) and E_n = E^n / b use the prefix-certified
    constants of the Bennett bound; indices with E_n < 1 are skipped.
    """
    omega, beta = to_rational(omega), to_rational(beta)
    bits = prec_bits or settings.default_precision_bits
    params = HypergeomParams.binomial(omega)
    mode = "bennett" if abs(omega) == Fraction(1, 3) else "simple"
    report = mu_binomial(omega, beta, mode, bits)
    if report.outcome is not Outcome.BOUND:
        raise HypothesisError("E > 1", f"no bound for omega={omega}, beta={beta}")
    constants = effective_measure(params, beta, report, nmax + 1, bits)
    a = to_rational(constants.a)
    # slack for the enclosure width of theta in the row checks
    b = to_rational(constants.b) * (1 + Fraction(1, 2**32))
    Q_rate, E_rate = report.Q.upper, report.E.lower
    # p_n * width(theta) must stay below 1/E_n up to n = nmax + 1
    growth_bits = (nmax + 2) * (Q_rate.numerator.bit_length() - Q_rate.denominator.bit_length() + 1)
    growth_bits += (nmax + 2) * (E_rate.numerator.bit_length() - E_rate.denominator.bit_length() + 1)
    growth_bits += a.numerator.bit_length() + b.denominator.bit_length()
    theta = endpoints(evaluate_f(params, beta, bits + growth_bits + 64))

    rows = {}
    for n in range(1, nmax + 2):
        p, q, _ = kappa_scaled_pair(n, params, beta)
        rows[n] = [-q, p]
    indices, matrices, Qs, Es = [], [], [], []
    for n in range(1, nmax + 1):
        E_n = E_rate**n / b
        if E_n < 1:
            continue
        indices.append(n)
        matrices.append([rows[n], rows[n + 1]])
        Qs.append(a * Q_rate ** (n + 1))
        Es.append(E_n)
    if not indices:
        raise HypothesisError("E_n >= 1 for some n <= nmax", f"nmax={nmax}")
    return CriterionInput(
        s=1,
        mode=ApproxMode.TYPE_I,
        theta=[(1, 1), theta],
        indices=indices,
        matrices=matrices,
        Q=Qs,
        E=Es,
        geometric=GeometricRates(a=a * Q_rate, b=b, alpha=Q_rate, beta=E_rate),
    )
