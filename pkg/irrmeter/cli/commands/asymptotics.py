"""
``asymptotics``: Poincaré-Perron data of the Padé and remainder sequences at beta.
"""

from typing import Any, Dict

from irrmeter.cli.output import CommandResult
from irrmeter.cli.runconfig import DEFAULT_ASYMPTOTICS_NMAX, RunConfig
from irrmeter.core.exceptions import UsageError
from irrmeter.core.logging import get_logger
from irrmeter.engine.intervals import Interval, working_precision
from irrmeter.engine.quadratic import QuadraticNumber
from irrmeter.engine.recurrence import (
    RecurrenceSpec,
    ThresholdReport,
    alpha_zero_remainder_profile,
    growth_bound,
    pade_trace,
    poincare_threshold,
    ratio_estimate,
    remainder_trace,
)
from irrmeter.models.reports import IntervalValue

logger = get_logger(__name__)

REMAINDER_HORIZON = 60


def _value(x: Interval, bits: int) -> Dict[str, Any]:
    return IntervalValue.from_interval(x, bits).model_dump()


def _root(q: QuadraticNumber, bits: int) -> Dict[str, Any]:
    with working_precision(bits):
        return {"exact": str(q), "value": _value(q.to_interval(), bits)}


def _threshold(report: ThresholdReport) -> Dict[str, Any]:
    return {
        "N": report.N,
        "N1": report.N1,
        "N2": report.N2,
        "limit_index": report.limit_index,
        "violations": list(report.violations),
        "horizon": report.horizon,
    }


def run(config: RunConfig) -> CommandResult:
    """Threshold and index data, ratio residuals, growth constant and remainder index."""
    params = config.params()
    beta = config.beta
    bits = config.prec_bits
    nmax = config.nmax or DEFAULT_ASYMPTOTICS_NMAX
    if nmax < 8:
        raise UsageError("asymptotics needs --nmax of at least 8")
    spec = RecurrenceSpec.from_pade(params, beta)
    roots = spec.roots()

    trace = pade_trace(params, beta, nmax, 0)
    threshold = poincare_threshold(spec, trace, strict=False, prec_bits=bits)
    window = (max(1, nmax // 8), nmax - 1)
    ratio = ratio_estimate(trace, roots.lambda2, window, bits)
    growth = growth_bound(trace, roots.rho2, bits)

    horizon = min(nmax, REMAINDER_HORIZON)
    remainder = poincare_threshold(spec, remainder_trace(params, beta, horizon, bits), strict=False, prec_bits=bits)

    warnings = []
    if threshold.violations:
        warnings.append(f"i_n decreases after n = {threshold.violations[0]}")
    if threshold.N > trace.nmax:
        warnings.append(f"threshold N = {threshold.N} lies beyond nmax")

    payload: Dict[str, Any] = {
        "command": "asymptotics",
        "inputs": config.inputs(),
        "roots": {
            "lambda1": _root(roots.lambda1, bits),
            "lambda2": _root(roots.lambda2, bits),
            "rho1": _root(roots.rho1, bits),
            "rho2": _root(roots.rho2, bits),
        },
        "pade": _threshold(threshold),
        "ratio": {
            "window": list(ratio.window),
            "sup_n2_residual": _value(ratio.scaled_sup, bits),
            "half_window_sups": [_value(x, bits) for x in ratio.half_sups],
        },
        "growth": {
            "C": _value(growth.C, bits),
            "nmax": growth.nmax,
            "certified_prefix": growth.certified_prefix,
            "note": growth.note,
        },
        "remainder": _threshold(remainder),
        "certified": False,
        "warnings": warnings,
    }
    if params.alpha == 0 and params.delta != 0:
        profile = alpha_zero_remainder_profile(params, beta, horizon, bits)
        payload["alpha_zero_profile"] = {"nmax": horizon, "loglog_slope": f"{profile.slope:.6f}"}
    logger.info("Asymptotics computed", nmax=nmax, N=threshold.N, limit_index=threshold.limit_index)
    return CommandResult(payload, 0)
