"""
``mu``: one irrationality-measure report.
"""

from fractions import Fraction

from irrmeter.cli.output import CommandResult
from irrmeter.cli.runconfig import RunConfig
from irrmeter.core.logging import get_logger
from irrmeter.engine.measure import effective_measure, mu_binomial, mu_exp, mu_log, mu_main
from irrmeter.models.reports import MeasureReport, Outcome

logger = get_logger(__name__)


def compute_report(config: RunConfig) -> MeasureReport:
    """Dispatch on the preset to the matching measure route."""
    bits = config.prec_bits
    if config.preset == "binomial":
        return mu_binomial(config.omega, config.beta, config.delta_mode, bits)
    if config.preset == "shifted_log":
        return mu_log(config.x, config.beta, bits)
    if config.preset == "shifted_exp":
        delta = config.delta if config.delta is not None else Fraction(-1)
        return mu_exp(config.gamma, config.beta, delta)
    return mu_main(config.params(), config.beta, bits)


def run(config: RunConfig) -> CommandResult:
    """Compute the report and, with --nmax, its effective constants."""
    report = compute_report(config)
    if config.nmax is not None and report.outcome is Outcome.BOUND:
        constants = effective_measure(config.params(), config.beta, report, config.nmax, config.prec_bits)
        report = report.model_copy(update={"effectivity": constants})
    if not report.succeeded:
        logger.warning(
            "No measure produced",
            outcome=report.outcome.value,
            failed=[h.name for h in report.failed_hypotheses()],
            warnings=report.warnings,
        )
    return CommandResult(report.to_payload(), report.exit_code)
