"""
``criterion``: checks a matrix-sequence file against the approximation criteria.
"""

import pandas as pd

from irrmeter.cli.matrix_file import MatrixFileParser
from irrmeter.cli.output import CommandResult
from irrmeter.cli.runconfig import RunConfig
from irrmeter.core.exceptions import HypothesisError
from irrmeter.core.logging import get_logger
from irrmeter.engine.simultaneous import effective_lower_bound, exponent_bound, verify_matrix_hypotheses
from irrmeter.models.reports import Verdict

logger = get_logger(__name__)


def run(config: RunConfig) -> CommandResult:
    """Row verdicts, the exponent bound and, with a point, the effective lower bound.

    Exit code 2 when some row fails or stays indeterminate: the criterion's
    hypotheses are then not established.
    """
    inp = MatrixFileParser(config.input).parse()
    rows = verify_matrix_hypotheses(inp)
    exponent = exponent_bound(inp, config.prec_bits)
    bad = [r for r in rows if r.verdict is not Verdict.PASS]
    warnings = [f"n={r.n} row {r.row}: {r.verdict.value}" for r in bad]
    if not exponent.certified:
        warnings.append(exponent.note)

    payload = {
        "command": "criterion",
        "inputs": {**config.inputs(), "s": str(inp.s), "mode": inp.mode.value},
        "rows": [r.model_dump(mode="json") for r in rows],
        "exponent": exponent.model_dump(mode="json"),
        "certified": exponent.certified and not bad,
        "warnings": warnings,
    }
    if inp.point is not None:
        if inp.geometric is None:
            warnings.append("point given without geometric rates: no effective bound")
        else:
            try:
                bound = effective_lower_bound(inp, inp.point, inp.mode, config.prec_bits)
                payload["lower_bound"] = bound.model_dump(mode="json")
            except HypothesisError as e:
                warnings.append(f"no effective bound at the point: {e}")
    if bad:
        logger.warning("Criterion hypotheses not established", failing_rows=len(bad))
    frame = pd.DataFrame([r.model_dump(mode="json") for r in rows])
    return CommandResult(payload, 2 if bad else 0, frame=frame)
