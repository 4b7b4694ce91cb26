"""
``table``: measures of the cubic roots.
"""

from irrmeter.cli.output import CommandResult
from irrmeter.cli.runconfig import RunConfig
from irrmeter.engine.cubic_roots import CubicRootTable


def run(config: RunConfig) -> CommandResult:
    """All rows, compared with the printed values by truncation."""
    table = CubicRootTable(prec_bits=config.prec_bits)
    rows = table.compute()
    mismatches = [r.theta for r in rows if not r.matches]
    payload = {
        "command": "table",
        "inputs": {"omega": "1/3", "delta_mode": "bennett", "prec": str(config.prec_bits)},
        "rows": [r.model_dump(mode="json") for r in rows],
        "certified": True,
        "warnings": [f"{theta}: differs from the printed value" for theta in mismatches],
    }
    return CommandResult(payload, 1 if mismatches else 0, frame=CubicRootTable.to_frame(rows))
