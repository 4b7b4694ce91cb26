"""
Irrationality measures for cubic roots.

Each cube root theta is a rational multiple of beta^-1 (1 - 1/beta)^(1/3)
for a suitable rational beta, so the binomial route with omega = 1/3 and the
Bennett bound on Delta gives its measure.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

import pandas as pd

from irrmeter.core.config import settings
from irrmeter.core.exceptions import ConsistencyError
from irrmeter.core.logging import LoggerMixin
from irrmeter.engine.exactmath import parse_rational
from irrmeter.engine.measure import DeltaKind, DeltaMode, mu_binomial
from irrmeter.models.reports import Outcome, TableRow


class CubicRoot(NamedTuple):
    """A cube root with its beta and the published two-decimal measures."""

    theta: str
    beta: str
    printed_mu: str
    earlier_mu: str


OMEGA = Fraction(1, 3)

CUBIC_ROOTS: tuple[CubicRoot, ...] = (
    CubicRoot("cbrt(3)", "9", "2.74", "2.76"),
    CubicRoot("cbrt(6)", "467^3/5", "2.32", "2.35"),
    CubicRoot("cbrt(15)", "25", "2.52", "2.54"),
    CubicRoot("cbrt(17)", "18^3", "2.20", "2.22"),
    CubicRoot("cbrt(19)", "-8^3", "2.28", "2.30"),
    CubicRoot("cbrt(20)", "-19^3", "2.20", "2.23"),
    CubicRoot("cbrt(26)", "3^3", "2.51", "2.53"),
    CubicRoot("cbrt(28)", "-3^3", "2.50", "2.52"),
    CubicRoot("cbrt(30)", "-9", "2.71", "2.72"),
    CubicRoot("cbrt(37)", "10^3", "2.26", "2.27"),
    CubicRoot("cbrt(42)", "49", "2.44", "2.46"),
    CubicRoot("cbrt(43)", "-7^3", "2.30", "2.32"),
    CubicRoot("cbrt(62)", "32", "2.49", "2.50"),
    CubicRoot("cbrt(63)", "4^3", "2.41", "2.43"),
    CubicRoot("cbrt(65)", "-4^3", "2.41", "2.43"),
    CubicRoot("cbrt(66)", "-32", "2.48", "2.50"),
    CubicRoot("cbrt(83)", "-(253)^3/19", "2.69", "2.72"),
    CubicRoot("cbrt(91)", "9^3", "2.27", "2.29"),
)


class CubicRootTable(LoggerMixin):
    """Computes the cubic-root table, optionally row-parallel."""

    def __init__(
        self, rows: Sequence[CubicRoot] = CUBIC_ROOTS, prec_bits: Optional[int] = None, workers: Optional[int] = None
    ):
        self.rows = tuple(rows)
        self.prec_bits = prec_bits or settings.default_precision_bits
        self.workers = workers or settings.table_workers
        self.mode = DeltaMode(DeltaKind.BENNETT)

    def compute_row(self, row: CubicRoot) -> TableRow:
        """Measure of one row, compared with the printed value by truncation."""
        beta = parse_rational(row.beta)
        report = mu_binomial(OMEGA, beta, self.mode, self.prec_bits)
        if report.outcome is not Outcome.BOUND or report.mu is None:
            raise ConsistencyError(f"{row.theta}: expected a bound, got {report.outcome.value}")
        truncated = report.mu.truncated(2)
        return TableRow(
            theta=row.theta,
            beta=str(beta),
            printed_mu=row.printed_mu,
            computed_mu=report.mu,
            truncated_mu=truncated,
            matches=truncated == row.printed_mu,
            earlier_mu=row.earlier_mu,
        )

    def compute(self) -> List[TableRow]:
        """All rows in table order."""
        self.logger.info("Computing cubic-root table", rows=len(self.rows), workers=self.workers)
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(self.compute_row, self.rows))
        else:
            results = [self.compute_row(row) for row in self.rows]
        mismatches = [r.theta for r in results if not r.matches]
        if mismatches:
            self.logger.warning("Rows differ from the printed values", rows=mismatches)
        self.logger.info("Cubic-root table computed", rows=len(results), mismatches=len(mismatches))
        return results

    @staticmethod
    def to_frame(rows: Sequence[TableRow]) -> pd.DataFrame:
        """Flat table with one column per field, interval endpoints split."""
        return pd.DataFrame(
            [
                {
                    "theta": r.theta,
                    "beta": r.beta,
                    "mu": r.truncated_mu,
                    "mu_lo": r.computed_mu.lo,
                    "mu_hi": r.computed_mu.hi,
                    "printed_mu": r.printed_mu,
                    "earlier_mu": r.earlier_mu,
                    "matches": r.matches,
                }
                for r in rows
            ],
            columns=["theta", "beta", "mu", "mu_lo", "mu_hi", "printed_mu", "earlier_mu", "matches"],
        )
