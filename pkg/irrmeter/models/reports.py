"""
Report models for irrmeter.

Numeric results are carried as decimal strings with explicit outward
endpoints, never as binary floats.
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from irrmeter.engine.intervals import Interval, decimal_digits, fraction_to_decimal, interval_strings


class Verdict(str, Enum):
    """Outcome of a single hypothesis or row check."""

    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"


class Outcome(str, Enum):
    """Overall outcome of a measure computation."""

    BOUND = "bound"
    EXACT = "exact"
    NO_CONCLUSION = "no_conclusion"
    HYPOTHESIS_FAILED = "hypothesis_failed"


class IntervalValue(BaseModel):
    """Outward-rounded enclosure of a real number."""

    lo: str = Field(..., description="Lower endpoint, rounded down")
    hi: str = Field(..., description="Upper endpoint, rounded up")
    prec_bits: int = Field(..., description="Working precision in bits")

    @classmethod
    def from_interval(cls, x: Interval, prec_bits: int) -> "IntervalValue":
        lo, hi = interval_strings(x, prec_bits)
        return cls(lo=lo, hi=hi, prec_bits=prec_bits)

    @classmethod
    def exact(cls, value: Fraction, prec_bits: int) -> "IntervalValue":
        digits = decimal_digits(prec_bits)
        return cls(
            lo=fraction_to_decimal(value, digits, "floor"),
            hi=fraction_to_decimal(value, digits, "ceiling"),
            prec_bits=prec_bits,
        )

    @property
    def lower(self) -> Fraction:
        return Fraction(self.lo)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi)

    def contains(self, value) -> bool:
        return self.lower <= Fraction(value) <= self.upper

    def truncated(self, places: int) -> Optional[str]:
        """Common truncation of both endpoints to ``places`` decimals, or None if they differ."""
        lo = fraction_to_decimal(self.lower, places, "floor")
        hi = fraction_to_decimal(self.upper, places, "floor")
        return lo if lo == hi else None


class HypothesisCheck(BaseModel):
    """One checked precondition with its verdict."""

    name: str
    verdict: Verdict
    detail: str = ""


class EffectiveConstants(BaseModel):
    """Constants making an exponent bound explicit.

    For every admissible point with 2*b*y0 >= 1 the approximation error is at
    least 1/(c*y0^lambda), with lambda = log(alpha)/log(beta) and
    c = 2*a*alpha*(2b)^lambda.
    """

    a: str = Field(..., description="Growth prefactor of Q_n")
    b: str = Field(..., description="Decay prefactor of 1/E_n")
    alpha_growth: str = Field(..., description="Geometric rate of Q_n")
    beta_growth: str = Field(..., description="Geometric rate of E_n")
    lambda_exp: IntervalValue
    c: IntervalValue
    floor: str = Field(..., description="Smallest admissible y0, namely 1/(2b)")
    q0: Optional[int] = Field(None, description="First integer meeting the floor")
    prefix_only: bool = Field(False, description="a and b certified only on the computed prefix")


class MeasureReport(BaseModel):
    """Irrationality-measure report with its full hypothesis log."""

    command: str = "mu"
    route: str = Field(..., description="Computation route: main, log, binomial or exp")
    regime: str
    outcome: Outcome
    inputs: Dict[str, str]
    hypotheses: List[HypothesisCheck] = Field(default_factory=list)
    delta: Optional[IntervalValue] = None
    delta_exact: Optional[str] = None
    Q: Optional[IntervalValue] = None
    E: Optional[IntervalValue] = None
    mu: Optional[IntervalValue] = None
    certified: bool = False
    warnings: List[str] = Field(default_factory=list)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    effectivity: Optional[EffectiveConstants] = None

    @property
    def succeeded(self) -> bool:
        return self.outcome in (Outcome.BOUND, Outcome.EXACT)

    @property
    def exit_code(self) -> int:
        return 0 if self.succeeded else 2

    def failed_hypotheses(self) -> List[HypothesisCheck]:
        return [h for h in self.hypotheses if h.verdict is not Verdict.PASS]

    def to_payload(self) -> Dict[str, Any]:
        """JSON-ready payload with the numeric results grouped under ``result``."""
        result = {
            key: getattr(self, key).model_dump() if getattr(self, key) is not None else None
            for key in ("delta", "Q", "E", "mu")
        }
        payload = {
            "command": self.command,
            "route": self.route,
            "regime": self.regime,
            "outcome": self.outcome.value,
            "inputs": self.inputs,
            "hypotheses": [h.model_dump(mode="json") for h in self.hypotheses],
            "result": result,
            "delta_exact": self.delta_exact,
            "certified": self.certified,
            "warnings": self.warnings,
            "diagnostics": self.diagnostics,
        }
        if self.effectivity is not None:
            payload["effectivity"] = self.effectivity.model_dump()
        return payload


class WeightReport(BaseModel):
    """Result of the weight-n check of a Padé pair.

    ``check`` names the first failing stage (orthogonality, polynomial_part,
    tail, leading_remainder) and ``index`` the first violated index.
    """

    ok: bool
    check: Optional[str] = None
    index: Optional[int] = None


class SuiteResult(BaseModel):
    """Outcome of one verification suite."""

    name: str
    passed: bool
    cases: int = 0
    failures: List[str] = Field(default_factory=list)
    detail: Dict[str, Any] = Field(default_factory=dict)


class TableRow(BaseModel):
    """One row of the cubic-root table."""

    theta: str
    beta: str
    printed_mu: str
    computed_mu: IntervalValue
    truncated_mu: Optional[str]
    matches: bool
    earlier_mu: Optional[str] = None
