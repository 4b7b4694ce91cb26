"""
Input models for the simultaneous-approximation criteria.
"""

from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import Matrix

from irrmeter.engine.exactmath import to_rational
from irrmeter.models.reports import IntervalValue, Verdict


class ApproxMode(str, Enum):
    """typeI bounds linear forms in theta, typeII simultaneous approximations."""

    TYPE_I = "typeI"
    TYPE_II = "typeII"


class GeometricRates(BaseModel):
    """Declared geometric growth Q_n = a*alpha^n, E_n = beta^n/b."""

    model_config = ConfigDict(frozen=True)

    a: Fraction = Field(..., description="Prefactor of Q_n")
    b: Fraction = Field(..., description="Prefactor of 1/E_n")
    alpha: Fraction = Field(..., description="Rate of Q_n, > 1")
    beta: Fraction = Field(..., description="Rate of E_n, > 1")

    @field_validator("a", "b", "alpha", "beta", mode="before")
    @classmethod
    def parse_rational(cls, v):
        """Accept ints, Fractions, decimals and rational expressions."""
        return to_rational(v)

    @model_validator(mode="after")
    def validate_rates(self):
        """Prefactors must be positive and rates exceed 1."""
        if self.a <= 0 or self.b <= 0:
            raise ValueError("a and b must be positive")
        if self.alpha <= 1 or self.beta <= 1:
            raise ValueError("alpha and beta must exceed 1")
        return self


class CriterionInput(BaseModel):
    """Matrix sequence (M_n) with growth data Q_n, E_n and theta = (1, theta_1, ..., theta_s)."""

    model_config = ConfigDict(frozen=True)

    s: int = Field(..., ge=1, description="Dimension")
    mode: ApproxMode = ApproxMode.TYPE_I
    theta: List[Tuple[Fraction, Fraction]] = Field(..., description="Enclosures of theta_0..theta_s; theta_0 = 1")
    indices: List[int]
    matrices: List[List[List[int]]]
    Q: List[Fraction]
    E: List[Fraction]
    geometric: Optional[GeometricRates] = None
    point: Optional[List[int]] = None

    @field_validator("Q", "E", mode="before")
    @classmethod
    def parse_sequence(cls, v):
        """Parse decimal strings exactly."""
        return [to_rational(x) for x in v]

    @field_validator("theta", mode="before")
    @classmethod
    def parse_theta(cls, v):
        """Parse interval endpoints exactly."""
        return [(to_rational(lo), to_rational(hi)) for lo, hi in v]

    @model_validator(mode="after")
    def validate_structure(self):
        """Dimensions, theta_0 = 1, invertible matrices and increasing Q_n, E_n >= 1."""
        size = self.s + 1
        if len(self.theta) != size:
            raise ValueError(f"theta needs {size} components, got {len(self.theta)}")
        if self.theta[0] != (Fraction(1), Fraction(1)):
            raise ValueError("theta_0 must be exactly 1")
        for lo, hi in self.theta:
            if lo > hi:
                raise ValueError(f"theta interval [{lo}, {hi}] is empty")
        count = len(self.indices)
        if count == 0:
            raise ValueError("at least one matrix is required")
        if not (len(self.matrices) == len(self.Q) == len(self.E) == count):
            raise ValueError("indices, matrices, Q and E must have the same length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be strictly increasing")
        for n, m in zip(self.indices, self.matrices):
            if len(m) != size or any(len(row) != size for row in m):
                raise ValueError(f"matrix {n} is not {size}x{size}")
            if Matrix(m).det(method="bareiss") == 0:
                raise ValueError(f"matrix {n} is singular")
        for name, seq in (("Q", self.Q), ("E", self.E)):
            if any(x < 1 for x in seq):
                raise ValueError(f"{name}_n must be >= 1")
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise ValueError(f"{name}_n must be strictly increasing")
        if self.point is not None and len(self.point) != size:
            raise ValueError(f"point needs {size} coordinates")
        return self


class RowVerdict(BaseModel):
    """Check of one row of M_n."""

    n: int
    row: int
    verdict: Verdict
    size: str = Field(..., description="|x_1|+...+|x_s| (typeI) or |x_0| (typeII)")
    size_ok: bool
    error_hi: str = Field(..., description="Upper endpoint of the approximation error")
    error_verdict: Verdict


class ExponentBound(BaseModel):
    """Upper bound for an approximation exponent."""

    kind: str = Field(..., description="lambda, omega or mu")
    value: IntervalValue
    certified: bool
    window: Optional[Tuple[int, int]] = None
    note: str = ""


class LowerBound(BaseModel):
    """Effective lower bound 1/(c * y^exponent) at an integer point."""

    mode: ApproxMode
    point: List[int]
    height: int = Field(..., description="y_0 (typeI) or sum |y_i| (typeII)")
    bound: IntervalValue
    exponent: IntervalValue
    c: IntervalValue
    floor: str
