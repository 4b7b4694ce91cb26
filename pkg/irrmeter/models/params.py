"""
Parameter models for the hypergeometric family.

f(z) = sum_k prod_{i=1..k}(alpha*i - delta) / (gamma+2)_k * z^-(k+1)
"""

from enum import Enum
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from irrmeter.engine.exactmath import to_rational


class Preset(str, Enum):
    """Named specializations of the family."""

    BINOMIAL = "binomial"
    SHIFTED_LOG = "shifted_log"
    SHIFTED_EXP = "shifted_exp"


def _in_alpha_naturals(value: Fraction, alpha: Fraction) -> bool:
    """Exact test of value in alpha*N with N = {1, 2, ...}; alpha*N = {0} when alpha = 0."""
    if alpha == 0:
        return value == 0
    ratio = value / alpha
    return ratio.denominator == 1 and ratio >= 1


class HypergeomParams(BaseModel):
    """The triple (alpha, gamma, delta) with an optional preset tag."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alpha: Fraction = Field(..., description="Growth parameter alpha")
    gamma: Fraction = Field(..., description="Shift gamma; (gamma+2)_k must not vanish")
    delta: Fraction = Field(..., description="Parameter delta")
    preset: Optional[Preset] = Field(None, description="Named specialization, if any")

    @field_validator("alpha", "gamma", "delta", mode="before")
    @classmethod
    def parse_rational(cls, v):
        """Accept ints, Fractions, Decimals and rational expressions."""
        return to_rational(v)

    @model_validator(mode="after")
    def validate_family(self):
        """Check the formal-layer condition and preset consistency."""
        if self.gamma.denominator == 1 and self.gamma <= -2:
            raise ValueError("gamma must not be in {-2, -3, ...}")
        if self.preset is Preset.BINOMIAL:
            if not (self.alpha == 1 and self.gamma == -1 and (self.delta - 1).denominator != 1):
                raise ValueError("binomial preset requires (1, -1, 1 + omega) with omega not an integer")
        elif self.preset is Preset.SHIFTED_LOG:
            if not (self.alpha == 1 and self.delta == -self.gamma and 0 <= self.gamma < 1):
                raise ValueError("shifted_log preset requires (1, x, -x) with 0 <= x < 1")
        elif self.preset is Preset.SHIFTED_EXP:
            if not (self.alpha == 0 and self.delta == -1):
                raise ValueError("shifted_exp preset requires (0, gamma, -1)")
        return self

    @classmethod
    def binomial(cls, omega) -> "HypergeomParams":
        """f(z) = (1/z)(1 - 1/z)^omega."""
        w = to_rational(omega)
        return cls(alpha=1, gamma=-1, delta=1 + w, preset=Preset.BINOMIAL)

    @classmethod
    def shifted_log(cls, x) -> "HypergeomParams":
        """f(z) = sum (1+x)/(k+1+x) z^-(k+1), the shifted logarithm."""
        x = to_rational(x)
        return cls(alpha=1, gamma=x, delta=-x, preset=Preset.SHIFTED_LOG)

    @classmethod
    def shifted_exp(cls, gamma) -> "HypergeomParams":
        """f(z) = sum 1/(gamma+2)_k z^-(k+1)."""
        return cls(alpha=0, gamma=gamma, delta=-1, preset=Preset.SHIFTED_EXP)

    @property
    def omega(self) -> Fraction:
        """omega of the binomial preset."""
        return self.delta - 1

    @property
    def is_arithmetic(self) -> bool:
        """gamma >= -1, required by the denominator and measure layers."""
        return self.gamma >= -1

    @property
    def delta_not_in_alpha_n(self) -> bool:
        return not _in_alpha_naturals(self.delta, self.alpha)

    @property
    def shifted_not_in_alpha_n(self) -> bool:
        return not _in_alpha_naturals(-(self.alpha * self.gamma + self.delta), self.alpha)

    @property
    def nondegenerate(self) -> bool:
        return self.delta_not_in_alpha_n and self.shifted_not_in_alpha_n

    def describe(self) -> dict[str, str]:
        """String form for reports."""
        out = {"alpha": str(self.alpha), "gamma": str(self.gamma), "delta": str(self.delta)}
        if self.preset is not None:
            out["preset"] = self.preset.value
        return out
