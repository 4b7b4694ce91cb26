"""
Run configuration for the command line.
"""

from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from irrmeter.core.config import settings
from irrmeter.core.exceptions import UsageError
from irrmeter.engine.exactmath import parse_rational, to_rational
from irrmeter.engine.measure import DeltaMode
from irrmeter.models.params import HypergeomParams


class Command(str, Enum):
    """Available subcommands."""

    MU = "mu"
    TABLE = "table"
    VERIFY = "verify"
    ASYMPTOTICS = "asymptotics"
    CRITERION = "criterion"


class OutputFormat(str, Enum):
    """Serialization of the report on stdout."""

    JSON = "json"
    CSV = "csv"
    TEXT = "text"


PRESET_ALIASES = {
    "binomial": "binomial",
    "shifted-log": "shifted_log",
    "shifted_log": "shifted_log",
    "shifted-exp": "shifted_exp",
    "shifted_exp": "shifted_exp",
    "general": "general",
}

COMMANDS_WITH_PARAMS = (Command.MU, Command.ASYMPTOTICS)

DEFAULT_ASYMPTOTICS_NMAX = 200


class RunConfig(BaseModel):
    """Validated command-line request."""

    model_config = ConfigDict(frozen=True)

    command: Command
    preset: Optional[str] = Field(None, description="binomial, shifted_log, shifted_exp or general")
    alpha: Optional[Fraction] = None
    gamma: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    omega: Optional[Fraction] = None
    x: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    prec_bits: int = Field(default_factory=lambda: settings.default_precision_bits)
    nmax: Optional[int] = None
    delta_mode: str = "simple"
    output_format: OutputFormat = OutputFormat.JSON
    seed: int = Field(default_factory=lambda: settings.default_seed)
    input: Optional[Path] = None
    suites: Optional[List[str]] = None

    @field_validator("alpha", "gamma", "delta", "omega", "x", mode="before")
    @classmethod
    def parse_parameter(cls, v):
        """Rationals are given as p/q strings."""
        return None if v is None else to_rational(v)

    @field_validator("beta", mode="before")
    @classmethod
    def parse_beta(cls, v):
        """beta also accepts expressions such as 467^3/5."""
        if v is None:
            return None
        return parse_rational(v) if isinstance(v, str) else to_rational(v)

    @field_validator("preset", mode="before")
    @classmethod
    def normalize_preset(cls, v):
        """Map CLI spellings to preset names."""
        if v is None:
            return None
        key = str(v).lower()
        if key not in PRESET_ALIASES:
            raise ValueError(f"Unknown preset: {v}")
        return PRESET_ALIASES[key]

    @field_validator("prec_bits")
    @classmethod
    def validate_precision(cls, v):
        """Precision between the configured floor and cap."""
        if not settings.min_precision_bits <= v <= settings.max_precision_bits:
            raise ValueError(
                f"precision must lie in [{settings.min_precision_bits}, {settings.max_precision_bits}] bits"
            )
        return v

    @field_validator("nmax")
    @classmethod
    def validate_nmax(cls, v):
        """n ranges are nonempty and capped."""
        if v is not None and not 1 <= v <= settings.nmax_cap:
            raise ValueError(f"nmax must lie in [1, {settings.nmax_cap}]")
        return v

    @field_validator("delta_mode")
    @classmethod
    def validate_delta_mode(cls, v):
        """simple, bennett or window:n0:n1."""
        return str(DeltaMode.parse(v))

    @model_validator(mode="after")
    def validate_command(self):
        """Each command gets the inputs it needs."""
        if self.command in COMMANDS_WITH_PARAMS:
            if self.preset is None:
                raise ValueError(f"{self.command.value} requires --preset")
            if self.beta is None:
                raise ValueError(f"{self.command.value} requires --beta")
            required = {
                "binomial": ("omega",),
                "shifted_log": ("x",),
                "shifted_exp": ("gamma",),
                "general": ("alpha", "gamma", "delta"),
            }[self.preset]
            missing = [name for name in required if getattr(self, name) is None]
            if missing:
                raise ValueError(f"preset {self.preset} requires " + ", ".join(f"--{m}" for m in missing))
        if self.command is Command.CRITERION and self.input is None:
            raise ValueError("criterion requires --input")
        return self

    def params(self) -> HypergeomParams:
        """Hypergeometric parameters selected by the preset flags."""
        if self.preset == "binomial":
            return HypergeomParams.binomial(self.omega)
        if self.preset == "shifted_log":
            return HypergeomParams.shifted_log(self.x)
        if self.preset == "shifted_exp":
            delta = self.delta if self.delta is not None else Fraction(-1)
            if delta == -1:
                return HypergeomParams.shifted_exp(self.gamma)
            return HypergeomParams(alpha=0, gamma=self.gamma, delta=delta)
        if self.preset == "general":
            return HypergeomParams(alpha=self.alpha, gamma=self.gamma, delta=self.delta)
        raise UsageError("no parameters selected")

    def inputs(self) -> dict[str, str]:
        """Flags that determine the result, as strings."""
        keys = ("preset", "alpha", "gamma", "delta", "omega", "x", "beta", "nmax", "seed")
        out = {k: str(getattr(self, k)) for k in keys if getattr(self, k) is not None}
        out["prec"] = str(self.prec_bits)
        if self.command is Command.MU:
            out["delta_mode"] = self.delta_mode
        if self.input is not None:
            out["input"] = str(self.input)
        return out
