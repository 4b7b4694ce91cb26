"""
Error types for irrmeter.

Each error carries the process exit code the command line maps it to:
1 for usage and internal consistency problems, 2 when a mathematical
hypothesis prevents a conclusion.
"""


class IrrmeterError(Exception):
    """Base class for all irrmeter errors."""

    exit_code: int = 1


class UsageError(IrrmeterError):
    """Invalid command-line usage or configuration."""

    exit_code = 1


class InputFormatError(IrrmeterError):
    """An input file could not be read or parsed."""

    exit_code = 1

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ConsistencyError(IrrmeterError):
    """An internal cross-check failed; signals a bug upstream."""

    exit_code = 1


class HypothesisError(IrrmeterError):
    """A hypothesis required by a theorem does not hold for the given inputs."""

    exit_code = 2

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


class IndeterminateComparisonError(IrrmeterError):
    """An interval comparison stayed undecided up to the precision cap."""

    exit_code = 2

    def __init__(self, what: str, prec_bits: int):
        self.what = what
        self.prec_bits = prec_bits
        super().__init__(f"comparison '{what}' indeterminate at {prec_bits} bits")


class ThresholdNotReachedError(IrrmeterError):
    """The Poincaré–Perron threshold scan exceeded its cap."""

    exit_code = 2


class PrecisionError(IrrmeterError):
    """A series could not reach the requested precision within its term cap."""

    exit_code = 2
