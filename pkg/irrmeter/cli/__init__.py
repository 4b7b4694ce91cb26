"""
Command-line front end: ``irrmeter <mu|table|verify|asymptotics|criterion> [flags]``.

stdout carries only the serialized report; logs go to stderr. Exit codes:
0 success, 1 usage or internal consistency error, 2 when a hypothesis
prevents a conclusion.
"""

import argparse
import sys
from typing import List, Optional, Sequence

from pydantic import ValidationError

from irrmeter import __version__
from irrmeter.cli.output import CommandResult, render
from irrmeter.cli.runconfig import Command, OutputFormat, RunConfig
from irrmeter.core.exceptions import IrrmeterError, UsageError
from irrmeter.core.logging import get_logger, setup_logging

logger = get_logger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; usage errors here exit 1."""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per Command and the shared flags."""
    common = _Parser(add_help=False)
    common.add_argument("--preset", help="binomial, shifted-log, shifted-exp or general")
    for name in ("alpha", "gamma", "delta", "omega", "x"):
        common.add_argument(f"--{name}", help=f"{name} as p/q")
    common.add_argument("--beta", help="evaluation point; expressions such as 467^3/5 allowed")
    common.add_argument("--prec", type=int, dest="prec_bits", help="working precision in bits")
    common.add_argument("--nmax", type=int, help="largest index")
    common.add_argument("--delta-mode", default="simple", help="simple, bennett or window:n0:n1")
    common.add_argument("--format", dest="output_format", default="json", choices=[f.value for f in OutputFormat])
    common.add_argument("--seed", type=int, help="seed of the randomized sweeps")
    common.add_argument("--input", help="matrix-sequence file (criterion)")
    common.add_argument("--suite", action="append", dest="suites", help="verification suite to run; repeatable")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="override IRRMETER_LOG_LEVEL",
    )

    parser = _Parser(prog="irrmeter", description="Certified irrationality measures from explicit Padé approximants.")
    parser.add_argument("--version", action="version", version=f"irrmeter {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        Command.MU: "irrationality-measure report for one value",
        Command.TABLE: "measures of the cubic roots",
        Command.VERIFY: "run the verification suites",
        Command.ASYMPTOTICS: "Poincaré-Perron data at beta",
        Command.CRITERION: "check a matrix-sequence file",
    }
    for command, text in helps.items():
        sub.add_parser(command.value, parents=[common], help=text)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Validate parsed flags into a RunConfig."""
    values = {
        key: getattr(args, key)
        for key in (
            "command", "preset", "alpha", "gamma", "delta", "omega", "x", "beta",
            "prec_bits", "nmax", "delta_mode", "output_format", "seed", "input", "suites",
        )
        if getattr(args, key, None) is not None
    }
    try:
        return RunConfig(**values)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise UsageError(messages)
    except ValueError as e:
        raise UsageError(str(e))


def run_command(config: RunConfig) -> tuple[int, str]:
    """Run one command and serialize its result.

    Returns:
        (exit code, serialized report)
    """
    from irrmeter.cli.commands import HANDLERS

    logger.info("Running command", command=config.command.value, inputs=config.inputs())
    try:
        result = HANDLERS[config.command](config)
    except IrrmeterError as e:
        logger.error("Command failed", command=config.command.value, error=str(e), exit_code=e.exit_code)
        result = CommandResult(
            {
                "command": config.command.value,
                "inputs": config.inputs(),
                "error": {"type": type(e).__name__, "message": str(e)},
                "certified": False,
                "warnings": [],
            },
            e.exit_code,
        )
    return result.exit_code, render(result, config.output_format)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``irrmeter`` console script."""
    args_list: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(args_list)
        setup_logging(args.log_level)
        config = config_from_args(args)
    except UsageError as e:
        setup_logging()
        logger.error("Usage error", error=str(e))
        sys.stderr.write(f"irrmeter: error: {e}\n")
        return e.exit_code
    code, text = run_command(config)
    sys.stdout.write(text)
    sys.stdout.flush()
    return code
