"""
Structured logging for irrmeter.

Reports own stdout; every log record goes to stderr as one JSON object
(or a console line with ``IRRMETER_LOG_FORMAT=console``).
"""

import logging
import sys

import structlog
from mpmath import iv
from structlog.stdlib import LoggerFactory

from irrmeter.core.config import settings


def add_interval_precision(logger, method_name: str, event_dict: dict) -> dict:
    """Stamp each record with the interval precision in force when it was emitted."""
    event_dict.setdefault("iv_prec", iv.prec)
    return event_dict


def setup_logging(level: str | None = None) -> None:
    """Configure structlog over stdlib logging on stderr; ``level`` overrides the configured one."""
    renderer = (
        structlog.dev.ConsoleRenderer(colors=False)
        if settings.log_format == "console"
        else structlog.processors.JSONRenderer(sort_keys=True)
    )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            add_interval_precision,
            renderer,
        ],
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, (level or settings.log_level).upper()),
        force=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


class LoggerMixin:
    """Gives engine services a ``logger`` named after their class."""

    @property
    def logger(self) -> structlog.stdlib.BoundLogger:
        return get_logger(self.__class__.__name__)
