"""Structured logging for the CLI and the experiment runners."""

from __future__ import annotations

import logging
import sys
import time
from typing import Any

import structlog

from pbitq.config import LogFormat, get_settings

_configured = False
_logger = structlog.get_logger("pbitq.experiments")


def configure_structured_logging() -> None:
    """Configure stdlib + structlog once per process. Output goes to stderr."""
    global _configured
    if _configured:
        return

    settings = get_settings()
    log_level = getattr(logging, settings.log_level.upper(), logging.WARNING)

    timestamper = structlog.processors.TimeStamper(fmt="iso", utc=True)
    shared_processors: list[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        timestamper,
    ]

    if settings.log_format == LogFormat.json:
        renderer: Any = structlog.processors.JSONRenderer()
        logging.basicConfig(level=log_level, format="%(message)s", stream=sys.stderr)
    else:
        renderer = structlog.dev.ConsoleRenderer()
        logging.basicConfig(level=log_level, stream=sys.stderr)

    structlog.configure(
        processors=[
            *shared_processors,
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )
    _configured = True


def log_timing(op: str, start: float, ok: bool, error: str | None = None, **fields: Any) -> None:
    """Emit one timing event for an experiment operation started at ``start``."""
    duration_ms = round((time.perf_counter() - start) * 1000.0, 2)
    if ok:
        _logger.info("experiment_call", operation=op, duration_ms=duration_ms, ok=ok, **fields)
    else:
        _logger.error(
            "experiment_call_failed",
            operation=op,
            duration_ms=duration_ms,
            ok=ok,
            error=error,
            **fields,
        )
