"""
Structured logging configuration with run context and performance timing.
"""
import logging
import sys
import threading
import time
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Dict, Optional

import structlog

from gaussdist import __version__

# Context variables for run-scoped data
run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)
command_var: ContextVar[Optional[str]] = ContextVar("command", default=None)
seed_var: ContextVar[Optional[int]] = ContextVar("seed", default=None)

# Performance timing context
performance_context = threading.local()


def add_run_context(logger, method_name: str, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Add run context information to log events."""
    run_id = run_id_var.get()
    if run_id:
        event_dict["run_id"] = run_id

    command = command_var.get()
    if command:
        event_dict["command"] = command

    seed = seed_var.get()
    if seed is not None:
        event_dict["seed"] = seed

    return event_dict


def add_service_context(logger, method_name: str, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Add service context to log events."""
    event_dict["service"] = "gaussdist"
    event_dict["version"] = __version__
    return event_dict


def add_timestamp(logger, method_name: str, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Add ISO format timestamp to log events."""
    event_dict["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return event_dict


def add_performance_context(
    logger, method_name: str, event_dict: Dict[str, Any]
) -> Dict[str, Any]:
    """Add performance timing context to log events."""
    if hasattr(performance_context, "operation_start"):
        duration = time.perf_counter() - performance_context.operation_start
        event_dict["operation_duration_ms"] = round(duration * 1000, 2)

    if hasattr(performance_context, "operation_name"):
        event_dict["operation"] = performance_context.operation_name

    return event_dict


def setup_logging(log_level: str = "INFO", log_format: str = "console") -> None:
    """
    Configure structured logging.

    Log events go to stderr so that command reports on stdout stay machine-readable.

    Args:
        log_level: Minimum stdlib level name
        log_format: "console" for human-readable output, "json" for one JSON object per line
    """
    level = getattr(logging, log_level.upper(), logging.INFO)

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.setLevel(level)

    renderer = (
        structlog.processors.JSONRenderer()
        if log_format == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            add_timestamp,
            add_service_context,
            add_run_context,
            add_performance_context,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


def get_performance_logger() -> structlog.stdlib.BoundLogger:
    """Get a performance logger instance."""
    return structlog.get_logger("performance")


def get_run_id() -> Optional[str]:
    """Get run ID from current context."""
    return run_id_var.get()


@contextmanager
def run_context(
    run_id: Optional[str] = None, command: Optional[str] = None, seed: Optional[int] = None
):
    """
    Context manager binding run identifiers to every log event emitted inside it.

    Args:
        run_id: Identifier of the run; generated when omitted
        command: CLI subcommand or library entry point
        seed: Master seed of the run
    """
    tokens = [
        (run_id_var, run_id_var.set(run_id or str(uuid.uuid4())[:8])),
        (command_var, command_var.set(command)),
        (seed_var, seed_var.set(seed)),
    ]
    try:
        yield run_id_var.get()
    finally:
        for var, token in reversed(tokens):
            var.reset(token)


@contextmanager
def performance_timing(operation_name: str):
    """
    Context manager for timing operations.

    Args:
        operation_name: Name of the operation being timed
    """
    start_time = time.perf_counter()
    performance_context.operation_name = operation_name
    performance_context.operation_start = start_time

    logger = get_performance_logger()
    logger.debug("Operation started", operation=operation_name)

    try:
        yield

    finally:
        duration = time.perf_counter() - start_time

        logger.info(
            "Operation completed",
            operation=operation_name,
            duration_ms=round(duration * 1000, 2),
        )

        if hasattr(performance_context, "operation_name"):
            delattr(performance_context, "operation_name")
        if hasattr(performance_context, "operation_start"):
            delattr(performance_context, "operation_start")


def log_run_event(event_type: str, **kwargs):
    """
    Log a structured run event (sweep finished, lemma checked, ...).

    Args:
        event_type: Type of run event
        **kwargs: Additional event data
    """
    logger = get_logger("run")
    logger.info("Run event", event_type=event_type, **kwargs)


def log_error_with_context(logger, error: Exception, context: Optional[Dict[str, Any]] = None):
    """Log an error with additional context information."""
    payload = error.to_dict() if hasattr(error, "to_dict") else {"message": str(error)}
    logger.error(
        "Error occurred",
        error_type=type(error).__name__,
        error_code=payload.get("error_code"),
        error_message=payload.get("message"),
        context={**payload.get("context", {}), **(context or {})},
    )
