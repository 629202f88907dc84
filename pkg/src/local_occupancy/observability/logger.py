"""Structured logging with OpenTelemetry trace context."""

import logging
import sys
from contextvars import ContextVar
from typing import Any, Dict, MutableMapping, cast

import structlog
from opentelemetry import trace

from local_occupancy.settings import SETTINGS

# Per-run attributes (command, seed, ...)
log_context: ContextVar[Dict[str, Any]] = ContextVar("log_context", default={})


def add_run_context(_logger: Any, _method: str, event_dict: MutableMapping[str, Any]
                    ) -> MutableMapping[str, Any]:
    """Processor: trace/span ids of the recording span, then the run attributes."""
    span = trace.get_current_span()
    if span.is_recording():
        span_context = span.get_span_context()
        event_dict["trace_id"] = format(span_context.trace_id, "032x")
        event_dict["span_id"] = format(span_context.span_id, "016x")
    for key, value in log_context.get().items():
        event_dict.setdefault(key, value)
    return event_dict


def configure_logging(level: str | None = None, fmt: str | None = None) -> None:
    """(Re)configure structlog and the stderr root handler."""
    level_name = (level or SETTINGS.LOG_LEVEL).upper()
    renderer: Any
    if (fmt or SETTINGS.LOG_FORMAT) == "console":
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    else:
        renderer = structlog.processors.JSONRenderer()

    root = logging.getLogger()
    root.setLevel(getattr(logging, level_name, logging.WARNING))
    if not any(getattr(h, "_locc", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        handler._locc = True  # type: ignore[attr-defined]
        root.addHandler(handler)

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            add_run_context,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            renderer,
        ],
        context_class=dict,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


configure_logging()

base_logger = structlog.get_logger("local_occupancy")


def enrich_context(**kwargs: Any) -> structlog.stdlib.BoundLogger:
    """Logger bound to kwargs; trace and run context are added per line."""
    return cast(structlog.stdlib.BoundLogger, base_logger.bind(**kwargs))


def set_run_context(**kwargs: Any) -> None:
    """Attach attributes to every log line of the current run."""
    current_context = dict(log_context.get())
    current_context.update(kwargs)
    log_context.set(current_context)
