from .logger import configure_logging, enrich_context, set_run_context
from .tracing import get_tracer, setup_tracing

__all__ = [
    "configure_logging",
    "enrich_context",
    "get_tracer",
    "set_run_context",
    "setup_tracing",
]
