"""OpenTelemetry tracing setup for CLI runs."""

from typing import Optional

from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

from local_occupancy.observability.logger import enrich_context
from local_occupancy.settings import SETTINGS

_provider: Optional[TracerProvider] = None


def setup_tracing() -> TracerProvider:
    """
    Install a TracerProvider once per process.
    Spans are only exported when an OTLP endpoint is configured.
    """
    global _provider
    if _provider is not None:
        return _provider

    resource = Resource(
        attributes={
            "service.name": SETTINGS.OTEL_SERVICE_NAME,
            "service.version": SETTINGS.APP_VERSION,
            "deployment.environment": SETTINGS.ENVIRONMENT,
        }
    )
    provider = TracerProvider(resource=resource)

    otlp_endpoint = SETTINGS.OTEL_EXPORTER_OTLP_ENDPOINT
    if otlp_endpoint:
        traces_endpoint = (
            f"{otlp_endpoint}/v1/traces"
            if not otlp_endpoint.endswith("/v1/traces")
            else otlp_endpoint
        )
        provider.add_span_processor(
            BatchSpanProcessor(
                OTLPSpanExporter(endpoint=traces_endpoint),
                max_queue_size=2048,
                max_export_batch_size=512,
                schedule_delay_millis=5000,
            )
        )
    trace.set_tracer_provider(provider)
    _provider = provider

    enrich_context(event="setup_tracing").debug(
        "Tracer provider installed", otlp_endpoint=otlp_endpoint,
        service_name=SETTINGS.OTEL_SERVICE_NAME,
    )
    return provider


def get_tracer(name: str) -> trace.Tracer:
    return trace.get_tracer(name)
