"""Exception hierarchy and structured failure reports."""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel


class FailureReport(BaseModel):
    """Structured description of a bounded algorithm that gave up."""

    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    phase: str = Field(..., description="Procedure that failed, e.g. 'resample' or 'finish'")
    message: str
    vertex: Optional[int] = Field(None, description="Vertex named by the failure, if any")
    rounds: int = 0
    trace: List[Dict[str, Any]] = Field(default_factory=list)


class LocalOccupancyError(Exception):
    """Base error. exit_code is what the CLI returns for it."""

    exit_code = 1


class GraphFormatError(LocalOccupancyError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GraphError(LocalOccupancyError, ValueError):
    pass


class SpecError(LocalOccupancyError, ValueError):
    pass


class CoverError(LocalOccupancyError, ValueError):
    pass


class DomainError(LocalOccupancyError, ValueError):
    exit_code = 3


class RegimeError(LocalOccupancyError, ValueError):
    exit_code = 3


class CapExceededError(LocalOccupancyError):
    exit_code = 3


class PreconditionError(LocalOccupancyError):
    exit_code = 3


class AlgorithmFailure(LocalOccupancyError):
    exit_code = 2

    def __init__(self, report: FailureReport):
        self.report = report
        super().__init__(report.message)


class SearchExhaustedError(AlgorithmFailure):
    pass


class SplitError(AlgorithmFailure):
    pass
