"""Local sparsity settings: which hypothesis a neighbourhood satisfies."""

import math
import re
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from local_occupancy.errors import SpecError


class TriangleFree(BaseModel):
    kind: Literal["triangle-free"] = "triangle-free"

    @property
    def mad_exponent(self) -> Optional[float]:
        return 0.0


class CkFree(BaseModel):
    kind: Literal["ck-free"] = "ck-free"
    k: int = Field(..., ge=3)

    @property
    def mad_exponent(self) -> Optional[float]:
        return float(self.k - 3)


class TriangleCount(BaseModel):
    """At most t triangles through each vertex."""

    kind: Literal["triangle-count"] = "triangle-count"
    t: float = Field(..., ge=0.5)

    @property
    def mad_exponent(self) -> Optional[float]:
        return math.sqrt(2 * self.t)


class PathCount(BaseModel):
    """At most t copies of the path on k-1 vertices in each neighbourhood."""

    kind: Literal["path-count"] = "path-count"
    k: int = Field(..., ge=3)
    t: float = Field(..., ge=0.5)

    @property
    def mad_exponent(self) -> Optional[float]:
        return self.k - 3 + math.sqrt(2 * self.t)


class HallRatio(BaseModel):
    kind: Literal["hall"] = "hall"
    rho: float = Field(..., ge=1.0)

    @property
    def mad_exponent(self) -> Optional[float]:
        return None


class Clique(BaseModel):
    kind: Literal["clique"] = "clique"
    omega: int = Field(..., ge=3)

    @property
    def mad_exponent(self) -> Optional[float]:
        return None


SparsitySetting = Annotated[
    Union[TriangleFree, CkFree, TriangleCount, PathCount, HallRatio, Clique],
    Field(discriminator="kind"),
]
_ADAPTER: TypeAdapter = TypeAdapter(SparsitySetting)

_PATTERN = re.compile(r"^\s*([a-z-]+)\s*(?::\s*(.*))?$")
_FIELDS = {
    "triangle-free": [],
    "ck-free": ["k"],
    "triangle-count": ["t"],
    "path-count": ["k", "t"],
    "hall": ["rho"],
    "clique": ["omega"],
}


def parse_setting(text: str) -> SparsitySetting:
    """Parse 'triangle-free', 'ck-free:5', 'triangle-count:2', 'path-count:4,2', 'hall:1.5', 'clique:4'."""
    match = _PATTERN.match(text)
    if not match or match.group(1) not in _FIELDS:
        raise SpecError(f"unknown setting {text!r}; known: {sorted(_FIELDS)}")
    kind = match.group(1)
    values = [v.strip() for v in (match.group(2) or "").split(",") if v.strip()]
    names = _FIELDS[kind]
    if len(values) != len(names):
        raise SpecError(f"setting {kind} takes {len(names)} parameter(s): {names}")
    try:
        return _ADAPTER.validate_python({"kind": kind, **dict(zip(names, values))})
    except ValidationError as e:
        raise SpecError(f"invalid setting {text!r}: {e.errors()[0]['msg']}") from e


def describe_setting(setting: SparsitySetting) -> str:
    values = [str(getattr(setting, name)) for name in _FIELDS[setting.kind]]
    return setting.kind + (":" + ",".join(values) if values else "")
