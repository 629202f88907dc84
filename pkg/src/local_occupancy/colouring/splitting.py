"""Random bipartitions that halve degree and neighbourhood density, and their iteration."""

from __future__ import annotations

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field
from pydantic.alias_generators import to_camel

from local_occupancy.bounds import SplitSequences, split_sequences
from local_occupancy.errors import FailureReport, SplitError
from local_occupancy.graph.core import Graph, iter_bits
from local_occupancy.observability import enrich_context, get_tracer
from local_occupancy.settings import SETTINGS

tracer = get_tracer(__name__)


class _CamelModel(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)


class SplitAudit(_CamelModel):
    parts: List[List[int]]
    delta: int
    span: int = Field(..., description="max edges spanned by a neighbourhood before splitting")
    degree_bound: float
    span_bound: float
    degrees: List[int]
    spans: List[int]
    tries: int
    vacuous: bool = False

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.vacuous or (max(self.degrees) <= self.degree_bound
                                and max(self.spans) <= self.span_bound)

    @property
    def excess(self) -> float:
        return max(max(self.degrees) - self.degree_bound, max(self.spans) - self.span_bound)


class SplitResult(_CamelModel):
    parts: List[List[int]]
    j: int
    sequences: SplitSequences
    part_degrees: List[int]
    levels: List[List[SplitAudit]] = Field(default_factory=list)


def _max_degree(g: Graph, mask: int) -> int:
    return max(((g.adjacency[v] & mask).bit_count() for v in iter_bits(mask)), default=0)


def _max_span(g: Graph, mask: int) -> int:
    return max((g.edges_within(g.adjacency[v] & mask) for v in iter_bits(mask)), default=0)


def _split_mask(g: Graph, mask: int, rng: np.random.Generator, max_tries: int) -> SplitAudit:
    delta = _max_degree(g, mask)
    span = _max_span(g, mask)
    root = math.sqrt(math.log(delta)) if delta > 1 else 0.0
    degree_bound = delta / 2 + 2 * math.sqrt(delta) * root
    span_bound = span / 4 + 2 * delta**1.5 * root
    members = np.fromiter(iter_bits(mask), dtype=np.int64)
    log = enrich_context(event="split_try")
    best: Optional[SplitAudit] = None
    for attempt in range(1, max_tries + 1):
        side = rng.integers(0, 2, size=members.size)
        halves = [sum(1 << int(v) for v in members[side == s]) for s in (0, 1)]
        audit = SplitAudit(
            parts=[list(iter_bits(h)) for h in halves],
            delta=delta, span=span, degree_bound=degree_bound, span_bound=span_bound,
            degrees=[_max_degree(g, h) for h in halves],
            spans=[_max_span(g, h) for h in halves],
            tries=attempt, vacuous=delta <= 1,
        )
        log.debug("Split attempt", attempt=attempt, degrees=audit.degrees, spans=audit.spans)
        if audit.passed:
            return audit
        if best is None or audit.excess < best.excess:
            best = audit
    raise SplitError(FailureReport(
        phase="split", rounds=max_tries,
        message=f"no bipartition met the degree and span bounds in {max_tries} tries",
        trace=[best.model_dump(by_alias=True)] if best is not None else [],
    ))


def split_partition(g: Graph, max_tries: Optional[int] = None,
                    seed: Optional[int] = None) -> SplitAudit:
    """
    Uniform random bipartition, redrawn until both parts have max degree at most
    delta/2 + 2 sqrt(delta log delta) and every neighbourhood inside a part spans at
    most s/4 + 2 delta^(3/2) sqrt(log delta) edges.
    """
    tries = SETTINGS.SPLIT_MAX_TRIES if max_tries is None else max_tries
    rng = np.random.default_rng(SETTINGS.DEFAULT_SEED if seed is None else seed)
    return _split_mask(g, g.full_mask, rng, tries)


def iterated_split(
    g: Graph,
    f: float,
    delta: float,
    zeta: float,
    *,
    seed: Optional[int] = None,
    max_tries: Optional[int] = None,
) -> SplitResult:
    """Split every part of max degree above 1, j times, with j from the split sequences."""
    sequences = split_sequences(g.max_degree, f, delta, zeta)
    tries = SETTINGS.SPLIT_MAX_TRIES if max_tries is None else max_tries
    rng = np.random.default_rng(SETTINGS.DEFAULT_SEED if seed is None else seed)
    parts = [g.full_mask] if g.n else []
    levels: List[List[SplitAudit]] = []
    with tracer.start_as_current_span("iterated_split"):
        for level in range(sequences.j):
            audits: List[SplitAudit] = []
            next_parts: List[int] = []
            for part in parts:
                if _max_degree(g, part) <= 1:
                    next_parts.append(part)
                    continue
                audit = _split_mask(g, part, rng, tries)
                audits.append(audit)
                next_parts.extend(sum(1 << v for v in half) for half in audit.parts if half)
            parts = next_parts
            levels.append(audits)
            enrich_context(event="split_level").info("Split level done", level=level + 1,
                                                     parts=len(parts))
    return SplitResult(
        parts=[list(iter_bits(p)) for p in parts],
        j=sequences.j,
        sequences=sequences,
        part_degrees=[_max_degree(g, p) for p in parts],
        levels=levels,
    )
