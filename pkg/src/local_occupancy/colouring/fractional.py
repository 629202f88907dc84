"""Greedy fractional colouring driven by hard-core samples."""

from __future__ import annotations

import math
import time
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel

from local_occupancy.errors import CapExceededError, DomainError, FailureReport
from local_occupancy.graph.core import Graph, iter_bits, mask_of
from local_occupancy.hardcore import HardCoreModel, check_fugacity
from local_occupancy.observability import enrich_context, get_tracer
from local_occupancy.settings import SETTINGS

tracer = get_tracer(__name__)

TOLERANCE = 1e-9


class _CamelModel(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)


class FractionalPart(_CamelModel):
    members: List[int]
    start: float
    weight: float = Field(..., gt=0)

    @property
    def end(self) -> float:
        return self.start + self.weight


class FractionalColouring(_CamelModel):
    parts: List[FractionalPart]
    budgets: List[float]
    step: float
    seed: Optional[int] = None

    def weight_of(self, v: int) -> float:
        return sum(p.weight for p in self.parts if v in p.members)

    def violations(self, g: Graph) -> List[str]:
        """Empty iff every part is independent, every vertex gets weight 1 inside its budget
        and the intervals of parts sharing a vertex are disjoint."""
        problems = []
        for i, part in enumerate(self.parts):
            if not g.is_independent(mask_of(part.members)):
                problems.append(f"part {i} is not independent")
        for v in range(g.n):
            spans = sorted((p.start, p.end) for p in self.parts if v in p.members)
            if sum(b - a for a, b in spans) < 1 - TOLERANCE:
                problems.append(f"vertex {v} has weight below 1")
            if spans and (spans[0][0] < -TOLERANCE or spans[-1][1] > self.budgets[v] + TOLERANCE):
                problems.append(f"vertex {v} coloured outside [0, {self.budgets[v]:.6g})")
            for (_, end), (start, _) in zip(spans, spans[1:]):
                if start < end - TOLERANCE:
                    problems.append(f"vertex {v} has overlapping intervals")
                    break
        return problems

    def is_valid(self, g: Graph) -> bool:
        return not self.violations(g)


class FractionalOutcome(_CamelModel):
    colouring: Optional[FractionalColouring] = None
    failure: Optional[FailureReport] = None
    steps: int = 0


def default_step(budgets: Sequence[float]) -> float:
    return min(budgets, default=1.0) / SETTINGS.FRACTIONAL_STEPS_PER_UNIT


def fractional_greedy(
    g: Graph,
    lam: float,
    budgets: Sequence[float],
    *,
    step: Optional[float] = None,
    seed: Optional[int] = None,
) -> FractionalOutcome:
    """
    Sweep time tau upwards in steps of width step. Each step samples I from the
    hard-core model on the vertices that still need weight and whose budget has
    room for [tau, tau+step), and gives I that interval. Fails at the first vertex
    whose budget runs out before it has weight 1.
    """
    check_fugacity(lam)
    if len(budgets) != g.n:
        raise DomainError(f"{len(budgets)} budgets for {g.n} vertices")
    if any(not c > 0 for c in budgets):
        raise DomainError("budgets must be positive")
    width = default_step(budgets) if step is None else step
    if not width > 0:
        raise DomainError("step must be positive")
    seed = SETTINGS.DEFAULT_SEED if seed is None else seed

    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    model = HardCoreModel(g, float(lam))
    demand = [math.ceil(1 / width - TOLERANCE)] * g.n
    parts: List[FractionalPart] = []
    t = 0
    with tracer.start_as_current_span("fractional_greedy"):
        while True:
            waiting = [v for v in range(g.n) if demand[v] > 0]
            if not waiting:
                break
            end = (t + 1) * width
            starved = [v for v in waiting if budgets[v] < end - TOLERANCE]
            if starved:
                v = starved[0]
                report = FailureReport(
                    phase="fractional", vertex=v, rounds=t,
                    message=f"budget {budgets[v]:.6g} of vertex {v} exhausted with "
                            f"{demand[v] * width:.6g} weight still needed",
                )
                enrich_context(event="fractional").info("Budget exhausted", vertex=v, steps=t)
                return FractionalOutcome(failure=report, steps=t)
            chosen = _sample(model, mask_of(waiting), rng)
            members = list(iter_bits(chosen))
            for v in members:
                demand[v] -= 1
            if members:
                last = parts[-1] if parts else None
                if last is not None and last.members == members and \
                        abs(last.end - t * width) < TOLERANCE:
                    last.weight += width
                else:
                    parts.append(FractionalPart(members=members, start=t * width, weight=width))
            t += 1

    colouring = FractionalColouring(parts=parts, budgets=list(budgets), step=width, seed=seed)
    enrich_context(event="fractional").info(
        "Fractional colouring built", steps=t, parts=len(parts),
        duration_ms=round((time.perf_counter() - start) * 1000, 3),
    )
    return FractionalOutcome(colouring=colouring, steps=t)


def _sample(model: HardCoreModel, mask: int, rng: np.random.Generator) -> int:
    size = mask.bit_count()
    if size <= SETTINGS.EXACT_SAMPLE_CAP:
        try:
            return model.sample(mask, rng)
        except CapExceededError:
            pass
    return model.glauber(mask, rng, SETTINGS.GLAUBER_SWEEPS * size)
