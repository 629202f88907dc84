"""
Two-phase cover colouring.

Phase one draws I from the hard-core model on H and resamples it locally until
every uncoloured vertex keeps a long residual list whose nodes have few
residual conflicts. Phase two finishes the residual cover by Moser-Tardos
resampling. Both phases are bounded and report failure instead of raising.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel

from local_occupancy.colouring.cover import Cover, PartialColouring, verify_colouring
from local_occupancy.errors import CapExceededError, FailureReport, PreconditionError
from local_occupancy.graph.core import iter_bits
from local_occupancy.hardcore import HardCoreModel, check_fugacity
from local_occupancy.observability import enrich_context, get_tracer
from local_occupancy.settings import SETTINGS

tracer = get_tracer(__name__)

Sampler = Literal["auto", "exact", "glauber"]
Targets = Union[int, Sequence[int]]

TRACE_LIMIT = 50


class PhaseStats(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    phase: str
    success: bool
    rounds: int = 0
    resamples: int = 0
    sampler: Optional[str] = None
    coloured: int = 0


class ColouringCertificate(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    chosen: List[int] = Field(default_factory=list)
    colours: Dict[int, int] = Field(default_factory=dict)
    verified: bool = False
    phase_stats: List[PhaseStats] = Field(default_factory=list)
    seed: Optional[int] = None
    failure: Optional[FailureReport] = None


@dataclass
class Phase1Outcome:
    partial: Optional[PartialColouring]
    stats: PhaseStats
    failure: Optional[FailureReport] = None


@dataclass
class Phase2Outcome:
    chosen: Optional[int]
    stats: PhaseStats
    failure: Optional[FailureReport] = None


def _targets(ell: Targets, n: int) -> List[int]:
    if isinstance(ell, int):
        return [ell] * n
    targets = list(ell)
    if len(targets) != n:
        raise PreconditionError(f"{len(targets)} list targets for {n} vertices")
    return targets


def conflict_limits(cover: Cover, ell: Sequence[int], factor: float,
                    among: Optional[int] = None) -> List[float]:
    """factor * min of ell over neighbours of u (restricted to among); inf if none."""
    g = cover.base
    pool = g.full_mask if among is None else among
    limits = []
    for u in range(g.n):
        nb = g.adjacency[u] & pool
        limits.append(factor * min(ell[v] for v in iter_bits(nb)) if nb else math.inf)
    return limits


def violation(partial: PartialColouring, u: int, ell: Sequence[int],
              limits: Sequence[float]) -> Optional[str]:
    """Why u is bad under I, or None: short residual list or a crowded residual node."""
    if partial.cover.blocks[u] & partial.chosen:
        return None
    residual = partial.residual_list(u)
    if residual.bit_count() < ell[u]:
        return "short-list"
    for x in iter_bits(residual):
        if partial.residual_degree(x) > limits[u]:
            return "crowded"
    return None


def resample_region(cover: Cover, chosen: int, u: int) -> Tuple[int, int]:
    """
    Split I at L(N[u]): the part of I kept outside it, and the nodes of L(N[u])
    with no neighbour in that part. I inside is redrawn on the second mask.
    """
    region = cover.blocks_of(cover.base.closed_neighbourhood(u))
    outside = chosen & ~region
    blocked = 0
    for x in iter_bits(outside):
        blocked |= cover.conflict.adjacency[x]
    return outside, region & ~blocked


class _RegionSampler:
    """Hard-core sampling on node sets of H: exact while affordable, else Glauber."""

    def __init__(self, cover: Cover, lam: float, mode: Sampler):
        self.model = HardCoreModel(cover.conflict, lam)
        self.mode = mode
        self.used: set = set()

    def __call__(self, mask: int, rng: np.random.Generator) -> int:
        size = mask.bit_count()
        if self.mode == "exact" or (self.mode == "auto" and size <= SETTINGS.EXACT_SAMPLE_CAP):
            try:
                chosen = self.model.sample(mask, rng)
                self.used.add("exact")
                return chosen
            except CapExceededError:
                if self.mode == "exact":
                    raise
                enrich_context(event="sampler_fallback").warning(
                    "Exact sampling over memo budget; using Glauber", nodes=size
                )
        self.used.add("glauber")
        return self.model.glauber(mask, rng, SETTINGS.GLAUBER_SWEEPS * size)

    @property
    def label(self) -> str:
        return "+".join(sorted(self.used)) or "none"


def phase1_partial(
    cover: Cover,
    lam: float,
    ell: Targets,
    *,
    max_rounds: Optional[int] = None,
    seed: Union[int, np.random.Generator, None] = None,
    factor: Optional[float] = None,
    sampler: Sampler = "auto",
) -> Phase1Outcome:
    """
    Sample I on H, then while some uncoloured u has |L_I(u)| < ell_u or a node of
    L_I(u) with more than factor * min_{v in N(u)} ell_v residual conflicts,
    resample I on L(N[u]) given the rest. The lowest such u goes first.
    """
    check_fugacity(lam)
    g = cover.base
    targets = _targets(ell, g.n)
    limits = conflict_limits(cover, targets, SETTINGS.HAXELL_FACTOR if factor is None else factor)
    rounds_cap = SETTINGS.DEFAULT_ROUNDS if max_rounds is None else max_rounds
    log = enrich_context(event="phase1_round")

    for u in range(g.n):
        if targets[u] > cover.blocks[u].bit_count():
            report = FailureReport(
                phase="resample", vertex=u,
                message=f"target {targets[u]} exceeds list size {cover.blocks[u].bit_count()} "
                        f"at vertex {u}",
            )
            return Phase1Outcome(None, PhaseStats(phase="resample", success=False), report)

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draw = _RegionSampler(cover, float(lam), sampler)
    chosen = draw(cover.conflict.full_mask, rng)
    trace: List[Dict] = []
    rounds = 0
    while True:
        partial = PartialColouring(cover, chosen)
        bad = next(((u, why) for u in range(g.n)
                    if (why := violation(partial, u, targets, limits)) is not None), None)
        if bad is None:
            stats = PhaseStats(phase="resample", success=True, rounds=rounds, resamples=rounds,
                               sampler=draw.label, coloured=partial.domain.bit_count())
            log.debug("Phase one settled", rounds=rounds)
            return Phase1Outcome(partial, stats)
        u, why = bad
        trace.append({"round": rounds, "vertex": u, "reason": why})
        if rounds >= rounds_cap:
            stats = PhaseStats(phase="resample", success=False, rounds=rounds, resamples=rounds,
                               sampler=draw.label)
            report = FailureReport(
                phase="resample", vertex=u, rounds=rounds, trace=trace[-TRACE_LIMIT:],
                message=f"no violation-free independent set within {rounds_cap} rounds",
            )
            log.warning("Phase one gave up", rounds=rounds, vertex=u)
            return Phase1Outcome(None, stats, report)
        outside, free = resample_region(cover, chosen, u)
        chosen = outside | draw(free, rng)
        rounds += 1
        log.debug("Resampled", round=rounds, vertex=u, reason=why)


def phase2_finish(
    partial: PartialColouring,
    ell: Targets,
    *,
    max_rounds: Optional[int] = None,
    seed: Union[int, np.random.Generator, None] = None,
    factor: Optional[float] = None,
) -> Phase2Outcome:
    """
    Colour the uncoloured vertices from their residual lists. Raises
    PreconditionError unless every residual list has at least ell(u) >= 3
    nodes, each with at most factor * min over uncoloured neighbours of ell
    residual conflicts.
    """
    cover = partial.cover
    g = cover.base
    targets = _targets(ell, g.n)
    uncoloured = partial.uncoloured
    pool = sum(1 << u for u in uncoloured)
    limits = conflict_limits(cover, targets, SETTINGS.HAXELL_FACTOR if factor is None else factor,
                             among=pool)
    lists = partial.residual_lists()
    for u in uncoloured:
        if targets[u] < 3:
            raise PreconditionError(f"list target at vertex {u} is {targets[u]}; need >= 3")
        if len(lists[u]) < targets[u]:
            raise PreconditionError(
                f"residual list at vertex {u} has {len(lists[u])} < {targets[u]} colours"
            )
        for x in lists[u]:
            if partial.residual_degree(x) > limits[u]:
                raise PreconditionError(
                    f"node {x} at vertex {u} has {partial.residual_degree(x)} residual "
                    f"conflicts > {limits[u]:.4g}"
                )

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    rounds_cap = SETTINGS.DEFAULT_ROUNDS if max_rounds is None else max_rounds
    log = enrich_context(event="phase2_round")
    pick: Dict[int, int] = {u: lists[u][int(rng.integers(len(lists[u])))] for u in uncoloured}
    trace: List[Dict] = []
    rounds = 0
    while True:
        conflict = _lowest_conflict(cover, pick)
        if conflict is None:
            chosen = partial.chosen
            for x in pick.values():
                chosen |= 1 << x
            stats = PhaseStats(phase="finish", success=True, rounds=rounds, resamples=rounds,
                               coloured=len(pick))
            return Phase2Outcome(chosen, stats)
        u, v = conflict
        trace.append({"round": rounds, "vertex": u, "other": v})
        if rounds >= rounds_cap:
            report = FailureReport(
                phase="finish", vertex=u, rounds=rounds, trace=trace[-TRACE_LIMIT:],
                message=f"conflicts remain after {rounds_cap} rounds",
            )
            log.warning("Phase two gave up", rounds=rounds, vertex=u)
            return Phase2Outcome(None, PhaseStats(phase="finish", success=False, rounds=rounds,
                                                  resamples=rounds), report)
        for w in (u, v):
            pick[w] = lists[w][int(rng.integers(len(lists[w])))]
        rounds += 1
        log.debug("Resampled edge", round=rounds, vertex=u, other=v)


def _lowest_conflict(cover: Cover, pick: Dict[int, int]) -> Optional[Tuple[int, int]]:
    chosen = 0
    for x in pick.values():
        chosen |= 1 << x
    for u in sorted(pick):
        hit = cover.cross(pick[u]) & chosen
        if hit:
            v = min(cover.owner[y] for y in iter_bits(hit))
            return (u, v) if u < v else (v, u)
    return None


def colour(
    cover: Cover,
    lam: float,
    ell: Targets,
    *,
    max_rounds: Optional[int] = None,
    seed: Optional[int] = None,
    factor: Optional[float] = None,
    sampler: Sampler = "auto",
) -> ColouringCertificate:
    """Phase one, then phase two on the residual cover; the result is always verified."""
    start = time.perf_counter()
    seed = SETTINGS.DEFAULT_SEED if seed is None else seed
    first_rng, second_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    log = enrich_context(event="colour")
    certificate = ColouringCertificate(seed=seed)

    with tracer.start_as_current_span("colour.phase1"):
        first = phase1_partial(cover, lam, ell, max_rounds=max_rounds, seed=first_rng,
                               factor=factor, sampler=sampler)
    certificate.phase_stats.append(first.stats)
    if first.partial is None:
        certificate.failure = first.failure
        log.info("Colouring failed", phase="resample", duration_ms=_ms(start))
        return certificate

    with tracer.start_as_current_span("colour.phase2"):
        second = phase2_finish(first.partial, ell, max_rounds=max_rounds, seed=second_rng,
                               factor=factor)
    certificate.phase_stats.append(second.stats)
    if second.chosen is None:
        certificate.failure = second.failure
        log.info("Colouring failed", phase="finish", duration_ms=_ms(start))
        return certificate

    if not verify_colouring(cover, second.chosen):
        certificate.failure = FailureReport(phase="verify",
                                            message="assembled colouring failed verification")
        log.error("Colouring failed verification")
        return certificate
    certificate.chosen = list(iter_bits(second.chosen))
    certificate.colours = {cover.owner[x]: cover.label(x) for x in certificate.chosen}
    certificate.verified = True
    log.info("Colouring verified", duration_ms=_ms(start), nodes=cover.size)
    return certificate


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000, 3)
