"""Exact checks of the residual-list estimates behind phase one."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional

from local_occupancy.bounds import residual_target
from local_occupancy.colouring.cover import Cover
from local_occupancy.errors import CapExceededError, DomainError
from local_occupancy.graph.core import iter_bits
from local_occupancy.hardcore import (
    Fugacity,
    PolynomialCache,
    check_fugacity,
    hardcore_law,
    horner,
)

NEGATIVE_CORRELATION_CAP = 16


def _neighbour_region(cover: Cover, u: int) -> int:
    return cover.blocks_of(cover.base.adjacency[u])


def availability(cover: Cover, u: int, lam: Fugacity) -> Dict[int, Fugacity]:
    """Pr(x stays in L_I(u)) for each x in L(u), I hard-core on H[L(N(u))]."""
    check_fugacity(lam)
    cache = PolynomialCache(cover.conflict.adjacency)
    region = _neighbour_region(cover, u)
    z = horner(cache.polynomial(region), lam)
    return {
        x: horner(cache.polynomial(region & ~cover.cross(x)), lam) / z
        for x in cover.block(u)
    }


def expected_residual_list_size(cover: Cover, u: int, lam: Fugacity) -> Fugacity:
    """E|L_I(u)|; exact Fraction for Fraction lam."""
    values = availability(cover, u, lam).values()
    return sum(values, Fraction(0) if isinstance(lam, Fraction) else 0.0)


def residual_list_lower_bound(
    beta: float, gamma: float, list_size: int, deg: int, lam: float
) -> float:
    """m_u, the guaranteed mean residual list size under a local occupancy certificate."""
    if not beta > 0:
        raise DomainError("beta must be positive")
    check_fugacity(lam)
    return residual_target(beta, gamma, list_size, deg, lam)


def negative_correlation_gap(
    cover: Cover, u: int, lam: Fugacity, cap: Optional[int] = None
) -> Fugacity:
    """
    min over subsets S of L(u) of prod Pr(x unavailable) - Pr(all of S unavailable).
    A negative value is a violation of negative correlation.
    """
    region = _neighbour_region(cover, u)
    limit = NEGATIVE_CORRELATION_CAP if cap is None else cap
    if region.bit_count() > limit:
        raise CapExceededError(f"{region.bit_count()} nodes around vertex {u} exceed cap {limit}")
    law = hardcore_law(cover.conflict, Fraction(lam), region)
    block = cover.block(u)
    unavailable: Dict[int, Fraction] = {}
    for s, p in law.items():
        hit = sum(1 << i for i, x in enumerate(block) if cover.cross(x) & s)
        unavailable[hit] = unavailable.get(hit, Fraction(0)) + p
    marginals = [sum((p for hit, p in unavailable.items() if hit >> i & 1), Fraction(0))
                 for i in range(len(block))]
    gap: Optional[Fraction] = None
    for size in range(2, len(block) + 1):
        for subset in combinations(range(len(block)), size):
            want = sum(1 << i for i in subset)
            joint = sum((p for hit, p in unavailable.items() if hit & want == want), Fraction(0))
            product = math.prod((marginals[i] for i in subset), start=Fraction(1))
            value = product - joint
            gap = value if gap is None or value < gap else gap
    result = Fraction(0) if gap is None else gap
    return result if isinstance(lam, Fraction) else float(result)


def chernoff_lower_tail(eta: float, mean: float) -> float:
    """Pr(X <= (1-eta) mean) <= exp(-eta^2 mean / 2) for negatively correlated indicators."""
    if not 0 < eta < 1:
        raise DomainError("eta must lie in (0, 1)")
    return math.exp(-eta * eta * mean / 2)


def lll_condition(p: float, d: int) -> bool:
    """Symmetric local lemma: 4 p d <= 1."""
    return 4 * p * d <= 1


def residual_list_sizes(cover: Cover, chosen: int) -> List[int]:
    covered = chosen
    for x in iter_bits(chosen):
        covered |= cover.conflict.adjacency[x]
    return [(block & ~covered).bit_count() for block in cover.blocks]
