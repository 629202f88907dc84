"""Tests for the two-phase cover colouring."""

from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from local_occupancy.colouring import (
    PartialColouring,
    colour,
    cover_from_lists,
    phase1_partial,
    phase2_finish,
    random_cover,
    verify_colouring,
)
from local_occupancy.colouring.phases import (
    TRACE_LIMIT,
    conflict_limits,
    resample_region,
    violation,
)
from local_occupancy.errors import PreconditionError
from local_occupancy.graph import (
    Graph,
    blow_up,
    complete,
    complete_bipartite,
    cycle,
    path,
    petersen,
    random_regular,
)
from local_occupancy.hardcore import hardcore_law


def lists_cover(g, k):
    return cover_from_lists(g, [list(range(k))] * g.n)


def test_edgeless_graph_is_coloured_directly():
    """Test isolated vertices never violate and all get a colour."""
    cover = lists_cover(Graph.empty(3), 3)
    certificate = colour(cover, 1.0, 3, seed=0)
    assert certificate.verified
    assert sorted(certificate.colours) == [0, 1, 2]
    assert [s.phase for s in certificate.phase_stats] == ["resample", "finish"]
    assert certificate.phase_stats[0].rounds == 0


def test_c5_with_long_lists_verifies(c5):
    """Test nine colours per vertex of C5: never crowded, always finished."""
    cover = lists_cover(c5, 9)
    certificate = colour(cover, 1.0, 3, seed=7, factor=1.0)
    assert certificate.verified
    assert certificate.failure is None
    assert verify_colouring(cover, certificate.chosen)
    assert all(certificate.colours[u] != certificate.colours[v] for u, v in c5.edges())
    assert certificate.phase_stats[0].sampler == "exact"


def test_colour_is_deterministic_for_a_seed(c5):
    """Test equal seeds give equal certificates."""
    cover = lists_cover(c5, 9)
    assert colour(cover, 1.0, 3, seed=3, factor=1.0) == colour(cover, 1.0, 3, seed=3, factor=1.0)


def test_glauber_sampler_is_reported(c5):
    """Test the Glauber sampler path colours too."""
    certificate = colour(lists_cover(c5, 9), 1.0, 3, seed=1, factor=1.0, sampler="glauber")
    assert certificate.verified
    assert certificate.phase_stats[0].sampler == "glauber"


def test_preflight_names_the_short_vertex(k2):
    """Test a target above the list size fails at once, naming the vertex."""
    certificate = colour(lists_cover(k2, 2), 1.0, 3, seed=0)
    assert not certificate.verified
    assert certificate.failure.phase == "resample"
    assert certificate.failure.vertex == 0
    assert len(certificate.phase_stats) == 1


def test_k4_with_three_colours_exhausts_rounds():
    """Test K4 with 3-lists always leaves a violated vertex; the trace is capped."""
    outcome = phase1_partial(lists_cover(complete(4), 3), 1.0, 3, max_rounds=60, seed=2)
    assert outcome.partial is None
    assert not outcome.stats.success
    assert outcome.failure.rounds == 60
    assert len(outcome.failure.trace) == TRACE_LIMIT
    assert {step["reason"] for step in outcome.failure.trace} <= {"short-list", "crowded"}


def test_k2_phase_one_with_no_resampling(k2):
    """Test with zero rounds phase one either settles at once or reports round 0."""
    cover = lists_cover(k2, 3)
    outcomes = [colour(cover, 1.0, 3, seed=s, max_rounds=0) for s in range(30)]
    failed = [c for c in outcomes if not c.verified]
    assert failed and len(failed) < len(outcomes)
    for certificate in failed:
        assert certificate.failure.phase == "resample"
        assert certificate.failure.rounds == 0
        assert len(certificate.failure.trace) == 1
        assert certificate.failure.vertex in (0, 1)


def test_k2_phase_two_conflict_report(k2):
    """Test a remaining conflict with no rounds left is reported on its lower vertex."""
    partial = PartialColouring(lists_cover(k2, 3), 0)
    outcomes = [phase2_finish(partial, 3, max_rounds=0, seed=s, factor=1.0) for s in range(30)]
    failed = [o for o in outcomes if o.chosen is None]
    assert failed and len(failed) < len(outcomes)
    for outcome in failed:
        assert outcome.failure.phase == "finish"
        assert outcome.failure.vertex == 0
        assert outcome.failure.trace == [{"round": 0, "vertex": 0, "other": 1}]
    for outcome in outcomes:
        if outcome.chosen is not None:
            assert verify_colouring(partial.cover, outcome.chosen)


def test_phase_two_preconditions():
    """Test targets below 3, short residual lists and crowded nodes are refused."""
    g = path(3)
    partial = PartialColouring(lists_cover(g, 3), 0)
    with pytest.raises(PreconditionError, match=">= 3"):
        phase2_finish(partial, 2)
    with pytest.raises(PreconditionError, match="residual list"):
        phase2_finish(partial, [3, 4, 3], factor=1.0)
    with pytest.raises(PreconditionError, match="residual conflicts"):
        phase2_finish(partial, 3, factor=0.1)
    with pytest.raises(PreconditionError, match="list targets"):
        phase2_finish(partial, [3, 3])


def test_conflict_limits_and_violation(k2):
    """Test per-vertex conflict limits and the violation reasons."""
    cover = lists_cover(k2, 3)
    limits = conflict_limits(cover, [3, 3], 0.5)
    assert limits == [1.5, 1.5]
    assert conflict_limits(lists_cover(Graph.empty(1), 1), [1], 0.5) == [float("inf")]
    empty = PartialColouring(cover, 0)
    assert violation(empty, 0, [3, 3], limits) is None
    assert violation(empty, 0, [3, 3], [0.5, 0.5]) == "crowded"
    one = PartialColouring(cover, 0b1)
    assert violation(one, 0, [3, 3], limits) is None
    assert violation(one, 1, [3, 3], limits) == "short-list"


@pytest.mark.parametrize("cover", [
    cover_from_lists(path(4), [[0, 1, 2]] * 4),
    random_cover(cycle(5), 2, seed=3),
], ids=["path-lists", "c5-random"])
def test_resampled_region_has_the_conditional_law(cover):
    """Test I on L(N[u]) given I outside it is the hard-core law on the unblocked nodes."""
    lam = Fraction(1, 2)
    law = hardcore_law(cover.conflict, lam)
    for u in range(cover.base.n):
        region = cover.blocks_of(cover.base.closed_neighbourhood(u))
        by_outside = defaultdict(lambda: defaultdict(Fraction))
        for chosen, p in law.items():
            by_outside[chosen & ~region][chosen & region] += p
        for outside, inside in by_outside.items():
            kept, free = resample_region(cover, outside | next(iter(inside)), u)
            assert kept == outside
            assert free & ~region == 0
            total = sum(inside.values())
            assert {s: p / total for s, p in inside.items()} == hardcore_law(
                cover.conflict, lam, free)


def _finishing_instances():
    for seed in range(3):
        yield random_cover(random_regular(20, 3, seed=seed), 24, seed=seed)
    yield lists_cover(complete(4), 24)
    rng = np.random.default_rng(11)
    yield cover_from_lists(petersen(), [rng.choice(40, size=24, replace=False).tolist()
                                        for _ in range(10)])


@pytest.mark.parametrize("index", range(5))
def test_phase_two_finishes_sparse_residual_covers(index):
    """Test lists of ell nodes with at most ell/8 conflicts each are always finished."""
    cover = list(_finishing_instances())[index]
    partial = PartialColouring(cover, 0)
    for seed in range(10):
        outcome = phase2_finish(partial, 24, seed=seed)
        assert outcome.stats.success
        assert outcome.failure is None
        assert verify_colouring(cover, outcome.chosen)


def _run_phase_one(g, k, seeds, max_rounds):
    ell, factor = 3, 1.0
    targets = [ell] * g.n
    successes = 0
    for seed in seeds:
        cover = random_cover(g, k, seed=seed)
        limits = conflict_limits(cover, targets, factor)
        outcome = phase1_partial(cover, 1.0, ell, max_rounds=max_rounds, seed=seed,
                                 factor=factor)
        if outcome.partial is None:
            assert outcome.failure.phase == "resample"
            continue
        assert all(violation(outcome.partial, u, targets, limits) is None for u in range(g.n))
        finished = phase2_finish(outcome.partial, ell, seed=seed, factor=factor)
        if finished.chosen is not None:
            assert verify_colouring(cover, finished.chosen)
            successes += 1
    return successes


def test_phase_one_is_sound_on_a_small_triangle_free_blow_up():
    """Test every settled phase one leaves no violation and finishes to a proper colouring."""
    g = blow_up(cycle(5), 2)
    assert g.max_degree == 4
    assert _run_phase_one(g, 12, range(20), 200) > 0


@pytest.mark.slow
@pytest.mark.parametrize("g", [blow_up(cycle(5), 6), complete_bipartite(12, 12)],
                         ids=["c5-blow-up", "k12-12"])
def test_phase_one_is_sound_at_degree_twelve(g):
    """Test repeated seeded runs on 12-regular triangle-free graphs."""
    assert g.max_degree == 12
    assert _run_phase_one(g, 24, range(5), 300) > 0
