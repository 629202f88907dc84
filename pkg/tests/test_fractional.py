"""Tests for the greedy fractional colouring."""

import pytest

from local_occupancy.colouring import FractionalColouring, fractional_greedy
from local_occupancy.colouring.fractional import FractionalPart, default_step
from local_occupancy.errors import DomainError
from local_occupancy.graph import Graph


def test_edgeless_graph_merges_into_one_part():
    """Test at huge fugacity every step takes all vertices, so parts merge."""
    g = Graph.empty(3)
    outcome = fractional_greedy(g, 1e6, [1.0, 1.0, 1.0], seed=0)
    assert outcome.failure is None
    colouring = outcome.colouring
    assert len(colouring.parts) == 1
    assert colouring.parts[0].members == [0, 1, 2]
    assert colouring.parts[0].weight == pytest.approx(1.0)
    assert colouring.is_valid(g)


def test_k2_fits_in_two_plus_slack(k2):
    """Test K2 needs weight 2 in total; a budget of 2 plus two steps is enough."""
    step = 1 / 64
    outcome = fractional_greedy(k2, 1e6, [2 + 2 * step] * 2, step=step, seed=0)
    assert outcome.failure is None
    colouring = outcome.colouring
    assert colouring.is_valid(k2)
    assert colouring.weight_of(0) == pytest.approx(1.0)
    assert colouring.weight_of(1) == pytest.approx(1.0)
    assert all(len(part.members) == 1 for part in colouring.parts)


def test_small_budget_fails_on_its_vertex():
    """Test a budget below 1 runs out and the failure names the vertex."""
    outcome = fractional_greedy(Graph.empty(1), 1.0, [0.5], seed=0)
    assert outcome.colouring is None
    assert outcome.failure.phase == "fractional"
    assert outcome.failure.vertex == 0
    assert outcome.steps == 64


def test_seed_determinism(c5):
    """Test equal seeds give equal colourings."""
    a = fractional_greedy(c5, 2.0, [4.0] * 5, seed=11)
    b = fractional_greedy(c5, 2.0, [4.0] * 5, seed=11)
    assert a == b


def test_default_step():
    """Test the step is the smallest budget split into equal pieces."""
    assert default_step([2.0, 4.0]) == pytest.approx(2.0 / 64)


def test_rejects_bad_arguments(k2):
    """Test budget count, positivity and step."""
    with pytest.raises(DomainError):
        fractional_greedy(k2, 1.0, [1.0])
    with pytest.raises(DomainError):
        fractional_greedy(k2, 1.0, [1.0, 0.0])
    with pytest.raises(DomainError):
        fractional_greedy(k2, 1.0, [1.0, 1.0], step=0.0)
    with pytest.raises(DomainError):
        fractional_greedy(k2, 0.0, [1.0, 1.0])


def test_violations_are_reported(k2):
    """Test a hand-built colouring with every kind of defect."""
    colouring = FractionalColouring(
        parts=[
            FractionalPart(members=[0, 1], start=0.0, weight=0.5),
            FractionalPart(members=[0], start=0.25, weight=1.0),
        ],
        budgets=[1.0, 1.0],
        step=0.25,
    )
    problems = colouring.violations(k2)
    assert "part 0 is not independent" in problems
    assert "vertex 1 has weight below 1" in problems
    assert any("vertex 0 coloured outside" in p for p in problems)
    assert "vertex 0 has overlapping intervals" in problems
    assert not colouring.is_valid(k2)
