"""Unit tests for the random in-class graph generator."""

import pytest

from planar_decomp.class_gate import CaseTag, satisfies
from planar_decomp.errors import ArgumentError
from planar_decomp.generator import generate
from planar_decomp.graph_core import is_connected


def test_generate_is_deterministic():
    """Test that the same seed gives the same embedded graph."""
    first = generate(7, 15, CaseTag.CASE3)
    second = generate(7, 15, CaseTag.CASE3)

    assert first.graph == second.graph
    assert first.attempts == second.attempts


@pytest.mark.parametrize("case", list(CaseTag))
def test_generated_graph_stays_in_case(case):
    """Test that every case yields a connected in-class graph with a boundary."""
    result = generate(3, 14, case)
    g = result.graph

    assert len(g.vertices) <= 14
    assert len(g.vertices) == 14 or result.exhausted
    assert is_connected(g)
    assert g.boundary_edge is not None
    assert satisfies(g, case)


def test_generate_tiny_graphs():
    """Test the one- and two-vertex starts."""
    single = generate(0, 1, CaseTag.CASE1).graph
    edge = generate(0, 2, CaseTag.CASE1).graph

    assert single.vertices == {0}
    assert single.boundary_edge is None
    assert edge.boundary_edge == (0, 1)


def test_generate_accepts_case_names():
    """Test that the case may be given as text."""
    assert generate(5, 8, "3").case is CaseTag.CASE3


def test_generate_rejects_empty_graphs():
    """Test that at least one vertex is required."""
    with pytest.raises(ArgumentError, match="n >= 1"):
        generate(0, 0, CaseTag.CASE3)


def test_small_budget_is_reported():
    """Test that running out of attempts is flagged instead of raised."""
    result = generate(11, 40, CaseTag.CASE3, budget=1)

    assert result.attempts <= 1
    assert result.exhausted


@pytest.mark.parametrize("case", list(CaseTag))
def test_chord_phase_only_adds_edges(case):
    """Test that chords join existing vertices and keep the graph in case."""
    for seed in range(5):
        grown = generate(seed, 30, case, chords=0)
        full = generate(seed, 30, case)
        g = full.graph

        assert grown.chords == 0
        assert grown.attempts == full.attempts
        assert g.vertices == grown.graph.vertices
        assert set(grown.graph.edges()) <= set(g.edges())
        assert g.number_of_edges() == grown.graph.number_of_edges() + full.chords
        assert sum(g.degree(v) == 2 for v in g.vertices) <= sum(
            grown.graph.degree(v) == 2 for v in grown.graph.vertices
        )
        assert satisfies(g, case)


def test_chord_phase_adds_chords():
    """Test that the chord phase raises the edge count on a realistic corpus."""
    added = sum(generate(seed, 30, case).chords for case in CaseTag for seed in range(5))

    assert added > 0


def test_generate_rejects_negative_chords():
    """Test that the chord count cannot be negative."""
    with pytest.raises(ArgumentError, match="non-negative"):
        generate(0, 10, CaseTag.CASE1, chords=-1)
