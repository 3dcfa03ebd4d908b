"""Unit tests for certificate checking, colourings and the oracle."""

import pytest

from planar_decomp.certificate import NiceDecomposition
from planar_decomp.certify import (
    DefectiveColoring,
    greedy_color,
    oracle_nice,
    peel_order,
    validate_coloring,
    verify_decomposition,
    verify_nice,
)
from planar_decomp.errors import ArgumentError, ContractViolation, CyclicOrientationError
from plane_builders import cycle, embed, k4, path, triangle


def triangle_cert():
    return NiceDecomposition.build([(0, 1)], [(2, 0), (2, 1)], [0, 1, 2], (0, 1))


def octahedron():
    edges = [(a, b) for a in range(6) for b in range(a + 1, 6) if {a, b} not in ({0, 5}, {1, 3}, {2, 4})]
    return embed(edges, boundary=(0, 1))


def test_verify_nice_accepts():
    """Test that valid nice certificates are accepted."""
    assert verify_nice(triangle(), triangle_cert()).ok
    k4_cert = NiceDecomposition.build([(0, 1), (2, 3)], [(2, 0), (2, 1), (3, 0), (3, 1)], [0, 1, 2, 3], (0, 1))
    assert verify_nice(k4(), k4_cert).ok
    assert verify_nice(k4(), k4_cert.to_dict()).ok


def test_verify_reports_sink_violation():
    """Test that a boundary vertex with an out-arc breaks niceness only."""
    cert = NiceDecomposition.build([(0, 1)], [(0, 2), (2, 1)], [1, 2, 0], (0, 1))

    assert verify_nice(triangle(), cert).clauses() == {"sink"}
    assert verify_decomposition(triangle(), cert).ok


def test_verify_reports_directed_cycle():
    """Test that a cyclic orientation fails both order and acyclicity."""
    cert = NiceDecomposition.build([], [(0, 1), (1, 2), (2, 0)], [0, 1, 2])

    assert verify_decomposition(triangle(), cert).clauses() == {"order", "acyclic"}


def test_verify_reports_uncovered_edge():
    """Test that an edge neither matched nor oriented is reported."""
    cert = NiceDecomposition.build([(0, 1)], [(2, 0)], [0, 1, 2], (0, 1))
    verdict = verify_nice(triangle(), cert)

    assert verdict.clauses() == {"coverage"}
    assert verdict.violations[0].witness == [1, 2]


def test_verify_reports_out_degree():
    """Test that out-degree three is rejected."""
    cert = NiceDecomposition.build([(0, 1)], [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)], [0, 1, 2, 3])

    assert verify_decomposition(k4(), cert).clauses() == {"out_degree"}


def test_verify_reports_matching_and_order():
    """Test overlapping matching edges and a short order."""
    overlapping = NiceDecomposition.build([(0, 1), (0, 2)], [(2, 1)], [0, 1, 2], (0, 1))
    short = NiceDecomposition.build([(0, 1)], [(2, 0), (2, 1)], [0, 1], (0, 1))

    assert "matching" in verify_nice(triangle(), overlapping).clauses()
    assert verify_nice(triangle(), short).clauses() == {"order"}


def test_verify_boundary_must_be_matched():
    """Test that the boundary edge has to be in the matching."""
    cert = NiceDecomposition.build([], [(1, 0), (2, 0), (2, 1)], [0, 1, 2], (0, 1))
    verdict = verify_nice(triangle(), cert)

    assert "boundary" in verdict.clauses()
    assert "sink" in verdict.clauses()
    assert not verdict.ok
    assert verdict.describe().startswith("rejected")


def test_peel_order():
    """Test that heads come before tails, least id first."""
    assert peel_order([(2, 0), (2, 1), (1, 0)]) == [0, 1, 2]
    assert peel_order([(2, 0), (2, 1), (1, 0)], [5]) == [0, 1, 2, 5]
    with pytest.raises(CyclicOrientationError):
        peel_order([(0, 1), (1, 0)])


def test_greedy_color_default_lists():
    """Test the 1-defective colouring derived from a certificate."""
    g = triangle()
    coloring = greedy_color(g, triangle_cert())

    assert coloring.color == {0: 1, 1: 1, 2: 2}
    assert coloring.defects == {(0, 1)}
    assert validate_coloring(g, triangle_cert(), coloring).ok


def test_greedy_color_custom_lists():
    """Test colouring from arbitrary three-element lists."""
    g = triangle()
    lists = {0: ["a", "b", "c"], 1: ["b", "c", "d"], 2: ["a", "b", "z"]}
    coloring = greedy_color(g, triangle_cert(), lists)

    assert coloring.color[0] == "a"
    assert coloring.color[1] == "b"
    assert coloring.color[2] not in {coloring.color[0], coloring.color[1]}
    assert validate_coloring(g, triangle_cert(), coloring, lists).ok


def test_greedy_color_mixed_colour_types():
    """Test lists mixing integers and strings, tried in the order given."""
    g = triangle()
    lists = {0: [1, "a", 2], 1: ["a", 2, 1], 2: [2, 1, "a"]}
    coloring = greedy_color(g, triangle_cert(), lists)

    assert coloring.color == {0: 1, 1: "a", 2: 2}
    assert coloring.defects == frozenset()
    assert validate_coloring(g, triangle_cert(), coloring, lists).ok


def test_out_neighbors():
    """Test the arcs leaving each vertex of a certificate."""
    assert triangle_cert().out_neighbors() == {0: [], 1: [], 2: [0, 1]}


def test_greedy_color_rejects_bad_input():
    """Test list sizes and certificates are checked before colouring."""
    with pytest.raises(ArgumentError):
        greedy_color(triangle(), triangle_cert(), {0: [1, 1, 2], 1: [1, 2, 3], 2: [1, 2, 3]})
    with pytest.raises(ArgumentError, match="no colour list"):
        greedy_color(triangle(), triangle_cert(), {0: [1, 2, 3]})
    bad = NiceDecomposition.build([(0, 1)], [(2, 0)], [0, 1, 2], (0, 1))
    with pytest.raises(ContractViolation):
        greedy_color(triangle(), bad)


def test_validate_coloring_finds_conflicts():
    """Test that a monochromatic non-matching edge is reported."""
    coloring = DefectiveColoring({0: 1, 1: 2, 2: 2})
    verdict = validate_coloring(triangle(), triangle_cert(), coloring)

    assert {"proper", "defects"} <= verdict.clauses()


def test_oracle_finds_certificates():
    """Test the oracle on small graphs with nice decompositions."""
    for g in (triangle(), k4(), cycle(7)):
        cert = oracle_nice(g)
        assert cert is not None
        assert verify_nice(g, cert).ok
    assert oracle_nice(k4()).order == (0, 1, 3, 2)


def test_oracle_proves_absence():
    """Test that a graph with too many edges has no nice decomposition."""
    g = octahedron()

    assert g.number_of_edges() == 12
    assert oracle_nice(g) is None


def test_oracle_arguments():
    """Test the oracle's size limit and boundary requirements."""
    with pytest.raises(ArgumentError, match="limited"):
        oracle_nice(cycle(15))
    with pytest.raises(ArgumentError, match="boundary"):
        oracle_nice(path(3))
    with pytest.raises(ArgumentError, match="not an edge"):
        oracle_nice(cycle(5), (0, 2))
