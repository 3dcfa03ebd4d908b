"""Unit tests for graph, certificate and list documents."""

import json
import tempfile
from pathlib import Path

import pytest

from planar_decomp.certificate import NiceDecomposition
from planar_decomp.errors import GraphValidationError, ParseError
from planar_decomp.formats import (
    emit_cert,
    emit_dot,
    emit_graph,
    looks_embedded,
    parse_cert,
    parse_edge_list,
    parse_graph,
    parse_lists,
    read_text,
    write_atomic,
)
from plane_builders import k4, triangle


def test_graph_document_is_canonical():
    """Test that emitting, parsing and emitting again gives the same text."""
    text = emit_graph(k4())
    doc = json.loads(text)

    assert doc["vertices"] == [0, 1, 2, 3]
    assert doc["rotations"]["1"] == [0, 3, 2]
    assert doc["outer_face"] == [0, 1, 2]
    assert doc["boundary_edge"] == [0, 1]
    assert parse_graph(text) == k4()
    assert emit_graph(parse_graph(text)) == text


def test_parse_graph_reports_position_of_unknown_key():
    """Test that a misspelt key is reported with its line and column."""
    text = '{\n  "vertices": [0, 1],\n  "rotatons": {}\n}'

    with pytest.raises(ParseError, match="unknown key") as excinfo:
        parse_graph(text)
    assert (excinfo.value.line, excinfo.value.column) == (3, 3)


def test_parse_graph_reports_json_syntax():
    """Test that JSON syntax errors keep the decoder's position."""
    with pytest.raises(ParseError) as excinfo:
        parse_graph('{"vertices": [0,\n 1,, 2]}')
    assert excinfo.value.line == 2


def test_parse_graph_shape_errors():
    """Test missing keys and mistyped values."""
    with pytest.raises(ParseError, match="missing key 'rotations'"):
        parse_graph('{"vertices": [0]}')
    with pytest.raises(ParseError, match="list of integers"):
        parse_graph('{"vertices": ["a"], "rotations": {}}')
    with pytest.raises(ParseError, match="not a vertex id"):
        parse_graph('{"vertices": [0], "rotations": {"x": []}}')
    with pytest.raises(ParseError, match="2 entries"):
        parse_graph('{"vertices": [0, 1], "rotations": {"0": [1], "1": [0]}, "boundary_edge": [0]}')


def test_parse_graph_validates_embedding():
    """Test that a well-formed document with a broken graph is a validation error."""
    with pytest.raises(GraphValidationError, match="not vice versa"):
        parse_graph('{"vertices": [0, 1], "rotations": {"0": [1], "1": []}}')


def test_certificate_document():
    """Test certificate emission and parsing against a graph."""
    cert = NiceDecomposition.build([(1, 0)], [(2, 0), (2, 1)], [0, 1, 2], (0, 1))
    text = emit_cert(cert)

    assert json.loads(text)["matching"] == [[0, 1]]
    assert parse_cert(text, triangle()) == cert
    with pytest.raises(ParseError, match="unknown vertices \\[7\\]"):
        parse_cert('{"matching": [], "arcs": [[7, 0]], "order": [0, 1, 2]}', triangle())


def test_parse_lists():
    """Test colour list documents."""
    lists = parse_lists('{"0": ["r", "g", "b"], "1": [1, 2, 3]}')

    assert lists == {0: ["r", "g", "b"], 1: [1, 2, 3]}
    with pytest.raises(ParseError, match="must be an array"):
        parse_lists('{"0": "rgb"}')
    with pytest.raises(ParseError, match="JSON object"):
        parse_lists("[1, 2, 3]")
    with pytest.raises(ParseError, match="strings or integers"):
        parse_lists('{"0": [[1], 2, 3]}')
    assert parse_lists('{"0": [1, "a", 2]}') == {0: [1, "a", 2]}


def test_parse_edge_list():
    """Test edge lists with comments and blank lines."""
    graph = parse_edge_list("# triangle\n0 1\n\n1 2  # rim\n2 0\n")

    assert sorted(map(sorted, graph.edges())) == [[0, 1], [0, 2], [1, 2]]


@pytest.mark.parametrize(
    "text, message, line",
    [
        ("0 1\n1 2 3\n", "two vertex ids", 2),
        ("0 x\n", "integers", 1),
        ("0 1\n-1 2\n", "non-negative", 2),
        ("3 3\n", "loop", 1),
    ],
)
def test_parse_edge_list_errors(text, message, line):
    """Test that malformed edge lines are reported with their line."""
    with pytest.raises(ParseError, match=message) as excinfo:
        parse_edge_list(text)
    assert excinfo.value.line == line


def test_looks_embedded():
    """Test format detection."""
    assert looks_embedded('  {"vertices": []}')
    assert looks_embedded(b"{}")
    assert not looks_embedded("0 1\n")


def test_read_and_write_files():
    """Test atomic writes and missing files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        target = Path(tmpdir) / "nested" / "graph.json"
        write_atomic(target, emit_graph(triangle()))

        assert parse_graph(read_text(target)) == triangle()
        assert [p.name for p in target.parent.iterdir()] == ["graph.json"]
        with pytest.raises(ParseError, match="cannot read"):
            read_text(Path(tmpdir) / "missing.json")


def test_emit_dot():
    """Test DOT output with and without a certificate."""
    plain = emit_dot(triangle())
    cert = NiceDecomposition.build([(0, 1)], [(2, 0), (2, 1)], [0, 1, 2], (0, 1))
    styled = emit_dot(triangle(), cert)

    assert plain.startswith("graph G {")
    assert "  0 -- 1;" in plain
    assert styled.startswith("digraph G {")
    assert "  0 -> 1 [dir=none, penwidth=3];" in styled
    assert "  2 -> 0;" in styled
    assert '  0 [shape=box, label="0"];' in styled
