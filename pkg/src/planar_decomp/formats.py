"""
File formats: embedded graphs, certificates, colour lists, edge lists, DOT.

JSON documents are emitted in canonical form (sorted keys, rotations
started at the least neighbour, outer walk started at the outer dart), so
``parse(emit(x)) == x`` and equal objects give byte-identical text.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

import networkx as nx

from .certificate import NiceDecomposition
from .errors import ParseError
from .graph_core import PlaneGraph

logger = logging.getLogger(__name__)

GRAPH_KEYS = {"vertices", "rotations", "outer_face", "boundary_edge"}
CERT_KEYS = {"matching", "arcs", "order", "boundary_edge"}
EMBEDDED = "embedded"
EDGELIST = "edgelist"


def _position(text: str, needle: str) -> tuple[int, int]:
    """1-based line and column of the first occurrence of ``needle``."""
    index = text.find(needle)
    if index < 0:
        return 1, 1
    line = text.count("\n", 0, index) + 1
    column = index - (text.rfind("\n", 0, index) + 1) + 1
    return line, column


def _fail(text: str, key: str, message: str) -> ParseError:
    line, column = _position(text, f'"{key}"')
    return ParseError(message, line, column)


def _load(data: bytes | str) -> tuple[str, Any]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        return text, json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from e


def _int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _int_list(text: str, key: str, value: Any, length: int | None = None) -> list[int]:
    if not isinstance(value, list) or not all(_int(v) for v in value):
        raise _fail(text, key, f"{key} must be a list of integers")
    if length is not None and len(value) != length:
        raise _fail(text, key, f"{key} must have {length} entries")
    return value


def _pairs(text: str, key: str, value: Any) -> list[tuple[int, int]]:
    if not isinstance(value, list):
        raise _fail(text, key, f"{key} must be a list of pairs")
    return [tuple(_int_list(text, key, pair, 2)) for pair in value]


def _mapping(text: str, doc: Any, allowed: set[str], required: set[str]) -> dict:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", 1, 1)
    for key in doc:
        if key not in allowed:
            raise _fail(text, key, f"unknown key {key!r}")
    for key in sorted(required - set(doc)):
        raise ParseError(f"missing key {key!r}", 1, 1)
    return doc


def parse_graph(data: bytes | str) -> PlaneGraph:
    """
    Parse an embedded-graph document.

    Args:
        data: JSON text with vertices, rotations and optional outer_face
            and boundary_edge

    Returns:
        PlaneGraph: The validated graph

    Raises:
        ParseError: Malformed document, with line and column
        GraphValidationError: Well-formed document describing an invalid graph
    """
    text, doc = _load(data)
    doc = _mapping(text, doc, GRAPH_KEYS, {"vertices", "rotations"})
    vertices = _int_list(text, "vertices", doc["vertices"])
    raw = doc["rotations"]
    if not isinstance(raw, dict):
        raise _fail(text, "rotations", "rotations must be an object")
    rotations = {}
    for key, nbrs in raw.items():
        try:
            v = int(key)
        except ValueError as e:
            raise _fail(text, key, f"rotation key {key!r} is not a vertex id") from e
        rotations[v] = _int_list(text, key, nbrs)
    outer = doc.get("outer_face")
    if outer is not None:
        outer = _int_list(text, "outer_face", outer)
    boundary = doc.get("boundary_edge")
    if boundary is not None:
        boundary = _int_list(text, "boundary_edge", boundary, 2)
    return PlaneGraph(rotations, vertices, outer_face=outer, boundary_edge=boundary)


def graph_to_dict(g: PlaneGraph) -> dict:
    doc: dict[str, Any] = {
        "vertices": sorted(g.vertices),
        "rotations": {str(v): list(g.rotation(v)) for v in sorted(g.vertices)},
    }
    if g.outer_face is not None:
        doc["outer_face"] = list(g.outer_walk())
    if g.boundary_edge is not None:
        doc["boundary_edge"] = list(g.boundary_edge)
    return doc


def dumps(doc: Any) -> str:
    """Canonical JSON text with a trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit_graph(g: PlaneGraph) -> str:
    return dumps(graph_to_dict(g))


def parse_cert(data: bytes | str, g: PlaneGraph | None = None) -> NiceDecomposition:
    """
    Parse a certificate document.

    Args:
        data: JSON text with matching, arcs, order and optional boundary_edge
        g: When given, every vertex id must belong to it

    Raises:
        ParseError: Malformed document or unknown vertex id
    """
    text, doc = _load(data)
    doc = _mapping(text, doc, CERT_KEYS, {"matching", "arcs", "order"})
    matching = _pairs(text, "matching", doc["matching"])
    arcs = _pairs(text, "arcs", doc["arcs"])
    order = _int_list(text, "order", doc["order"])
    boundary = doc.get("boundary_edge")
    if boundary is not None:
        boundary = tuple(_int_list(text, "boundary_edge", boundary, 2))
    if g is not None:
        for key, ids in (
            ("matching", [v for e in matching for v in e]),
            ("arcs", [v for a in arcs for v in a]),
            ("order", order),
            ("boundary_edge", list(boundary or ())),
        ):
            unknown = sorted(set(ids) - g.vertices)
            if unknown:
                raise _fail(text, key, f"{key} names unknown vertices {unknown}")
    return NiceDecomposition.build(matching, arcs, order, boundary)


def emit_cert(cert: NiceDecomposition) -> str:
    return dumps(cert.to_dict())


def parse_lists(data: bytes | str) -> dict[int, list]:
    """Colour lists: {"v": [c1, c2, c3]}; sizes are checked by the colouring."""
    text, doc = _load(data)
    if not isinstance(doc, dict):
        raise ParseError("list assignment must be a JSON object", 1, 1)
    lists = {}
    for key, colors in doc.items():
        try:
            v = int(key)
        except ValueError as e:
            raise _fail(text, key, f"list key {key!r} is not a vertex id") from e
        if not isinstance(colors, list):
            raise _fail(text, key, f"list of vertex {key} must be an array")
        if not all(isinstance(c, (str, int)) and not isinstance(c, bool) for c in colors):
            raise _fail(text, key, f"colours of vertex {key} must be strings or integers")
        lists[v] = colors
    return lists


def parse_edge_list(data: bytes | str) -> nx.Graph:
    """
    Plain edge list: one "u v" pair per line; blank lines and # comments skipped.

    Raises:
        ParseError: On malformed lines or loops
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    graph = nx.Graph()
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0]
        fields = content.split()
        if not fields:
            continue
        column = len(content) - len(content.lstrip()) + 1
        if len(fields) != 2:
            raise ParseError(f"expected two vertex ids, got {len(fields)} fields", lineno, column)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError as e:
            raise ParseError(f"vertex ids must be integers: {content.strip()!r}", lineno, column) from e
        if u < 0 or v < 0:
            raise ParseError("vertex ids must be non-negative", lineno, column)
        if u == v:
            raise ParseError(f"loop at vertex {u}", lineno, column)
        graph.add_edge(u, v)
    return graph


def looks_embedded(data: bytes | str) -> bool:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    return text.lstrip().startswith("{")


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror or e}") from e


def write_atomic(path: str | Path, text: str) -> Path:
    """Write through a temporary file in the same directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return target


def emit_dot(g: PlaneGraph, cert: NiceDecomposition | None = None) -> str:
    """
    Graphviz DOT text for external renderers.

    Without a certificate the graph is undirected. With one, matching edges
    are bold and undirected, oriented edges are arrows, and the boundary
    endpoints are boxes.
    """
    boundary = set(g.boundary_edge or ())
    lines = ["digraph G {" if cert else "graph G {"]
    for v in sorted(g.vertices):
        shape = "box" if v in boundary else "circle"
        lines.append(f'  {v} [shape={shape}, label="{v}"];')
    if cert is None:
        for a, b in g.edges():
            lines.append(f"  {a} -- {b};")
    else:
        for a, b in sorted(cert.matching):
            lines.append(f"  {a} -> {b} [dir=none, penwidth=3];")
        for tail, head in sorted(cert.arcs):
            lines.append(f"  {tail} -> {head};")
    lines.append("}")
    return "\n".join(lines) + "\n"
