"""
Certificate checking, defective colourings and a brute-force oracle.

The verifier works on the document form of a certificate (lists of pairs)
and never looks at decomposer state. The oracle is an independent ground
truth for small graphs: a nice decomposition of (G, xy) exists iff some
matching M containing xy leaves G - M peelable down to {x, y} by removing
vertices of degree at most 2. Removing a removable vertex never blocks
another one, so a greedy peel decides each matching, and enlarging M only
lowers degrees, so it is enough to try maximal matchings.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping

import networkx as nx

from .certificate import NiceDecomposition
from .errors import ArgumentError, ContractViolation, CyclicOrientationError
from .graph_core import Edge, PlaneGraph, edge_key

logger = logging.getLogger(__name__)

ORACLE_MAX_VERTICES = 14
LIST_SIZE = 3
DEFAULT_COLORS = (1, 2, 3)


@dataclass(frozen=True)
class Violation:
    clause: str
    message: str
    witness: Any = None

    def to_dict(self) -> dict:
        doc = {"clause": self.clause, "message": self.message}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def clauses(self) -> set[str]:
        return {v.clause for v in self.violations}

    def describe(self) -> str:
        if self.ok:
            return "accepted"
        return "rejected: " + "; ".join(f"[{v.clause}] {v.message}" for v in self.violations)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def _document(cert: NiceDecomposition | Mapping) -> dict:
    return cert.to_dict() if isinstance(cert, NiceDecomposition) else dict(cert)


def _check(g: PlaneGraph, doc: dict, nice: bool) -> list[Violation]:
    found: list[Violation] = []
    vertices = g.vertices
    edges = set(g.edges())

    matching = [tuple(e) for e in doc.get("matching", [])]
    arcs = [tuple(a) for a in doc.get("arcs", [])]
    order = list(doc.get("order", []))

    # matching
    matched_at: dict[int, tuple] = {}
    for e in matching:
        for v in e:
            if v in matched_at:
                found.append(Violation(
                    "matching", f"vertex {v} is in matching edges {list(matched_at[v])} and {list(e)}", v
                ))
            matched_at[v] = e

    # coverage: every edge once, nothing else
    seen: dict[Edge, str] = {}
    for label, pairs in (("matching", matching), ("arc", arcs)):
        for a, b in pairs:
            key = edge_key(a, b)
            if key not in edges:
                found.append(Violation("coverage", f"{label} {a}-{b} is not an edge", [a, b]))
            elif key in seen:
                found.append(Violation(
                    "coverage", f"edge {key[0]}-{key[1]} appears as {seen[key]} and {label}", list(key)
                ))
            seen.setdefault(key, label)
    for key in sorted(edges - set(seen)):
        found.append(Violation("coverage", f"edge {key[0]}-{key[1]} is neither matched nor oriented", list(key)))

    # out-degree
    out_degree: dict[int, int] = {}
    for tail, _ in arcs:
        out_degree[tail] = out_degree.get(tail, 0) + 1
    for v, d in sorted(out_degree.items()):
        if d > 2:
            found.append(Violation("out_degree", f"d+({v}) = {d} exceeds 2", v))

    # order witness
    position = {v: i for i, v in enumerate(order)}
    if len(position) != len(order) or set(order) != vertices:
        found.append(Violation("order", "order is not a permutation of the vertex set"))
    else:
        for tail, head in arcs:
            if tail in position and head in position and position[head] > position[tail]:
                found.append(Violation(
                    "order", f"arc {tail}->{head} points to a later vertex", [tail, head]
                ))

    # acyclicity, independently of the order
    digraph = nx.DiGraph(arcs)
    try:
        cycle = nx.find_cycle(digraph)
        found.append(Violation("acyclic", "orientation has a directed cycle", [list(a) for a in cycle]))
    except nx.NetworkXNoCycle:
        pass

    if nice:
        boundary = doc.get("boundary_edge") or (list(g.boundary_edge) if g.boundary_edge else None)
        if boundary is None:
            found.append(Violation("boundary", "no boundary edge to check niceness against"))
        else:
            x, y = boundary
            if g.boundary_edge is not None and edge_key(x, y) != edge_key(*g.boundary_edge):
                found.append(Violation(
                    "boundary", f"certificate boundary {x}-{y} differs from the graph's", [x, y]
                ))
            if edge_key(x, y) not in {edge_key(*e) for e in matching}:
                found.append(Violation("boundary", f"boundary edge {x}-{y} is not in the matching", [x, y]))
            for v in (x, y):
                if out_degree.get(v, 0):
                    found.append(Violation("sink", f"d+({v}) = {out_degree[v]}, boundary vertices must be sinks", v))
    return found


def verify_nice(g: PlaneGraph, cert: NiceDecomposition | Mapping) -> Verdict:
    """
    Check a nice decomposition of (g, xy).

    Args:
        g: The plane graph; its boundary edge is used when the certificate has none
        cert: Certificate object or its document form

    Returns:
        Verdict: Every violated clause with a witness
    """
    return Verdict(tuple(_check(g, _document(cert), nice=True)))


def verify_decomposition(g: PlaneGraph, cert: NiceDecomposition | Mapping) -> Verdict:
    """Check a plain (2,1)-decomposition: no boundary-edge clauses."""
    return Verdict(tuple(_check(g, _document(cert), nice=False)))


def peel_order(arcs: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> list[int]:
    """
    Order vertices so that every arc points to an earlier vertex.

    Among the available vertices the least id comes first.

    Args:
        arcs: (tail, head) pairs
        vertices: Extra vertices without arcs

    Returns:
        The vertex order

    Raises:
        CyclicOrientationError: If the arcs contain a directed cycle
    """
    digraph = nx.DiGraph()
    digraph.add_nodes_from(vertices)
    digraph.add_edges_from(arcs)
    try:
        return list(nx.lexicographical_topological_sort(digraph.reverse(copy=False)))
    except nx.NetworkXUnfeasible as e:
        cycle = [tuple(a[:2]) for a in nx.find_cycle(digraph)]
        raise CyclicOrientationError(cycle) from e


@dataclass(frozen=True)
class DefectiveColoring:
    color: Mapping[int, Hashable]
    defects: frozenset[Edge] = field(default_factory=frozenset)

    def to_dict(self) -> dict:
        return {
            "color": {str(v): c for v, c in sorted(self.color.items())},
            "defects": [list(e) for e in sorted(self.defects)],
        }


def _check_lists(g: PlaneGraph, lists: Mapping[int, Iterable[Hashable]] | None) -> dict[int, list]:
    if lists is None:
        return {v: list(DEFAULT_COLORS) for v in g.vertices}
    checked = {}
    for v in sorted(g.vertices):
        if v not in lists:
            raise ArgumentError(f"no colour list for vertex {v}")
        colors = list(lists[v])
        if len(colors) != LIST_SIZE or len(set(colors)) != LIST_SIZE:
            raise ArgumentError(f"list of vertex {v} has {len(set(colors))} colours, expected {LIST_SIZE}")
        checked[v] = colors
    return checked


def greedy_color(
    g: PlaneGraph,
    cert: NiceDecomposition,
    lists: Mapping[int, Iterable[Hashable]] | None = None,
) -> DefectiveColoring:
    """
    Colour greedily along the peel order of the certificate.

    Each vertex has at most two earlier neighbours in G - M (its
    out-neighbours), so one of its three colours is always free; the result
    is proper on G - M and only matching edges can be monochromatic.

    Args:
        g: The graph
        cert: A certificate accepted by the verifier
        lists: Three colours per vertex, tried in list order; defaults to
            {1, 2, 3} everywhere

    Returns:
        DefectiveColoring: Colours and the monochromatic (matching) edges

    Raises:
        ArgumentError: If a list does not hold exactly three colours
        ContractViolation: If the certificate is rejected by the verifier
    """
    verdict = verify_decomposition(g, cert)
    if not verdict.ok:
        raise ContractViolation(f"cannot colour from a bad certificate: {verdict.describe()}")
    palette = _check_lists(g, lists)
    out = cert.out_neighbors()

    color: dict[int, Hashable] = {}
    for v in peel_order(cert.arcs, g.vertices):
        taken = {color[w] for w in out[v]}
        color[v] = next(c for c in palette[v] if c not in taken)
    defects = frozenset(edge_key(a, b) for a, b in g.edges() if color[a] == color[b])
    logger.debug(f"Coloured {len(color)} vertices with {len(defects)} defect edges")
    return DefectiveColoring(color, defects)


def validate_coloring(
    g: PlaneGraph,
    cert: NiceDecomposition,
    coloring: DefectiveColoring,
    lists: Mapping[int, Iterable[Hashable]] | None = None,
) -> Verdict:
    """Check list membership, properness on G - M and 1-defectiveness on G."""
    found: list[Violation] = []
    palette = _check_lists(g, lists)
    matching = set(cert.matching)
    for v in sorted(g.vertices):
        if v not in coloring.color:
            found.append(Violation("colored", f"vertex {v} has no colour", v))
        elif coloring.color[v] not in palette[v]:
            found.append(Violation("list", f"vertex {v} coloured {coloring.color[v]!r} outside its list", v))
    defect_count: dict[int, int] = {}
    for a, b in g.edges():
        if a not in coloring.color or b not in coloring.color:
            continue
        if coloring.color[a] != coloring.color[b]:
            continue
        if (a, b) not in matching:
            found.append(Violation("proper", f"edge {a}-{b} of G - M is monochromatic", [a, b]))
        if (a, b) not in coloring.defects:
            found.append(Violation("defects", f"monochromatic edge {a}-{b} missing from defects", [a, b]))
        for v in (a, b):
            defect_count[v] = defect_count.get(v, 0) + 1
    for v, count in sorted(defect_count.items()):
        if count > 1:
            found.append(Violation("defective", f"vertex {v} meets {count} monochromatic edges", v))
    return Verdict(tuple(found))


def _maximal_matchings(edges: list[Edge], seed: Edge) -> Iterator[list[Edge]]:
    """Maximal matchings containing ``seed``, include-first over sorted edges."""
    rest = [e for e in edges if e != seed]
    covered = set(seed)
    chosen = [seed]

    def search(i: int) -> Iterator[list[Edge]]:
        if i == len(rest):
            if all(a in covered or b in covered for a, b in rest):
                yield list(chosen)
            return
        a, b = rest[i]
        free = a not in covered and b not in covered
        if free:
            covered.update((a, b))
            chosen.append((a, b))
            yield from search(i + 1)
            chosen.pop()
            covered.difference_update((a, b))
            # leaving a free edge out only pays off if a later edge covers it
            if not any(a in e or b in e for e in rest[i + 1:]):
                return
        yield from search(i + 1)

    yield from search(0)


def _greedy_peel(g: PlaneGraph, matching: list[Edge], x: int, y: int) -> NiceDecomposition | None:
    in_matching = set(matching)
    remaining = {v: {w for w in g.neighbors(v) if edge_key(v, w) not in in_matching} for v in g.vertices}
    present = set(g.vertices)
    peeled: list[int] = []
    arcs: list[tuple[int, int]] = []
    while len(present) > 2:
        candidates = [v for v in present if v not in (x, y) and len(remaining[v]) <= 2]
        if not candidates:
            return None
        v = min(candidates)
        for w in sorted(remaining[v]):
            arcs.append((v, w))
            remaining[w].discard(v)
        remaining[v] = set()
        present.discard(v)
        peeled.append(v)
    order = [x, y] + peeled[::-1]
    return NiceDecomposition.build(matching, arcs, order, (x, y))


def oracle_nice(g: PlaneGraph, e: Edge | None = None) -> NiceDecomposition | None:
    """
    Decide by exhaustive search whether (g, e) has a nice decomposition.

    Args:
        g: A plane graph with at most 14 vertices
        e: Boundary edge (x, y); defaults to the graph's boundary edge

    Returns:
        The first certificate in enumeration order, or None if none exists

    Raises:
        ArgumentError: If the graph is too large or e is not an edge
    """
    if len(g.vertices) > ORACLE_MAX_VERTICES:
        raise ArgumentError(
            f"oracle is limited to {ORACLE_MAX_VERTICES} vertices, got {len(g.vertices)}"
        )
    e = e if e is not None else g.boundary_edge
    if e is None:
        raise ArgumentError("oracle needs a boundary edge")
    x, y = e
    if not g.has_edge(x, y):
        raise ArgumentError(f"{x}-{y} is not an edge")

    tried = 0
    for matching in _maximal_matchings(g.edges(), edge_key(x, y)):
        tried += 1
        cert = _greedy_peel(g, matching, x, y)
        if cert is not None:
            logger.debug(f"Oracle found a certificate after {tried} matchings")
            return cert
    logger.debug(f"Oracle exhausted {tried} maximal matchings without a certificate")
    return None
