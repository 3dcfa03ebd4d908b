"""
Constructive nice decompositions by reduction.

Each step finds a reducible configuration, deletes it (or splits the graph at
a cut vertex), solves the smaller graph and extends its certificate with the
configuration's extension pattern: a few matching edges and arcs inside the
configuration, and every edge from the configuration to the remainder
oriented outward. Configurations never contain the boundary endpoints, so
these stay sinks.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, ClassVar, Iterator, Mapping, Sequence

import networkx as nx

from .certificate import NiceDecomposition
from .certify import ORACLE_MAX_VERTICES, oracle_nice, peel_order, verify_nice
from .class_gate import CaseTag, ClassReport, classify_report
from .config import RunConfig
from .discharge_audit import AuditReport, audit
from .errors import (
    ArgumentError,
    ClassError,
    ContractViolation,
    GraphValidationError,
    StepVerificationError,
    TheoremViolation,
)
from .graph_core import Edge, PlaneGraph, components, cut_vertices, delete_vertices, edge_key

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_THRESHOLD = 12
ORACLE_STEP = "Oracle"


# -- extension patterns ---------------------------------------------------------


@dataclass(frozen=True)
class PatternInstance:
    """
    A configuration over symbolic labels with its extension.

    ``degrees`` gives the degree each label must have in the host graph
    (an upper bound when ``exact_degrees`` is false). ``edges`` are the
    internal edges; ``matching`` and ``arcs`` partition them.
    """

    kind: str
    degrees: Mapping[str, int]
    edges: tuple[tuple[str, str], ...] = ()
    matching: tuple[tuple[str, str], ...] = ()
    arcs: tuple[tuple[str, str], ...] = ()
    exact_degrees: bool = True


@dataclass(frozen=True)
class ExtensionPattern:
    kind: str
    description: str
    builder: Callable[[int], PatternInstance]
    chain: bool = False

    def build(self, k: int = 0) -> PatternInstance:
        if k < 0 or (k and not self.chain):
            raise ArgumentError(f"{self.kind} takes no chain length {k}")
        return self.builder(k)


def _low_degree(k: int) -> PatternInstance:
    return PatternInstance("LowDegree", {"v": 2}, exact_degrees=False)


def _adjacent_threes(k: int) -> PatternInstance:
    return PatternInstance("AdjacentThrees", {"u": 3, "v": 3}, (("u", "v"),), (("u", "v"),))


def _bad_five_cycle(k: int) -> PatternInstance:
    degrees = {"u1": 3, "u2": 4, "u3": 3, "u4": 4, "u5": 4, "u6": 4}
    edges = (
        ("u1", "u2"), ("u2", "u3"), ("u3", "u4"), ("u4", "u5"), ("u5", "u1"),
        ("u1", "u6"), ("u5", "u6"),
    )
    matching = (("u1", "u2"), ("u3", "u4"), ("u5", "u6"))
    arcs = (("u1", "u5"), ("u1", "u6"), ("u5", "u4"), ("u3", "u2"))
    return PatternInstance("BadFiveCycle", degrees, edges, matching, arcs)


def _chain_core(k: int):
    """Triangles [w_i w_{i+1} u_i] for 0 <= i <= k, w0 of degree 3."""
    degrees = {"w0": 3}
    edges, matching, arcs = [], [], []
    for i in range(k + 1):
        w, w_next, u = f"w{i}", f"w{i + 1}", f"u{i}"
        degrees[w_next] = 4
        degrees[u] = 4
        edges += [(w, w_next), (w_next, u), (w, u)]
        matching.append((w, u))
        arcs += [(w, w_next), (w_next, u)]
    return degrees, edges, matching, arcs


def _triangle_chain_end(k: int) -> PatternInstance:
    degrees, edges, matching, arcs = _chain_core(k)
    end = f"w{k + 1}"
    degrees["z"] = 3
    edges.append((end, "z"))
    matching.append((end, "z"))
    return PatternInstance("TC1", degrees, tuple(edges), tuple(matching), tuple(arcs))


def _triangle_chain_link(k: int) -> PatternInstance:
    degrees, edges, matching, arcs = _chain_core(k)
    end = f"w{k + 1}"
    degrees.update({"z": 4, "z1": 3, "z2": 4})
    edges += [(end, "z"), ("z", "z1"), ("z", "z2"), ("z1", "z2")]
    matching += [(end, "z"), ("z1", "z2")]
    arcs += [("z", "z2"), ("z1", "z")]
    return PatternInstance("TC2", degrees, tuple(edges), tuple(matching), tuple(arcs))


def _six_face_fan(k: int) -> PatternInstance:
    degrees = {"v1": 3}
    edges, matching, arcs = [("v6", "v1")], [], [("v1", "v6")]
    for i in range(1, 6):
        v, v_next, u = f"v{i}", f"v{i + 1}", f"u{i}"
        degrees[v_next] = 4
        degrees[u] = 4
        edges += [(v, v_next), (v, u), (v_next, u)]
        matching.append((v, u))
        arcs += [(v, v_next), (v_next, u)]
    return PatternInstance("TC3", degrees, tuple(edges), tuple(matching), tuple(arcs))


def _cut_vertex(k: int) -> PatternInstance:
    # merge rule: drop x'y' from the second matching and add the arc y' -> x'
    return PatternInstance("CutVertex", {}, arcs=(("y'", "x'"),))


@lru_cache(maxsize=None)
def extend_patterns() -> dict[str, ExtensionPattern]:
    """The extension pattern of every configuration kind, keyed by kind."""
    patterns = [
        ExtensionPattern("LowDegree", "normal vertex of degree at most 2; all edges point out", _low_degree),
        ExtensionPattern("AdjacentThrees", "adjacent normal 3-vertices; uv joins the matching", _adjacent_threes),
        ExtensionPattern("CutVertex", "split at a cut vertex; arc y'->x' replaces x'y' in the matching", _cut_vertex),
        ExtensionPattern("BadFiveCycle", "bad 5-cycle with its adjacent triangle", _bad_five_cycle),
        ExtensionPattern("TC1", "minor triangle, triangle chain and a 3-vertex z", _triangle_chain_end, chain=True),
        ExtensionPattern("TC2", "minor triangle, triangle chain and a second minor triangle", _triangle_chain_link, chain=True),
        ExtensionPattern("TC3", "6-face with a 3-vertex and five adjacent 3-faces", _six_face_fan),
    ]
    return {p.kind: p for p in patterns}


def pattern_contract_violations(kind: str, k: int = 0) -> list[str]:
    """
    Check an extension pattern on its configuration in isolation.

    The configuration graph gets one pendant stub per external edge; the
    stubs stand for the remainder, so stub edges are oriented outward.

    Returns:
        Human-readable problems; empty when the pattern is sound
    """
    inst = extend_patterns()[kind].build(k)
    if kind == "CutVertex":
        return []
    problems = []
    host = nx.Graph()
    host.add_nodes_from(inst.degrees)
    host.add_edges_from(inst.edges)
    for label, degree in inst.degrees.items():
        stubs = degree - host.degree(label)
        if stubs < 0:
            problems.append(f"{label} has {host.degree(label)} internal edges but degree {degree}")
        for i in range(max(stubs, 0)):
            host.add_edge(label, ("stub", label, i))

    internal = {frozenset(e) for e in inst.edges}
    covered: dict[frozenset, int] = {}
    for a, b in inst.matching + inst.arcs:
        key = frozenset((a, b))
        if key not in internal:
            problems.append(f"{a}-{b} is not an internal edge")
        covered[key] = covered.get(key, 0) + 1
    for key in internal:
        if covered.get(key, 0) != 1:
            problems.append(f"internal edge {'-'.join(sorted(key))} covered {covered.get(key, 0)} times")

    matched = [v for e in inst.matching for v in e]
    if len(matched) != len(set(matched)):
        problems.append("matching edges share a vertex")

    for label in inst.degrees:
        internal_out = sum(1 for tail, _ in inst.arcs if tail == label)
        external = sum(1 for n in host[label] if isinstance(n, tuple))
        if internal_out + external > 2:
            problems.append(f"{label} has out-degree {internal_out + external}")

    if not nx.is_directed_acyclic_graph(nx.DiGraph(list(inst.arcs))):
        problems.append("internal arcs contain a directed cycle")
    return problems


# -- configurations ---------------------------------------------------------------


class ReducibleConfig:
    """A configuration found in a graph, with its vertex bindings."""

    kind: ClassVar[str]

    @property
    def k(self) -> int:
        return 0

    def labels(self) -> dict[str, int]:
        raise NotImplementedError

    def deletable(self) -> frozenset[int]:
        return frozenset(self.labels().values())

    def to_dict(self) -> dict:
        return {"kind": self.kind, "k": self.k, "bindings": self.labels()}


@dataclass(frozen=True)
class LowDegree(ReducibleConfig):
    kind: ClassVar[str] = "LowDegree"
    v: int

    def labels(self) -> dict[str, int]:
        return {"v": self.v}


@dataclass(frozen=True)
class AdjacentThrees(ReducibleConfig):
    kind: ClassVar[str] = "AdjacentThrees"
    u: int
    v: int

    def labels(self) -> dict[str, int]:
        return {"u": self.u, "v": self.v}


@dataclass(frozen=True)
class CutVertex(ReducibleConfig):
    """Split at ``v``: ``h1`` holds the boundary edge, ``h2`` gets ``boundary``."""

    kind: ClassVar[str] = "CutVertex"
    v: int
    h1: frozenset[int] = field(repr=False)
    h2: frozenset[int] = field(repr=False)
    boundary: Edge

    def labels(self) -> dict[str, int]:
        return {"x'": self.boundary[0], "y'": self.boundary[1]}

    def deletable(self) -> frozenset[int]:
        return frozenset()


@dataclass(frozen=True)
class BadFiveCycle(ReducibleConfig):
    kind: ClassVar[str] = "BadFiveCycle"
    u: tuple[int, ...]

    def labels(self) -> dict[str, int]:
        return {f"u{i + 1}": v for i, v in enumerate(self.u)}


@dataclass(frozen=True)
class TriangleChainEnd(ReducibleConfig):
    """Minor triangle [w0 w1 u0], chain triangles [w_i w_{i+1} u_i], 3-vertex z at the end."""

    kind: ClassVar[str] = "TC1"
    w: tuple[int, ...]
    u: tuple[int, ...]
    z: int

    @property
    def k(self) -> int:
        return len(self.u) - 1

    def labels(self) -> dict[str, int]:
        labels = {f"w{i}": v for i, v in enumerate(self.w)}
        labels.update({f"u{i}": v for i, v in enumerate(self.u)})
        labels["z"] = self.z
        return labels


@dataclass(frozen=True)
class TriangleChainLink(ReducibleConfig):
    """As the chain end, with z on a second minor triangle [z z1 z2]."""

    kind: ClassVar[str] = "TC2"
    w: tuple[int, ...]
    u: tuple[int, ...]
    z: int
    z1: int
    z2: int

    @property
    def k(self) -> int:
        return len(self.u) - 1

    def labels(self) -> dict[str, int]:
        labels = {f"w{i}": v for i, v in enumerate(self.w)}
        labels.update({f"u{i}": v for i, v in enumerate(self.u)})
        labels.update({"z": self.z, "z1": self.z1, "z2": self.z2})
        return labels


@dataclass(frozen=True)
class SixFaceFan(ReducibleConfig):
    kind: ClassVar[str] = "TC3"
    v: tuple[int, ...]
    u: tuple[int, ...]

    def labels(self) -> dict[str, int]:
        labels = {f"v{i + 1}": x for i, x in enumerate(self.v)}
        labels.update({f"u{i + 1}": x for i, x in enumerate(self.u)})
        return labels


def binding_problems(g: PlaneGraph, cfg: ReducibleConfig) -> list[str]:
    """
    Reasons why ``cfg`` is not (or no longer) a configuration of ``g``.

    Bound vertices must exist, be distinct and normal, have the pattern's
    degrees, carry every internal edge, and induce no edge outside it.
    """
    inst = extend_patterns()[cfg.kind].build(cfg.k)
    labels = cfg.labels()
    problems = []
    missing = sorted(v for v in labels.values() if v not in g.vertices)
    if missing:
        return [f"vertices {missing} are gone"]
    if len(set(labels.values())) != len(labels):
        problems.append("bound vertices are not distinct")
    for label, v in labels.items():
        if not g.is_normal(v):
            problems.append(f"{label}={v} is a boundary endpoint")
        want = inst.degrees[label]
        have = g.degree(v)
        if (have != want) if inst.exact_degrees else (have > want):
            problems.append(f"{label}={v} has degree {have}, pattern needs {want}")
    internal = {edge_key(labels[a], labels[b]) for a, b in inst.edges}
    for a, b in sorted(internal):
        if not g.has_edge(a, b):
            problems.append(f"internal edge {a}-{b} missing")
    bound = set(labels.values())
    for a in sorted(bound):
        for b in sorted(g.neighbors(a)):
            if a < b and b in bound and (a, b) not in internal:
                problems.append(f"induced edge {a}-{b} is not covered by the pattern")
    return problems


# -- finders --------------------------------------------------------------------


def _normal_of_degree(g: PlaneGraph, v: int, d: int) -> bool:
    return g.is_normal(v) and g.degree(v) == d


def find_low_degree(g: PlaneGraph) -> LowDegree | None:
    for v in sorted(g.vertices):
        if g.is_normal(v) and g.degree(v) <= 2:
            return LowDegree(v)
    return None


def find_adjacent_threes(g: PlaneGraph) -> AdjacentThrees | None:
    for u in sorted(g.vertices):
        if not _normal_of_degree(g, u, 3):
            continue
        for v in sorted(g.neighbors(u)):
            if v > u and _normal_of_degree(g, v, 3):
                return AdjacentThrees(u, v)
    return None


def find_cut_vertex(g: PlaneGraph) -> CutVertex | None:
    """
    Split at the least cut vertex ``v``.

    The side holding the boundary edge (plus ``v``) is ``h1``, the rest
    (plus ``v``) is ``h2``. The new boundary edge ``v y'`` of ``h2`` uses
    the first neighbour ``y'`` in ``h2`` that follows an ``h1`` neighbour in
    the rotation at ``v``.
    """
    cuts = sorted(cut_vertices(g))
    if not cuts:
        return None
    v = cuts[0]
    x, y = g.boundary_edge
    anchor = y if v == x else x
    rest = g.to_networkx().subgraph(g.vertices - {v})
    side = nx.node_connected_component(rest, anchor)
    h1 = frozenset(side | {v})
    h2 = frozenset(g.vertices - side)
    rotation = g.rotation(v)
    for i, w in enumerate(rotation):
        if w in h2 and rotation[i - 1] in h1:
            return CutVertex(v, h1, h2, (v, w))
    raise ContractViolation(f"cut vertex {v} has no neighbour beyond the boundary side")


def find_bad_five_cycle(g: PlaneGraph) -> BadFiveCycle | None:
    found = []
    for u1 in sorted(g.vertices):
        if not _normal_of_degree(g, u1, 3):
            continue
        around = g.neighbors(u1)
        for u5 in sorted(around):
            for u6 in sorted(around):
                if u5 == u6 or not g.has_edge(u5, u6):
                    continue
                if not (_normal_of_degree(g, u5, 4) and _normal_of_degree(g, u6, 4)):
                    continue
                (u2,) = around - {u5, u6}
                if not _normal_of_degree(g, u2, 4):
                    continue
                for u3 in sorted(g.neighbors(u2) - {u1, u5, u6}):
                    if not _normal_of_degree(g, u3, 3):
                        continue
                    for u4 in sorted((g.neighbors(u3) & g.neighbors(u5)) - {u1, u2, u6}):
                        cfg = BadFiveCycle((u1, u2, u3, u4, u5, u6))
                        if not binding_problems(g, cfg):
                            found.append(cfg)
    return min(found, key=lambda c: c.u) if found else None


def _chain_states(g: PlaneGraph) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """
    Minor triangles followed by triangle chains, depth first.

    A state is (w0..w_{k+1}, u0..u_k). The next triangle shares w_{k+1} and
    takes two new adjacent normal 4-vertices, in both roles.
    """
    visited: set[tuple[int, int, int]] = set()
    limit = len(g.vertices)

    def walk(w: tuple[int, ...], u: tuple[int, ...]):
        key = (w[-2], w[-1], u[-1])
        if key in visited:
            return
        visited.add(key)
        yield w, u
        if len(w) + len(u) + 2 > limit:
            return
        used = set(w) | set(u)
        others = sorted(n for n in g.neighbors(w[-1]) if n not in used and _normal_of_degree(g, n, 4))
        for p in others:
            for q in others:
                if p != q and g.has_edge(p, q):
                    yield from walk(w + (p,), u + (q,))

    for w0 in sorted(g.vertices):
        if not _normal_of_degree(g, w0, 3):
            continue
        around = sorted(n for n in g.neighbors(w0) if _normal_of_degree(g, n, 4))
        for a in around:
            for b in around:
                if a != b and g.has_edge(a, b):
                    yield from walk((w0, a), (b,))


def find_tc2(g: PlaneGraph) -> TriangleChainLink | None:
    for w, u in _chain_states(g):
        used = set(w) | set(u)
        for z in sorted(g.neighbors(w[-1]) - used):
            if not _normal_of_degree(g, z, 4):
                continue
            for z1 in sorted(g.neighbors(z) - used):
                if not _normal_of_degree(g, z1, 3):
                    continue
                for z2 in sorted((g.neighbors(z) & g.neighbors(z1)) - used):
                    cfg = TriangleChainLink(w, u, z, z1, z2)
                    if not binding_problems(g, cfg):
                        return cfg
    return None


def find_tc1(g: PlaneGraph) -> TriangleChainEnd | None:
    for w, u in _chain_states(g):
        used = set(w) | set(u)
        for z in sorted(g.neighbors(w[-1]) - used):
            if not _normal_of_degree(g, z, 3):
                continue
            cfg = TriangleChainEnd(w, u, z)
            if not binding_problems(g, cfg):
                return cfg
    return None


def find_tc3(g: PlaneGraph) -> SixFaceFan | None:
    found = []
    for face in g.faces:
        if face.degree != 6 or not face.is_cycle():
            continue
        darts = set(face.darts)
        for walk in (face.walk, face.walk[::-1]):
            for start in range(6):
                v = walk[start:] + walk[:start]
                if not _normal_of_degree(g, v[0], 3):
                    continue
                if not all(_normal_of_degree(g, t, 4) for t in v[1:]):
                    continue
                u = []
                for a, b in zip(v, v[1:]):
                    dart = (a, b) if (a, b) in darts else (b, a)
                    across = g.face_of_dart(dart[1], dart[0])
                    if across.degree != 3 or across.id == face.id:
                        break
                    u.append(next(t for t in across.walk if t not in (a, b)))
                else:
                    cfg = SixFaceFan(tuple(v), tuple(u))
                    if not binding_problems(g, cfg):
                        found.append(cfg)
    return min(found, key=lambda c: (c.v, c.u)) if found else None


FINDERS: tuple[Callable[[PlaneGraph], ReducibleConfig | None], ...] = (
    find_low_degree,
    find_adjacent_threes,
    find_cut_vertex,
    find_bad_five_cycle,
    find_tc2,
    find_tc1,
    find_tc3,
)


def find_reducible(g: PlaneGraph) -> ReducibleConfig | None:
    """
    First configuration in priority order.

    Args:
        g: Connected plane graph with a boundary edge

    Returns:
        The configuration, or None when no kind is present
    """
    if g.boundary_edge is None:
        raise ContractViolation("configuration search needs a boundary edge")
    for finder in FINDERS:
        cfg = finder(g)
        if cfg is not None:
            return cfg
    return None


# -- reduction and extension ----------------------------------------------------


def _extend(g: PlaneGraph, cfg: ReducibleConfig, sub: NiceDecomposition) -> NiceDecomposition:
    inst = extend_patterns()[cfg.kind].build(cfg.k)
    labels = cfg.labels()
    removed = cfg.deletable()
    matching = {edge_key(labels[a], labels[b]) for a, b in inst.matching}
    internal = [(labels[a], labels[b]) for a, b in inst.arcs]
    outward = [(c, r) for c in sorted(removed) for r in sorted(g.neighbors(c)) if r not in removed]
    local_order = peel_order(internal, sorted(removed))
    return NiceDecomposition(
        sub.matching | matching,
        sub.arcs | frozenset(internal) | frozenset(outward),
        sub.order + tuple(local_order),
        g.boundary_edge,
    )


def _merge_split(cfg: CutVertex, first: NiceDecomposition, second: NiceDecomposition) -> NiceDecomposition:
    x2, y2 = cfg.boundary
    return NiceDecomposition(
        first.matching | (second.matching - {edge_key(x2, y2)}),
        first.arcs | second.arcs | {(y2, x2)},
        first.order + tuple(v for v in second.order if v != x2),
        first.boundary_edge,
    )


def reduce(
    g: PlaneGraph, cfg: ReducibleConfig
) -> tuple[list[PlaneGraph], Callable[..., NiceDecomposition]]:
    """
    Remove a configuration from ``g``.

    Args:
        g: The graph the configuration was found in
        cfg: The configuration

    Returns:
        The smaller graph(s) and a function that turns their certificates
        into a certificate of ``g``

    Raises:
        ContractViolation: If the configuration does not fit ``g``
    """
    if isinstance(cfg, CutVertex):
        x2, y2 = cfg.boundary
        if cfg.h1 | cfg.h2 != g.vertices or cfg.h1 & cfg.h2 != {cfg.v}:
            raise ContractViolation(f"cut at {cfg.v} does not split the current graph")
        if any(w in cfg.h2 - {cfg.v} for a in cfg.h1 - {cfg.v} for w in g.neighbors(a)):
            raise ContractViolation(f"{cfg.v} no longer separates the two sides")
        first = g.restricted(cfg.h1)
        second = g.restricted(cfg.h2, boundary_edge=(x2, y2), outer_dart=(y2, x2))
        return [first, second], lambda c1, c2: _merge_split(cfg, c1, c2)

    problems = binding_problems(g, cfg)
    if problems:
        raise ContractViolation(f"stale {cfg.kind}: {'; '.join(problems)}")
    smaller = delete_vertices(g, cfg.deletable())
    return [smaller], lambda sub: _extend(g, cfg, sub)


# -- driver -----------------------------------------------------------------------


class Decomposer:
    """
    Recursive construction of nice and plain (2,1)-decompositions.

    After a run, ``steps`` counts the reductions and oracle calls and
    ``reductions`` splits that count by configuration kind.
    """

    def __init__(
        self,
        oracle_threshold: int = DEFAULT_ORACLE_THRESHOLD,
        verify_steps: bool = False,
        check_class: bool = True,
        case: CaseTag | None = None,
    ):
        self.oracle_threshold = min(oracle_threshold, ORACLE_MAX_VERTICES)
        self.verify_steps = verify_steps
        self.check_class = check_class
        self.case = case
        self.steps = 0
        self.reductions: Counter[str] = Counter()

    @classmethod
    def from_config(cls, config: RunConfig) -> "Decomposer":
        return cls(
            oracle_threshold=config.oracle_threshold,
            verify_steps=config.verify_steps,
            check_class=config.check_class,
            case=None if config.case == "auto" else CaseTag.parse(config.case),
        )

    def gate(self, g: PlaneGraph) -> ClassReport:
        """
        Classify ``g`` and refuse graphs outside the requested case(s).

        Raises:
            ClassError: If the graph is outside every case, or outside the
                forced case
        """
        report = classify_report(g)
        if self.case is not None and self.case not in report.cases:
            raise ClassError(report)
        if not report.cases:
            raise ClassError(report)
        return report

    def decompose_nice(self, g: PlaneGraph, e: Sequence[int] | None = None) -> NiceDecomposition:
        """
        Nice decomposition of (g, e).

        Args:
            g: Plane graph, normally connected; other components are solved
                with their own boundary edges
            e: Boundary edge on the outer face; defaults to the graph's own,
                else to the first dart of the outer face

        Returns:
            NiceDecomposition: Certificate with ``boundary_edge`` set

        Raises:
            ArgumentError: If e is not an edge of the outer face
            ClassError: If the graph is outside every case
            TheoremViolation: If no configuration is found on a large graph
        """
        if e is not None:
            try:
                g = g.with_boundary_edge(tuple(e))
            except GraphValidationError as err:
                raise ArgumentError(f"boundary edge {tuple(e)} is not on the outer face: {err}") from err
        elif g.boundary_edge is None and g.number_of_edges():
            g = g.with_boundary_edge(g.outer_dart)
        if self.check_class:
            self.gate(g)
        self._reset()
        cert = self._solve_any(g)
        logger.info(
            f"Nice decomposition of {len(g.vertices)} vertices in {self.steps} steps, "
            f"boundary edge {g.boundary_edge}, reductions {dict(sorted(self.reductions.items()))}"
        )
        return cert

    def decompose_21(self, g: PlaneGraph) -> NiceDecomposition:
        """
        Plain (2,1)-decomposition: each component is solved as a nice
        decomposition for the first edge of its outer face.
        """
        if self.check_class:
            self.gate(g)
        self._reset()
        cert = self._solve_any(g.with_boundary_edge(None))
        logger.info(f"(2,1)-decomposition of {len(g.vertices)} vertices in {self.steps} steps")
        return cert.with_boundary_edge(None)

    def _reset(self) -> None:
        self.steps = 0
        self.reductions = Counter()

    def _solve_any(self, g: PlaneGraph) -> NiceDecomposition:
        cert = NiceDecomposition(boundary_edge=g.boundary_edge)
        for comp in components(g):
            part = g.restricted(comp)
            if part.boundary_edge is None and part.number_of_edges():
                part = part.with_boundary_edge(part.outer_dart)
            if part.boundary_edge is None:
                cert = cert.merged(NiceDecomposition(order=tuple(sorted(comp))))
            else:
                cert = cert.merged(self._solve(part))
        return cert

    def _solve(self, g: PlaneGraph) -> NiceDecomposition:
        x, y = g.boundary_edge
        if len(g.vertices) <= 2:
            return NiceDecomposition(frozenset({edge_key(x, y)}), frozenset(), (x, y), (x, y))

        cfg = find_reducible(g)
        if cfg is None:
            return self._fallback(g)
        self.steps += 1
        self.reductions[cfg.kind] += 1
        logger.debug(f"{cfg.kind} (k={cfg.k}) at {cfg.labels()} on {len(g.vertices)} vertices")
        parts, extend = reduce(g, cfg)
        cert = extend(*(self._solve_any(p) for p in parts))
        if self.verify_steps:
            verdict = verify_nice(g, cert)
            if not verdict.ok:
                logger.error(
                    f"Step {cfg.kind} on {len(g.vertices)} vertices failed verification: "
                    f"{verdict.describe()}"
                )
                raise StepVerificationError(f"{cfg.kind} extension rejected: {verdict.describe()}", verdict)
        return cert

    def _fallback(self, g: PlaneGraph) -> NiceDecomposition:
        n = len(g.vertices)
        if n <= self.oracle_threshold:
            logger.debug(f"No configuration on {n} vertices, asking the oracle")
            cert = oracle_nice(g)
            if cert is not None:
                self.steps += 1
                self.reductions[ORACLE_STEP] += 1
                return cert
        report = self._audit(g)
        logger.error(
            f"No reducible configuration on {n} vertices; "
            f"{len(report.negative)} elements end with negative charge"
        )
        raise TheoremViolation(
            f"no reducible configuration in an in-class graph with {n} vertices", report
        )

    def _audit(self, g: PlaneGraph) -> AuditReport:
        case = self.case
        if case is None:
            cases = classify_report(g, cross_check=False).cases
            case = min(cases) if cases else CaseTag.CASE1
        return audit(g, g.boundary_edge, case)


def decompose_nice(g: PlaneGraph, e: Sequence[int] | None = None, **options) -> NiceDecomposition:
    """Nice decomposition of (g, e); options as for :class:`Decomposer`."""
    return Decomposer(**options).decompose_nice(g, e)


def decompose_21(g: PlaneGraph, **options) -> NiceDecomposition:
    """(2,1)-decomposition of g; the certificate's orientation and matching."""
    return Decomposer(**options).decompose_21(g)
