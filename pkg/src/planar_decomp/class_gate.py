"""
Hypothesis gate: fixed-length cycles and forbidden configurations.

A graph is in case 1 when it has no subgraph isomorphic to a common or
AT345 configuration, in case 2 when it has no common or AT48 configuration,
and in case 3 when it has neither a 4-cycle nor a 9-cycle. Matching is on
abstract (not induced) subgraphs; the embedding is ignored.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterator, Mapping

import networkx as nx
import yaml

from .errors import ArgumentError
from .graph_core import GraphLike, adjacency_sets

logger = logging.getLogger(__name__)

MIN_CYCLE_LENGTH = 3
MAX_CYCLE_LENGTH = 9


class ConfigId(str, Enum):
    COMMON_A = "CommonA"
    COMMON_B = "CommonB"
    COMMON_C = "CommonC"
    AT345A = "AT345A"
    AT345B = "AT345B"
    AT345C = "AT345C"
    AT345D = "AT345D"
    AT48A = "AT48A"
    AT48B = "AT48B"
    AT48C = "AT48C"
    AT48D = "AT48D"
    AT48E = "AT48E"


class CaseTag(str, Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"

    @classmethod
    def parse(cls, text: str) -> "CaseTag":
        """Accept "1", "case1" or "Case1"."""
        key = str(text).strip().lower().removeprefix("case")
        for tag in cls:
            if tag.value.lower() == f"case{key}":
                return tag
        raise ArgumentError(f"unknown case {text!r}")


@dataclass(frozen=True)
class Pattern:
    """A forbidden configuration as an abstract graph on 0..n-1."""

    config: ConfigId
    family: str
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    @property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.vertex_count)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(n) for v, n in adj.items()}

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph


@lru_cache(maxsize=None)
def load_atlas() -> dict[ConfigId, Pattern]:
    """
    Load the configuration atlas shipped with the package.

    Returns:
        Patterns keyed by configuration id

    Raises:
        RuntimeError: If the data file is missing or malformed
    """
    try:
        text = resources.files("planar_decomp").joinpath("data/atlas.yaml").read_text()
        data = yaml.safe_load(text)
    except (OSError, yaml.YAMLError) as e:
        raise RuntimeError(f"Failed to load configuration atlas: {e}") from e

    atlas = {}
    for name, entry in data.items():
        config = ConfigId(name)
        edges = tuple(tuple(sorted(e)) for e in entry["edges"])
        atlas[config] = Pattern(config, entry["family"], int(entry["vertices"]), edges)
    logger.debug(f"Loaded {len(atlas)} configurations from atlas")
    return atlas


def pattern(c: ConfigId) -> Pattern:
    return load_atlas()[ConfigId(c)]


def _family(name: str) -> tuple[ConfigId, ...]:
    return tuple(c for c, p in load_atlas().items() if p.family == name)


def forbidden_configs(case: CaseTag) -> tuple[ConfigId, ...]:
    """Configurations whose absence defines case 1 or case 2."""
    if case is CaseTag.CASE1:
        return _family("common") + _family("at345")
    if case is CaseTag.CASE2:
        return _family("common") + _family("at48")
    return ()


# -- fixed-length cycles --------------------------------------------------------


def _distances_to(source: int, adj: Mapping[int, frozenset[int]], floor: int) -> dict[int, int]:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w >= floor and w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def find_cycle_of_length(graph: GraphLike, k: int) -> tuple[int, ...] | None:
    """
    Find a simple cycle with exactly ``k`` vertices.

    The search starts at each vertex ``s`` in increasing order and only uses
    vertices larger than ``s``, so every cycle is found from its least vertex.
    Branches that cannot close within the remaining length are pruned by
    breadth-first distances to ``s``.

    Args:
        graph: Plane graph, networkx graph or adjacency mapping
        k: Cycle length, between 3 and 9

    Returns:
        The cycle as a vertex sequence starting at its least vertex, or None

    Raises:
        ArgumentError: If k is out of range
    """
    if not MIN_CYCLE_LENGTH <= k <= MAX_CYCLE_LENGTH:
        raise ArgumentError(
            f"cycle length {k} outside {MIN_CYCLE_LENGTH}..{MAX_CYCLE_LENGTH}"
        )
    adj = adjacency_sets(graph)
    sorted_adj = {v: sorted(n) for v, n in adj.items()}

    for s in sorted(adj):
        dist = _distances_to(s, adj, s)
        if len(dist) < k:
            continue
        path = [s]
        on_path = {s}

        def extend() -> bool:
            last = path[-1]
            if len(path) == k:
                return s in adj[last]
            for w in sorted_adj[last]:
                if w <= s or w in on_path or dist.get(w, k) > k - len(path):
                    continue
                path.append(w)
                on_path.add(w)
                if extend():
                    return True
                path.pop()
                on_path.discard(w)
            return False

        if extend():
            cycle = tuple(path)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                if b not in adj[a]:
                    raise AssertionError(f"cycle search returned non-edge {a}-{b}")
            return cycle
    return None


def find_cycle_through(graph: GraphLike, k: int, edge: tuple[int, int]) -> tuple[int, ...] | None:
    """
    Find a simple ``k``-cycle that uses ``edge``.

    Args:
        graph: Plane graph, networkx graph or adjacency mapping
        k: Cycle length, between 3 and 9
        edge: An edge (a, b) of the graph

    Returns:
        The cycle as a vertex sequence starting with a, b, or None

    Raises:
        ArgumentError: If k is out of range or edge is not an edge
    """
    if not MIN_CYCLE_LENGTH <= k <= MAX_CYCLE_LENGTH:
        raise ArgumentError(
            f"cycle length {k} outside {MIN_CYCLE_LENGTH}..{MAX_CYCLE_LENGTH}"
        )
    adj = adjacency_sets(graph)
    a, b = edge
    if b not in adj.get(a, ()):
        raise ArgumentError(f"{a}-{b} is not an edge")

    # distances to a avoiding the edge itself
    dist = {a: 0}
    frontier = [a]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist and {v, w} != {a, b}:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt

    path = [a, b]
    on_path = {a, b}

    def extend() -> bool:
        last = path[-1]
        if len(path) == k:
            return a in adj[last]
        for w in sorted(adj[last]):
            if w in on_path or dist.get(w, k) > k - len(path):
                continue
            path.append(w)
            on_path.add(w)
            if extend():
                return True
            path.pop()
            on_path.discard(w)
        return False

    return tuple(path) if extend() else None


# -- subgraph matcher -----------------------------------------------------------


class SubgraphMatcher:
    """
    Backtracking subgraph-monomorphism search for one small pattern.

    Pattern vertices are placed in a connectivity order (highest degree
    first, then the vertex with most placed neighbours). Candidates are
    drawn from the neighbourhood of an already placed neighbour's image and
    filtered by degree and adjacency. With ``break_symmetry`` the pattern's
    automorphisms are enumerated once and turned into ordering constraints
    ``image(a) < image(b)``, so each subgraph is reported once.
    """

    def __init__(self, pattern_adj: Mapping[int, frozenset[int]], break_symmetry: bool = True):
        self.pattern_adj = {v: frozenset(n) for v, n in pattern_adj.items()}
        self.order, self.parent = self._placement_order()
        self.constraints: list[tuple[int, int]] = []
        if break_symmetry and len(self.pattern_adj) > 1:
            self.constraints = self._symmetry_constraints()

    def _placement_order(self) -> tuple[list[int], dict[int, int | None]]:
        adj = self.pattern_adj
        if not adj:
            return [], {}
        order: list[int] = []
        parent: dict[int, int | None] = {}
        remaining = set(adj)
        while remaining:
            placed = set(order)
            # prefer vertices touching the placed part, then higher degree
            best = min(
                remaining,
                key=lambda v: (-len(adj[v] & placed), -len(adj[v]), v),
            )
            anchors = sorted(adj[best] & placed, key=order.index)
            parent[best] = anchors[0] if anchors else None
            order.append(best)
            remaining.discard(best)
        return order, parent

    def _symmetry_constraints(self) -> list[tuple[int, int]]:
        plain = SubgraphMatcher(self.pattern_adj, break_symmetry=False)
        automorphisms = list(plain.iter_matches(self.pattern_adj))
        constraints = []
        while len(automorphisms) > 1:
            for v in self.order:
                orbit = {a[v] for a in automorphisms}
                if len(orbit) > 1:
                    break
            constraints.extend((v, w) for w in sorted(orbit - {v}))
            automorphisms = [a for a in automorphisms if a[v] == v]
        return constraints

    def iter_matches(self, host_adj: Mapping[int, frozenset[int]]) -> Iterator[dict[int, int]]:
        """Yield injective edge-preserving maps pattern -> host."""
        if not self.order:
            yield {}
            return
        padj = self.pattern_adj
        host_sorted = sorted(host_adj)
        image: dict[int, int] = {}
        used: set[int] = set()
        lower = {v: [a for a, b in self.constraints if b == v] for v in padj}
        upper = {v: [b for a, b in self.constraints if a == v] for v in padj}

        def candidates(v: int) -> list[int]:
            parent = self.parent[v]
            pool = host_sorted if parent is None else sorted(host_adj[image[parent]])
            need = len(padj[v])
            result = []
            for h in pool:
                if h in used or len(host_adj[h]) < need:
                    continue
                if any(h not in host_adj[image[p]] for p in padj[v] if p in image):
                    continue
                if any(p in image and not image[p] < h for p in lower[v]):
                    continue
                if any(p in image and not h < image[p] for p in upper[v]):
                    continue
                result.append(h)
            return result

        def search(depth: int) -> Iterator[dict[int, int]]:
            if depth == len(self.order):
                yield dict(image)
                return
            v = self.order[depth]
            for h in candidates(v):
                image[v] = h
                used.add(h)
                yield from search(depth + 1)
                used.discard(h)
                del image[v]

        yield from search(0)

    def first_match(self, host_adj: Mapping[int, frozenset[int]]) -> dict[int, int] | None:
        return next(self.iter_matches(host_adj), None)


@lru_cache(maxsize=None)
def _matcher(c: ConfigId) -> SubgraphMatcher:
    return SubgraphMatcher(pattern(c).adjacency)


def contains_config(graph: GraphLike, c: ConfigId) -> dict[int, int] | None:
    """
    Find a subgraph of ``graph`` isomorphic to configuration ``c``.

    Args:
        graph: Plane graph, networkx graph or adjacency mapping
        c: Configuration id

    Returns:
        Injective map from pattern vertices to host vertices, or None
    """
    return _matcher(ConfigId(c)).first_match(adjacency_sets(graph))


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Why a graph fails a case: an embedded configuration or a cycle."""

    case: CaseTag
    config: ConfigId | None = None
    mapping: Mapping[int, int] | None = None
    cycle: tuple[int, ...] | None = None

    def describe(self) -> str:
        if self.config is not None:
            image = [self.mapping[v] for v in sorted(self.mapping)]
            return f"{self.case.value}: contains {self.config.value} at {image}"
        return f"{self.case.value}: contains {len(self.cycle)}-cycle {list(self.cycle)}"

    def to_dict(self) -> dict:
        if self.config is not None:
            return {
                "config": self.config.value,
                "mapping": {str(k): v for k, v in sorted(self.mapping.items())},
            }
        return {"cycle": list(self.cycle)}


@dataclass(frozen=True)
class ClassReport:
    cases: frozenset[CaseTag]
    witnesses: Mapping[CaseTag, Witness] = field(default_factory=dict)
    remarks: tuple[str, ...] = ()

    def describe(self) -> str:
        if not self.witnesses:
            return "in every case"
        return "; ".join(self.witnesses[c].describe() for c in sorted(self.witnesses))

    def to_dict(self, witness: bool = False) -> dict:
        doc: dict = {"cases": sorted(c.value for c in self.cases)}
        if witness:
            doc["witnesses"] = {c.value: w.to_dict() for c, w in sorted(self.witnesses.items())}
        if self.remarks:
            doc["remarks"] = list(self.remarks)
        return doc


def _config_witness(adj, case: CaseTag, cache: dict) -> Witness | None:
    for c in forbidden_configs(case):
        if c not in cache:
            cache[c] = _matcher(c).first_match(adj)
        if cache[c] is not None:
            return Witness(case, config=c, mapping=cache[c])
    return None


def _cached_cycle(adj, cache: dict, k: int) -> tuple[int, ...] | None:
    if k not in cache:
        cache[k] = find_cycle_of_length(adj, k)
    return cache[k]


def _cycle_witness(adj, cache: dict) -> Witness | None:
    for k in (4, 9):
        cycle = _cached_cycle(adj, cache, k)
        if cycle is not None:
            return Witness(CaseTag.CASE3, cycle=cycle)
    return None


def _witness(adj, case: CaseTag, cache: dict) -> Witness | None:
    if case is CaseTag.CASE3:
        return _cycle_witness(adj, cache)
    return _config_witness(adj, case, cache)


def satisfies(graph: GraphLike, case: CaseTag) -> bool:
    """Check a single case, stopping at the first violation."""
    return _witness(adjacency_sets(graph), CaseTag(case), {}) is None


def _cross_check(adj, cases: frozenset[CaseTag], cache: dict) -> list[str]:
    """
    Compare against the cycle-length remark: a graph without 4-cycles and
    without l-cycles is in case 1 for l in 5..7 and in case 2 for l = 8.
    """
    if _cached_cycle(adj, cache, 4) is not None:
        return []
    remarks = []
    for length, case in ((5, CaseTag.CASE1), (6, CaseTag.CASE1), (7, CaseTag.CASE1), (8, CaseTag.CASE2)):
        if case in cases:
            continue
        if _cached_cycle(adj, cache, length) is None:
            remarks.append(
                f"no 4-cycle and no {length}-cycle but {case.value} fails; check the atlas"
            )
    for remark in remarks:
        logger.error(remark)
    return remarks


def classify_report(graph: GraphLike, cross_check: bool = True) -> ClassReport:
    """
    Determine every case the graph satisfies, with witnesses for the rest.

    Args:
        graph: Plane graph, networkx graph or adjacency mapping
        cross_check: Also compare with the cycle-length remark

    Returns:
        ClassReport: Satisfied cases and a witness per failed case
    """
    adj = adjacency_sets(graph)
    cache: dict = {}
    witnesses = {}
    for case in CaseTag:
        w = _witness(adj, case, cache)
        if w is not None:
            witnesses[case] = w
    cases = frozenset(c for c in CaseTag if c not in witnesses)
    remarks = tuple(_cross_check(adj, cases, cache)) if cross_check else ()
    logger.debug(f"Classified graph with {len(adj)} vertices: {sorted(c.value for c in cases)}")
    return ClassReport(cases, witnesses, remarks)


def classify(graph: GraphLike) -> frozenset[CaseTag]:
    """Return every case whose hypothesis the graph satisfies (possibly none)."""
    return classify_report(graph).cases
