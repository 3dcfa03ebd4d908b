"""Decomposition certificates: a matching, an acyclic orientation and an order."""

from dataclasses import dataclass, field
from typing import Iterable

from .graph_core import Dart, Edge, edge_key


@dataclass(frozen=True)
class NiceDecomposition:
    """
    A (2,1)-decomposition of a plane graph.

    ``arcs`` holds (tail, head) pairs; every arc points from a later vertex
    to an earlier one in ``order``. When ``boundary_edge`` is set the
    certificate claims to be nice for that edge.
    """

    matching: frozenset[Edge] = field(default_factory=frozenset)
    arcs: frozenset[Dart] = field(default_factory=frozenset)
    order: tuple[int, ...] = ()
    boundary_edge: Edge | None = None

    @classmethod
    def build(
        cls,
        matching: Iterable[Iterable[int]] = (),
        arcs: Iterable[Iterable[int]] = (),
        order: Iterable[int] = (),
        boundary_edge: Iterable[int] | None = None,
    ) -> "NiceDecomposition":
        return cls(
            frozenset(edge_key(*e) for e in matching),
            frozenset(tuple(a) for a in arcs),
            tuple(order),
            tuple(boundary_edge) if boundary_edge is not None else None,
        )

    def out_neighbors(self) -> dict[int, list[int]]:
        """Heads of the arcs leaving each vertex, for every vertex in the order."""
        out: dict[int, list[int]] = {v: [] for v in self.order}
        for tail, head in sorted(self.arcs):
            out.setdefault(tail, []).append(head)
        return out

    def merged(self, other: "NiceDecomposition") -> "NiceDecomposition":
        """Union with a certificate of a vertex-disjoint graph."""
        return NiceDecomposition(
            self.matching | other.matching,
            self.arcs | other.arcs,
            self.order + other.order,
            self.boundary_edge,
        )

    def with_boundary_edge(self, boundary_edge: Edge | None) -> "NiceDecomposition":
        return NiceDecomposition(self.matching, self.arcs, self.order, boundary_edge)

    def to_dict(self) -> dict:
        doc = {
            "matching": [list(e) for e in sorted(self.matching)],
            "arcs": [list(a) for a in sorted(self.arcs)],
            "order": list(self.order),
        }
        if self.boundary_edge is not None:
            doc["boundary_edge"] = list(self.boundary_edge)
        return doc
