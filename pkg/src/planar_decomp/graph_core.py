"""Embedded plane graphs given by rotation systems.

A plane graph is described by its rotation system: for every vertex the
neighbours in clockwise order, in the sense of ``networkx.PlanarEmbedding``.
Faces are traced from darts (directed edges): the face of dart ``(u, v)``
continues with ``(v, ccw_v(u))``. The designated outer face is stored as a
face id and can be given as a dart, as a boundary walk, or chosen by default.
"""

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

import networkx as nx

from .errors import ContractViolation, GraphValidationError

logger = logging.getLogger(__name__)

Dart = tuple[int, int]
Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Return the undirected edge ``uv`` as a sorted pair."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Face:
    """A traced face: its boundary walk and the darts of that walk."""

    id: int
    walk: tuple[int, ...]
    darts: tuple[Dart, ...]

    @property
    def degree(self) -> int:
        return len(self.darts)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.walk)

    def is_cycle(self) -> bool:
        """True when the walk visits every vertex once (a facial cycle)."""
        return self.degree >= 3 and len(set(self.walk)) == len(self.walk)


def _canonical_rotation(rotation: Sequence[int]) -> tuple[int, ...]:
    if not rotation:
        return ()
    start = rotation.index(min(rotation))
    return tuple(rotation[start:]) + tuple(rotation[:start])


def validate_rotations(
    rotations: Mapping[int, Sequence[int]],
    vertices: Iterable[int] | None = None,
) -> dict[int, tuple[int, ...]]:
    """
    Check that a rotation system describes a simple graph.

    Args:
        rotations: Neighbours of each vertex in clockwise order
        vertices: Full vertex set; vertices without a rotation are isolated

    Returns:
        Rotations keyed by every vertex, each started at its least neighbour

    Raises:
        GraphValidationError: On loops, parallel edges, unknown or
            one-sided neighbours and invalid vertex ids
    """
    problems: list[str] = []
    vertex_set = set(rotations) if vertices is None else set(vertices)
    for v in vertex_set:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            problems.append(f"vertex id {v!r} is not a non-negative integer")
    for v in rotations:
        if v not in vertex_set:
            problems.append(f"rotation given for unknown vertex {v}")
    if problems:
        raise GraphValidationError(problems)

    rot = {v: list(rotations.get(v, ())) for v in vertex_set}
    for v, nbrs in rot.items():
        seen: set[int] = set()
        for w in nbrs:
            if w == v:
                problems.append(f"loop at vertex {v}")
            elif w in seen:
                problems.append(f"parallel edge {v}-{w} in rotation of {v}")
            elif w not in rot:
                problems.append(f"rotation of {v} lists unknown vertex {w}")
            seen.add(w)
    for v, nbrs in rot.items():
        for w in nbrs:
            if w in rot and w != v and v not in rot[w]:
                problems.append(f"rotation of {v} lists {w} but not vice versa")
    if problems:
        raise GraphValidationError(problems)
    return {v: _canonical_rotation(nbrs) for v, nbrs in rot.items()}


def _planar_embedding(rotations: Mapping[int, tuple[int, ...]]) -> nx.PlanarEmbedding:
    embedding = nx.PlanarEmbedding()
    embedding.add_nodes_from(rotations)
    embedding.set_data({v: list(nbrs) for v, nbrs in rotations.items() if nbrs})
    try:
        embedding.check_structure()
    except nx.NetworkXException as e:
        raise GraphValidationError([f"rotation system is not planar: {e}"]) from e
    return embedding


def _trace(
    rotations: Mapping[int, tuple[int, ...]], embedding: nx.PlanarEmbedding
) -> tuple[Face, ...]:
    faces: list[Face] = []
    marked: set[Dart] = set()
    for dart in sorted((v, w) for v, nbrs in rotations.items() for w in nbrs):
        if dart in marked:
            continue
        walk = tuple(embedding.traverse_face(dart[0], dart[1], marked))
        darts = tuple(zip(walk, walk[1:] + walk[:1]))
        faces.append(Face(len(faces), walk, darts))
    for v in sorted(rotations):
        if not rotations[v]:
            faces.append(Face(len(faces), (v,), ()))
    return tuple(faces)


class PlaneGraph:
    """An immutable simple plane graph with a designated outer face."""

    def __init__(
        self,
        rotations: Mapping[int, Sequence[int]],
        vertices: Iterable[int] | None = None,
        outer_face: Sequence[int] | None = None,
        boundary_edge: Sequence[int] | None = None,
        *,
        outer_dart: Dart | None = None,
    ):
        """
        Build and validate a plane graph.

        Args:
            rotations: Neighbours of each vertex in clockwise order
            vertices: Full vertex set (defaults to the rotation keys)
            outer_face: Boundary walk of the outer face
            boundary_edge: Ordered pair (x, y) on the outer face
            outer_dart: A dart of the outer face (alternative to outer_face)

        Raises:
            GraphValidationError: If the rotation system is invalid, not
                planar, or the outer face / boundary edge do not fit
        """
        self._rotations = validate_rotations(rotations, vertices)
        self._embedding = _planar_embedding(self._rotations)
        self._faces = _trace(self._rotations, self._embedding)
        self._dart_face = {d: f.id for f in self._faces for d in f.darts}
        self._adjacency = {v: frozenset(nbrs) for v, nbrs in self._rotations.items()}
        self._nx_graph: nx.Graph | None = None

        self.boundary_edge: Edge | None = None
        if boundary_edge is not None:
            x, y = (int(t) for t in boundary_edge)
            if y not in self._adjacency.get(x, ()):
                raise GraphValidationError([f"boundary edge {x}-{y} is not an edge"])
            self.boundary_edge = (x, y)
        self._outer = self._resolve_outer(outer_face, outer_dart)

    # -- construction helpers -------------------------------------------------

    def _resolve_outer(
        self, outer_face: Sequence[int] | None, outer_dart: Dart | None
    ) -> int | None:
        if outer_dart is not None:
            if tuple(outer_dart) not in self._dart_face:
                raise GraphValidationError([f"outer dart {tuple(outer_dart)} is not a dart"])
            fid = self._dart_face[tuple(outer_dart)]
        elif outer_face is not None:
            fid = self._face_from_walk(list(outer_face))
        else:
            fid = self._default_outer()

        if self.boundary_edge is not None:
            x, y = self.boundary_edge
            if fid not in (self._dart_face.get((x, y)), self._dart_face.get((y, x))):
                raise GraphValidationError(
                    [f"boundary edge {x}-{y} does not lie on the outer face walk"]
                )
        return fid

    def _face_from_walk(self, walk: list[int]) -> int:
        if not walk:
            raise GraphValidationError(["outer face walk is empty"])
        if len(walk) == 1:
            v = walk[0]
            for face in self._faces:
                if face.walk == (v,) and not face.darts:
                    return face.id
            raise GraphValidationError([f"outer face walk [{v}] is not a face"])
        first = (walk[0], walk[1])
        if first not in self._dart_face:
            raise GraphValidationError([f"outer face walk starts with non-edge {first}"])
        face = self._faces[self._dart_face[first]]
        start = face.darts.index(first)
        expected = list(face.walk[start:] + face.walk[:start])
        if expected != walk:
            raise GraphValidationError([f"outer face walk {walk} is not a face boundary"])
        return face.id

    def _default_outer(self) -> int | None:
        if self.boundary_edge is not None:
            x, y = self.boundary_edge
            candidates = [self._faces[self._dart_face[d]] for d in ((x, y), (y, x))]
        else:
            candidates = list(self._faces)
        if not candidates:
            return None
        best = max(f.degree for f in candidates)
        return min(f.id for f in candidates if f.degree == best)

    # -- structure --------------------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._rotations)

    @property
    def rotations(self) -> Mapping[int, tuple[int, ...]]:
        return MappingProxyType(self._rotations)

    @property
    def adjacency(self) -> Mapping[int, frozenset[int]]:
        return MappingProxyType(self._adjacency)

    @property
    def faces(self) -> tuple[Face, ...]:
        return self._faces

    @property
    def outer_face(self) -> int | None:
        return self._outer

    @property
    def outer_dart(self) -> Dart | None:
        """The boundary-edge dart on the outer face, else the face's first dart."""
        if self._outer is None:
            return None
        if self.boundary_edge is not None:
            x, y = self.boundary_edge
            return (x, y) if self._dart_face.get((x, y)) == self._outer else (y, x)
        face = self._faces[self._outer]
        return face.darts[0] if face.darts else None

    def outer_walk(self) -> tuple[int, ...]:
        """Boundary walk of the outer face, started at the outer dart."""
        if self._outer is None:
            return ()
        face = self._faces[self._outer]
        dart = self.outer_dart
        if dart is None:
            return face.walk
        start = face.darts.index(dart)
        return face.walk[start:] + face.walk[:start]

    def rotation(self, v: int) -> tuple[int, ...]:
        return self._rotations[v]

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._rotations[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency.get(u, ())

    def edges(self) -> list[Edge]:
        return sorted(edge_key(v, w) for v, nbrs in self._rotations.items() for w in nbrs if v < w)

    def number_of_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self._rotations.values()) // 2

    def face(self, fid: int) -> Face:
        return self._faces[fid]

    def face_of_dart(self, u: int, v: int) -> Face:
        return self._faces[self._dart_face[(u, v)]]

    def corners(self, v: int) -> tuple[int, ...]:
        """Face ids around ``v`` in rotation order; consecutive ones share an edge."""
        return tuple(self._dart_face[(w, v)] for w in self._rotations[v])

    def is_normal(self, v: int) -> bool:
        """A vertex other than the boundary-edge endpoints."""
        return self.boundary_edge is None or v not in self.boundary_edge

    def to_networkx(self) -> nx.Graph:
        """The abstract graph, frozen."""
        if self._nx_graph is None:
            graph = nx.Graph()
            graph.add_nodes_from(self._rotations)
            graph.add_edges_from(self.edges())
            self._nx_graph = nx.freeze(graph)
        return self._nx_graph

    def restricted(
        self,
        keep: Iterable[int],
        boundary_edge: Edge | None = None,
        outer_dart: Dart | None = None,
    ) -> "PlaneGraph":
        """
        Induced plane subgraph on ``keep`` with rotations spliced in order.

        The boundary edge is inherited when both endpoints survive unless one
        is given. The outer face is the face of ``outer_dart`` if given, else
        the face holding the surviving boundary dart or the first surviving
        dart of the current outer face, else the default choice.
        """
        keep = frozenset(keep)
        rotations = {v: tuple(w for w in self._rotations[v] if w in keep) for v in keep}
        if boundary_edge is None and self.boundary_edge is not None:
            if set(self.boundary_edge) <= keep:
                boundary_edge = self.boundary_edge
        if outer_dart is None and self._outer is not None:
            if boundary_edge is not None and boundary_edge == self.boundary_edge:
                outer_dart = self.outer_dart
            else:
                outer_dart = next(
                    (d for d in self._faces[self._outer].darts if d[0] in keep and d[1] in keep),
                    None,
                )
                if outer_dart is not None and boundary_edge is not None:
                    # the surviving region must also carry the new boundary edge
                    candidate = PlaneGraph(rotations, keep, outer_dart=outer_dart)
                    fid = candidate.outer_face
                    x, y = boundary_edge
                    if fid not in (candidate._dart_face.get((x, y)), candidate._dart_face.get((y, x))):
                        outer_dart = None
        return PlaneGraph(rotations, keep, boundary_edge=boundary_edge, outer_dart=outer_dart)

    def with_boundary_edge(self, boundary_edge: Edge | None) -> "PlaneGraph":
        """Same embedding with another boundary edge on the same outer face."""
        return PlaneGraph(
            self._rotations, outer_dart=self._outer_dart_any(), boundary_edge=boundary_edge
        )

    def _outer_dart_any(self) -> Dart | None:
        if self._outer is None:
            return None
        face = self._faces[self._outer]
        return face.darts[0] if face.darts else None

    # -- protocol -----------------------------------------------------------------

    def _key(self):
        return (tuple(sorted(self._rotations.items())), self._outer, self.boundary_edge)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return (
            f"PlaneGraph(n={len(self._rotations)}, m={self.number_of_edges()}, "
            f"faces={len(self._faces)}, boundary_edge={self.boundary_edge})"
        )


GraphLike = Union[PlaneGraph, nx.Graph, Mapping[int, Iterable[int]]]


def adjacency_sets(graph: GraphLike) -> dict[int, frozenset[int]]:
    """Neighbour sets of an embedded graph, a networkx graph or a mapping."""
    if isinstance(graph, PlaneGraph):
        return dict(graph.adjacency)
    if isinstance(graph, nx.Graph):
        return {v: frozenset(w for w in graph[v] if w != v) for v in graph}
    return {v: frozenset(nbrs) for v, nbrs in graph.items()}


def trace_faces(g: PlaneGraph | Mapping[int, Sequence[int]]) -> tuple[Face, ...]:
    """
    Trace the faces of a rotation system.

    Args:
        g: A plane graph, or a raw rotation mapping to validate and trace

    Returns:
        Faces ordered by their least dart; every dart lies on exactly one

    Raises:
        GraphValidationError: If a raw rotation mapping is inconsistent
    """
    if isinstance(g, PlaneGraph):
        return g.faces
    return PlaneGraph(g).faces


def degree(g: PlaneGraph, v: int) -> int:
    return g.degree(v)


def face_degree(g: PlaneGraph, f: int) -> int:
    return g.face(f).degree


def is_connected(g: PlaneGraph) -> bool:
    if len(g.vertices) <= 1:
        return True
    return nx.is_connected(g.to_networkx())


def components(g: PlaneGraph) -> list[frozenset[int]]:
    """Vertex sets of the connected components, ordered by least vertex."""
    return sorted(
        (frozenset(c) for c in nx.connected_components(g.to_networkx())), key=min
    )


def cut_vertices(g: PlaneGraph) -> set[int]:
    return set(nx.articulation_points(g.to_networkx()))


def delete_vertices(g: PlaneGraph, s: Iterable[int]) -> PlaneGraph:
    """
    Delete a vertex set, splicing it out of the surviving rotations.

    Args:
        g: The plane graph
        s: Vertices to delete; must avoid the boundary-edge endpoints

    Returns:
        The plane subgraph induced on the survivors, ids preserved

    Raises:
        ContractViolation: If ``s`` has unknown vertices or a boundary endpoint
    """
    s = frozenset(s)
    unknown = s - g.vertices
    if unknown:
        raise ContractViolation(f"cannot delete unknown vertices {sorted(unknown)}")
    if g.boundary_edge is not None and s & set(g.boundary_edge):
        raise ContractViolation(
            f"cannot delete boundary-edge endpoint(s) {sorted(s & set(g.boundary_edge))}"
        )
    if not s:
        return g
    return g.restricted(g.vertices - s)
