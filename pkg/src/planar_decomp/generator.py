"""
Random in-class plane graphs by rejection sampling.

Growth starts from a cycle and repeatedly joins two corners of a face by a
path of new vertices, which keeps the graph connected and plane. A chord
phase then joins corners of existing faces, starting from normal vertices of
least degree, so few degree-2 vertices are left. A step is kept only if the
result still satisfies the requested case.
"""

import logging
import random
from dataclasses import dataclass

from .class_gate import CaseTag, find_cycle_through, satisfies
from .errors import ArgumentError, GraphValidationError
from .graph_core import PlaneGraph

logger = logging.getLogger(__name__)

START_CYCLES = (3, 5, 6, 7, 8, 10)
MAX_PATH = 3
DEFAULT_BUDGET = 4000
LOW_DEGREE_BIAS = 0.75

Proposal = tuple[dict[int, list[int]], tuple[int, int]]


@dataclass(frozen=True)
class GenerationResult:
    graph: PlaneGraph
    seed: int
    case: CaseTag
    attempts: int
    exhausted: bool = False
    chords: int = 0


def _start(rng: random.Random, n: int) -> PlaneGraph:
    if n == 1:
        return PlaneGraph({0: []})
    if n == 2:
        return PlaneGraph({0: [1], 1: [0]}, boundary_edge=(0, 1))
    length = rng.choice([c for c in START_CYCLES if c <= n])
    rotations = {i: [(i - 1) % length, (i + 1) % length] for i in range(length)}
    return PlaneGraph(rotations, outer_dart=(0, 1), boundary_edge=(0, 1))


def _insert_before(rotation: list[int], anchor: int, new: int) -> None:
    rotation.insert(rotation.index(anchor), new)


def _split_face(g: PlaneGraph, walk: tuple[int, ...], i: int, j: int, length: int) -> Proposal | None:
    """
    Join corners ``i`` and ``j`` of a face walk by a path of ``length`` new vertices.

    At walk position i the face passes prev -> a -> next, and the face's
    corner at a sits just before prev in a's clockwise rotation.

    Returns:
        New rotations and the first new edge, or None if the join is unusable
    """
    a, b = walk[i], walk[j]
    if a == b and length < 2:
        return None
    if length == 0 and g.has_edge(a, b):
        return None

    rotations = {v: list(r) for v, r in g.rotations.items()}
    first_new = max(g.vertices) + 1
    path = list(range(first_new, first_new + length))
    chain = [a] + path + [b]
    for k, v in enumerate(path, start=1):
        rotations[v] = [chain[k - 1], chain[k + 1]]
    _insert_before(rotations[a], walk[i - 1], chain[1])
    _insert_before(rotations[b], walk[j - 1], chain[-2])
    return rotations, (a, chain[1])


def _grow(g: PlaneGraph, rng: random.Random, room: int) -> Proposal | None:
    """Propose one face-splitting path insertion of at most ``room`` new vertices."""
    face = rng.choice([f for f in g.faces if f.degree])
    i, j = sorted(rng.randrange(len(face.walk)) for _ in range(2))
    length = rng.randint(0, min(MAX_PATH, room))
    return _split_face(g, face.walk, i, j, length)


def _chord(g: PlaneGraph, rng: random.Random) -> Proposal | None:
    """
    Propose a chord inside one face.

    Most draws start the chord at a normal vertex of least degree; the rest
    pick both corners uniformly.
    """
    faces = [f for f in g.faces if f.degree >= 4]
    if not faces:
        return None
    low = min(g.degree(v) for v in g.vertices if g.is_normal(v))

    def weak(v: int) -> bool:
        return g.is_normal(v) and g.degree(v) == low

    biased = rng.random() < LOW_DEGREE_BIAS
    candidates = [f for f in faces if any(weak(v) for v in f.walk)] if biased else []
    face = rng.choice(candidates or faces)
    walk = face.walk
    starts = [k for k, v in enumerate(walk) if weak(v)] if candidates else []
    i = rng.choice(starts) if starts else rng.randrange(len(walk))
    j = rng.randrange(len(walk))
    return _split_face(g, walk, *sorted((i, j)), 0)


def _acceptable(g: PlaneGraph, case: CaseTag, new_edge: tuple[int, int]) -> bool:
    if case is CaseTag.CASE3:
        # any new 4- or 9-cycle runs through the first new edge
        return all(find_cycle_through(g, k, new_edge) is None for k in (4, 9))
    return satisfies(g, case)


def _apply(g: PlaneGraph, proposal: Proposal | None, case: CaseTag) -> PlaneGraph | None:
    if proposal is None:
        return None
    rotations, new_edge = proposal
    try:
        candidate = PlaneGraph(rotations, outer_dart=g.outer_dart, boundary_edge=g.boundary_edge)
    except GraphValidationError as e:
        logger.debug(f"Rejected insertion: {e}")
        return None
    if not _acceptable(candidate, case, new_edge):
        logger.debug(f"Rejected insertion at {new_edge}: leaves {case.value}")
        return None
    return candidate


def generate(
    seed: int,
    n: int,
    case: CaseTag | str,
    budget: int = DEFAULT_BUDGET,
    chords: int | None = None,
) -> GenerationResult:
    """
    Grow a connected plane graph with at most ``n`` vertices in ``case``.

    Args:
        seed: Random seed; the output is a function of all arguments
        n: Target vertex count, at least 1
        case: Hypothesis every intermediate graph must satisfy
        budget: Maximum number of proposed path insertions
        chords: Chord proposals once growth stops; defaults to n, 0 disables

    Returns:
        GenerationResult: The graph (with outer face and boundary edge),
            whether the budget ran out before reaching n vertices, and the
            number of chords added

    Raises:
        ArgumentError: If n < 1 or chords < 0
    """
    if n < 1:
        raise ArgumentError(f"generator needs n >= 1, got {n}")
    chords = n if chords is None else chords
    if chords < 0:
        raise ArgumentError(f"chord attempts must be non-negative, got {chords}")
    case = case if isinstance(case, CaseTag) else CaseTag.parse(case)
    rng = random.Random(seed)
    g = _start(rng, n)
    attempts = 0
    while len(g.vertices) < n and attempts < budget:
        attempts += 1
        candidate = _apply(g, _grow(g, rng, n - len(g.vertices)), case)
        if candidate is not None:
            g = candidate

    exhausted = len(g.vertices) < n
    if exhausted:
        logger.warning(
            f"Generator budget of {budget} exhausted at {len(g.vertices)}/{n} vertices (seed {seed})"
        )

    added = 0
    if len(g.vertices) >= 4:
        for _ in range(chords):
            candidate = _apply(g, _chord(g, rng), case)
            if candidate is not None:
                g = candidate
                added += 1
    logger.debug(
        f"Generated {len(g.vertices)} vertices and {g.number_of_edges()} edges for {case.value} "
        f"in {attempts} attempts with {added} chords (seed {seed})"
    )
    return GenerationResult(g, seed, case, attempts, exhausted, added)
