"""
Exact discharging ledger.

Charges are integers in units of 1/6. Initially every vertex holds d(v) - 4,
every internal face d(f) - 4 and the outer face d(f0) + 4, which sums to zero
on a connected plane graph. Rules R1..R8 then move charge between elements;
every move is logged so the ledger can be re-validated against the element
predicates each rule talks about.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .class_gate import CaseTag
from .errors import ArgumentError, GraphValidationError
from .graph_core import Face, PlaneGraph, is_connected

logger = logging.getLogger(__name__)

SIXTH = 1
THIRD = 2
HALF = 3


@dataclass(frozen=True, order=True)
class Element:
    """A vertex ("v") or a face ("f") of the graph."""

    kind: str
    id: int

    def __str__(self) -> str:
        return f"{self.kind}{self.id}"

    @classmethod
    def vertex(cls, v: int) -> "Element":
        return cls("v", v)

    @classmethod
    def face(cls, f: int) -> "Element":
        return cls("f", f)


@dataclass(frozen=True)
class Transfer:
    source: Element
    target: Element
    amount: int
    rule: str

    def to_dict(self) -> dict:
        return {
            "from": str(self.source),
            "to": str(self.target),
            "amount": str(Fraction(self.amount, 6)),
            "rule": self.rule,
        }


@dataclass
class ChargeLedger:
    """Per-element charge in sixths plus the log of every transfer."""

    charge: dict[Element, int]
    transfers: list[Transfer] = field(default_factory=list)
    initial: dict[Element, int] = field(default_factory=dict)
    face_walks: dict[int, tuple[int, ...]] = field(default_factory=dict)
    outer_face: int | None = None
    boundary_edge: tuple[int, int] | None = None
    case: CaseTag | None = None

    def move(self, source: Element, target: Element, amount: int, rule: str) -> None:
        self.charge[source] -= amount
        self.charge[target] += amount
        self.transfers.append(Transfer(source, target, amount, rule))

    def total(self) -> int:
        return sum(self.charge.values())

    def value(self, element: Element) -> Fraction:
        return Fraction(self.charge[element], 6)

    def received(self, element: Element) -> int:
        """Total charge moved into ``element``, in sixths."""
        return sum(t.amount for t in self.transfers if t.target == element)

    def copy(self) -> "ChargeLedger":
        return ChargeLedger(
            dict(self.charge),
            list(self.transfers),
            dict(self.initial),
            dict(self.face_walks),
            self.outer_face,
            self.boundary_edge,
            self.case,
        )


class ElementClass:
    """Predicates on vertices and faces of a plane graph with a boundary edge."""

    def __init__(self, g: PlaneGraph):
        self.g = g
        self.boundary = set(g.boundary_edge or ())

    def is_normal(self, v: int) -> bool:
        return v not in self.boundary

    def is_special(self, v: int) -> bool:
        return self.g.degree(v) >= 5 or v in self.boundary

    def is_internal(self, f: int) -> bool:
        return f != self.g.outer_face

    def is_minor_three(self, v: int) -> bool:
        """Normal 3-vertex on an internal face of degree at most 4."""
        if not self.is_normal(v) or self.g.degree(v) != 3:
            return False
        return any(self.is_internal(f) and self.g.face(f).degree <= 4 for f in self.g.corners(v))

    def is_special_face(self, f: int) -> bool:
        return not self.is_internal(f) or self.g.face(f).degree >= 7

    def is_good_five(self, f: int) -> bool:
        """Internal 5-face next to at least one internal 3-face."""
        face = self.g.face(f)
        if not self.is_internal(f) or face.degree != 5:
            return False
        return any(
            self.is_internal(h.id) and h.degree == 3 for h in self.across(face) if h.id != f
        )

    def is_triangular_edge(self, u: int, v: int) -> bool:
        return bool(self.g.neighbors(u) & self.g.neighbors(v))

    def normally_adjacent(self, f: int, h: int) -> bool:
        """Faces meeting in exactly two vertices (a single shared edge)."""
        return len(self.g.face(f).vertices & self.g.face(h).vertices) == 2

    def across(self, face: Face) -> Iterator[Face]:
        """The face on the other side of each dart of ``face``, per edge."""
        for a, b in face.darts:
            yield self.g.face_of_dart(b, a)

    def companion(self, v: int, corner: int) -> Face | None:
        """For a 3-face [u v w] at corner ``corner`` of v, the face across uw."""
        face = self.g.face(corner)
        if face.degree != 3:
            return None
        for a, b in face.darts:
            if v not in (a, b):
                return self.g.face_of_dart(b, a)
        return None


@dataclass(frozen=True)
class FaceStats:
    face: int
    degree: int
    t: int
    s: int


def _with_boundary(g: PlaneGraph, e: Sequence[int] | None) -> PlaneGraph:
    if e is not None and (g.boundary_edge is None or tuple(e) != g.boundary_edge):
        try:
            g = g.with_boundary_edge(tuple(e))
        except GraphValidationError as err:
            raise ArgumentError(f"boundary edge {tuple(e)} is not on the outer face") from err
    if g.boundary_edge is None:
        raise ArgumentError("discharging needs a boundary edge")
    if not is_connected(g):
        raise ArgumentError("discharging needs a connected graph")
    return g


def initial_charges(g: PlaneGraph, e: Sequence[int] | None = None) -> ChargeLedger:
    """
    Initial charges: d(v) - 4, d(f) - 4, and d(f0) + 4 for the outer face.

    Args:
        g: Connected plane graph
        e: Boundary edge; defaults to the graph's

    Returns:
        ChargeLedger: Charges in sixths, summing to zero

    Raises:
        ArgumentError: If e is not on the outer face or g is disconnected
    """
    g = _with_boundary(g, e)
    charge = {Element.vertex(v): 6 * (g.degree(v) - 4) for v in sorted(g.vertices)}
    for face in g.faces:
        bonus = 4 if face.id == g.outer_face else -4
        charge[Element.face(face.id)] = 6 * (face.degree + bonus)
    ledger = ChargeLedger(
        charge,
        initial=dict(charge),
        face_walks={f.id: f.walk for f in g.faces},
        outer_face=g.outer_face,
        boundary_edge=g.boundary_edge,
    )
    if ledger.total() != 0:
        raise ArgumentError(f"initial charges sum to {Fraction(ledger.total(), 6)}, expected 0")
    return ledger


def _rule_r1(g, ec, ledger):
    for face in g.faces:
        if face.degree == 3 and ec.is_internal(face.id):
            for other in ec.across(face):
                if other.id != face.id:
                    ledger.move(Element.face(other.id), Element.face(face.id), THIRD, "R1")


def _rule_r2(g, ec, ledger):
    for v in sorted(g.vertices):
        if not ec.is_normal(v) or g.degree(v) != 3:
            continue
        corners = g.corners(v)
        minor = next(
            (i for i, f in enumerate(corners) if ec.is_internal(f) and g.face(f).degree <= 4),
            None,
        )
        for i, f in enumerate(corners):
            if minor is None:
                ledger.move(Element.face(f), Element.vertex(v), THIRD, "R2")
            elif i != minor:
                ledger.move(Element.face(f), Element.vertex(v), HALF, "R2")


def _vertex_sends(g, ec, ledger, v, amount, rule, internal_only):
    corners = g.corners(v)
    for f in corners:
        face = g.face(f)
        if face.degree >= 4 and (ec.is_internal(f) or not internal_only):
            ledger.move(Element.vertex(v), Element.face(f), amount, rule)
        companion = ec.companion(v, f)
        if companion is not None:
            ledger.move(Element.vertex(v), Element.face(companion.id), amount, rule)


def _rule_r3(g, ec, ledger):
    for v in sorted(g.vertices):
        if not ec.is_normal(v) or g.degree(v) != 5:
            continue
        _vertex_sends(g, ec, ledger, v, SIXTH, "R3", internal_only=False)
        corners = g.corners(v)
        d = len(corners)
        for i in range(d):
            before, middle, after = corners[i - 1], corners[i], corners[(i + 1) % d]
            if g.face(before).degree == 3 and g.face(after).degree == 3:
                ledger.move(Element.vertex(v), Element.face(middle), SIXTH, "R3")


def _rule_r4(g, ec, ledger):
    for v in sorted(g.vertices):
        if ec.is_normal(v) and g.degree(v) >= 6:
            _vertex_sends(g, ec, ledger, v, THIRD, "R4", internal_only=False)


def _rule_r5(g, ec, ledger):
    for v in g.boundary_edge:
        _vertex_sends(g, ec, ledger, v, THIRD, "R5", internal_only=True)


def _rule_r6(g, ec, ledger):
    outer = g.face(g.outer_face)
    for other in ec.across(outer):
        if other.id != outer.id and other.degree >= 4:
            ledger.move(Element.face(outer.id), Element.face(other.id), THIRD, "R6")


def _rule_r7(g, ec, ledger):
    for face in g.faces:
        if face.degree != 5 or not ec.is_internal(face.id):
            continue
        for other in ec.across(face):
            if other.id != face.id and ec.is_internal(other.id) and other.degree >= 6:
                ledger.move(Element.face(other.id), Element.face(face.id), SIXTH, "R7")


def _rule_r8(g, ec, ledger):
    for face in g.faces:
        if not ec.is_good_five(face.id):
            continue
        for other in ec.across(face):
            if other.id != face.id and ec.is_internal(other.id) and other.degree >= 7:
                ledger.move(Element.face(other.id), Element.face(face.id), THIRD, "R8")


def apply_rules(
    g: PlaneGraph,
    e: Sequence[int] | None,
    ledger: ChargeLedger,
    case: CaseTag,
) -> ChargeLedger:
    """
    Apply R1..R6 and the case rule (R7 in case 2, R8 in case 3), in order.

    Args:
        g: The graph the ledger was initialised on
        e: Boundary edge; defaults to the graph's
        ledger: Initial ledger (left untouched)
        case: Case whose rule set applies

    Returns:
        ChargeLedger: A new ledger with the final charges and the transfer log
    """
    g = _with_boundary(g, e)
    case = CaseTag(case)
    ec = ElementClass(g)
    result = ledger.copy()
    result.case = case
    for rule in (_rule_r1, _rule_r2, _rule_r3, _rule_r4, _rule_r5, _rule_r6):
        rule(g, ec, result)
    if case is CaseTag.CASE2:
        _rule_r7(g, ec, result)
    elif case is CaseTag.CASE3:
        _rule_r8(g, ec, result)
    logger.debug(f"Applied rules for {case.value}: {len(result.transfers)} transfers")
    return result


def validate_transfers(
    g: PlaneGraph, e: Sequence[int] | None, ledger: ChargeLedger, case: CaseTag
) -> list[str]:
    """
    Re-check every logged transfer against its rule's predicates and check
    that the final charges equal initial charges plus the logged moves.
    """
    g = _with_boundary(g, e)
    case = CaseTag(case)
    ec = ElementClass(g)
    problems = []

    def incident(v: int, f: int) -> bool:
        return f in g.corners(v)

    def adjacent(f: int, h: int) -> bool:
        return any(other.id == f for other in ec.across(g.face(h)))

    def fed_by_vertex(v: int, f: int, rule: str) -> bool:
        corners = g.corners(v)
        if f in corners and g.face(f).degree >= 4 and (rule != "R5" or ec.is_internal(f)):
            return True
        if any(c is not None and c.id == f for c in (ec.companion(v, corner) for corner in corners)):
            return True
        if rule != "R3":
            return False
        d = len(corners)
        return any(
            corners[i] == f and g.face(corners[i - 1]).degree == 3 and g.face(corners[(i + 1) % d]).degree == 3
            for i in range(d)
        )

    for t in ledger.transfers:
        src, dst, amount = t.source, t.target, t.amount
        ok = True
        if t.rule == "R1":
            ok = (src.kind == dst.kind == "f" and amount == THIRD and ec.is_internal(dst.id)
                  and g.face(dst.id).degree == 3 and adjacent(src.id, dst.id))
        elif t.rule == "R2":
            ok = (src.kind == "f" and dst.kind == "v" and amount in (THIRD, HALF)
                  and ec.is_normal(dst.id) and g.degree(dst.id) == 3 and incident(dst.id, src.id)
                  and (amount == HALF) == ec.is_minor_three(dst.id))
        elif t.rule in ("R3", "R4", "R5"):
            want = {"R3": SIXTH, "R4": THIRD, "R5": THIRD}[t.rule]
            ok = src.kind == "v" and dst.kind == "f" and amount == want
            if ok and t.rule == "R3":
                ok = ec.is_normal(src.id) and g.degree(src.id) == 5
            elif ok and t.rule == "R4":
                ok = ec.is_normal(src.id) and g.degree(src.id) >= 6
            elif ok:
                ok = not ec.is_normal(src.id)
            ok = ok and fed_by_vertex(src.id, dst.id, t.rule)
        elif t.rule == "R6":
            ok = (src == Element.face(g.outer_face) and dst.kind == "f" and amount == THIRD
                  and g.face(dst.id).degree >= 4 and adjacent(src.id, dst.id))
        elif t.rule == "R7":
            ok = (case is CaseTag.CASE2 and src.kind == dst.kind == "f" and amount == SIXTH
                  and ec.is_internal(src.id) and g.face(src.id).degree >= 6
                  and ec.is_internal(dst.id) and g.face(dst.id).degree == 5
                  and adjacent(src.id, dst.id))
        elif t.rule == "R8":
            ok = (case is CaseTag.CASE3 and src.kind == dst.kind == "f" and amount == THIRD
                  and ec.is_internal(src.id) and g.face(src.id).degree >= 7
                  and ec.is_good_five(dst.id) and adjacent(src.id, dst.id))
        else:
            ok = False
        if not ok:
            problems.append(f"{t.rule} transfer {src} -> {dst} of {Fraction(amount, 6)} breaks the rule")

    expected = dict(ledger.initial)
    for t in ledger.transfers:
        expected[t.source] -= t.amount
        expected[t.target] += t.amount
    for element in sorted(expected):
        if expected[element] != ledger.charge.get(element):
            problems.append(f"{element} ends at {ledger.charge.get(element)} sixths, log says {expected[element]}")
    return problems


def face_stats(g: PlaneGraph, e: Sequence[int] | None = None) -> list[FaceStats]:
    """
    For each internal face: t = incident normal 3-vertices, s = adjacent
    internal 3-faces counted per common edge.
    """
    g = _with_boundary(g, e)
    ec = ElementClass(g)
    stats = []
    for face in g.faces:
        if not ec.is_internal(face.id):
            continue
        t = sum(1 for v in face.vertices if ec.is_normal(v) and g.degree(v) == 3)
        s = sum(
            1 for other in ec.across(face)
            if other.id != face.id and ec.is_internal(other.id) and other.degree == 3
        )
        stats.append(FaceStats(face.id, face.degree, t, s))
    return stats


def corollary_violations(g: PlaneGraph, e: Sequence[int] | None = None) -> list[str]:
    """
    Faces breaking t <= d/2 or t + s <= d.

    Both bounds hold in graphs free of the reducible configurations; on
    other graphs the list is a diagnostic.
    """
    problems = []
    for st in face_stats(g, e):
        if 2 * st.t > st.degree:
            problems.append(f"f{st.face}: t = {st.t} exceeds d/2 = {Fraction(st.degree, 2)}")
        if st.t + st.s > st.degree:
            problems.append(f"f{st.face}: t + s = {st.t + st.s} exceeds d = {st.degree}")
    return problems


@dataclass(frozen=True)
class AuditReport:
    total: int
    charges: dict[Element, int]
    negative: tuple[tuple[Element, int], ...]
    transfers: tuple[Transfer, ...]
    case: CaseTag | None = None
    face_walks: dict[int, tuple[int, ...]] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def describe(self) -> str:
        lines = [f"total charge: {Fraction(self.total, 6)}"]
        if self.case is not None:
            lines.append(f"rules: {self.case.value}")
        if self.negative:
            lines.append("negative elements:")
            for element, value in self.negative:
                walk = f" {list(self.face_walks[element.id])}" if element.kind == "f" else ""
                lines.append(f"  {element}{walk}: {Fraction(value, 6)}")
        else:
            lines.append("no element ends negative")
        lines.extend(self.notes)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "case": self.case.value if self.case else None,
            "total": str(Fraction(self.total, 6)),
            "charges": {str(k): str(Fraction(v, 6)) for k, v in sorted(self.charges.items())},
            "negative": [str(k) for k, _ in self.negative],
            "faces": {f"f{k}": list(v) for k, v in sorted(self.face_walks.items())},
            "transfers": [t.to_dict() for t in self.transfers],
            "notes": list(self.notes),
        }


def audit_report(ledger: ChargeLedger, notes: Sequence[str] = ()) -> AuditReport:
    """Summarise a ledger: total, negative elements and the transfer log."""
    negative = tuple((k, v) for k, v in sorted(ledger.charge.items()) if v < 0)
    return AuditReport(
        ledger.total(),
        dict(ledger.charge),
        negative,
        tuple(ledger.transfers),
        ledger.case,
        dict(ledger.face_walks),
        tuple(notes),
    )


def audit(g: PlaneGraph, e: Sequence[int] | None, case: CaseTag) -> AuditReport:
    """Initial charges, rules for ``case`` and the report, in one call."""
    ledger = apply_rules(g, e, initial_charges(g, e), case)
    notes = corollary_violations(g, e)
    report = audit_report(ledger, notes)
    if report.total != 0:
        logger.error(f"Charge not conserved: total {Fraction(report.total, 6)}")
    return report
