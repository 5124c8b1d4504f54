"""Knot diagrams: PD ingestion, J(2n,-2m) generation and side types.

A crossing stores its four segment ids counterclockwise as (A, B, C, D).
A and C are on the under strand, B and D on the over strand, and A is
always the incoming under-strand.  That is exactly the standard PD
convention, so PD slots map onto (A, B, C, D) by the identity for both
handednesses (``PD_SLOT_MAP``).
"""
import enum
import re
from dataclasses import dataclass

from .errors import NonAlternatingError, ParseError, StructuralError

# PD position -> potential slot, per handedness.
PD_SLOT_MAP = {+1: (0, 1, 2, 3), -1: (0, 1, 2, 3)}


class SideType(enum.IntEnum):
    TYPE_I = 1
    TYPE_II = -1


@dataclass(frozen=True)
class Crossing:
    slots: tuple
    handedness: int  # +1 positive, -1 negative


@dataclass(frozen=True)
class KnotDiagram:
    crossings: tuple
    num_segments: int
    side_types: tuple
    labels: tuple

    @property
    def slot_table(self):
        return [c.slots for c in self.crossings]


def _walk(slots):
    """Follow the strand from crossing 0 and return the incoming over slot per crossing.

    Raises on orientation clashes, non-alternation or extra components.
    """
    occ = {}
    for c, q in enumerate(slots):
        for i, s in enumerate(q):
            occ.setdefault(s, []).append((c, i))
    over_in = [None] * len(slots)
    c, i = 0, 0
    passes = 0
    while True:
        passes += 1
        if passes > 2 * len(slots):
            raise StructuralError("strand walk does not close")
        out = (i + 2) % 4
        seg = slots[c][out]
        a, b = occ[seg]
        c2, i2 = b if a == (c, out) else a
        if i2 == 2:
            raise StructuralError(
                f"segment {seg} leaves two crossings; slot A must be the incoming under-strand")
        if (i2 == 0) == (i == 0):
            raise NonAlternatingError(f"over/under fails to alternate at segment {seg}")
        if i2 in (1, 3):
            if over_in[c2] is not None and over_in[c2] != i2:
                raise StructuralError(f"crossing {c2} traversed twice on the over strand")
            over_in[c2] = i2
        c, i = c2, i2
        if (c, i) == (0, 0):
            break
    if passes != 2 * len(slots) or None in over_in:
        raise StructuralError("diagram has more than one component")
    return over_in


def _validate_counts(slots, n):
    counts = [0] * n
    for q in slots:
        if len(q) != 4:
            raise StructuralError("a crossing needs four slots")
        for s in q:
            if not 0 <= s < n:
                raise StructuralError(f"segment id {s} out of range")
            counts[s] += 1
    bad = [s for s, k in enumerate(counts) if k != 2]
    if bad:
        raise StructuralError(f"segments {bad} do not appear exactly twice")
    if n != 2 * len(slots):
        raise StructuralError("segment count must be twice the crossing count")


def classify_sides(slots):
    """Type I for the segment entering a crossing as under-strand, Type II otherwise."""
    if isinstance(slots, KnotDiagram):
        slots = slots.slot_table
    n = 2 * len(slots)
    types = [None] * n
    for q in slots:
        if types[q[0]] is not None:
            raise StructuralError(f"segment {q[0]} enters two crossings under")
        types[q[0]] = SideType.TYPE_I
    for q in slots:
        for s in (q[1], q[3]):
            if types[s] is None:
                types[s] = SideType.TYPE_II
    if None in types:
        raise StructuralError("unclassifiable segment")
    return tuple(types)


def make_diagram(slots, labels=None):
    slots = [tuple(int(s) for s in q) for q in slots]
    n = 2 * len(slots)
    if not slots:
        raise StructuralError("empty diagram")
    _validate_counts(slots, n)
    over_in = _walk(slots)
    crossings = tuple(Crossing(q, +1 if o == 3 else -1) for q, o in zip(slots, over_in))
    labels = tuple(labels) if labels is not None else tuple(str(k + 1) for k in range(n))
    return KnotDiagram(crossings, n, classify_sides(slots), labels)


_PD_LINE = re.compile(r"^X\s*\[?\s*(-?\d+)[\s,]+(-?\d+)[\s,]+(-?\d+)[\s,]+(-?\d+)\s*\]?$")


def parse_pd(text):
    """Parse lines ``X a b c d`` (1-based labels, PD convention)."""
    rows = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip().rstrip(",")
        if not line:
            continue
        mt = _PD_LINE.match(line)
        if not mt:
            raise ParseError(f"expected 'X a b c d', got {raw.strip()!r}", no)
        rows.append(tuple(int(g) for g in mt.groups()))
    if not rows:
        raise ParseError("no crossings found")
    names = sorted({s for q in rows for s in q})
    ids = {s: k for k, s in enumerate(names)}
    for s in names:
        k = sum(q.count(s) for q in rows)
        if k != 2:
            raise StructuralError(f"label {s} appears {k} times")
    slots = [tuple(ids[s] for s in q) for q in rows]
    # handedness is only known after the walk; both maps are the identity anyway
    perm = PD_SLOT_MAP[+1]
    slots = [tuple(q[p] for p in perm) for q in slots]
    return make_diagram(slots, [str(s) for s in names])


def emit(diagram):
    return "".join("X {} {} {} {}\n".format(*(s + 1 for s in c.slots)) for c in diagram.crossings)


def j_segment_labels(n, m):
    """Segment names of J(2n,-2m): z1..z_{4n+2}, then z'3..z'_{4m}."""
    N, Mp = 2 * n, 2 * m
    return [f"z{j}" for j in range(1, 2 * N + 3)] + [f"z'{j}" for j in range(3, 2 * Mp + 1)]


def j_type(j):
    """Side type of z_j (and z'_j) in the generated J diagram."""
    return SideType.TYPE_I if ((j + 1) // 2) % 2 == 0 else SideType.TYPE_II


def generate_j_diagram(n, m):
    """Diagram of J(2n,-2m): 2n vertical and 2m horizontal crossings.

    Vertical crossing k meets z_{2k-1}, z_{2k}, z_{2k+1}, z_{2k+2} and
    horizontal crossing k meets the primed segments with the same
    pattern, after the identifications z'_1 = z_{2N+1}, z'_2 = z_1,
    z'_{2M+1} = z_{2N+2}, z'_{2M+2} = z_2 (N = 2n, M = 2m).
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    N, Mp = 2 * n, 2 * m
    labels = j_segment_labels(n, m)
    ids = {name: k for k, name in enumerate(labels)}

    def v(j):
        return ids[f"z{j}"]

    def h(j):
        if j == 1:
            return v(2 * N + 1)
        if j == 2:
            return v(1)
        if j == 2 * Mp + 1:
            return v(2 * N + 2)
        if j == 2 * Mp + 2:
            return v(2)
        return ids[f"z'{j}"]

    raw = []
    for k in range(1, N + 1):
        raw.append(((v(2 * k), v(2 * k - 1), v(2 * k + 1), v(2 * k + 2)), 2 * k))
    for k in range(1, Mp + 1):
        raw.append(((h(2 * k + 1), h(2 * k - 1), h(2 * k), h(2 * k + 2)), None))
    want = []
    for name in labels:
        j = int(name.lstrip("z'"))
        want.append(j_type(j))
    slots = []
    for q, _ in raw:
        # rotate (A,B,C,D) -> (C,D,A,B) when C carries the Type I side; V is invariant
        slots.append(q if want[q[0]] == SideType.TYPE_I else (q[2], q[3], q[0], q[1]))
    d = make_diagram(slots, labels)
    if d.side_types != tuple(want):
        raise StructuralError("generated J diagram disagrees with its side-type pattern")
    return d


def faces(diagram):
    """Faces of the diagram as lists of (crossing, slot) corners.

    The corner (c, i) is the wedge between slots i and i+1 of crossing c.
    """
    slots = diagram.slot_table if isinstance(diagram, KnotDiagram) else diagram
    occ = {}
    for c, q in enumerate(slots):
        for i, s in enumerate(q):
            occ.setdefault(s, []).append((c, i))

    def other(c, i):
        a, b = occ[slots[c][i]]
        return b if a == (c, i) else a

    seen, out = set(), []
    for c in range(len(slots)):
        for i in range(4):
            if (c, i) in seen:
                continue
            f, cc, ii = [], c, i
            while (cc, ii) not in seen:
                seen.add((cc, ii))
                f.append((cc, ii))
                cc, ii = other(cc, (ii + 1) % 4)
            out.append(f)
    return out
