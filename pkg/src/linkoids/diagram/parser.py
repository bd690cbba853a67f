"""Line-oriented text format for multi-linkoid diagrams.

Grammar (one statement per line, `#` starts a comment):

    surface S2|R2
    X a b c d        crossing; oriented segment labels counterclockwise,
                     a = incoming under-strand, so the under-strand runs a -> c
    T s k            segment s starts at a tail endpoint with label k
    H s k            segment s ends at a head endpoint with label k
    O s              crossingless closed component (single segment s)
    order vertex     interpret endpoint labels as vertex-ordered
    place s1 L|R s2 L|R   the face on the given side of s1 and the face on
                     the given side of s2 are the same region (placement of
                     disconnected pieces)
    outer s L|R      (R2 only) the unbounded face lies left/right of s

Each segment label names an oriented arc between two nodes and must occur
exactly twice (`O` segments once).  Over-strand directions at crossings are
recovered by propagating the one-in/one-out constraints; a closed component
that is nowhere an under-strand gets the deterministic fallback orientation
(its least segment's first written occurrence is the incoming one).
"""

from __future__ import annotations

from ..errors import DiagramSyntaxError, ValidationError
from .cmap import CMap, CROSS, END, ANCHOR, Violation
from .linkoid import MultiLinkoidDiagram


def parse_diagram(text, validated=True):
    surface = None
    mode = "ordered"
    xlines = []    # (lineno, (a,b,c,d))
    tlines = {}    # seg -> (lineno, label)
    hlines = {}
    olines = []    # (lineno, seg)
    places = []    # (lineno, s1, side1, s2, side2)
    outer = None   # (lineno, seg, side)

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        # several ;-separated statements may share a line
        stmts = [s.split() for s in line.split(";") if s.strip()]
        for parts in stmts:
            key = parts[0]
            try:
                if key == "surface":
                    if parts[1] not in ("S2", "R2"):
                        raise DiagramSyntaxError("unknown surface %r" % parts[1], ln)
                    surface = parts[1]
                elif key == "X":
                    if len(parts) != 5:
                        raise DiagramSyntaxError("X needs 4 segment labels", ln)
                    xlines.append((ln, tuple(int(p) for p in parts[1:])))
                elif key == "T":
                    s, k = int(parts[1]), int(parts[2])
                    if s in tlines:
                        raise DiagramSyntaxError("segment %d has two tails" % s, ln)
                    tlines[s] = (ln, k)
                elif key == "H":
                    s, k = int(parts[1]), int(parts[2])
                    if s in hlines:
                        raise DiagramSyntaxError("segment %d has two heads" % s, ln)
                    hlines[s] = (ln, k)
                elif key == "O":
                    olines.append((ln, int(parts[1])))
                elif key == "order":
                    if parts[1] != "vertex":
                        raise DiagramSyntaxError("only 'order vertex' is recognised", ln)
                    mode = "vertex"
                elif key == "place":
                    s1, side1, s2, side2 = parts[1:5]
                    if side1 not in "LR" or side2 not in "LR":
                        raise DiagramSyntaxError("place sides must be L or R", ln)
                    places.append((ln, int(s1), side1, int(s2), side2))
                elif key == "outer":
                    s, side = parts[1], parts[2]
                    if side not in "LR":
                        raise DiagramSyntaxError("outer side must be L or R", ln)
                    if outer is not None:
                        raise DiagramSyntaxError("duplicate outer line", ln)
                    outer = (ln, int(s), side)
                else:
                    raise DiagramSyntaxError("unknown statement %r" % key, ln)
            except (ValueError, IndexError):
                raise DiagramSyntaxError("malformed statement %r" % " ".join(parts), ln)

    if surface is None:
        raise DiagramSyntaxError("missing surface line", 1)
    if surface == "S2" and outer is not None:
        raise DiagramSyntaxError("outer line is only valid on R2", outer[0])

    # occurrence table: seg -> [(kind, xi, pos)]
    occs = {}

    def occ(seg, kind, xi=None, pos=None):
        occs.setdefault(seg, []).append((kind, xi, pos))

    for xi, (ln, (a, b, c, d)) in enumerate(xlines):
        for pos, s in enumerate((a, b, c, d)):
            occ(s, "X", xi, pos)
    for s, (ln, k) in tlines.items():
        occ(s, "T")
    for s, (ln, k) in hlines.items():
        occ(s, "H")
    oseen = set()
    for ln, s in olines:
        if s in occs or s in oseen:
            raise DiagramSyntaxError("O segment %d reused" % s, ln)
        oseen.add(s)

    for s, lst in occs.items():
        if len(lst) != 2:
            raise DiagramSyntaxError(
                "segment %d occurs %d times (need exactly 2)" % (s, len(lst)), 1)

    # in/out resolution.  status: occurrence index (seg, 0|1) -> 'in'/'out'
    status = {}
    work = []

    def set_status(seg, which, val):
        key = (seg, which)
        if key in status:
            if status[key] != val:
                raise DiagramSyntaxError(
                    "inconsistent orientation at segment %d" % seg, 1)
            return
        status[key] = val
        work.append(key)

    crossing_bd = {}  # xi -> [(seg, which) at pos1, (seg, which) at pos3]
    for seg, lst in occs.items():
        for which, (kind, xi, pos) in enumerate(lst):
            if kind == "X" and pos in (1, 3):
                crossing_bd.setdefault(xi, []).append(((seg, which), pos))
    for seg, lst in occs.items():
        for which, (kind, xi, pos) in enumerate(lst):
            if kind == "X" and pos == 0:
                set_status(seg, which, "in")
            elif kind == "X" and pos == 2:
                set_status(seg, which, "out")
            elif kind == "T":
                set_status(seg, which, "out")
            elif kind == "H":
                set_status(seg, which, "in")

    def propagate():
        while work:
            seg, which = work.pop()
            val = status[(seg, which)]
            other = 1 - which
            set_status(seg, other, "out" if val == "in" else "in")
            kind, xi, pos = occs[seg][which]
            if kind == "X" and pos in (1, 3):
                for (okey, opos) in crossing_bd.get(xi, ()):
                    if okey != (seg, which):
                        set_status(okey[0], okey[1],
                                   "out" if val == "in" else "in")

    propagate()
    while True:
        unresolved = sorted(s for s in occs
                            if (s, 0) not in status)
        if not unresolved:
            break
        s = unresolved[0]
        set_status(s, 0, "in")
        propagate()

    # build the map
    m = CMap()
    seg_darts = {}  # seg -> {which: dart}
    for xi, (ln, segs) in enumerate(xlines):
        v = m.new_vertex(CROSS)
        for pos, s in enumerate(segs):
            d = m.new_dart(v)
            which = occs[s].index(("X", xi, pos))
            seg_darts.setdefault(s, {})[which] = d
            if pos == 0:
                m.under_in[v] = d
    for s, (ln, k) in tlines.items():
        v = m.new_vertex(END)
        m.end_data[v] = ("tail", k)
        d = m.new_dart(v)
        which = occs[s].index(("T", None, None))
        seg_darts.setdefault(s, {})[which] = d
    for s, (ln, k) in hlines.items():
        v = m.new_vertex(END)
        m.end_data[v] = ("head", k)
        d = m.new_dart(v)
        which = occs[s].index(("H", None, None))
        seg_darts.setdefault(s, {})[which] = d

    seg_source = {}
    for s, dd in seg_darts.items():
        d0, d1 = dd[0], dd[1]
        m.pair(d0, d1)
        src = d0 if status[(s, 0)] == "out" else d1
        m.set_source(src)
        seg_source[s] = src

    for ln, s in olines:
        v = m.new_vertex(ANCHOR)
        p = m.new_dart(v)
        q = m.new_dart(v)
        m.pair(p, q)
        m.set_source(p)
        seg_source[s] = p

    m.init_regions()

    def side_dart(seg, side, ln):
        if seg not in seg_source:
            raise DiagramSyntaxError("unknown segment %d" % seg, ln)
        d = seg_source[seg]
        return d if side == "L" else m.theta[d]

    for ln, s1, side1, s2, side2 in places:
        m.merge_regions(side_dart(s1, side1, ln), side_dart(s2, side2, ln))

    # connect pieces the placement lines left unplaced: side by side
    _default_placement(m, seg_source)

    if outer is not None:
        ln, s, side = outer
        m.outer_mark = side_dart(s, side, ln)

    diagram = MultiLinkoidDiagram(m, surface=surface, ordering_mode=mode)
    if validated:
        violations = diagram.validate()
        if violations:
            raise ValidationError(violations)
    return diagram


def _default_placement(m, seg_source):
    if not m.dart_v:
        return
    pieces = m.pieces()
    if len(pieces) <= 1:
        return
    v_piece = {}
    for i, vs in enumerate(pieces):
        for v in vs:
            v_piece[v] = i
    # arrangement components: pieces sharing a region are connected
    parent = list(range(len(pieces)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in m.region_groups():
        ps = sorted({v_piece[m.dart_v[d]] for d in g})
        for a, b in zip(ps, ps[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

    default = {}
    for s in sorted(seg_source):
        d = seg_source[s]
        p = v_piece[m.dart_v[d]]
        default.setdefault(p, d)
    comps = {}
    for i in range(len(pieces)):
        comps.setdefault(find(i), []).append(i)
    ordered = sorted(comps.values(), key=lambda ps: min(default[p] for p in ps if p in default))
    base = None
    for group in ordered:
        rep_piece = min(p for p in group if p in default)
        if base is None:
            base = default[rep_piece]
            continue
        m.merge_regions(base, default[rep_piece])


# ----------------------------------------------------------------------
# canonical serialisation


def serialize_diagram(diagram):
    m = diagram.cmap
    comps = m.trace_components()
    opens = [c for c in comps if c[0] == "open"]
    closed = [c for c in comps if c[0] == "closed"]

    seg_no = {}       # dart (either end) -> segment number
    counter = [0]
    visit_order = []  # crossing vertices in first-visit order
    seen_cross = set()

    def walk(path):
        for d in path:
            counter[0] += 1
            seg_no[d] = counter[0]
            seg_no[m.theta[d]] = counter[0]
            v = m.dart_v[m.theta[d]]
            if m.vkind[v] == CROSS and v not in seen_cross:
                seen_cross.add(v)
                visit_order.append(v)
            v0 = m.dart_v[d]
            if m.vkind[v0] == CROSS and v0 not in seen_cross:
                seen_cross.add(v0)
                visit_order.append(v0)

    open_meta = []
    for kind, path in opens:
        tail_v = m.dart_v[path[0]]
        head_v = m.dart_v[m.theta[path[-1]]]
        open_meta.append((m.end_data[tail_v][1], m.end_data[head_v][1], path))
    open_meta.sort()
    for tl, hl, path in open_meta:
        walk(path)

    remaining = list(closed)
    while remaining:
        best = None
        for ci, (kind, path) in enumerate(remaining):
            is_circle = len(path) == 1 and m.vkind[m.dart_v[path[0]]] == ANCHOR
            starts = [0] if is_circle else range(len(path))
            for off in starts:
                rot = path[off:] + path[:off]
                key = _closed_key(m, rot, seg_no, counter[0])
                if best is None or key < best[0]:
                    best = (key, ci, rot)
        _, ci, rot = best
        remaining.pop(ci)
        walk(rot)

    lines = ["surface %s" % diagram.surface]
    if diagram.ordering_mode == "vertex":
        lines.append("order vertex")
    tl_lines = []
    hl_lines = []
    for tl, hl, path in open_meta:
        tl_lines.append("T %d %d" % (seg_no[path[0]], tl))
        hl_lines.append("H %d %d" % (seg_no[path[-1]], hl))
    lines += tl_lines + hl_lines
    for v in visit_order:
        frame = m.cross_frame(v)
        lines.append("X %s" % " ".join(str(seg_no[d]) for d in frame))
    for kind, path in comps:
        if kind == "closed" and len(path) == 1 and m.vkind[m.dart_v[path[0]]] == ANCHOR:
            lines.append("O %d" % seg_no[path[0]])

    lines += _placement_lines(m, seg_no)
    if diagram.surface == "R2" and m.outer_mark is not None:
        lines.append("outer %s" % _face_name(m, m.outer_mark, seg_no))
    return "\n".join(lines) + "\n"


def _closed_key(m, rot, seg_no, base):
    """Comparable signature for starting a closed component at rot[0]."""
    temp = {}
    key = []
    n = base
    for d in rot:
        n += 1
        temp[d] = n
        temp[m.theta[d]] = n
    for d in rot:
        v = m.dart_v[m.theta[d]]
        if m.vkind[v] == CROSS:
            frame = m.cross_frame(v)
            key.append(tuple(temp.get(x, seg_no.get(x, 10 ** 9)) for x in frame))
    return key


def _face_name(m, dart, seg_no):
    """Smallest (segment, side) naming the region of `dart`."""
    gi = m.region_index_of_dart(dart)
    best = None
    for d in m.region_groups()[gi]:
        if d not in seg_no:
            continue
        side = "L" if m.orient.get(d) == 1 else "R"
        cand = (seg_no[d], 0 if side == "L" else 1)
        if best is None or cand < best:
            best = cand
    if best is None:
        raise AssertionError("region with no named segment")
    return "%d %s" % (best[0], "L" if best[1] == 0 else "R")


def _placement_lines(m, seg_no):
    lines = []
    pieces = m.pieces()
    if len(pieces) <= 1:
        return lines
    v_piece = {}
    for i, vs in enumerate(pieces):
        for v in vs:
            v_piece[v] = i
    faces = m.faces()
    for g in sorted(m.region_groups(), key=lambda g: min(g)):
        fs = sorted({m.face_of(d) for d in g})
        if len(fs) < 2:
            continue
        names = sorted(_face_name(m, faces[f][0], seg_no).split() for f in fs)
        first = names[0]
        for other in names[1:]:
            lines.append("place %s %s %s %s" % (other[0], other[1], first[0], first[1]))
    return lines
