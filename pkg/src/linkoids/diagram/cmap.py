"""Combinatorial maps: the planar substrate for linkoid and spatial-graph diagrams.

A map is a set of integer darts with

    theta   -- fixed-point-free involution pairing the two darts of each edge
    vdarts  -- per vertex, the incident darts in counterclockwise order

Conventions used throughout (all downstream code relies on them):

  * sigma(d) is the next dart counterclockwise around d's vertex.
  * Faces are the orbits of d -> sigma_inv(theta(d)); the orbit of d is the
    face to the LEFT of d (d points away from its vertex along its edge).
  * The corner between consecutive darts (p, sigma(p)) lies on face_of(p).
  * A crossing stores its incoming under-strand dart u; listing its darts
    counterclockwise from u as (u, x, w, y): the under-strand runs u -> w,
    the over-strand occupies x and y.  An A-smoothing joins {u,x} and {w,y},
    a B-smoothing joins {x,w} and {y,u}.  The crossing sign is +1 exactly
    when the over-strand comes in at y.
  * orient[d] = +1 if d is the source end of its edge, -1 for the target.

Vertex kinds: 'x' crossing (4 darts), 'e' endpoint (1 dart, tail or head),
'a' anchor (2 darts, an invisible joint used for bare circles and internal
surgery), 'g' spatial-graph vertex (any degree).

Pieces (connected components of the map) each embed in their own sphere;
how they sit relative to each other is the *region* partition: every local
face belongs to exactly one region of the arrangement, a region holds at
most one face of each piece, and the piece/region incidence graph is a
tree.  Surgeries rebuild the partition from dart witnesses, so regions
survive any sequence of local modifications.
"""

from __future__ import annotations

from .. import errors

CROSS, END, ANCHOR, NODE = "x", "e", "a", "g"


class Violation:
    """One validation failure, as data."""

    def __init__(self, kind, detail=None):
        self.kind = kind
        self.detail = detail

    def __str__(self):
        if self.detail is None:
            return self.kind
        return "%s(%s)" % (self.kind, self.detail)

    def __repr__(self):
        return str(self)

    def __eq__(self, other):
        return (isinstance(other, Violation)
                and (self.kind, self.detail) == (other.kind, other.detail))


class CMap:
    def __init__(self):
        self.theta = {}
        self.vdarts = {}      # vertex -> list of darts, ccw
        self.dart_v = {}
        self.vkind = {}
        self.under_in = {}    # crossing vertex -> incoming under dart
        self.end_data = {}    # endpoint vertex -> (role 'tail'|'head', label)
        self.orient = {}      # dart -> +1 source / -1 target
        self.edge_tag = {}    # min dart of edge -> arbitrary token
        self.outer_mark = None
        self._next_dart = 1
        self._next_vertex = 1
        self._region_groups = ()   # tuple of frozensets of darts
        self._faces = None
        self._face_of = None

    # ------------------------------------------------------------------
    # construction

    def clone(self):
        m = CMap.__new__(CMap)
        m.theta = dict(self.theta)
        m.vdarts = {v: list(ds) for v, ds in self.vdarts.items()}
        m.dart_v = dict(self.dart_v)
        m.vkind = dict(self.vkind)
        m.under_in = dict(self.under_in)
        m.end_data = dict(self.end_data)
        m.orient = dict(self.orient)
        m.edge_tag = dict(self.edge_tag)
        m.outer_mark = self.outer_mark
        m._next_dart = self._next_dart
        m._next_vertex = self._next_vertex
        m._region_groups = self._region_groups
        m._faces = self._faces
        m._face_of = self._face_of
        return m

    def new_vertex(self, kind):
        v = self._next_vertex
        self._next_vertex += 1
        self.vdarts[v] = []
        self.vkind[v] = kind
        return v

    def new_dart(self, v, pos=None):
        d = self._next_dart
        self._next_dart += 1
        if pos is None:
            self.vdarts[v].append(d)
        else:
            self.vdarts[v].insert(pos, d)
        self.dart_v[d] = v
        return d

    def pair(self, d1, d2):
        self.theta[d1] = d2
        self.theta[d2] = d1

    def set_source(self, d):
        self.orient[d] = 1
        self.orient[self.theta[d]] = -1

    def darts(self):
        return self.dart_v.keys()

    def edge_rep(self, d):
        return min(d, self.theta[d])

    def tag_of(self, d):
        return self.edge_tag.get(self.edge_rep(d))

    def set_tag(self, d, tag):
        self.edge_tag[self.edge_rep(d)] = tag

    # ------------------------------------------------------------------
    # permutations, faces, pieces

    def sigma(self, d):
        ds = self.vdarts[self.dart_v[d]]
        return ds[(ds.index(d) + 1) % len(ds)]

    def sigma_inv(self, d):
        ds = self.vdarts[self.dart_v[d]]
        return ds[ds.index(d) - 1]

    def _invalidate(self):
        self._faces = None
        self._face_of = None

    def faces(self):
        """Orbits of sigma_inv . theta; orbit of d = face left of d."""
        if self._faces is None:
            faces = []
            face_of = {}
            for d0 in sorted(self.dart_v):
                if d0 in face_of:
                    continue
                orbit = []
                d = d0
                while d not in face_of:
                    face_of[d] = len(faces)
                    orbit.append(d)
                    d = self.sigma_inv(self.theta[d])
                faces.append(tuple(orbit))
            self._faces = faces
            self._face_of = face_of
        return self._faces

    def face_of(self, d):
        self.faces()
        return self._face_of[d]

    def pieces(self):
        """Connected components as lists of vertex ids."""
        seen = set()
        out = []
        for v0 in sorted(self.vdarts):
            if v0 in seen:
                continue
            comp = []
            stack = [v0]
            seen.add(v0)
            while stack:
                v = stack.pop()
                comp.append(v)
                for d in self.vdarts[v]:
                    w = self.dart_v[self.theta[d]]
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(comp)
        return out

    def piece_of_faces(self):
        """face index -> piece index."""
        pieces = self.pieces()
        v_piece = {}
        for i, vs in enumerate(pieces):
            for v in vs:
                v_piece[v] = i
        return [v_piece[self.dart_v[f[0]]] for f in self.faces()], len(pieces)

    # ------------------------------------------------------------------
    # regions

    def init_regions(self):
        """Every face becomes its own region (correct for one-piece maps)."""
        self.faces()
        self._region_groups = tuple(frozenset(f) for f in self._faces)

    def region_groups(self):
        return self._region_groups

    def region_index_of_dart(self, d):
        for i, g in enumerate(self._region_groups):
            if d in g:
                return i
        raise KeyError(d)

    def same_region(self, d1, d2):
        return self.region_index_of_dart(d1) == self.region_index_of_dart(d2)

    def merge_regions(self, d1, d2):
        """Declare the faces of d1 and d2 to be the same arrangement region."""
        i, j = self.region_index_of_dart(d1), self.region_index_of_dart(d2)
        if i == j:
            return
        gs = list(self._region_groups)
        gi, gj = gs[i], gs[j]
        gs = [g for k, g in enumerate(gs) if k not in (i, j)]
        gs.append(gi | gj)
        self._region_groups = tuple(gs)

    def _rebuild_regions(self, old_groups, declarations=(), suppressed=()):
        """Recompute the region partition after a surgery.

        old_groups: the pre-surgery region dart-sets; surviving darts witness
        their region.  declarations: extra dart anchor-sets, each spanning one
        new region (used when a face split must not re-merge).  suppressed:
        indices into old_groups to ignore entirely.
        """
        self._invalidate()
        faces = self.faces()
        face_of = self._face_of
        n = len(faces)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        anchored = [False] * n
        anchor_sets = list(declarations)
        anchor_sets += [g for k, g in enumerate(old_groups) if k not in suppressed]
        for group in anchor_sets:
            fs = {face_of[d] for d in group if d in face_of}
            fs = sorted(fs)
            for f in fs:
                anchored[f] = True
            for a, b in zip(fs, fs[1:]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        if not all(anchored):
            missing = [i for i, a in enumerate(anchored) if not a]
            raise AssertionError("faces with no region witness: %r" % missing)
        groups = {}
        for i in range(n):
            groups.setdefault(find(i), set()).update(faces[i])
        self._region_groups = tuple(frozenset(g) for g in groups.values())

    def _snapshot(self):
        return self._region_groups

    def _preserve_outer(self, doomed):
        """Re-anchor the outer mark before the darts in `doomed` disappear."""
        if self.outer_mark is None or self.outer_mark not in doomed:
            return
        group = None
        for g in self._region_groups:
            if self.outer_mark in g:
                group = g
                break
        if group is not None:
            for d in sorted(group):
                if d not in doomed:
                    self.outer_mark = d
                    return
        self.outer_mark = None

    # ------------------------------------------------------------------
    # surgery atoms

    def corner_face(self, v, pos):
        """Face of the corner between vdarts[v][pos-1] and vdarts[v][pos]."""
        ds = self.vdarts[v]
        if not ds:
            raise ValueError("corner of bare vertex")
        return self.face_of(ds[(pos - 1) % len(ds)])

    def subdivide(self, d):
        """Insert a 2-valent anchor on d's edge; returns (vertex, dart_to_d_side)."""
        snap = self._snapshot()
        x = d
        y = self.theta[x]
        tag = self.tag_of(x)
        m = self.new_vertex(ANCHOR)
        mx = self.new_dart(m)
        my = self.new_dart(m)
        self.pair(x, mx)
        self.pair(my, y)
        ox = self.orient[x]
        self.orient[mx] = -ox
        self.orient[my] = ox
        if tag is not None:
            self.set_tag(x, tag)
            self.set_tag(my, tag)
        self._rebuild_regions(snap)
        return m, mx

    def unsubdivide(self, v):
        """Remove a 2-valent anchor, fusing its edges (not valid on a bare circle)."""
        p, q = self.vdarts[v]
        if self.theta[p] == q:
            raise ValueError("cannot unsubdivide a bare circle anchor")
        self.contract_vertices([v], {p: q, q: p})

    def add_edge(self, corner1, corner2, *, src=1, tag=None, loop_swap=False,
                 hosted_with=None):
        """Join two corners (same region) by a new edge; returns (n1, n2).

        corner = (vertex, pos) or ('new', kind) for a fresh pendant vertex.
        src: 1 or 2, which end is the edge's source.  When a face is split,
        every other piece hosted in its region (and the plane's point at
        infinity) stays on the side of `hosted_with` (a surviving dart of
        the split face; default: the n2 side).
        """
        snap = self._snapshot()
        fresh = []
        f1 = f2 = None
        if corner1[0] != "new":
            f1 = self.corner_face(*corner1)
        if corner2[0] != "new":
            f2 = self.corner_face(*corner2)
        if f1 is not None and f2 is not None:
            d1 = self.faces()[f1][0]
            d2 = self.faces()[f2][0]
            if not self.same_region(d1, d2):
                raise ValueError("add_edge corners not in a common region")
        old_face_darts = None
        old_region_idx = None
        split = f1 is not None and f1 == f2
        if split:
            old_face_darts = set(self.faces()[f1])
            old_region_idx = self.region_index_of_dart(next(iter(old_face_darts)))

        def make_end(corner, other_vertex_pos=None):
            if corner[0] == "new":
                v = self.new_vertex(corner[1])
                fresh.append(v)
                return self.new_dart(v)
            v, pos = corner
            return self.new_dart(v, pos)

        same_corner = (corner1 == corner2 and corner1[0] != "new")
        if same_corner:
            # insert so the ccw order inside the corner reads [n1, n2]
            v, pos = corner1
            if loop_swap:
                n1 = self.new_dart(v, pos)
                n2 = self.new_dart(v, pos)
            else:
                n2 = self.new_dart(v, pos)
                n1 = self.new_dart(v, pos)
        else:
            n1 = make_end(corner1)
            n2 = make_end(corner2)
        self.pair(n1, n2)
        self.set_source(n1 if src == 1 else n2)
        if tag is not None:
            self.set_tag(n1, tag)

        if split:
            group = snap[old_region_idx]
            hosted = set(group) - old_face_darts
            self._invalidate()
            w = hosted_with if hosted_with is not None else n2
            fw = self.face_of(w)
            if fw not in (self.face_of(n1), self.face_of(n2)):
                w = n2  # witness not on the split face: the choice is free
                fw = self.face_of(w)
            other_dart = n2 if fw == self.face_of(n1) else n1
            if self.outer_mark is not None and self.outer_mark in group:
                if self.outer_mark in old_face_darts:
                    self.outer_mark = w
            self._rebuild_regions(snap, declarations=[{w} | hosted, {other_dart}],
                                  suppressed={old_region_idx})
        else:
            self._rebuild_regions(snap)
        return n1, n2

    def delete_edge(self, d):
        snap = self._snapshot()
        y = self.theta[d]
        doomed = {d, y}
        self._preserve_outer(doomed)
        for z in (d, y):
            v = self.dart_v[z]
            self.vdarts[v].remove(z)
            del self.dart_v[z]
            self.orient.pop(z, None)
            if not self.vdarts[v]:
                del self.vdarts[v]
                del self.vkind[v]
                self.under_in.pop(v, None)
                self.end_data.pop(v, None)
        del self.theta[d]
        del self.theta[y]
        self.edge_tag.pop(min(d, y), None)
        self._rebuild_regions(snap)

    def contract_vertices(self, vids, passthrough, retract=()):
        """Remove vertices, reconnecting strands along `passthrough` pairs.

        passthrough maps darts of the removed vertices to the dart their
        strand continues through; edges lost entirely inside the removed set
        vanish; strands closing up with no surviving vertex become bare
        circle anchors.  A removed dart listed in `retract` has its whole
        edge deleted even though the far end survives (the far vertex keeps
        its other darts); any other removed dart must either be in
        passthrough or lose its edge inside the removed set.
        """
        snap = self._snapshot()
        vids = set(vids)
        removed = {d for v in vids for d in self.vdarts[v]}
        self._preserve_outer(removed)
        tags = {d: self.tag_of(d) for d in removed if self.theta.get(d) is not None}

        retract_far = []
        for d in retract:
            far = self.theta[d]
            if far not in removed:
                retract_far.append(far)
        self._preserve_outer(removed | set(retract_far))

        retract = set(retract)
        for d in removed:
            if d not in passthrough and d not in retract and self.theta[d] not in removed:
                raise AssertionError("dart %d has a surviving edge but no continuation" % d)

        new_edges = []
        circles = []
        seen = set()
        for d in sorted(removed):
            if d in seen or d not in passthrough:
                continue
            # walk outward in both directions from this passthrough pair
            chain = [d, passthrough[d]]
            seen.update(chain)
            tag = tags.get(d)

            def extend(end):
                nonlocal tag
                while True:
                    far = self.theta[end]
                    if far not in removed:
                        return far
                    if tags.get(far) is not None:
                        tag = tags[far]
                    if far not in passthrough:
                        return None  # dangling: edge consumed
                    seen.add(far)
                    nxt = passthrough[far]
                    if nxt in seen:
                        return "cycle"
                    seen.add(nxt)
                    end = nxt

            a = extend(chain[0])
            if a == "cycle":
                circles.append(tag)
                continue
            b = extend(chain[1])
            if a is None or b is None:
                continue
            new_edges.append((a, b, tags.get(d)))

        for v in vids:
            for z in self.vdarts[v]:
                del self.dart_v[z]
                self.orient.pop(z, None)
                other = self.theta.get(z)
                if other is not None:
                    self.edge_tag.pop(min(z, other), None)
                    del self.theta[z]
                    if other in removed:
                        self.theta.pop(other, None)
            del self.vdarts[v]
            del self.vkind[v]
            self.under_in.pop(v, None)
            self.end_data.pop(v, None)
        for far in retract_far:
            fv = self.dart_v[far]
            self.vdarts[fv].remove(far)
            del self.dart_v[far]
            self.orient.pop(far, None)
            self.theta.pop(far, None)
            if not self.vdarts[fv]:
                del self.vdarts[fv]
                del self.vkind[fv]
                self.under_in.pop(fv, None)
                self.end_data.pop(fv, None)

        for a, b, tag in new_edges:
            oa = self.orient.get(a)
            self.theta[a] = b
            self.theta[b] = a
            if oa is not None:
                self.orient[b] = -oa
            if tag is not None:
                self.set_tag(a, tag)
        for tag in circles:
            m = self.new_vertex(ANCHOR)
            p = self.new_dart(m)
            q = self.new_dart(m)
            self.pair(p, q)
            self.set_source(p)
            if tag is not None:
                self.set_tag(p, tag)
        self._rebuild_regions(snap)

    def smooth_all(self, choices, keep_orient=False):
        """Replace each crossing by its A- or B-smoothing anchors (one rebuild).

        choices: dict crossing-vertex -> 'A' | 'B'.
        """
        snap = self._snapshot()
        for c, kind in choices.items():
            u = self.under_in[c]
            ds = self.vdarts[c]
            i = ds.index(u)
            u, x, w, y = ds[i:] + ds[:i]
            if kind == "A":
                pairs = [(u, x), (w, y)]
            else:
                pairs = [(x, w), (y, u)]
            del self.vdarts[c], self.vkind[c], self.under_in[c]
            for p, q in pairs:
                m = self.new_vertex(ANCHOR)
                self.vdarts[m] = [p, q]
                self.dart_v[p] = m
                self.dart_v[q] = m
                if keep_orient:
                    if self.orient[p] == self.orient[q]:
                        raise AssertionError("smoothing breaks orientation")
        self._rebuild_regions(snap)

    def smooth_crossing(self, c, kind, keep_orient=True):
        self.smooth_all({c: kind}, keep_orient=keep_orient)

    # ------------------------------------------------------------------
    # crossings

    def cross_frame(self, c):
        """(u, x, w, y): darts ccw from the incoming under dart."""
        u = self.under_in[c]
        ds = self.vdarts[c]
        i = ds.index(u)
        return tuple(ds[i:] + ds[:i])

    def cross_sign(self, c):
        u, x, w, y = self.cross_frame(c)
        if self.orient[y] == -1 and self.orient[x] == 1:
            return 1
        if self.orient[x] == -1 and self.orient[y] == 1:
            return -1
        raise AssertionError("inconsistent over-strand orientation at %r" % c)

    def switch_crossing(self, c):
        """Swap over and under strands (mirror building block)."""
        u, x, w, y = self.cross_frame(c)
        self.under_in[c] = x if self.orient[x] == -1 else y

    # ------------------------------------------------------------------
    # strand walking

    def through(self, arrival):
        """Continue a strand through the vertex the dart `arrival` points at.

        Returns the outgoing dart, or None at endpoints and graph nodes.
        """
        v = self.dart_v[arrival]
        kind = self.vkind[v]
        if kind == CROSS:
            ds = self.vdarts[v]
            return ds[(ds.index(arrival) + 2) % 4]
        if kind == ANCHOR:
            p, q = self.vdarts[v]
            return q if arrival == p else p
        return None

    def trace_components(self):
        """Oriented strands: list of (kind, [source darts in travel order]).

        kind 'open' runs tail to head; 'closed' components are cycles, taken
        in orientation order, starting at their least source dart.
        """
        used = set()
        out = []
        tails = []
        for v, (role, label) in self.end_data.items():
            if role == "tail":
                tails.append((label, v))
        for _, v in sorted(tails):
            d = self.vdarts[v][0]
            path = []
            while True:
                path.append(d)
                used.add(d)
                used.add(self.theta[d])
                nxt = self.through(self.theta[d])
                if nxt is None:
                    break
                d = nxt
            out.append(("open", path))
        for d0 in sorted(self.theta):
            if d0 in used or self.orient.get(d0) != 1:
                continue
            if self.vkind[self.dart_v[d0]] == NODE:
                continue
            d = d0
            path = []
            closed = True
            while True:
                path.append(d)
                used.add(d)
                used.add(self.theta[d])
                nxt = self.through(self.theta[d])
                if nxt is None:
                    closed = False
                    break
                d = nxt
                if d == d0:
                    break
            if closed:
                out.append(("closed", path))
        return out

    # ------------------------------------------------------------------
    # validation

    def validate_structure(self):
        v = []
        for d, e in self.theta.items():
            if e == d:
                v.append(Violation("ThetaFixedPoint", d))
            if self.theta.get(e) != d:
                v.append(Violation("ThetaNotInvolution", d))
        if set(self.theta) != set(self.dart_v):
            v.append(Violation("UnpairedDarts",
                               sorted(set(self.dart_v) ^ set(self.theta))))
        for vid, ds in self.vdarts.items():
            kind = self.vkind[vid]
            for d in ds:
                if self.dart_v.get(d) != vid:
                    v.append(Violation("DartVertexMismatch", d))
            if kind == CROSS:
                if len(ds) != 4:
                    v.append(Violation("CrossingDegree", vid))
                u = self.under_in.get(vid)
                if u not in ds:
                    v.append(Violation("MissingUnderIn", vid))
                elif self.orient.get(u) != -1:
                    v.append(Violation("UnderInNotIncoming", vid))
            elif kind == END:
                if len(ds) != 1:
                    v.append(Violation("EndpointDegree", vid))
                role, _ = self.end_data.get(vid, (None, None))
                want = 1 if role == "tail" else -1
                if ds and self.orient.get(ds[0]) != want:
                    v.append(Violation("EndpointOrientation", vid))
            elif kind == ANCHOR:
                if len(ds) != 2:
                    v.append(Violation("AnchorDegree", vid))
        for d in self.theta:
            if self.orient.get(d, 0) + self.orient.get(self.theta[d], 0) != 0:
                v.append(Violation("OrientationMismatch", d))
                break
        if v:
            return v

        # Euler per piece
        piece_of_face, npieces = self.piece_of_faces()
        v_piece = {}
        for i, vs in enumerate(self.pieces()):
            for vert in vs:
                v_piece[vert] = i
        V = [0] * npieces
        E = [0] * npieces
        F = [0] * npieces
        for vert, p in v_piece.items():
            V[p] += 1
        for d in self.theta:
            if d < self.theta[d]:
                E[v_piece[self.dart_v[d]]] += 1
        for f, p in enumerate(piece_of_face):
            F[p] += 1
        for p in range(npieces):
            if V[p] - E[p] + F[p] != 2:
                v.append(Violation("NonSpherical", p))

        # regions partition the faces; tree condition
        faces = self.faces()
        seen_faces = set()
        incidences = 0
        adj = {}
        for ri, g in enumerate(self._region_groups):
            pieces_here = set()
            for fi, f in enumerate(faces):
                if f[0] in g:
                    if fi in seen_faces:
                        v.append(Violation("FaceInTwoRegions", fi))
                    seen_faces.add(fi)
                    p = piece_of_face[fi]
                    if p in pieces_here:
                        v.append(Violation("RegionTouchesPieceTwice", (ri, p)))
                    pieces_here.add(p)
                    incidences += 1
            for p in pieces_here:
                adj.setdefault(("p", p), set()).add(("r", ri))
                adj.setdefault(("r", ri), set()).add(("p", p))
        if len(seen_faces) != len(faces):
            v.append(Violation("FaceWithoutRegion",
                               sorted(set(range(len(faces))) - seen_faces)))
        nodes = npieces + len(self._region_groups)
        if self.dart_v and incidences != nodes - 1:
            v.append(Violation("RegionGraphNotTree"))
        elif self.dart_v:
            start = next(iter(adj), None)
            if start is not None:
                seen = {start}
                stack = [start]
                while stack:
                    for nb in adj.get(stack.pop(), ()):
                        if nb not in seen:
                            seen.add(nb)
                            stack.append(nb)
                if len(seen) != nodes:
                    v.append(Violation("RegionGraphNotTree"))
        return v

    # ------------------------------------------------------------------
    # isomorphism (labels, kinds, under/over, orientation and regions)

    def isomorphic(self, other):
        if len(self.dart_v) != len(other.dart_v):
            return False
        if len(self.vdarts) != len(other.vdarts):
            return False
        if sorted(self.vkind.values()) != sorted(other.vkind.values()):
            return False
        if sorted(self.end_data.values()) != sorted(other.end_data.values()):
            return False

        def piece_darts(m):
            out = []
            for vs in m.pieces():
                out.append(sorted(d for v in vs for d in m.vdarts[v]))
            return out

        def extend(m1, m2, mapping, seeds):
            stack = list(seeds)
            while stack:
                a, b = stack.pop()
                if a in mapping:
                    if mapping[a] != b:
                        return False
                    continue
                if b in mapping.values():
                    return False
                va, vb = m1.dart_v[a], m2.dart_v[b]
                if m1.vkind[va] != m2.vkind[vb]:
                    return False
                if len(m1.vdarts[va]) != len(m2.vdarts[vb]):
                    return False
                if m1.orient.get(a) != m2.orient.get(b):
                    return False
                if m1.vkind[va] == CROSS:
                    if (m1.under_in[va] == a) != (m2.under_in[vb] == b):
                        return False
                if m1.vkind[va] == END and m1.end_data[va] != m2.end_data[vb]:
                    return False
                if m1.tag_of(a) != m2.tag_of(b):
                    return False
                mapping[a] = b
                stack.append((m1.theta[a], m2.theta[b]))
                stack.append((m1.sigma(a), m2.sigma(b)))
            return True

        p1 = piece_darts(self)
        p2 = piece_darts(other)
        if sorted(map(len, p1)) != sorted(map(len, p2)):
            return False

        def match_pieces(idx, mapping, used):
            if idx == len(p1):
                return self._regions_match(other, mapping)
            seed_a = p1[idx][0]
            if any(seed_a in m for m in [mapping]) and seed_a in mapping:
                return match_pieces(idx + 1, mapping, used)
            for j, cand in enumerate(p2):
                if j in used or len(cand) != len(p1[idx]):
                    continue
                for seed_b in cand:
                    trial = dict(mapping)
                    if extend(self, other, trial, [(seed_a, seed_b)]):
                        if match_pieces(idx + 1, trial, used | {j}):
                            return True
            return False

        return match_pieces(0, {}, set())

    def _regions_match(self, other, mapping):
        mine = {frozenset(mapping[d] for d in g) for g in self._region_groups}
        theirs = set(other._region_groups)
        if mine != theirs:
            return False
        if (self.outer_mark is None) != (other.outer_mark is None):
            return False
        if self.outer_mark is not None:
            my_outer = {mapping[d] for d in self._outer_group()}
            their_outer = set(other._outer_group())
            if my_outer != their_outer:
                return False
        return True

    def _outer_group(self):
        for g in self._region_groups:
            if self.outer_mark in g:
                return g
        raise AssertionError("outer mark lost")
