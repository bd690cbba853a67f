"""Reidemeister-move rewriting engine.

Move kinds and their sites (locations are darts, so sites survive edits
elsewhere in the diagram):

    R1+ / R1-   apply: (d,)          kink of that sign on d's edge, loop in
                                     the face left of d
                inverse: (loop_dart,) removal of a kink of that sign
    FR1         apply: (d,)          two cancelling kinks on d's edge
                inverse: (l1, l2)    removal of an adjacent +/- kink pair
    R2          apply: (da, db, over) push da's strand across db's (they
                                     must bound a common region); over=1
                                     puts da's strand on top
                inverse: (d,)        removal of the bigon face left of d
    R3          apply: (d,)          slide: d is the triangle-face dart on
                                     the slider strand's edge (the slider is
                                     over or under both others); self-inverse

Endpoints are never moved: every site pattern is built from edges and
crossings only, so the forbidden moves cannot be expressed.
"""

from __future__ import annotations

import random

from ..errors import StaleSite
from .cmap import CROSS, END, ANCHOR
from .linkoid import MultiLinkoidDiagram


class MoveSite:
    __slots__ = ("kind", "direction", "location")

    def __init__(self, kind, direction, location):
        self.kind = kind
        self.direction = direction
        self.location = tuple(location)

    def __repr__(self):
        return "MoveSite(%r, %r, %r)" % (self.kind, self.direction, self.location)

    def __eq__(self, other):
        return (isinstance(other, MoveSite) and
                (self.kind, self.direction, self.location) ==
                (other.kind, other.direction, other.location))

    def __hash__(self):
        return hash((self.kind, self.direction, self.location))


# ----------------------------------------------------------------------
# pattern recognition helpers


def _region_is_bare(m, face_idx):
    """True if the face's region consists of that face alone (nothing hosted)."""
    darts = set(m.faces()[face_idx])
    gi = m.region_index_of_dart(next(iter(darts)))
    return set(m.region_groups()[gi]) == darts


def _kink_loops(m):
    """(crossing, loop_dart la) with sigma(la) = lb and theta(la) = lb."""
    out = []
    for c in sorted(m.vdarts):
        if m.vkind[c] != CROSS:
            continue
        for la in m.vdarts[c]:
            lb = m.sigma(la)
            if m.theta[la] == lb:
                out.append((c, la))
    return out


def _strand_over_at(m, c, dart):
    """Is dart's strand the over strand at crossing c?"""
    u = m.under_in[c]
    ds = m.vdarts[c]
    return dart != u and ds[(ds.index(u) + 2) % 4] != dart


def _incoming(m, darts):
    for d in darts:
        if m.orient[d] == -1:
            return d
    raise AssertionError("no incoming dart among %r" % (darts,))


# ----------------------------------------------------------------------
# site enumeration


def find_move_sites(diagram, kind, direction="apply"):
    m = diagram.cmap
    sites = []
    if kind in ("R1+", "R1-"):
        if direction == "apply":
            for d in sorted(m.theta):
                sites.append(MoveSite(kind, "apply", (d,)))
        else:
            want = 1 if kind == "R1+" else -1
            for c, la in _kink_loops(m):
                if m.cross_sign(c) != want:
                    continue
                if _region_is_bare(m, m.face_of(la)) and len(m.faces()[m.face_of(la)]) == 1:
                    sites.append(MoveSite(kind, "inverse", (la,)))
    elif kind == "FR1":
        if direction == "apply":
            for d in sorted(m.theta):
                sites.append(MoveSite(kind, "apply", (d,)))
        else:
            loops = dict(_kink_loops(m))
            loop_of = {c: la for c, la in _kink_loops(m)}
            for c1, la1 in sorted(loop_of.items()):
                # strand leaves c1 and immediately enters another kink c2
                for d in m.vdarts[c1]:
                    if m.theta[d] == m.sigma(d) or m.theta[m.sigma_inv(d)] == d:
                        continue  # loop darts
                    c2 = m.dart_v[m.theta[d]]
                    if c2 == c1 or c2 not in loop_of:
                        continue
                    la2 = loop_of[c2]
                    if m.cross_sign(c1) + m.cross_sign(c2) != 0:
                        continue
                    ok1 = _region_is_bare(m, m.face_of(la1)) and len(m.faces()[m.face_of(la1)]) == 1
                    ok2 = _region_is_bare(m, m.face_of(la2)) and len(m.faces()[m.face_of(la2)]) == 1
                    if ok1 and ok2 and (la2, la1) not in [s.location for s in sites]:
                        sites.append(MoveSite(kind, "inverse", (la1, la2)))
    elif kind == "R2":
        if direction == "apply":
            # the pushed strand and the strand pushed across may be two sides
            # of the same edge (the clasp of an arc with itself)
            region_of = {}
            for gi, g in enumerate(m.region_groups()):
                for d in g:
                    region_of[d] = gi
            darts = sorted(m.theta)
            for da in darts:
                for db in darts:
                    if region_of[da] != region_of[db]:
                        continue
                    for over in (0, 1):
                        sites.append(MoveSite("R2", "apply", (da, db, over)))
        else:
            for fi, f in enumerate(m.faces()):
                if len(f) != 2:
                    continue
                d1, d2 = f
                c1, c2 = m.dart_v[d1], m.dart_v[d2]
                if c1 == c2 or m.vkind[c1] != CROSS or m.vkind[c2] != CROSS:
                    continue
                if _strand_over_at(m, c1, d1) != _strand_over_at(m, c2, m.theta[d1]):
                    continue
                if not _region_is_bare(m, fi):
                    continue
                sites.append(MoveSite("R2", "inverse", (min(d1, d2),)))
    elif kind == "R3":
        for fi, f in enumerate(m.faces()):
            if len(f) != 3:
                continue
            if any(m.vkind[m.dart_v[d]] != CROSS for d in f):
                continue
            if len({m.dart_v[d] for d in f}) != 3:
                continue
            if not _region_is_bare(m, fi):
                continue
            for x1 in sorted(f):
                c1 = m.dart_v[x1]
                # slider strand = strand of edge(x1), passing c1 and c2
                x2 = m.sigma_inv(m.theta[x1])
                c2 = m.dart_v[x2]
                over1 = _strand_over_at(m, c1, x1)
                over2 = _strand_over_at(m, c2, m.theta[x1])
                if over1 == over2:
                    sites.append(MoveSite("R3", direction, (x1,)))
    else:
        raise ValueError("unknown move kind %r" % kind)
    return sites


# ----------------------------------------------------------------------
# surgeries


def _insert_kink(m, d, sign):
    anchor, mx = m.subdivide(d)
    my = [x for x in m.vdarts[anchor] if x != mx][0]
    fwd = m.orient[d] == 1
    pos = m.vdarts[anchor].index(mx)  # corner (my -> mx) = face left of d
    n1, n2 = m.add_edge((anchor, pos), (anchor, pos), src=1 if fwd else 2,
                        tag=m.tag_of(d))
    m.vkind[anchor] = CROSS
    if fwd:
        m.under_in[anchor] = mx if sign == 1 else n2
    else:
        m.under_in[anchor] = n1 if sign == 1 else my
    return anchor


def _remove_kink(m, la):
    c = m.dart_v[la]
    lb = m.sigma(la)
    outer = [d for d in m.vdarts[c] if d not in (la, lb)]
    o1, o2 = outer
    m.contract_vertices([c], {o1: o2, o2: o1})


def _r2_insert(m, da, db, over, flipped=False):
    tag_a = m.tag_of(da)
    flow_a = m.orient[da]  # +1: strand runs in da's pointing direction

    u_anchor, u_mx = m.subdivide(da)
    u_my = [x for x in m.vdarts[u_anchor] if x != u_mx][0]
    w_anchor, w_mx = m.subdivide(u_my)
    m.delete_edge(u_my)  # open the gap the finger will replace

    m_anchor, m_mx = m.subdivide(db)
    m_my = [x for x in m.vdarts[m_anchor] if x != m_mx][0]
    p_anchor, p_mx = m.subdivide(m_my)
    p_my = [x for x in m.vdarts[p_anchor] if x != p_mx][0]
    if flipped:
        # cross the two points of b in the opposite order along the finger
        # (needed for the nested, planar variant when a and b share an edge)
        m_anchor, m_mx, m_my, p_anchor, p_mx, p_my = \
            p_anchor, p_mx, p_my, m_anchor, m_mx, m_my

    # neck from u into the near side of b at m (corner (m_my -> m_mx));
    # hosted pieces must stay reachable from the return corner at p
    n_u, n_m = m.add_edge((u_anchor, 0),
                          (m_anchor, m.vdarts[m_anchor].index(m_mx)),
                          src=1 if flow_a == 1 else 2, tag=tag_a,
                          hosted_with=p_my)
    # tip across to p on the far side
    t_m, t_p = m.add_edge((m_anchor, m.vdarts[m_anchor].index(m_my)),
                          (p_anchor, m.vdarts[p_anchor].index(p_my)),
                          src=1 if flow_a == 1 else 2, tag=tag_a)
    # return neck from p's near side back to w
    n_p, n_w = m.add_edge((p_anchor, m.vdarts[p_anchor].index(p_mx)),
                          (w_anchor, 0),
                          src=1 if flow_a == 1 else 2, tag=tag_a)

    for c in (m_anchor, p_anchor):
        m.vkind[c] = CROSS
        b_darts = [x for x in m.vdarts[c] if x in (m_mx, m_my, p_mx, p_my)]
        a_darts = [x for x in m.vdarts[c] if x not in b_darts]
        under = b_darts if over else a_darts
        m.under_in[c] = _incoming(m, under)
    return m_anchor, p_anchor


def _r2_remove(m, d1):
    f = m.faces()[m.face_of(d1)]
    d1, d2 = f if f[0] == d1 else (f[1], f[0])
    c1, c2 = m.dart_v[d1], m.dart_v[d2]
    a1 = m.vdarts[c1][(m.vdarts[c1].index(d1) + 2) % 4]
    b1 = m.vdarts[c1][(m.vdarts[c1].index(d1) + 3) % 4]
    td1 = m.theta[d1]
    a2 = m.vdarts[c2][(m.vdarts[c2].index(td1) + 2) % 4]
    b2 = m.vdarts[c2][(m.vdarts[c2].index(d2) + 2) % 4]
    m.contract_vertices([c1, c2], {a1: a2, a2: a1, b1: b2, b2: b1})


def _r3_slide(m, x1):
    x2 = m.sigma_inv(m.theta[x1])
    x3 = m.sigma_inv(m.theta[x2])
    c1, c2, c3 = m.dart_v[x1], m.dart_v[x2], m.dart_v[x3]

    def at(c, d, k):
        ds = m.vdarts[c]
        return ds[(ds.index(d) + k) % 4]

    o1, p1 = at(c1, x1, 2), at(c1, x1, 3)
    o2, p2 = at(c2, x2, 2), at(c2, x2, 3)
    o3, p3 = at(c3, x3, 2), at(c3, x3, 3)

    # A = the slider, the strand of edge(x1); its darts are {theta(x1), p2}
    # at c2 and {x1, o1} at c1
    a_over_b = _strand_over_at(m, c2, m.theta[x1])
    a_over_c = _strand_over_at(m, c1, x1)
    tag_a = m.tag_of(x1)
    flow_a_fwd = m.orient[x1] == 1  # A runs c1 -> c2 along e3?

    u1_anchor, _ = m.subdivide(o1)
    u2_anchor, _ = m.subdivide(p2)
    c_in_c1 = at(c1, x1, 1)  # theta(x3): strand C passing c1
    m.contract_vertices(
        [c1, c2],
        {c_in_c1: p1, p1: c_in_c1, x2: o2, o2: x2},
        retract=(o1, p2),
    )
    # after contraction u1, u2 are one-dart stubs; B and C cross only at c3
    wb_anchor, wb_x = m.subdivide(p3)
    wb_y = [x for x in m.vdarts[wb_anchor] if x != wb_x][0]
    wc_anchor, wc_x = m.subdivide(o3)
    wc_y = [x for x in m.vdarts[wc_anchor] if x != wc_x][0]

    # A now runs u1 -> wb -> wc -> u2 if it used to run c1 -> c2.
    # Anything hosted in the split region must stay reachable from the
    # final attachment corner at wc.
    s = 1 if flow_a_fwd else 2
    neck1_u, neck1_b = m.add_edge((u1_anchor, 0),
                                  (wb_anchor, m.vdarts[wb_anchor].index(wb_x)),
                                  src=s, tag=tag_a, hosted_with=wc_x)
    tip_b, tip_c = m.add_edge((wb_anchor, m.vdarts[wb_anchor].index(wb_y)),
                              (wc_anchor, m.vdarts[wc_anchor].index(wc_x)),
                              src=s, tag=tag_a)
    neck2_c, neck2_u = m.add_edge((wc_anchor, m.vdarts[wc_anchor].index(wc_y)),
                                  (u2_anchor, 0),
                                  src=s, tag=tag_a)

    m.vkind[wb_anchor] = CROSS
    under = (wb_x, wb_y) if a_over_b else (neck1_b, tip_b)
    m.under_in[wb_anchor] = _incoming(m, under)
    m.vkind[wc_anchor] = CROSS
    under = (wc_x, wc_y) if a_over_c else (tip_c, neck2_c)
    m.under_in[wc_anchor] = _incoming(m, under)

    m.unsubdivide(u1_anchor)
    m.unsubdivide(u2_anchor)


# ----------------------------------------------------------------------
# applying moves


def _check(cond):
    if not cond:
        raise StaleSite("site no longer matches the diagram")


def apply_move(diagram, site):
    out = diagram.clone()
    m = out.cmap
    kind, direction, loc = site.kind, site.direction, site.location

    for d in loc[:2] if kind == "R2" and direction == "apply" else loc[:1]:
        _check(isinstance(d, int) and d in m.dart_v)

    if kind in ("R1+", "R1-"):
        sign = 1 if kind == "R1+" else -1
        if direction == "apply":
            _insert_kink(m, loc[0], sign)
        else:
            la = loc[0]
            c = m.dart_v[la]
            _check(m.vkind[c] == CROSS and m.theta[la] == m.sigma(la))
            _check(m.cross_sign(c) == sign)
            _check(_region_is_bare(m, m.face_of(la)) and len(m.faces()[m.face_of(la)]) == 1)
            _remove_kink(m, la)
    elif kind == "FR1":
        if direction == "apply":
            d = loc[0]
            anchor = _insert_kink(m, d, 1)
            # second, cancelling kink on the far half of the split edge
            far = None
            for x in m.vdarts[anchor]:
                tx = m.theta[x]
                if m.dart_v[tx] == anchor or tx == d:
                    continue  # loop darts / the half we came from
                far = x
            _insert_kink(m, far, -1)
        else:
            la1, la2 = loc
            for la, sign in ((la1, None), (la2, None)):
                _check(la in m.dart_v)
            c1, c2 = m.dart_v[la1], m.dart_v[la2]
            _check(c1 != c2 and m.vkind[c1] == CROSS and m.vkind[c2] == CROSS)
            _check(m.theta[la1] == m.sigma(la1) and m.theta[la2] == m.sigma(la2))
            _check(m.cross_sign(c1) + m.cross_sign(c2) == 0)
            for la in (la1, la2):
                _check(_region_is_bare(m, m.face_of(la)) and len(m.faces()[m.face_of(la)]) == 1)
            _remove_kink(m, la1)
            _remove_kink(m, la2)
    elif kind == "R2":
        if direction == "apply":
            da, db, over = loc
            _check(db in m.dart_v)
            _check(m.same_region(da, db))
            try:
                _r2_insert(m, da, db, over)
            except ValueError:
                out = diagram.clone()
                m = out.cmap
                try:
                    _r2_insert(m, da, db, over, flipped=True)
                except ValueError:
                    raise StaleSite("R2 site not realizable")
        else:
            d1 = loc[0]
            f = m.faces()[m.face_of(d1)]
            _check(len(f) == 2)
            d2 = f[0] if f[1] == d1 else f[1]
            c1, c2 = m.dart_v[d1], m.dart_v[d2]
            _check(c1 != c2 and m.vkind[c1] == CROSS and m.vkind[c2] == CROSS)
            _check(_strand_over_at(m, c1, d1) == _strand_over_at(m, c2, m.theta[d1]))
            _check(_region_is_bare(m, m.face_of(d1)))
            _r2_remove(m, d1)
    elif kind == "R3":
        x1 = loc[0]
        f = m.faces()[m.face_of(x1)]
        _check(len(f) == 3 and x1 in f)
        _check(all(m.vkind[m.dart_v[d]] == CROSS for d in f))
        _check(len({m.dart_v[d] for d in f}) == 3)
        _check(_region_is_bare(m, m.face_of(x1)))
        x2 = m.sigma_inv(m.theta[x1])
        _check(_strand_over_at(m, m.dart_v[x1], x1) ==
               _strand_over_at(m, m.dart_v[x2], m.theta[x1]))
        _r3_slide(m, x1)
    else:
        raise ValueError("unknown move kind %r" % kind)

    out.normalize()
    return out


# ----------------------------------------------------------------------
# scrambling


_UNFRAMED_MENU = [("R1+", "apply"), ("R1+", "inverse"), ("R1-", "apply"),
                  ("R1-", "inverse"), ("R2", "apply"), ("R2", "inverse"),
                  ("R3", "apply")]
_FRAMED_MENU = [("FR1", "apply"), ("FR1", "inverse"), ("R2", "apply"),
                ("R2", "inverse"), ("R3", "apply")]

_GROWTH = {("R1+", "apply"): 1, ("R1-", "apply"): 1,
           ("FR1", "apply"): 2, ("R2", "apply"): 2}


def scramble(diagram, steps, seed, framed=False, max_crossings=16):
    """Apply `steps` random applicable moves; framed excludes R1 kinks.

    Deterministic for a fixed seed.  Insertions that would push the crossing
    count past max_crossings are not offered, which keeps downstream state
    sums tractable.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rng = random.Random(seed)
    cur = diagram
    menu = _FRAMED_MENU if framed else _UNFRAMED_MENU
    for _ in range(steps):
        n = len(cur.crossings())
        options = []
        for kind, direction in menu:
            if n + _GROWTH.get((kind, direction), 0) > max_crossings:
                continue
            sites = find_move_sites(cur, kind, direction)
            if sites:
                options.append((kind, direction, sites))
        if not options:
            continue
        _, _, sites = options[rng.randrange(len(options))]
        site = sites[rng.randrange(len(sites))]
        cur = apply_move(cur, site)
    return cur
