"""Kauffman bracket and ordered bracket polynomials by state-sum enumeration.

Every crossing is resolved into an A- or B-smoothing; a state's closed
curves each weigh delta = -A^2 - A^-2 and its open arcs weigh lambda (or
lambda_ij with the arc's endpoint labels i < j in the ordered version),
with the monomial A^(#A - #B) in front.  Closed-only diagrams therefore
evaluate to delta times the classical bracket: the 0-crossing unknot is
delta, not 1.  The smoothing convention is pinned by the positive kink,
whose bracket is -A^3 * lambda.
"""

from __future__ import annotations

import os
from multiprocessing import Pool

from .errors import CapacityError, IncompleteChoice, MissingOrdering
from .laurent import A, LAM, lam_pair, LaurentPoly, DELTA, MINUS_A3
from .diagram.cmap import CROSS, END, ANCHOR

BRACKET_CROSSING_CAP = 24


# ----------------------------------------------------------------------
# state tracing tables


class _Tables:
    """Static connectivity of a diagram, precomputed for fast state walks."""

    __slots__ = ("crossings", "pair_a", "pair_b", "out", "cross_of",
                 "static_circles", "static_arcs", "end_darts", "n_open")

    def __init__(self, diagram):
        m = diagram.cmap
        self.crossings = sorted(v for v, k in m.vkind.items() if k == CROSS)
        self.pair_a = []
        self.pair_b = []
        self.cross_of = {}
        for ci, c in enumerate(self.crossings):
            u, x, w, y = m.cross_frame(c)
            self.pair_a.append({u: x, x: u, w: y, y: w})
            self.pair_b.append({x: w, w: x, y: u, u: y})
            for d in (u, x, w, y):
                self.cross_of[d] = ci

        # walk outward from each crossing dart through anchors
        self.out = {}
        self.end_darts = []
        for d in self.cross_of:
            cur = m.theta[d]
            while True:
                v = m.dart_v[cur]
                kind = m.vkind[v]
                if kind == CROSS:
                    self.out[d] = ("x", cur)
                    break
                if kind == END:
                    self.out[d] = ("e", m.end_data[v][1])
                    break
                p, q = m.vdarts[v]
                cur = m.theta[q if cur == p else p]

        # crossing-free components
        self.static_circles = 0
        self.static_arcs = []
        seen = set()
        for v, (role, label) in sorted(m.end_data.items(), key=lambda kv: kv[1][1]):
            if role != "tail" or v in seen:
                continue
            d = m.vdarts[v][0]
            cur = m.theta[d]
            hit_cross = False
            while True:
                w = m.dart_v[cur]
                kind = m.vkind[w]
                if kind == CROSS:
                    hit_cross = True
                    break
                if kind == END:
                    seen.add(w)
                    self.static_arcs.append(frozenset((label, m.end_data[w][1])))
                    break
                p, q = m.vdarts[w]
                cur = m.theta[q if cur == p else p]
        for piece in m.pieces():
            if {m.vkind[v] for v in piece} == {ANCHOR}:
                self.static_circles += 1  # a 2-regular anchor piece is a circle

        self.n_open = diagram.n_open()


def _trace_state(tables, bits):
    """(circle count, tuple of arc endpoint-label frozensets) for one state."""
    pairs = [tables.pair_b[i] if (bits >> i) & 1 else tables.pair_a[i]
             for i in range(len(tables.crossings))]
    out = tables.out
    cross_of = tables.cross_of
    visited = set()
    arcs = []
    # arcs first: start from darts that lead to endpoints
    for d, o in out.items():
        if o[0] != "e" or d in visited:
            continue
        start_label = o[1]
        visited.add(d)
        cur = d
        while True:
            mate = pairs[cross_of[cur]][cur]
            visited.add(mate)
            nxt = out[mate]
            if nxt[0] == "e":
                arcs.append(frozenset((start_label, nxt[1])))
                break
            cur = nxt[1]
            visited.add(cur)
    circles = 0
    for d in out:
        if d in visited:
            continue
        circles += 1
        cur = d
        while cur not in visited:
            visited.add(cur)
            mate = pairs[cross_of[cur]][cur]
            visited.add(mate)
            nxt = out[mate]
            cur = nxt[1]
    return circles, arcs


# ----------------------------------------------------------------------
# crossingless diagrams (resolved states)


class CrossinglessDiagram:
    """A diagram with all crossings smoothed away.

    Holds the smoothed (unoriented) map plus the traced items: arcs as
    (labels frozenset, dart path) and circles as dart cycles.
    """

    def __init__(self, cmap, surface):
        self.cmap = cmap
        self.surface = surface
        self.arcs = []
        self.circles = []
        self._trace()

    def _trace(self):
        m = self.cmap
        visited = set()
        for v, (role, label) in sorted(m.end_data.items(), key=lambda kv: kv[1][1]):
            if role != "tail":
                continue
            d = m.vdarts[v][0]
            path = [d]
            visited.add(d)
            visited.add(m.theta[d])
            while True:
                nxt = m.through(m.theta[path[-1]])
                if nxt is None:
                    break
                path.append(nxt)
                visited.add(nxt)
                visited.add(m.theta[nxt])
            end_v = m.dart_v[m.theta[path[-1]]]
            labels = frozenset((label, m.end_data[end_v][1]))
            self.arcs.append((labels, path))
        for d0 in sorted(m.theta):
            if d0 in visited:
                continue
            path = [d0]
            visited.add(d0)
            visited.add(m.theta[d0])
            while True:
                nxt = m.through(m.theta[path[-1]])
                if nxt == d0:
                    break
                path.append(nxt)
                visited.add(nxt)
                visited.add(m.theta[nxt])
            self.circles.append(path)

    def counts(self):
        return len(self.circles), len(self.arcs)


def resolve_state(diagram, choice):
    """Smooth every crossing of the diagram according to `choice`.

    choice maps each crossing vertex id to 'A' or 'B' (a sequence over
    sorted crossing ids is also accepted).
    """
    crossings = diagram.crossings()
    if not isinstance(choice, dict):
        choice = dict(zip(crossings, choice))
    missing = [c for c in crossings if choice.get(c) not in ("A", "B")]
    if missing:
        raise IncompleteChoice("no smoothing chosen for crossings %r" % missing)
    m = diagram.cmap.clone()
    m.smooth_all({c: choice[c] for c in crossings}, keep_orient=False)
    return CrossinglessDiagram(m, diagram.surface)


# ----------------------------------------------------------------------
# the bracket polynomials


def _check_capacity(n):
    if n > BRACKET_CROSSING_CAP:
        raise CapacityError(
            "diagram has %d crossings; the state-sum cap is %d"
            % (n, BRACKET_CROSSING_CAP))


def _accumulate(tables, lo, hi, ordered):
    n = len(tables.crossings)
    acc = {}
    for bits in range(lo, hi):
        b = bin(bits).count("1")
        circles, arcs = _trace_state(tables, bits)
        circles += tables.static_circles
        if ordered:
            key = (n - 2 * b, circles,
                   tuple(sorted(tuple(sorted(a)) for a in arcs)))
        else:
            key = (n - 2 * b, circles)
        acc[key] = acc.get(key, 0) + 1
    return acc


def _merge(a, b):
    for k, v in b.items():
        a[k] = a.get(k, 0) + v
    return a


def _state_accumulator(diagram, ordered):
    tables = _Tables(diagram)
    n = len(tables.crossings)
    _check_capacity(n)
    threads = int(os.environ.get("LINKOID_THREADS", "1") or "1")
    total = 1 << n
    if threads > 1 and n >= 12:
        chunk = (total + threads - 1) // threads
        ranges = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
        with Pool(threads) as pool:
            parts = pool.starmap(_accumulate,
                                 [(tables, lo, hi, ordered) for lo, hi in ranges])
        acc = {}
        for p in parts:
            _merge(acc, p)
    else:
        acc = _accumulate(tables, 0, total, ordered)
    return tables, acc


def bracket(diagram):
    """Eq.-style state sum: sum_s A^(#A-#B) delta^(circles) lambda^(arcs)."""
    tables, acc = _state_accumulator(diagram, ordered=False)
    out = LaurentPoly.zero()
    delta_pow = {}
    for (apow, circles), count in sorted(acc.items()):
        if circles not in delta_pow:
            delta_pow[circles] = DELTA ** circles
        term = LaurentPoly.var(A, apow, count) if apow else LaurentPoly.const(count)
        out = out + term * delta_pow[circles]
    lam_count = tables.n_open
    if lam_count:
        out = out * LaurentPoly.var(LAM, lam_count)
    return out


def ordered_bracket(diagram):
    """As bracket, but each arc with endpoint labels i < j weighs lambda_ij."""
    labels = diagram.endpoint_labels()
    if len(set(labels)) != len(labels) or (labels and labels[0] < 1):
        raise MissingOrdering("endpoint labels do not define an ordering")
    tables, acc = _state_accumulator(diagram, ordered=True)
    static = LaurentPoly.const(1)
    for arc in tables.static_arcs:
        i, j = sorted(arc)
        static = static * LaurentPoly.var(lam_pair(i, j))
    out = LaurentPoly.zero()
    delta_pow = {}
    for (apow, circles, matching), count in sorted(acc.items()):
        if circles not in delta_pow:
            delta_pow[circles] = DELTA ** circles
        term = LaurentPoly.var(A, apow, count) if apow else LaurentPoly.const(count)
        term = term * delta_pow[circles]
        for i, j in matching:
            term = term * LaurentPoly.var(lam_pair(i, j))
        out = out + term
    return out * static


def normalized_bracket(diagram):
    return MINUS_A3 ** (-diagram.writhe()) * bracket(diagram)


def normalized_ordered_bracket(diagram):
    return MINUS_A3 ** (-diagram.writhe()) * ordered_bracket(diagram)
