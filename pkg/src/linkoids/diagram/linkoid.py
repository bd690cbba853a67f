"""Multi-linkoid diagrams: a combinatorial map plus surface and ordering data."""

from __future__ import annotations

from .cmap import CMap, CROSS, END, ANCHOR, NODE, Violation


class MultiLinkoidDiagram:
    """Immutable-by-convention diagram on S2 or R2.

    Operations elsewhere in the library never mutate a diagram they are
    given; they clone the map, operate on the clone and wrap it again.
    """

    def __init__(self, cmap, surface="S2", ordering_mode="ordered"):
        self.cmap = cmap
        self.surface = surface
        self.ordering_mode = ordering_mode

    def clone(self):
        return MultiLinkoidDiagram(self.cmap.clone(), self.surface, self.ordering_mode)

    # ------------------------------------------------------------------

    def crossings(self):
        return sorted(v for v, k in self.cmap.vkind.items() if k == CROSS)

    def components(self):
        return self.cmap.trace_components()

    def n_open(self):
        return sum(1 for r, _ in self.cmap.end_data.values() if r == "tail")

    def endpoint_labels(self):
        return sorted(lab for _, lab in self.cmap.end_data.values())

    def writhe(self):
        return sum(self.cmap.cross_sign(c) for c in self.crossings())

    def mirror(self):
        d = self.clone()
        for c in d.crossings():
            d.cmap.switch_crossing(c)
        return d

    def normalize(self):
        """Dissolve leftover 2-valent anchors except the one of a bare circle."""
        changed = True
        while changed:
            changed = False
            for v, k in list(self.cmap.vkind.items()):
                if k != ANCHOR:
                    continue
                p, q = self.cmap.vdarts[v]
                if self.cmap.theta[p] == q:
                    continue  # bare circle keeps its anchor
                self.cmap.unsubdivide(v)
                changed = True
        return self

    # ------------------------------------------------------------------

    def validate(self):
        v = list(self.cmap.validate_structure())
        if self.surface not in ("S2", "R2"):
            v.append(Violation("UnsupportedSurface", self.surface))
        if self.surface == "R2" and self.cmap.outer_mark is None and self.cmap.dart_v:
            v.append(Violation("MissingOuterFace"))
        if self.surface == "S2" and self.cmap.outer_mark is not None:
            v.append(Violation("OuterFaceOnSphere"))
        for vid, k in self.cmap.vkind.items():
            if k == NODE:
                v.append(Violation("GraphVertexInLinkoid", vid))

        labels = self.endpoint_labels()
        n2 = len(labels)
        seen = set()
        for lab in labels:
            if lab in seen:
                v.append(Violation("DuplicateEndpointLabel", lab))
            seen.add(lab)
        if labels and sorted(set(labels)) != list(range(1, n2 + 1)):
            if len(set(labels)) == n2:
                v.append(Violation("EndpointLabelsNotContiguous", labels))
        if v:
            return v

        comps = self.cmap.trace_components()
        covered = set()
        for kind, path in comps:
            for d in path:
                covered.add(d)
                covered.add(self.cmap.theta[d])
        if covered != set(self.cmap.dart_v):
            v.append(Violation("UntracedStrands"))
        if self.ordering_mode == "ordered":
            opens = []
            for kind, path in comps:
                if kind != "open":
                    continue
                tail = self.cmap.end_data[self.cmap.dart_v[path[0]]][1]
                head = self.cmap.end_data[self.cmap.dart_v[self.cmap.theta[path[-1]]]][1]
                opens.append((tail, head))
            opens.sort()
            for i, (tail, head) in enumerate(opens, 1):
                if tail != 2 * i - 1 or head != 2 * i:
                    v.append(Violation("OrderedLabelPattern", (tail, head)))
        return v

    # ------------------------------------------------------------------

    def to_text(self):
        from .parser import serialize_diagram
        return serialize_diagram(self)

    def isomorphic(self, other):
        return (self.surface == other.surface
                and self.ordering_mode == other.ordering_mode
                and self.cmap.isomorphic(other.cmap))

    def __repr__(self):
        return "<MultiLinkoidDiagram %s %d crossings, %d open>" % (
            self.surface, len(self.crossings()), self.n_open())
