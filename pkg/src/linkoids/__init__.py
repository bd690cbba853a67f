"""Exact invariants of multi-linkoid diagrams on the sphere and the plane.

Submodules:

    laurent   exact Laurent arithmetic in A and the lambda family
    diagram   combinatorial-map diagrams, parser, Reidemeister engine
    bracket   Kauffman bracket / ordered bracket state sums
    kbsm      skein-module normal forms over S2 and R2
    theta     generalized theta-graph lift of a multi-linkoid
    tcol      colored T-invariant of edge-colored spatial graphs
    oracle    independent recursive cross-check of the brackets
    corpus    bundled diagram files with frozen expected values
    cli       command-line interface (also `python -m linkoids.cli`)
"""

from .laurent import A, LAM, lam_pair, LaurentPoly, DELTA, MINUS_A3, parse_poly, serialize_poly

__all__ = [
    "A", "LAM", "lam_pair", "LaurentPoly", "DELTA", "MINUS_A3",
    "parse_poly", "serialize_poly",
]
