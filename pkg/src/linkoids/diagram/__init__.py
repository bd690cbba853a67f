from .cmap import CMap, CROSS, END, ANCHOR, NODE, Violation
from .linkoid import MultiLinkoidDiagram
from .parser import parse_diagram, serialize_diagram
from .moves import MoveSite, find_move_sites, apply_move, scramble

__all__ = [
    "CMap", "CROSS", "END", "ANCHOR", "NODE", "Violation",
    "MultiLinkoidDiagram", "parse_diagram", "serialize_diagram",
    "MoveSite", "find_move_sites", "apply_move", "scramble",
]
