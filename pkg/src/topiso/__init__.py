"""Mekler groups, their finite quotients, graph recovery, coset structures
and trees of partial injections."""
from .graphs import Graph, cycle_graph, is_nice, parse_graph, petersen_graph
from .mekler import GroupElement, MeklerGroup, commutator, inverse, multiply

__all__ = [
    "Graph",
    "GroupElement",
    "MeklerGroup",
    "commutator",
    "cycle_graph",
    "inverse",
    "is_nice",
    "multiply",
    "parse_graph",
    "petersen_graph",
]
__version__ = "0.1.0"
