"""Exact solvers and certificates for the eternal vertex cover game.

The package decides whether a graph is Spartan (eternal vertex cover number
equals minimum vertex cover number) through a matching-based fixpoint over
minimum covers, computes the eternal vertex cover number exactly with an
independent safety-game solver, and emits machine-checkable certificates for
every necessary condition it evaluates.
"""

from .covers import enumerate_min_vcs, mvc
from .decider import is_spartan, spartan_fixpoint
from .errors import (
    EvckitError,
    GraphFormatError,
    IntegrityError,
    PreconditionError,
    ResourceLimitError,
    ValidationError,
)
from .game import evc, solve_guard_game
from .graph import (
    Graph,
    OddCycle,
    bipartition,
    connected_components,
    cut_vertices,
    parse_edge_list,
    parse_json_graph,
    serialize_edge_list,
)
from .matching import max_matching

__all__ = [
    "EvckitError",
    "Graph",
    "GraphFormatError",
    "IntegrityError",
    "OddCycle",
    "PreconditionError",
    "ResourceLimitError",
    "ValidationError",
    "bipartition",
    "connected_components",
    "cut_vertices",
    "enumerate_min_vcs",
    "evc",
    "is_spartan",
    "max_matching",
    "mvc",
    "parse_edge_list",
    "parse_json_graph",
    "serialize_edge_list",
    "solve_guard_game",
    "spartan_fixpoint",
]

__version__ = "0.1.0"
