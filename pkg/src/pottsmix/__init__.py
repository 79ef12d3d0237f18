"""Heat-bath, Swendsen-Wang and dual-graph modified Swendsen-Wang dynamics for
the Potts model, with exact transition matrices and spectral-gap checks."""

__version__ = "0.1.0"

from .graph import (
    ComponentLabeling,
    DualMap,
    Graph,
    GraphError,
    build_dual_square_lattice,
    build_square_lattice,
    build_tree_dual,
    connected_components,
    cycle_graph,
    dual_rc_state,
    max_degree,
    path_graph,
    star_graph,
)
from .model import CapExceededError, ModelParams, exact_distribution
from .rng import RngStream

__all__ = [
    "CapExceededError",
    "ModelParams",
    "RngStream",
    "exact_distribution",
    "ComponentLabeling",
    "DualMap",
    "Graph",
    "GraphError",
    "build_dual_square_lattice",
    "build_square_lattice",
    "build_tree_dual",
    "connected_components",
    "cycle_graph",
    "dual_rc_state",
    "max_degree",
    "path_graph",
    "star_graph",
]
