"""Exact combinatorics of 2-Segal sets built from rooted trees and graphs."""

from .forest import Flavour, RootedForest, parse_forest
from .simplicial import SimplicialSet, SimplicialMap, check_2segal_pullbacks, check_2segal_triangulations
from .tree_segal import build_XT
from .graph_segal import Graph, build_XG, parse_graph
from .umap import build_U, check_culf, check_relatively_segal
from .double_cat import extract, check_stable, check_pointed
from .hall import build_hall, multiply, is_commutative
from .operad import build_operad, check_invertible

__version__ = "0.1.0"

__all__ = [
    "Flavour", "RootedForest", "parse_forest",
    "SimplicialSet", "SimplicialMap", "check_2segal_pullbacks", "check_2segal_triangulations",
    "build_XT", "Graph", "build_XG", "parse_graph",
    "build_U", "check_culf", "check_relatively_segal",
    "extract", "check_stable", "check_pointed",
    "build_hall", "multiply", "is_commutative",
    "build_operad", "check_invertible",
]
