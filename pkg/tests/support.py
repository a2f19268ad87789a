"""Cached builders shared by the test modules."""

from __future__ import annotations

from functools import lru_cache

from twoseg.forest import all_rooted_trees
from twoseg.graph_segal import Graph, all_simple_graphs, build_XG, graph_from_edges, multi_edge
from twoseg.reference import tree
from twoseg.tree_segal import build_XT

FLAVOURS = ("labelled", "planar", "plain")


@lru_cache(maxsize=None)
def trees(max_vertices: int, flavour: str) -> tuple:
    return tuple(all_rooted_trees(max_vertices, flavour))


@lru_cache(maxsize=None)
def graphs(max_vertices: int) -> tuple[Graph, ...]:
    return tuple(all_simple_graphs(max_vertices))


def multigraphs() -> tuple[Graph, ...]:
    """Graphs on at most 4 vertices with parallel edges (up to 3)."""
    return (
        multi_edge(2),
        multi_edge(3),
        graph_from_edges([("a", "b"), ("a", "b"), ("b", "c")]),
        graph_from_edges([("a", "b"), ("b", "c"), ("b", "c"), ("b", "c")]),
        graph_from_edges([("a", "b"), ("a", "b"), ("b", "c"), ("c", "a")]),
        graph_from_edges([("a", "b"), ("a", "b"), ("c", "d"), ("c", "d"), ("c", "d")]),
        graph_from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c"), ("a", "c")]),
    )


_XT: dict = {}
_XG: dict = {}


def XT(T, flavour: str, N: int):
    key = (T.to_expression(), flavour, N)
    if key not in _XT:
        _XT[key] = build_XT(T, flavour, N)
    return _XT[key]


def XT_expr(expr: str, flavour: str, N: int):
    return XT(tree(expr, flavour), flavour, N)


def XG(G: Graph, labelled: bool, N: int):
    key = (G.to_text(), labelled, N)
    if key not in _XG:
        _XG[key] = build_XG(G, labelled, N)
    return _XG[key]


def graph_truncation(G: Graph) -> int:
    """Full depth for small graphs, level 3 for the five-vertex ones."""
    return 6 if G.n_vertices <= 4 else 3
