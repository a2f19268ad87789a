"""Reference counts and products, recomputed from scratch.

Each entry pairs an expected value with a function computing it; the
``reproduce`` command prints the table.  Entries are grouped by the
acceptance criterion they feed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Any, Callable

from .double_cat import census_double, extract
from .forest import (
    Flavour,
    admissible_subforests,
    canonical_code,
    lower_sets,
    parse_forest,
    path_tree,
    restrict,
    star_tree,
)
from .graph_segal import build_XG, graph_census, path_graph, star_graph
from .hall import build_hall, multiply
from .operad import build_operad
from .tree_segal import build_XT
from .umap import build_U, check_culf

EXAMPLE_TREE = "a(b(c),d(e))"
Y3 = "*(*(*,*))"
TWO_ARY = "*(*(*),*)"
CULF_COUNTEREXAMPLE = "b(a,c(d))"


@dataclass(frozen=True)
class Claim:
    criterion: int
    name: str
    expected: Any
    compute: Callable[[], Any]


def tree(expr: str, flavour: Flavour | str) -> Any:
    flavour = Flavour.coerce(flavour)
    if "*" in expr:
        return parse_forest(expr, Flavour.PLAIN).with_flavour(flavour)
    return parse_forest(expr, Flavour.LABELLED).with_flavour(flavour)


def lower_subtree_classes(expr: str, flavour: Flavour | str) -> int:
    T = tree(expr, flavour)
    return len({canonical_code(restrict(T, S), flavour) for S in lower_sets(T)})


def nonempty_admissible(expr: str) -> int:
    return sum(1 for S in admissible_subforests(tree(expr, "labelled")) if S)


@lru_cache(maxsize=None)
def tree_double(expr: str, flavour: str, N: int = 4):
    return extract(build_XT(tree(expr, flavour), flavour, N))


def y3_census(flavour: str, field: str, strict: bool = True, nonempty: bool = False) -> int:
    return census_double(tree_double(Y3, flavour), strict_only=strict, nonempty_objects=nonempty).as_dict()[field]


def path_census(n: int) -> tuple[int, int]:
    c = census_double(extract(build_XT(path_tree(n), "plain", 3)), strict_only=True)
    return c.objects, c.squares


def star_census(n: int) -> tuple[int, int]:
    D = extract(build_XT(star_tree(n), "plain", 3))
    return census_double(D).objects, census_double(D, nonempty_objects=True).morphisms


@lru_cache(maxsize=None)
def _graph(kind: str, labelled: bool, N: int):
    G = path_graph(["a", "b", "c"]) if kind == "path" else star_graph(3)
    return build_XG(G, labelled, N)


def graph_count(kind: str, labelled: bool, level: int, field: str) -> int:
    X = _graph(kind, labelled, max(level, 3))
    return graph_census(None, labelled, X=X).as_dict()[field][level]


def edge_fibres() -> tuple[int, int]:
    w = check_culf(build_U(parse_forest("a(b)"), "labelled", 2)).witness
    return w["source_fibre"], w["target_fibre"]


def y3_product(left: str, right: str) -> list[str]:
    X = build_XT(tree(Y3, "plain"), "plain", 2)
    H = build_hall(X)
    v = multiply(H, X.code_index(1, left), X.code_index(1, right))
    return sorted(f"{c}*{X.code(1, z)}" if c != 1 else X.code(1, z) for z, c in v.items())


def path_graph_products() -> int:
    """Nonzero products of two nonempty subgraphs, counted once per
    unordered pair."""
    H = build_hall(_graph("path", True, 3))
    pairs = {frozenset((a, b)) for (a, b) in H.products if H.unit not in (a, b)}
    return len(pairs)


def culf_counterexample() -> tuple[str, str]:
    T = parse_forest(CULF_COUNTEREXAMPLE)
    U = build_U(T, "labelled", 2)
    HT, HG = build_hall(U.source), build_hall(U.target)
    XT, XG = U.source, U.target
    b = XT.index(1, tuple(1 if v == "b" else 0 for v in (T.label(u) for u in T.vertices)))
    d = XT.index(1, tuple(1 if v == "d" else 0 for v in (T.label(u) for u in T.vertices)))
    in_tree = multiply(HT, b, d)
    in_graph = multiply(HG, int(U.components[1][b]), int(U.components[1][d]))
    show = lambda X, v: " + ".join(X.code(1, z) for z in sorted(v)) or "0"
    return show(XT, in_tree), show(XG, in_graph)


def largest_binary_set(expr: str, flavour: str) -> int:
    O = build_operad(build_XT(tree(expr, flavour), flavour, 2), 2)
    return max(len(v) for (ins, _), v in O.ops.items() if len(ins) == 2)


def _claims() -> list[Claim]:
    out = [
        Claim(1, "lower subtrees of a(b(c),d(e)), labelled", 10, lambda: lower_subtree_classes(EXAMPLE_TREE, "labelled")),
        Claim(1, "lower subtrees of a(b(c),d(e)), planar", 8, lambda: lower_subtree_classes(EXAMPLE_TREE, "planar")),
        Claim(1, "lower subtrees of a(b(c),d(e)), plain", 7, lambda: lower_subtree_classes(EXAMPLE_TREE, "plain")),
        Claim(2, "nonempty admissible subforests of a(b(c))", 6, lambda: nonempty_admissible("a(b(c))")),
        Claim(2, "nonempty admissible subforests of a(b,c)", 7, lambda: nonempty_admissible("a(b,c)")),
        Claim(5, "Y3 plain: objects", 7, lambda: y3_census("plain", "objects", strict=False)),
        Claim(5, "Y3 plain: strict squares", 3, lambda: y3_census("plain", "squares")),
        Claim(5, "Y3 planar: objects", 8, lambda: y3_census("planar", "objects", strict=False)),
        Claim(5, "Y3 planar: strict morphisms", 12, lambda: y3_census("planar", "hor")),
        Claim(5, "Y3 planar: strict squares", 4, lambda: y3_census("planar", "squares")),
        Claim(5, "Y3 labelled: objects", 13, lambda: y3_census("labelled", "objects", strict=False)),
        Claim(5, "Y3 labelled: strict morphisms", 14, lambda: y3_census("labelled", "hor")),
        Claim(5, "Y3 labelled: strict squares", 7, lambda: y3_census("labelled", "squares")),
    ]
    for n in range(3, 9):
        out.append(Claim(5, f"P{n}: objects, strict squares", (n + 1, comb(n, 3)), lambda n=n: path_census(n)))
    for n in range(2, 6):
        out.append(Claim(5, f"K1,{n}: objects, nonidentity hor+ver among nonempty",
                         (2 * n, 2 * comb(n + 1, 2) + 2 * n), lambda n=n: star_census(n)))
    out.append(Claim(5, "K1,3: nonidentity hor+ver among nonempty", 15, lambda: star_census(3)[1]))
    out += [
        Claim(7, "labelled path a-b-c: |X1|", 13, lambda: graph_count("path", True, 1, "totals")),
        Claim(7, "labelled path a-b-c: nondegenerate X2", 34, lambda: graph_count("path", True, 2, "nondegenerate")),
        Claim(7, "labelled path a-b-c: nondegenerate X3", 24, lambda: graph_count("path", True, 3, "nondegenerate")),
        Claim(7, "unlabelled K1,3: |X1|", 11, lambda: graph_count("star", False, 1, "totals")),
        Claim(7, "unlabelled K1,3: both parts nonempty in X2", 38,
              lambda: graph_count("star", False, 2, "all_parts_nonempty")),
        Claim(7, "unlabelled K1,3: nondegenerate X3", 55, lambda: graph_count("star", False, 3, "nondegenerate")),
        Claim(7, "unlabelled K1,3: nondegenerate X4", 4, lambda: graph_count("star", False, 4, "nondegenerate")),
        Claim(8, "labelled edge: fibres over H and U(H)", (3, 4), edge_fibres),
        Claim(9, "Y3 plain: 1_F1 * 1_P2", ["1(1(1()))"], lambda: y3_product("1()", "1(1())")),
        Claim(9, "Y3 plain: 1_P2 * 1_F1", ["1(1()1())", "1(1(1()))"], lambda: y3_product("1(1())", "1()")),
        Claim(9, "labelled path a-b-c: nonzero products of nonempty subgraphs", 8, path_graph_products),
        Claim(11, "planar 2ary tree: largest binary operation set", 2, lambda: largest_binary_set(TWO_ARY, "planar")),
        Claim(12, "1_{b} * 1_{d} in the tree and graph algebras", ("0", "{b:1 d:1}"), culf_counterexample),
    ]
    return out


def claims() -> list[Claim]:
    return _claims()


def reproduce(selected: list[int] | None = None) -> list[dict]:
    rows = []
    for c in claims():
        if selected and c.criterion not in selected:
            continue
        got = c.compute()
        rows.append({"criterion": c.criterion, "quantity": c.name, "expected": c.expected,
                     "computed": got, "match": got == c.expected})
    return rows


__all__ = ["Claim", "claims", "reproduce", "tree", "lower_subtree_classes", "nonempty_admissible",
           "EXAMPLE_TREE", "Y3", "TWO_ARY", "CULF_COUNTEREXAMPLE"]
