"""Acceptance criteria 1-13.

Every check prints one PASS/FAIL line, records itself for the per-criterion
summary printed at the end of the run, and asserts the criterion exactly as
stated (including the 10 second budget per named check).

Run directly with ``python tests/test_acceptance.py`` or through pytest.
"""

from __future__ import annotations

import functools
import itertools
import random
import sys
import time
from dataclasses import dataclass
from math import comb

import networkx as nx
import numpy as np
import pytest

from support import FLAVOURS, XG, XT, XT_expr, graph_truncation, graphs, multigraphs, trees
from twoseg.double_cat import check_pointed, check_stable, extract
from twoseg.forest import canonical_code, layered_code, parse_forest, path_tree, relabel
from twoseg.graph_segal import GraphModel, find_element, graph_from_edges, graph_census, path_graph
from twoseg.hall import (
    build_hall,
    check_algebra_laws,
    coefficients_in,
    graph_hall_rules,
    induced_hom,
    is_commutative,
    multiply,
)
from twoseg.operad import OperadError, build_operad, check_invertible, compositions
from twoseg.reference import (
    CULF_COUNTEREXAMPLE,
    EXAMPLE_TREE,
    TWO_ARY,
    Y3,
    culf_counterexample,
    edge_fibres,
    largest_binary_set,
    lower_subtree_classes,
    nonempty_admissible,
    path_census,
    star_census,
    tree,
    y3_census,
    y3_product,
)
from twoseg.simplicial import (
    SimplicialMap,
    check_2segal_pullbacks,
    check_2segal_triangulations,
    check_identities,
    segal_map,
)
from twoseg.tree_segal import build_XT, check_well_defined, flavour_map
from twoseg.umap import build_U, characterize, check_culf, check_relatively_segal, expected_culf, expected_relatively_segal

BUDGET = 10.0


@dataclass
class Record:
    criterion: int
    name: str
    ok: bool
    detail: str
    seconds: float


RESULTS: list[Record] = []


def criterion(number: int, name: str):
    """Time a check returning ``(ok, detail)``, print and record it, then
    assert it passed within the budget."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            ok, detail = fn(*args, **kwargs)
            seconds = time.perf_counter() - start
            if seconds >= BUDGET:
                ok, detail = False, f"{detail}; took {seconds:.1f}s"
            RESULTS.append(Record(number, name, ok, detail, seconds))
            print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}: {detail} ({seconds:.2f}s)")
            assert ok, f"criterion {number}: {name}: {detail}"

        return run

    return wrap


def mismatches(pairs) -> list:
    return [(k, got, want) for k, got, want in pairs if got != want]


def describe(bad, total: int, limit: int = 3) -> str:
    if not bad:
        return f"all {total} agree"
    return f"{len(bad)}/{total} differ, e.g. {bad[:limit]}"


# ---------------------------------------------------------------------------
# 1, 2: subtree censuses with brute-force oracles


def _brute_lower_sets(T) -> list[frozenset]:
    V = T.vertices
    out = []
    for r in range(len(V) + 1):
        for S in itertools.combinations(V, r):
            S = frozenset(S)
            if all(T.parent[v] is None or T.parent[v] in S for v in S):
                out.append(S)
    return out


def _shape(T, S, flavour: str) -> tuple:
    """Nested-tuple isomorphism invariant of ``T`` restricted to ``S``."""

    def node(v):
        kids = [node(c) for c in T.children[v] if c in S]
        if flavour != "planar":
            kids.sort()
        return (T.label(v) if flavour == "labelled" else "", tuple(kids))

    comps = [node(v) for v in T.vertices if v in S and T.parent[v] not in S]
    return tuple(comps if flavour == "planar" else sorted(comps))


@criterion(1, "lower-subtree classes 10/8/7")
def test_c01_lower_subtree_census():
    expected = {"labelled": 10, "planar": 8, "plain": 7}
    got = {f: lower_subtree_classes(EXAMPLE_TREE, f) for f in FLAVOURS}
    T = tree(EXAMPLE_TREE, "labelled")
    oracle = {f: len({_shape(T, S, f) for S in _brute_lower_sets(T)}) for f in FLAVOURS}
    return got == expected == oracle, f"computed {got}, oracle {oracle}, expected {expected}"


@criterion(2, "nonempty admissible subforests 6 and 7")
def test_c02_admissible_subforests():
    got = (nonempty_admissible("a(b(c))"), nonempty_admissible("a(b,c)"))
    oracle = []
    for expr in ("a(b(c))", "a(b,c)"):
        T = tree(expr, "labelled")
        lows = _brute_lower_sets(T)
        oracle.append(len({A - B for A in lows for B in lows if B <= A and A - B}))
    return got == (6, 7) == tuple(oracle), f"computed {got}, oracle {tuple(oracle)}"


# ---------------------------------------------------------------------------
# 3: 2-Segal


def _segal_sweep(items) -> tuple[bool, str]:
    failing, disagree = [], []
    for name, X in items:
        pull = check_2segal_pullbacks(X, max_witnesses=1)
        tri = check_2segal_triangulations(X, n_max=min(6, X.truncation), max_witnesses=1)
        if not pull.ok:
            failing.append(name)
        if pull.ok != tri.ok:
            disagree.append(name)
    total = len(items)
    detail = f"{total - len(failing)}/{total} pass the pullback criterion"
    if failing:
        detail += f"; failing: {failing[:6]}"
    detail += f"; triangulation oracle disagrees on {len(disagree)}"
    return not failing and not disagree, detail


@pytest.mark.parametrize("flavour", FLAVOURS)
def test_c03_trees(flavour):
    @criterion(3, f"X^T {flavour}, trees <= 5 vertices")
    def run():
        return _segal_sweep([(T.to_expression(), XT(T, flavour, 6)) for T in trees(5, flavour)])

    run()


@pytest.mark.parametrize("labelled", [True, False], ids=["labelled", "unlabelled"])
@pytest.mark.parametrize("size", ["le4", "eq5"])
def test_c03_graphs(labelled, size):
    kind = "labelled" if labelled else "unlabelled"

    @criterion(3, f"X^G {kind}, graphs with {'<= 4' if size == 'le4' else '5'} vertices")
    def run():
        gs = [G for G in graphs(5) if (G.n_vertices <= 4) == (size == "le4")]
        return _segal_sweep([(G.to_text().replace("\n", " ").strip(), XG(G, labelled, graph_truncation(G)))
                             for G in gs])

    run()


# ---------------------------------------------------------------------------
# 4: 1-Segal failure


@criterion(4, "(T,T) outside the Segal image")
def test_c04_full_pair_not_in_image():
    bad, total = [], 0
    for flavour in FLAVOURS:
        for T in trees(5, flavour):
            X = XT(T, flavour, 2)
            whole = X.find(1, (1,) * len(T))
            total += 1
            if segal_map(X, 2).preimages((whole, whole)):
                bad.append((flavour, T.to_expression()))
    return not bad, f"{total - len(bad)}/{total} trees over all flavours"


def _figure_pair():
    """Host tree containing both forests of the injectivity figure and the
    two layerings: the same upper and lower pieces glued differently."""
    T = parse_forest("z(f(g,h,p(q,r)),e(a(b,c)))").with_flavour("plain")
    left = {"f": 2, "g": 1, "h": 2, "p": 1, "q": 1, "r": 1, "e": 2}
    right = {"f": 2, "g": 1, "h": 2, "e": 2, "a": 1, "b": 1, "c": 1}
    return T, [tuple(d.get(T.label(v), 0) for v in T.vertices) for d in (left, right)]


@criterion(4, "figure tree: plain Segal map not injective")
def test_c04_figure_injectivity_failure():
    T, (x, y) = _figure_pair()
    X = build_XT(T, "plain", 2)
    i, j = X.find(2, x), X.find(2, y)
    S = segal_map(X, 2)
    upper, lower = (X.code(1, k) for k in S.image(i))
    ok = i != j and S.image(i) == S.image(j) and not S.injective
    ok &= upper == "1();1(1()1())" and lower == "1();1(1())"
    return ok, f"{X.code(2, i)} and {X.code(2, j)} both map to ({upper}, {lower})"


@criterion(4, "labelled Segal map injective")
def test_c04_labelled_injective():
    bad = [T.to_expression() for T in trees(6, "labelled") if not segal_map(XT(T, "labelled", 2), 2).injective]
    return not bad, f"{len(trees(6, 'labelled')) - len(bad)}/{len(trees(6, 'labelled'))} trees <= 6 vertices"


# ---------------------------------------------------------------------------
# 5: double-category censuses


@criterion(5, "Y3 plain (7 objects, 3 strict squares)")
def test_c05_y3_plain():
    got = (y3_census("plain", "objects", strict=False), y3_census("plain", "squares"))
    return got == (7, 3), f"computed {got}"


@criterion(5, "Y3 planar (8 objects, 4 strict squares)")
def test_c05_y3_planar():
    got = (y3_census("planar", "objects", strict=False), y3_census("planar", "squares"))
    return got == (8, 4), f"computed {got}"


@criterion(5, "Y3 labelled (13 objects, 14 morphisms, 7 strict squares)")
def test_c05_y3_labelled():
    got = (y3_census("labelled", "objects", strict=False), y3_census("labelled", "hor"),
           y3_census("labelled", "squares"))
    return got == (13, 14, 7), f"computed {got}"


@criterion(5, "P_n: n+1 objects, C(n,3) strict squares, n = 3..8")
def test_c05_paths():
    bad = mismatches((n, path_census(n), (n + 1, comb(n, 3))) for n in range(3, 9))
    return not bad, describe(bad, 6)


@criterion(5, "K1,n: 2n objects, 2C(n+1,2)+2n morphisms, n = 2..5")
def test_c05_stars():
    bad = mismatches((n, star_census(n), (2 * n, 2 * comb(n + 1, 2) + 2 * n)) for n in range(2, 6))
    return not bad, describe(bad, 4, limit=4)


@criterion(5, "K1,3: 15 nonidentity morphisms among nonempty objects")
def test_c05_star3():
    got = star_census(3)[1]
    return got == 15, f"computed {got}"


# ---------------------------------------------------------------------------
# 6: stability and pointedness


@pytest.mark.parametrize("flavour", FLAVOURS)
def test_c06_stable_pointed(flavour):
    @criterion(6, f"stable and pointed, {flavour} trees <= 5 vertices")
    def run():
        unstable, unpointed = [], []
        for T in trees(5, flavour):
            D = extract(XT(T, flavour, 3))
            if not check_stable(D):
                unstable.append(T.to_expression())
            if not check_pointed(D):
                unpointed.append(T.to_expression())
        total = len(trees(5, flavour))
        return not unstable and not unpointed, (f"{total - len(unstable)}/{total} stable "
                                                f"{unstable}, {total - len(unpointed)}/{total} pointed")

    run()


# ---------------------------------------------------------------------------
# 7: graph censuses


@criterion(7, "labelled path a-b-c: 13, 34, 24")
def test_c07_labelled_path():
    c = graph_census(path_graph("abc"), True, 3)
    got = (c.totals[1], c.nondegenerate[2], c.nondegenerate[3])
    return got == (13, 34, 24), f"computed {got}"


@criterion(7, "unlabelled K1,3: 11, 38, 55, 4")
def test_c07_unlabelled_star():
    from twoseg.graph_segal import star_graph

    c = graph_census(star_graph(3), False, 4)
    got = (c.totals[1], c.all_parts_nonempty[2], c.nondegenerate[3], c.nondegenerate[4])
    return got == (11, 38, 55, 4), f"computed {got}"


# ---------------------------------------------------------------------------
# 8: the map U


@criterion(8, "U is simplicial for all trees <= 5 vertices")
def test_c08_simplicial():
    bad, total = [], 0
    for flavour in FLAVOURS:
        for T in trees(5, flavour):
            total += 1
            if build_U(T, flavour, 4).validate(limit=1):
                bad.append((flavour, T.to_expression()))
    return not bad, f"{total - len(bad)}/{total} maps commute with faces and degeneracies"


@pytest.mark.parametrize("flavour", FLAVOURS)
def test_c08_sweep(flavour):
    @criterion(8, f"CULF and relatively Segal verdicts, {flavour} trees <= 5 vertices")
    def run():
        bad = []
        for T in trees(5, flavour):
            v = characterize(T, flavour)
            want = (expected_culf(T, flavour), expected_relatively_segal(T))
            if (bool(v["culf"]), bool(v["relatively_segal"])) != want or not v["simplicial"]:
                bad.append((T.to_expression(), bool(v["culf"]), bool(v["relatively_segal"])))
        return not bad, describe(bad, len(trees(5, flavour)))

    run()


@criterion(8, "labelled edge fibres 3 vs 4")
def test_c08_edge_fibres():
    got = edge_fibres()
    return got == (3, 4), f"computed {got}"


# ---------------------------------------------------------------------------
# 9: Hall algebras


@criterion(9, "labelled tree constants in {0, 1}")
def test_c09_labelled_constants():
    bad = [T.to_expression() for T in trees(5, "labelled") if not coefficients_in(build_hall(XT(T, "labelled", 2)), {1})]
    return not bad, f"{len(trees(5, 'labelled')) - len(bad)}/{len(trees(5, 'labelled'))} trees"


def _is_rooted_path(T) -> bool:
    return all(len(T.children[v]) <= 1 for v in T.vertices)


@criterion(9, "commutative iff path rooted at an end, plain trees <= 6")
def test_c09_commutativity():
    bad = []
    for T in trees(6, "plain"):
        comm, _ = is_commutative(build_hall(XT(T, "plain", 2)))
        if comm != _is_rooted_path(T):
            bad.append((T.to_expression(), comm))
    return not bad, describe(bad, len(trees(6, "plain")))


@criterion(9, "P_n: 1_i * 1_j = 1_(i+j) truncated at n")
def test_c09_path_tables():
    bad = []
    for n in range(1, 8):
        X = XT(path_tree(n), "plain", 2)
        idx = {len(X.codes[1][k].replace(";", "")) // 3: k for k in range(X.size(1))}  # "1(" + ")" per vertex
        H = build_hall(X)
        for i, j in itertools.product(range(n + 1), repeat=2):
            want = {idx[i + j]: 1} if i + j <= n else {}
            if multiply(H, idx[i], idx[j]) != want:
                bad.append((n, i, j))
    return not bad, describe(bad, sum((n + 1) ** 2 for n in range(1, 8)))


@criterion(9, "Y3 products 1_F1*1_P2 and 1_P2*1_F1")
def test_c09_y3_products():
    X = XT_expr(Y3, "plain", 3)
    p31, p32 = "1(1(1()))", "1(1()1())"
    got = (y3_product("1()", "1(1())"), y3_product("1(1())", "1()"))
    ok = got == ([p31], sorted([p31, p32])) and {p31, p32} <= set(X.codes[1])
    return ok, f"F1*P2 = {got[0]}, P2*F1 = {got[1]}"


# the eight products of the example, as unordered pairs of
# (vertices, edges) with their (vertices, edges) summands
PATH_PRODUCTS = [
    (("a", ""), ("b", ""), [("ab", ""), ("ab", "a-b")]),
    (("a", ""), ("c", ""), [("ac", "")]),
    (("b", ""), ("c", ""), [("bc", ""), ("bc", "b-c")]),
    (("a-b", "a-b"), ("c", ""), [("abc", "a-b"), ("abc", "a-b b-c")]),
    (("ac", ""), ("b", ""), [("abc", ""), ("abc", "a-b"), ("abc", "b-c"), ("abc", "a-b b-c")]),
    (("ab", ""), ("c", ""), [("abc", ""), ("abc", "b-c")]),
    (("a", ""), ("bc", ""), [("abc", ""), ("abc", "a-b")]),
    (("a", ""), ("bc", "b-c"), [("abc", "b-c"), ("abc", "a-b b-c")]),
]


@criterion(9, "labelled path graph: the eight nonzero products")
def test_c09_path_graph_products():
    X = XG(path_graph("abc"), True, 2)
    H = build_hall(X)

    def el(spec):
        verts, edges = spec
        verts = verts.replace("a-b", "ab")
        return find_element(X, [list(verts)], edges.split())

    expected = {}
    for left, right, result in PATH_PRODUCTS:
        expected[frozenset((el(left), el(right)))] = {el(r): 1 for r in result}
    got = {}
    for (a, b), row in H.products.items():
        if H.unit not in (a, b):
            got[frozenset((a, b))] = row
    symmetric = all(H.products.get((b, a)) == row for (a, b), row in H.products.items())
    return got == expected and symmetric, f"{len(got)} nonzero unordered products, {len(expected)} expected"


@criterion(9, "graph product rules (1)-(5), graphs <= 4 vertices, up to 3 parallel edges")
def test_c09_graph_rules():
    gs = [G for G in graphs(4)] + list(multigraphs())
    bad = []
    for G in gs:
        fails = {k: v for k, v in graph_hall_rules(XG(G, True, 2)).items() if v}
        if fails:
            bad.append((G.to_text(), fails))
    return not bad, describe(bad, len(gs), limit=1)


# ---------------------------------------------------------------------------
# 10: algebra laws


def _laws(items) -> tuple[bool, str]:
    bad = [name for name, X in items if not check_algebra_laws(build_hall(X))]
    return not bad, f"{len(items) - len(bad)}/{len(items)} tables associative and unital" + (f"; failing {bad}" if bad else "")


@pytest.mark.parametrize("flavour", FLAVOURS)
def test_c10_tree_tables(flavour):
    @criterion(10, f"Hall tables of {flavour} trees <= 5 vertices")
    def run():
        return _laws([(T.to_expression(), XT(T, flavour, 2)) for T in trees(5, flavour)])

    run()


@pytest.mark.parametrize("labelled", [True, False], ids=["labelled", "unlabelled"])
def test_c10_graph_tables(labelled):
    @criterion(10, f"Hall tables of {'labelled' if labelled else 'unlabelled'} graphs <= 4 vertices")
    def run():
        gs = list(graphs(4)) + list(multigraphs())
        return _laws([(G.to_text().replace("\n", " ").strip(), XG(G, labelled, 2)) for G in gs])

    run()


# ---------------------------------------------------------------------------
# 11: operads


def _operad_inputs(kind: str):
    if kind in FLAVOURS:
        return [(T.to_expression(), XT(T, kind, 4)) for T in trees(4, kind)]
    labelled = kind == "labelled graphs"
    return [(G.to_text().replace("\n", " ").strip(), XG(G, labelled, 4)) for G in graphs(4)]


OPERAD_KINDS = list(FLAVOURS) + ["labelled graphs", "unlabelled graphs"]


@pytest.mark.parametrize("kind", OPERAD_KINDS)
def test_c11_invertible(kind):
    @criterion(11, f"composition maps bijective up to arity 4, {kind} <= 4 vertices")
    def run():
        items = _operad_inputs(kind)
        bad = [(name, r.witness["kind"]) for name, X in items if not (r := check_invertible(build_operad(X, 4)))]
        return not bad, describe(bad, len(items), limit=2)

    run()


def _round_trips(O) -> int:
    """Failures of compose(cocompose(z)) == z and of cocompose(compose(...))
    giving back the pieces, over every shape up to the maximal arity."""
    failures = 0
    for K in range(1, O.max_arity + 1):
        for shape in compositions(K):
            for z in range(O.X.size(K)):
                c = O.cocompose(z, shape)
                try:
                    back = O.compose(c.outer, c.inners, shape)
                except OperadError:
                    failures += 1
                    continue
                if back != z or O.cocompose(back, shape).inners != c.inners:
                    failures += 1
    return failures


@pytest.mark.parametrize("kind", OPERAD_KINDS)
def test_c11_round_trip(kind):
    @criterion(11, f"compose and cocompose mutually inverse, {kind} <= 4 vertices")
    def run():
        items = _operad_inputs(kind)
        bad = [(name, f) for name, X in items if (f := _round_trips(build_operad(X, 4)))]
        return not bad, describe(bad, len(items), limit=2)

    run()


@criterion(11, "labelled operation sets have at most one element")
def test_c11_labelled_sets():
    items = _operad_inputs("labelled") + _operad_inputs("labelled graphs")
    bad = [name for name, X in items if max(map(len, build_operad(X, 4).ops.values())) > 1]
    return not bad, describe(bad, len(items))


@criterion(11, "planar 2ary tree has a binary operation set of size 2")
def test_c11_two_ary():
    got = largest_binary_set(TWO_ARY, "planar")
    return got == 2, f"largest binary set {got}"


# ---------------------------------------------------------------------------
# 12: induced homomorphisms


def _maps():
    for flavour in FLAVOURS:
        for T in trees(4, flavour):
            yield f"U {flavour} {T.to_expression()}", build_U(T, flavour, 4)
    for T in trees(4, "labelled"):
        for s, t in (("labelled", "planar"), ("labelled", "plain"), ("planar", "plain")):
            yield f"{s}->{t} {T.to_expression()}", flavour_map(T, s, t, 4)
    for T in trees(3, "plain"):
        X = XT(T, "plain", 4)
        yield f"id {T.to_expression()}", SimplicialMap.identity(X)


@criterion(12, "F* along CULF maps and F_* along relatively Segal maps are homomorphisms")
def test_c12_functoriality():
    checked = {"pullback": 0, "pushforward": 0}
    bad = []
    for name, F in _maps():
        for direction, test in (("pullback", check_culf), ("pushforward", check_relatively_segal)):
            if test(F):
                checked[direction] += 1
                if not induced_hom(F, direction).is_homomorphism:
                    bad.append((name, direction))
    ok = not bad and all(checked.values())
    return ok, f"verified maps {checked}, failures {bad}"


@criterion(12, "1_{b} * 1_{d}: 0 in the tree algebra, 1_{b,d} in the graph algebra")
def test_c12_counterexample():
    got = culf_counterexample()
    return got == ("0", "{b:1 d:1}"), f"{CULF_COUNTEREXAMPLE}: tree {got[0]}, graph {got[1]}"


# ---------------------------------------------------------------------------
# 13: property suites


@criterion(13, "simplicial identities")
def test_c13_identities():
    items = [(f"{f} {T.to_expression()}", XT(T, f, 5)) for f in FLAVOURS for T in trees(4, f)]
    items += [(f"{lab} {G.to_text()}", XG(G, lab, 4)) for lab in (True, False) for G in graphs(3)]
    items += [(f"multi {G.to_text()}", XG(G, True, 3)) for G in multigraphs()]
    bad = [name for name, X in items if check_identities(X, limit=1)]
    return not bad, describe(bad, len(items))


@criterion(13, "codes of faces, degeneracies and induced maps well defined")
def test_c13_well_defined():
    bad = []
    for f in ("planar", "plain"):
        for T in trees(4, f):
            if check_well_defined(T, f, 4):
                bad.append((f, T.to_expression()))
    for T in trees(4, "labelled"):
        for F in (flavour_map(T, "labelled", "planar", 4), flavour_map(T, "planar", "plain", 4)):
            if F.validate(limit=1):
                bad.append(("map", T.to_expression()))
    return not bad, f"{len(bad)} failures"


@criterion(13, "flavour-count monotonicity")
def test_c13_monotone():
    bad = []
    for T in trees(5, "plain"):
        sizes = [XT(T.with_flavour(f), f, 4).sizes for f in FLAVOURS]
        if not all(a >= b >= c for a, b, c in zip(*sizes)):
            bad.append((T.to_expression(), sizes))
    return not bad, describe(bad, len(trees(5, "plain")), limit=1)


def _random_tree(rng: random.Random, n: int):
    parent = {0: None}
    for v in range(1, n):
        parent[v] = rng.randrange(v)
    kids = {v: [] for v in range(n)}
    for v in range(1, n):
        kids[parent[v]].append(v)

    def expr(v):
        return f"v{v}" + (f"({','.join(expr(c) for c in kids[v])})" if kids[v] else "")

    return parse_forest(expr(0))


def _random_relabelling(rng: random.Random, T, reorder: bool):
    """New vertex ids (and, where the flavour allows, new child orders);
    returns the relabelled forest and the id mapping."""
    ids = list(T.vertices)
    perm = ids[:]
    rng.shuffle(perm)
    mapping = dict(zip(ids, perm))
    orders = {v: rng.sample(list(T.children[v]), len(T.children[v])) for v in ids} if reorder else None
    return relabel(T, mapping, orders), mapping


@criterion(13, "canonical codes invariant under 200 random relabellings")
def test_c13_tree_invariance(rng):
    bad = 0
    for _ in range(200):
        T = _random_tree(rng, rng.randint(1, 9))
        layers = {}
        for v in T.vertices:  # random monotone layering
            p = T.parent[v]
            layers[v] = rng.randint(1, layers[p] if p is not None else 3)
        for flavour, reorder in (("labelled", True), ("planar", False), ("plain", True)):
            S = T.with_flavour(flavour)
            R, mapping = _random_relabelling(rng, S, reorder)
            if canonical_code(S, flavour) != canonical_code(R, flavour):
                bad += 1
            moved = {mapping[v]: l for v, l in layers.items()}
            if layered_code(S, layers, flavour) != layered_code(R, moved, flavour):
                bad += 1
    return bad == 0, f"{bad} mismatches over 200 trees in three flavours"


def _random_partitioned_graph(rng: random.Random):
    V = rng.randint(1, 5)
    edges = [(u, v) for u, v in itertools.combinations(range(V), 2) if rng.random() < 0.5]
    edges += [e for e in edges if rng.random() < 0.2]  # some parallel edges
    G = graph_from_edges([(f"v{u}", f"v{v}") for u, v in edges], [f"v{k}" for k in range(V)])
    n = rng.randint(1, 3)
    colours = np.array([[rng.randint(0, n) for _ in range(V)]], dtype=np.int64)
    mask = sum(1 << j for j, (u, v) in enumerate(G.edges) if colours[0, u] and colours[0, v] and rng.random() < 0.7)
    return G, colours, mask, n


def _nx(G, colours, mask):
    M = nx.MultiGraph()
    for v in range(G.n_vertices):
        if colours[0, v]:
            M.add_node(v, c=int(colours[0, v]))
    for j, (u, v) in enumerate(G.edges):
        if mask >> j & 1:
            M.add_edge(u, v)
    return M


@criterion(13, "graph canonical keys: relabelling invariance and networkx isomorphism oracle")
def test_c13_graph_invariance(rng):
    bad = 0
    for _ in range(200):
        G, colours, mask, n = _random_partitioned_graph(rng)
        model = GraphModel(G, labelled=False)
        key = model.key(colours, np.array([mask]), n)[0]
        perm = list(range(G.n_vertices))
        rng.shuffle(perm)
        H = graph_from_edges([(f"v{perm[u]}", f"v{perm[v]}") for u, v in G.edges], [f"v{k}" for k in range(G.n_vertices)])
        moved = np.zeros_like(colours)
        for v in range(G.n_vertices):
            moved[0, perm[v]] = colours[0, v]
        if GraphModel(H, labelled=False).key(moved, np.array([mask]), n)[0] != key:
            bad += 1
        # a second random simplex on the same graph: equal keys iff isomorphic
        c2 = np.array([[rng.randint(0, n) for _ in range(G.n_vertices)]], dtype=np.int64)
        m2 = sum(1 << j for j, (u, v) in enumerate(G.edges) if c2[0, u] and c2[0, v] and rng.random() < 0.7)
        same = model.key(c2, np.array([m2]), n)[0] == key
        iso = nx.is_isomorphic(_nx(G, colours, mask), _nx(G, c2, m2), node_match=lambda a, b: a["c"] == b["c"])
        if same != iso:
            bad += 1
    return bad == 0, f"{bad} disagreements over 200 random partitioned graphs"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
