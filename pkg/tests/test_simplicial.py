import json

import numpy as np
import pytest

from twoseg import simplicial as s
from twoseg.forest import parse_forest
from twoseg.tree_segal import build_XT


def chain_poset(k):
    return s.nerve_of_poset(range(k), lambda a, b: a <= b, 4)


def test_point_is_segal_and_2segal():
    P = s.point(4)
    assert P.sizes == [1] * 5 and not s.check_identities(P)
    assert s.check_2segal_pullbacks(P).ok and s.check_2segal_triangulations(P).ok
    assert s.segal_map(P, 3).injective and s.segal_map(P, 3).surjective


def test_nerves_are_1_segal_and_2_segal():
    N = chain_poset(3)
    assert not s.check_identities(N)
    for n in (2, 3, 4):
        rep = s.segal_map(N, n)
        assert rep.injective and rep.surjective and rep.chains == N.size(n)
    assert s.check_2segal_pullbacks(N).ok
    assert s.check_2segal_triangulations(N, explicit=True).ok


def test_triangulation_counts_are_catalan():
    assert [len(s.triangulations(n)) for n in range(2, 8)] == [1, 2, 5, 14, 42, 132]
    assert [s.catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]


def test_triangulation_family_count_matches_listing():
    X = build_XT(parse_forest("a(b(c),d)"), "plain", 5)
    for n in (3, 4, 5):
        for tri in s.triangulations(n):
            assert s.count_triangulation_families(X, tri) == len(s.triangulation_families(X, tri))


def test_broken_face_table_is_reported():
    X = build_XT(parse_forest("a(b)"), "labelled", 4).copy_tables()
    X.faces[3][1] = np.roll(X.faces[3][1], 1)
    assert s.check_identities(X)


def test_duplicated_simplex_breaks_2segal():
    # glue a second copy of a nondegenerate 3-simplex into the tables
    X = build_XT(parse_forest("a(b(c))"), "labelled", 3)
    k = s.nondegenerate(X, 3)[0]
    Y = X.copy_tables()
    Y.sizes[3] += 1
    Y.faces[3] = [np.append(t, t[k]) for t in Y.faces[3]]
    Y.degeneracies = Y.degeneracies
    assert not s.check_2segal_pullbacks(Y).ok
    assert not s.check_2segal_triangulations(Y).ok


def test_face_composite_matches_iterated_faces():
    X = build_XT(parse_forest("a(b(c),d)"), "planar", 4)
    keep = [0, 2, 3]
    direct = s.face_composite(X, 4, keep)
    # delete vertices 4 then 1
    step = X.faces[3][1][X.faces[4][4]]
    assert np.array_equal(direct, step)
    assert np.array_equal(s.edge_map(X, 4, 0, 4), s.face_composite(X, 4, [0, 4]))


def test_simplicial_operator_of_degeneracy():
    X = build_XT(parse_forest("a(b)"), "labelled", 3)
    assert np.array_equal(s.simplicial_operator(X, 1, [0, 0, 1]), X.degeneracies[1][0])


def test_json_round_trip():
    X = build_XT(parse_forest("a(b,c)"), "plain", 3)
    Y = s.loads(s.dumps(X))
    assert Y.sizes == X.sizes and Y.codes == X.codes
    for n in range(1, 4):
        for i in range(n + 1):
            assert np.array_equal(Y.faces[n][i], X.faces[n][i])
    data = json.loads(s.dumps(X))
    data["levels"].pop()
    with pytest.raises(ValueError):
        s.from_json_dict(data)


def test_identity_map_validates_and_shifted_map_does_not():
    X = build_XT(parse_forest("a(b)"), "labelled", 3)
    F = s.SimplicialMap.identity(X)
    assert F.validate() == []
    G = s.SimplicialMap(X, X, [c.copy() for c in F.components])
    G.components[1] = np.roll(G.components[1], 1)
    assert G.validate()


def test_truncated_keeps_lower_levels():
    X = build_XT(parse_forest("a(b)"), "labelled", 4)
    Y = X.truncated(2)
    assert Y.truncation == 2 and Y.sizes == X.sizes[:3] and Y.degeneracies[2] == []
    with pytest.raises(ValueError):
        X.truncated(5)
