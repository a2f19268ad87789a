"""The map from tree layerings to partitioned subgraphs of the underlying
graph, and decision procedures for the CULF and relatively Segal properties.

A layer tuple of a tree is already a colour vector on the underlying graph
(both use preorder vertex order), so ``U`` keeps the colours and adds every
tree edge whose endpoints both lie in the support.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .forest import Flavour, RootedForest
from .graph_segal import GraphModel, _lookup, build_XG, underlying_graph
from .simplicial import SimplicialMap, SimplicialSet, face_composite, edge_map, rank_rows, _first_collision
from .tree_segal import build_XT


@dataclass
class UMap(SimplicialMap):
    """``U`` together with the tree it came from."""

    tree: RootedForest = field(default=None, repr=False)
    flavour: Flavour = Flavour.PLAIN


def default_truncation(T: RootedForest) -> int:
    return len(T) + 1


def build_U(T: RootedForest, flavour: Flavour | str | None = None, N: int | None = None,
            XT: SimplicialSet | None = None, XG: SimplicialSet | None = None) -> UMap:
    """``U: X^T -> X^G`` with labelled trees going to the labelled graph and
    plain or planar trees to the unlabelled one."""
    flavour = Flavour.coerce(flavour or T.flavour)
    N = default_truncation(T) if N is None else N
    labelled = flavour is Flavour.LABELLED
    XT = build_XT(T, flavour, N) if XT is None else XT
    if XG is None:
        XG = build_XG(underlying_graph(T), labelled, N)
    model: GraphModel = XG.model
    if model.labelled != labelled:
        raise ValueError("labelling of the graph side does not match the tree flavour")
    N = min(XT.truncation, XG.truncation, N)
    bits = np.int64(1) << np.arange(model.E, dtype=np.int64)
    components = []
    for n in range(N + 1):
        colours = np.array(XT.reps[n], dtype=np.int64).reshape(len(XT.reps[n]), model.V)
        inside = colours > 0
        if model.E:
            keep = inside[:, model.eu] & inside[:, model.ev]
            masks = keep @ bits
        else:
            masks = np.zeros(len(colours), dtype=np.int64)
        components.append(_lookup(XG.keys[n], model.key(colours, masks, n)))
    return UMap(XT, XG, components, tree=T, flavour=flavour)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    """Truthy when the property holds up to the checked truncation."""

    holds: bool
    checked_to: int
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {"holds": self.holds, "checked_to": self.checked_to, "witness": self.witness}


def _long_edge(X: SimplicialSet, n: int) -> np.ndarray:
    if n == 0:
        return X.degeneracies[0][0]
    return face_composite(X, n, (0, n))


def _fibre_check(F: SimplicialMap, n: int, source_base: np.ndarray, target_base: np.ndarray,
                 base_map: np.ndarray, describe) -> dict | None:
    """Is ``X_n -> X_b x_{Y_b} Y_n`` a bijection, where the ``*_base`` arrays
    send level-n elements to a base level and ``base_map`` is ``F`` there?"""
    X, Y = F.source, F.target
    Fn = F.components[n]
    pair = source_base * max(Y.size(n), 1) + Fn
    hit = _first_collision(pair)
    if hit is not None:
        a, b = hit
        return {"n": n, "kind": "not injective", "elements": [X.code(n, a), X.code(n, b)],
                "base": describe(int(source_base[a]))}
    over_source = np.bincount(source_base, minlength=len(base_map))
    over_target = np.bincount(target_base, minlength=int(base_map.max(initial=-1)) + 1)
    expected = over_target[base_map] if len(base_map) else over_target[:0]
    bad = np.nonzero(over_source != expected)[0]
    if len(bad):
        h = int(bad[0])
        image = set(Fn[source_base == h].tolist())
        missing = [Y.code(n, int(y)) for y in np.nonzero(target_base == base_map[h])[0] if int(y) not in image]
        return {"n": n, "kind": "fibre sizes differ", "base": describe(h),
                "source_fibre": int(over_source[h]), "target_fibre": int(expected[h]),
                "not_in_image": missing[:3]}
    return None


def check_culf(F: SimplicialMap, N: int | None = None) -> Verdict:
    """Pullback test for the squares formed by ``s_0 : X_0 -> X_1`` and the
    long edge ``X_n -> X_1`` (``n >= 2``) against their images in ``Y``."""
    X, Y = F.source, F.target
    N = F.truncation if N is None else min(N, F.truncation)
    F1 = F.components[1]
    for n in [0] + list(range(2, N + 1)):
        if n == 0:
            # s_0 : X_0 -> X_1 ; the fibre over each level-1 element
            sb, tb = X.degeneracies[0][0], Y.degeneracies[0][0]
            w = _point_fibres(F, sb, tb)
        else:
            w = _fibre_check(F, n, _long_edge(X, n), _long_edge(Y, n), F1, lambda h: X.code(1, h))
        if w is not None:
            return Verdict(False, n, w)
    return Verdict(True, N)


def _point_fibres(F: SimplicialMap, sb: np.ndarray, tb: np.ndarray) -> dict | None:
    """The degree-0 square: ``X_0 -> X_1 x_{Y_1} Y_0`` is a bijection."""
    X, Y = F.source, F.target
    F0, F1 = F.components[0], F.components[1]
    src = np.bincount(sb, minlength=X.size(1))
    tgt = np.bincount(tb, minlength=Y.size(1))[F1]
    bad = np.nonzero(src != tgt)[0]
    if len(bad):
        h = int(bad[0])
        return {"n": 0, "kind": "fibre sizes differ", "base": X.code(1, h),
                "source_fibre": int(src[h]), "target_fibre": int(tgt[h])}
    pair = sb * max(Y.size(0), 1) + F0
    hit = _first_collision(pair)
    if hit is not None:
        return {"n": 0, "kind": "not injective", "elements": list(hit)}
    return None


def check_relatively_segal(F: SimplicialMap, N: int | None = None) -> Verdict:
    """Pullback test for the square of Segal maps in each dimension
    ``2 <= n <= N``: ``X_n -> Y_n x (X_1 x_{X_0} ... x_{X_0} X_1)``."""
    X, Y = F.source, F.target
    N = F.truncation if N is None else min(N, F.truncation)
    F1 = F.components[1]
    if not (X.is_reduced() and Y.is_reduced()):
        raise ValueError("relative Segal check assumes reduced source and target")
    over = np.bincount(F1, minlength=Y.size(1)).astype(object)
    for n in range(2, N + 1):
        Fn = F.components[n]
        xs = [edge_map(X, n, k, k + 1) for k in range(n)]
        ys = [edge_map(Y, n, k, k + 1) for k in range(n)]
        ranks = rank_rows(xs + [Fn], [X.size(1)] * n + [Y.size(n)]) if X.size(n) else np.zeros(0, dtype=np.int64)
        hit = _first_collision(ranks)
        if hit is not None:
            a, b = hit
            return Verdict(False, n, {"n": n, "kind": "not injective",
                                      "elements": [X.code(n, a), X.code(n, b)],
                                      "image": Y.code(n, int(Fn[a]))})
        expected = np.ones(Y.size(n), dtype=object)
        for e in ys:
            expected = expected * over[e]
        actual = np.bincount(Fn, minlength=Y.size(n))
        bad = [y for y in range(Y.size(n)) if actual[y] != expected[y]]
        if bad:
            y = bad[0]
            return Verdict(False, n, {"n": n, "kind": "fibre sizes differ", "target": Y.code(n, y),
                                      "source_fibre": int(actual[y]), "expected": int(expected[y])})
    return Verdict(True, N)


# ---------------------------------------------------------------------------
# sweeps


def expected_culf(T: RootedForest, flavour: Flavour | str) -> bool:
    flavour = Flavour.coerce(flavour)
    if flavour is Flavour.LABELLED:
        return len(T) == 1
    return len(T.edges) <= 1


def expected_relatively_segal(T: RootedForest) -> bool:
    return len(T) == 1


def characterize(T: RootedForest, flavour: Flavour | str, probe: int = 3) -> dict:
    """CULF and relative Segal verdicts for ``U`` of ``T``.

    Both are first tested at truncation ``probe``; any witness found there
    is final.  Otherwise the map is rebuilt at ``|V| + 1`` and re-tested.
    """
    flavour = Flavour.coerce(flavour)
    full = default_truncation(T)
    low = min(probe, full)
    U = build_U(T, flavour, low)
    culf, rel = check_culf(U), check_relatively_segal(U)
    if (culf or rel) and low < full:
        U = build_U(T, flavour, full)
        if culf:
            culf = check_culf(U)
        if rel:
            rel = check_relatively_segal(U)
    return {"tree": T.to_expression(), "flavour": flavour.value, "vertices": len(T),
            "culf": culf, "relatively_segal": rel,
            "simplicial": not U.validate(limit=1)}


__all__ = [
    "UMap",
    "build_U",
    "Verdict",
    "check_culf",
    "check_relatively_segal",
    "expected_culf",
    "expected_relatively_segal",
    "characterize",
    "default_truncation",
]
