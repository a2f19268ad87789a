"""The simplicial set of layerings of a rooted tree, in all three flavours.

A concrete n-simplex is stored as a *layer tuple*: one entry per vertex of
the host (in preorder) holding the layer index 1..n of the vertex, or 0 when
the vertex lies outside the support.  Layer 1 is the top layer ``L0 \\ L1``.
Faces and degeneracies are then simple re-indexings of the layer values.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .forest import (
    Flavour,
    Layering,
    RootedForest,
    admissible_subforests,
)
from .simplicial import SimplicialMap, SimplicialSet, build, nondegenerate

LayerTuple = tuple[int, ...]


def layer_face(x: LayerTuple, n: int, i: int) -> LayerTuple:
    """``d_i`` on a layer tuple of dimension n."""
    if i == 0:  # drop the top layer
        return tuple(l - 1 if l > 1 else 0 for l in x)
    if i == n:  # drop the bottom layer
        return tuple(0 if l == n else l for l in x)
    return tuple(l - 1 if l > i else l for l in x)  # merge layers i and i+1


def layer_degeneracy(x: LayerTuple, n: int, i: int) -> LayerTuple:
    """``s_i``: insert an empty layer after layer i."""
    return tuple(l + 1 if l > i else l for l in x)


class TreeModel:
    """Layerings of admissible subforests of ``T`` up to flavour isomorphism.

    Codes agree with :func:`layered_code`; they are assembled from per-vertex
    memo tables keyed by the layer values on the vertex's subtree, which is a
    contiguous slice of the preorder tuple.
    """

    def __init__(self, T: RootedForest, flavour: Flavour | str | None = None):
        self.flavour = Flavour.coerce(flavour or T.flavour)
        self.T = T.with_flavour(self.flavour) if T.flavour is not self.flavour else T
        self.order = self.T.vertices
        self.position = {v: k for k, v in enumerate(self.order)}
        self.supports = sorted(admissible_subforests(self.T), key=lambda s: (len(s), sorted(s)))
        pos = self.position
        self._parent = [pos[self.T.parent[v]] if self.T.parent[v] is not None else -1 for v in self.order]
        self._kids = [[pos[c] for c in self.T.children[v]] for v in self.order]
        self._end = [pos[v] + len(self.T.descendants(v)) for v in self.order]
        labelled = self.flavour is Flavour.LABELLED
        self._head = [f"{self.T.labels[v]}:" if labelled else "" for v in self.order]
        self._sort = self.flavour is not Flavour.PLANAR
        self._memo: list[dict[tuple, str]] = [{} for _ in self.order]

    # -- conversions ----------------------------------------------------
    def layer_map(self, x: LayerTuple) -> dict[int, int]:
        return {v: l for v, l in zip(self.order, x) if l}

    def to_layering(self, x: LayerTuple, n: int) -> Layering:
        return Layering.from_layers(self.T, self.layer_map(x), n)

    def from_layering(self, L: Layering) -> LayerTuple:
        lay = L.layer_of()
        return tuple(lay.get(v, 0) for v in self.order)

    def support(self, x: LayerTuple) -> frozenset[int]:
        return frozenset(v for v, l in zip(self.order, x) if l)

    # -- model protocol -------------------------------------------------
    def elements(self, n: int) -> Iterator[LayerTuple]:
        size = len(self.order)
        if n == 0:
            yield (0,) * size
            return
        parent = self._parent
        for H in self.supports:
            inside = [v in H for v in self.order]
            x = [0] * size
            slots = [p for p in range(size) if inside[p]]

            def rec(k: int) -> Iterator[LayerTuple]:
                if k == len(slots):
                    yield tuple(x)
                    return
                p = slots[k]
                q = parent[p]
                top = x[q] if q >= 0 and inside[q] else n
                for value in range(1, top + 1):
                    x[p] = value
                    yield from rec(k + 1)
                x[p] = 0

            yield from rec(0)

    def _vertex_code(self, x: LayerTuple, p: int) -> str:
        part = x[p:self._end[p]]
        memo = self._memo[p]
        code = memo.get(part)
        if code is None:
            kids = [self._vertex_code(x, q) for q in self._kids[p] if x[q]]
            if self._sort:
                kids.sort()
            code = f"{self._head[p]}{x[p]}({''.join(kids)})"
            memo[part] = code
        return code

    def code(self, x: LayerTuple) -> str:
        parent = self._parent
        comps = [self._vertex_code(x, p) for p in range(len(x)) if x[p] and (parent[p] < 0 or not x[parent[p]])]
        if self._sort:
            comps.sort()
        return ";".join(comps)

    def key(self, x: LayerTuple):
        if self.flavour is Flavour.LABELLED:
            return x
        return self.code(x)

    def face(self, x: LayerTuple, n: int, i: int) -> LayerTuple:
        return layer_face(x, n, i)

    def degeneracy(self, x: LayerTuple, n: int, i: int) -> LayerTuple:
        return layer_degeneracy(x, n, i)


def default_truncation(T: RootedForest) -> int:
    return len(T) + 2


def build_XT(T: RootedForest, flavour: Flavour | str | None = None, N: int | None = None) -> SimplicialSet:
    """The layering simplicial set of ``T`` truncated at ``N`` (default |V|+2)."""
    return build(TreeModel(T, flavour), default_truncation(T) if N is None else N)


# ---------------------------------------------------------------------------
# the same maps written on chains of lower sets


_COARSER = {Flavour.LABELLED: {Flavour.LABELLED, Flavour.PLANAR, Flavour.PLAIN},
            Flavour.PLANAR: {Flavour.PLANAR, Flavour.PLAIN},
            Flavour.PLAIN: {Flavour.PLAIN}}


def flavour_map(T: RootedForest, source: Flavour | str, target: Flavour | str, N: int | None = None,
                XS: SimplicialSet | None = None, XT: SimplicialSet | None = None) -> SimplicialMap:
    """The map forgetting structure, e.g. labelled classes onto plain ones."""
    source, target = Flavour.coerce(source), Flavour.coerce(target)
    if target not in _COARSER[source]:
        raise ValueError(f"cannot map {source.value} classes to {target.value} ones")
    XS = build_XT(T, source, N) if XS is None else XS
    XT = build_XT(T, target, XS.truncation) if XT is None else XT
    N = min(XS.truncation, XT.truncation)
    model = XT.model
    comps = [np.array([XT.index(n, model.key(x)) for x in XS.reps[n]], dtype=np.int64) for n in range(N + 1)]
    return SimplicialMap(XS, XT, comps)


def chain_face(L: Layering, i: int) -> Layering:
    """``d_i`` on a chain ``L0 >= ... >= Ln``: drop ``L_i``; for ``i = n``
    additionally remove ``L_{n-1}`` from every member."""
    n = L.n
    chain = L.chain
    if i == n:
        last = chain[n - 1]
        return Layering(L.host, tuple(S - last for S in chain[:n]))
    return Layering(L.host, chain[:i] + chain[i + 1:])


def chain_degeneracy(L: Layering, i: int) -> Layering:
    """``s_i``: repeat ``L_i``."""
    return Layering(L.host, L.chain[: i + 1] + L.chain[i:])


def face_d0_restricts(L: Layering) -> Layering:
    """``d_0``: restrict to the forest spanned by ``L1`` with the remaining
    cuts."""
    if L.n < 1:
        raise ValueError("d_0 needs a layering of positive length")
    return chain_face(L, 0)


# ---------------------------------------------------------------------------
# counts


@dataclass
class Census:
    totals: list[int]
    nondegenerate: list[int]
    strict: list[int]

    def as_dict(self) -> dict:
        return {"totals": self.totals, "nondegenerate": self.nondegenerate, "strict": self.strict}


def is_strict(x: LayerTuple, n: int) -> bool:
    """Every layer 1..n is nonempty."""
    return set(x) - {0} == set(range(1, n + 1))


def census(T: RootedForest, flavour: Flavour | str | None = None, N: int | None = None,
           X: SimplicialSet | None = None) -> Census:
    """Per-level totals, nondegenerate counts and strict-chain counts."""
    X = build_XT(T, flavour, N) if X is None else X
    strict = [sum(1 for x in X.reps[n] if is_strict(x, n)) for n in range(X.truncation + 1)]
    return Census(list(X.sizes), [len(nondegenerate(X, n)) for n in range(X.truncation + 1)], strict)


def check_well_defined(T: RootedForest, flavour: Flavour | str, N: int) -> list[tuple]:
    """Faces and degeneracies of concrete layerings with equal codes have
    equal codes.  Returns the offending ``(n, op, i, a, b)`` tuples."""
    model = TreeModel(T, flavour)
    bad = []
    for n in range(N + 1):
        classes: dict = defaultdict(list)
        for x in model.elements(n):
            classes[model.key(x)].append(x)
        for members in classes.values():
            ref = members[0]
            for other in members[1:]:
                ops = [("d", i, model.face) for i in range(n + 1) if n > 0]
                ops += [("s", i, model.degeneracy) for i in range(n + 1) if n < N]
                for name, i, op in ops:
                    if model.key(op(ref, n, i)) != model.key(op(other, n, i)):
                        bad.append((n, name, i, ref, other))
    return bad


__all__ = [
    "TreeModel",
    "build_XT",
    "default_truncation",
    "layer_face",
    "layer_degeneracy",
    "chain_face",
    "chain_degeneracy",
    "face_d0_restricts",
    "Census",
    "census",
    "is_strict",
    "check_well_defined",
    "flavour_map",
]
