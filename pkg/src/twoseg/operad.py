"""The coloured operad of a simplicial set.

Colours are level-1 elements.  An operation of arity n with inputs
``c_1..c_n`` and output ``c_0`` is a level-n element whose edges
``(i-1, i)`` are the ``c_i`` and whose long edge ``(0, n)`` is ``c_0``.

Composing an outer operation of arity n with inner operations of arities
``k_1..k_n`` gives the level-K element (``K = k_1 + ... + k_n``) whose face
on the block boundaries ``0, k_1, k_1+k_2, ..., K`` is the outer operation
and whose face on the i-th block is the i-th inner one.  Cocomposition reads
those faces off again.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .simplicial import SimplicialSet, _first_collision, edge_map, face_composite, rank_rows

Profile = tuple[tuple[int, ...], int]


class OperadError(ValueError):
    """Colour mismatch, or a missing or ambiguous composite."""


@dataclass
class CompositionInstance:
    outer: int
    inners: tuple[int, ...]
    result: int
    shape: tuple[int, ...]


def compositions(K: int, parts: int | None = None) -> list[tuple[int, ...]]:
    """Ordered tuples of positive integers summing to K."""
    out = []
    for cuts in itertools.product((False, True), repeat=max(K - 1, 0)):
        shape, run = [], 1
        for c in cuts:
            if c:
                shape.append(run)
                run = 1
            else:
                run += 1
        shape.append(run)
        if parts is None or len(shape) == parts:
            out.append(tuple(shape))
    return sorted(out) if K > 0 else []


def _boundaries(shape: Sequence[int]) -> list[int]:
    return [0] + list(itertools.accumulate(shape))


@dataclass
class ColouredOperadData:
    X: SimplicialSet
    max_arity: int
    ops: dict[Profile, list[int]]
    _decomp: dict = field(default_factory=dict, repr=False)

    @property
    def colours(self) -> range:
        return range(self.X.size(1))

    def _edges(self, n: int) -> tuple[list[list[int]], list[int]]:
        """Input columns and output column of level n, as lists."""
        key = ("edges", n)
        if key not in self._decomp:
            X = self.X
            self._decomp[key] = ([edge_map(X, n, i - 1, i).tolist() for i in range(1, n + 1)],
                                 edge_map(X, n, 0, n).tolist())
        return self._decomp[key]

    def profile(self, n: int, x: int) -> Profile:
        ins, out = self._edges(n)
        return tuple(c[x] for c in ins), out[x]

    def operations(self, inputs: Sequence[int], output: int) -> list[int]:
        return self.ops.get((tuple(inputs), output), [])

    def output(self, n: int, x: int) -> int:
        return self._edges(n)[1][x]

    # -- generic composition -------------------------------------------
    def decomposition(self, shape: tuple[int, ...]) -> tuple[np.ndarray, list[np.ndarray]]:
        """Face maps from level K to the outer and inner operations."""
        outer, inners, _, _ = self._tables(shape)
        return outer, inners

    def _tables(self, shape: tuple[int, ...]):
        if shape not in self._decomp:
            X = self.X
            K = sum(shape)
            b = _boundaries(shape)
            outer = face_composite(X, K, b)
            inners = [face_composite(X, K, range(b[i], b[i + 1] + 1)) for i in range(len(shape))]
            table: dict[tuple[int, ...], list[int]] = defaultdict(list)
            cols = [outer] + inners
            rows = list(zip(*(c.tolist() for c in cols)))
            for z, key in enumerate(rows):
                table[key].append(z)
            self._decomp[shape] = (outer, inners, table, rows)
        return self._decomp[shape]

    def compose(self, outer: int, inners: Sequence[int], shape: Sequence[int]) -> int:
        """The composite of ``outer`` with inner operations of arities
        ``shape`` (all indices are level-local)."""
        shape = tuple(shape)
        n = len(shape)
        if len(inners) != n:
            raise OperadError("one inner operation per input of the outer one")
        ins, _ = self.profile(n, outer)
        for i, (y, k) in enumerate(zip(inners, shape)):
            if self.output(k, y) != ins[i]:
                raise OperadError(f"inner {i} has output colour {self.output(k, y)}, expected {ins[i]}")
        found = self._tables(shape)[2].get((outer, *inners), [])
        if len(found) != 1:
            raise OperadError(f"{len(found)} composites; the simplicial set is not 2-Segal here")
        return found[0]

    def cocompose(self, z: int, shape: Sequence[int]) -> CompositionInstance:
        shape = tuple(shape)
        row = self._tables(shape)[3][z]
        return CompositionInstance(row[0], row[1:], z, shape)


def build_operad(X: SimplicialSet, max_arity: int | None = None) -> ColouredOperadData:
    """Operation sets up to ``max_arity`` (default: truncation - 1)."""
    max_arity = X.truncation - 1 if max_arity is None else max_arity
    if max_arity > X.truncation:
        raise ValueError("max_arity exceeds the truncation")
    ops: dict[Profile, list[int]] = defaultdict(list)
    for n in range(1, max_arity + 1):
        cols = [edge_map(X, n, i - 1, i).tolist() for i in range(1, n + 1)]
        out = edge_map(X, n, 0, n).tolist()
        for x in range(X.size(n)):
            ops[(tuple(c[x] for c in cols), out[x])].append(x)
    return ColouredOperadData(X, max_arity, dict(ops))


@dataclass
class InvertibilityReport:
    ok: bool
    checked: int
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_invertible(O: ColouredOperadData) -> InvertibilityReport:
    """Every composition map, for every shape up to ``max_arity``, is a
    bijection onto the compatible tuples, and unary operations are units."""
    X = O.X
    checked = 0
    for (ins, out), xs in O.ops.items():
        if len(ins) == 1 and (ins[0] != out or len(xs) != 1 or xs[0] != out):
            return InvertibilityReport(False, checked, {"kind": "unit", "colour": out, "operations": xs})
    long_counts = {k: np.bincount(edge_map(X, k, 0, k), minlength=X.size(1)).astype(object)
                   for k in range(1, O.max_arity + 1)}
    for K in range(1, O.max_arity + 1):
        for shape in compositions(K):
            checked += 1
            n = len(shape)
            outer, inners = O.decomposition(shape)
            sizes = [X.size(n)] + [X.size(k) for k in shape]
            ranks = rank_rows([outer] + list(inners), sizes) if X.size(K) else np.zeros(0, dtype=np.int64)
            hit = _first_collision(ranks)
            if hit is not None:
                return InvertibilityReport(False, checked, {"kind": "not injective", "shape": shape,
                                                            "elements": [X.code(K, i) for i in hit]})
            total = np.ones(X.size(n), dtype=object)
            for i, k in enumerate(shape):
                total = total * long_counts[k][edge_map(X, n, i, i + 1)]
            expected = int(total.sum())
            if expected != X.size(K):
                return InvertibilityReport(False, checked, {"kind": "not surjective", "shape": shape,
                                                            "compatible": expected, "level": X.size(K)})
    return InvertibilityReport(True, checked)


# ---------------------------------------------------------------------------
# explicit formulas on concrete representatives


def model_key(model, x, n: int):
    """Class key of one concrete simplex of a tree or graph model."""
    if hasattr(model, "eu"):
        colours, mask = x
        return int(model.key(np.array([colours], dtype=np.int64), np.array([mask], dtype=np.int64), n)[0])
    return model.key(x)


def _candidates(O: "ColouredOperadData", k: int, support: frozenset[int]):
    model = O.X.model
    key = ("cand", k, support)
    cache = O._decomp
    if key not in cache:
        if hasattr(model, "eu"):
            c, m = model.enumerate_level(k)
            inside = c > 0
            sel = np.all(inside == np.isin(np.arange(model.V), sorted(support)), axis=1)
            cache[key] = [(tuple(int(v) for v in row), int(mk)) for row, mk in zip(c[sel], m[sel])]
        else:
            cache[key] = [x for x in model.elements(k) if frozenset(p for p, l in enumerate(x) if l) == support]
    return cache[key]


def explicit_compose(O: ColouredOperadData, outer: int, inners: Sequence[int], shape: Sequence[int]) -> int:
    """Compose by relayering a representative: the vertices of the outer
    operation's i-th part receive the parts of the i-th inner operation,
    shifted past the earlier blocks."""
    X = O.X
    model = X.model
    n = len(shape)
    K = sum(shape)
    b = _boundaries(shape)
    is_graph = hasattr(model, "eu")
    if is_graph:
        colours, mask = X.reps[n][outer]
    else:
        colours, mask = X.reps[n][outer], None
    result = list(colours)
    for i, (y, k) in enumerate(zip(inners, shape), start=1):
        part = frozenset(p for p, c in enumerate(colours) if c == i)
        want = X.keys[k][y]
        want = int(want) if is_graph else want
        cands = _candidates(O, k, part)
        if is_graph:
            inside_edges = sum(1 << j for j in range(model.E)
                               if int(model.eu[j]) in part and int(model.ev[j]) in part)
            cands = [c for c in cands if c[1] == mask & inside_edges]
        inner = next((c for c in cands if model_key(model, c, k) == want), None)
        if inner is None:
            raise OperadError(f"inner operation {i} does not fit the outer part")
        inner_colours = inner[0] if is_graph else inner
        for p in part:
            result[p] = b[i - 1] + inner_colours[p]
    concrete = (tuple(result), mask) if is_graph else tuple(result)
    key = model_key(model, concrete, K)
    if is_graph:
        return int(np.searchsorted(X.keys[K], key))
    return X.index(K, key)


__all__ = [
    "OperadError",
    "CompositionInstance",
    "ColouredOperadData",
    "compositions",
    "build_operad",
    "InvertibilityReport",
    "check_invertible",
    "explicit_compose",
]
