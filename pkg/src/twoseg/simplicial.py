"""Truncated, level-finite simplicial sets stored as integer face and
degeneracy tables, with verifiers for the simplicial identities, Segal maps
and the 2-Segal condition (pullback squares and polygon triangulations)."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Any, Callable, Hashable, Iterable, Protocol, Sequence

import numpy as np

Table = np.ndarray


class Model(Protocol):
    """What :func:`build` needs to know about a family of simplices.

    ``elements(n)`` yields concrete simplices of dimension n; ``key`` sends a
    concrete simplex to the identifier of its class (the identity for labelled
    models); ``face`` and ``degeneracy`` act on concrete simplices; ``code``
    gives the exported text form of a representative.
    """

    def elements(self, n: int) -> Iterable[Any]: ...
    def key(self, x: Any) -> Hashable: ...
    def face(self, x: Any, n: int, i: int) -> Any: ...
    def degeneracy(self, x: Any, n: int, i: int) -> Any: ...
    def code(self, x: Any) -> str: ...


def _table(values: Iterable[int]) -> Table:
    return np.fromiter(values, dtype=np.int64)


def rank_rows(columns: Sequence[Table], sizes: Sequence[int] | None = None) -> Table:
    """Dense ranks of the rows of a column stack: equal rows get equal ranks.

    Columns are folded in one at a time and re-ranked after each step, so the
    intermediate keys never overflow.
    """
    if not columns:
        raise ValueError("need at least one column")
    key = np.asarray(columns[0], dtype=np.int64)
    for j, col in enumerate(columns[1:], start=1):
        col = np.asarray(col, dtype=np.int64)
        base = int(sizes[j]) if sizes is not None else int(col.max(initial=0)) + 1
        key = np.unique(key * base + col, return_inverse=True)[1].reshape(-1)
    if len(columns) == 1:
        key = np.unique(key, return_inverse=True)[1].reshape(-1)
    return key


def _first_collision(ranks: Table) -> tuple[int, int] | None:
    order = np.argsort(ranks, kind="stable")
    sorted_ranks = ranks[order]
    dup = np.nonzero(sorted_ranks[1:] == sorted_ranks[:-1])[0]
    if len(dup) == 0:
        return None
    j = dup[0]
    return int(order[j]), int(order[j + 1])


def _accumulate(index: Table, values: np.ndarray, size: int) -> np.ndarray:
    """``out[index[k]] += values[k]`` with exact (Python int) arithmetic."""
    out = np.zeros(size, dtype=object)
    for i, v in zip(index.tolist(), values.tolist()):
        out[i] += v
    return out


@dataclass
class SimplicialSet:
    """Levels ``0..truncation`` with face and degeneracy tables.

    ``faces[n][i][k]`` is the index in level ``n-1`` of ``d_i`` applied to
    element ``k`` of level ``n``; ``degeneracies[n][i][k]`` is the index in
    level ``n+1`` of ``s_i`` of element ``k`` (present for ``n < truncation``).
    Element identity is the level-local index; ``codes`` gives the text form.
    """

    truncation: int
    sizes: list[int]
    faces: list[list[Table]]
    degeneracies: list[list[Table]]
    keys: list[Sequence[Hashable]] | None = None
    reps: list[Sequence[Any]] | None = None
    model: Any = field(default=None, repr=False)
    _codes: list[list[str]] | None = field(default=None, repr=False)
    _coder: Callable[[int, int], str] | None = field(default=None, repr=False)
    _index: list[dict[Hashable, int]] | None = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def size(self, n: int) -> int:
        return self.sizes[n]

    def index(self, n: int, key: Hashable) -> int:
        """Level-local index of the class with the given key."""
        if self._index is None:
            self._index = [{k: i for i, k in enumerate(level)} for level in self.keys]
        return self._index[n][key]

    def find(self, n: int, concrete: Any) -> int:
        """Index of the class of a concrete simplex (needs a model)."""
        return self.index(n, self.model.key(concrete))

    def rep(self, n: int, k: int) -> Any:
        return self.reps[n][k]

    @property
    def codes(self) -> list[list[str]]:
        if self._codes is None:
            if self._coder is not None:
                self._codes = [[self._coder(n, k) for k in range(self.sizes[n])] for n in range(self.truncation + 1)]
            elif self.model is not None and self.reps is not None:
                self._codes = [[self.model.code(x) for x in level] for level in self.reps]
            elif self.keys is not None:
                self._codes = [[str(k) for k in level] for level in self.keys]
            else:
                self._codes = [[str(k) for k in range(s)] for s in self.sizes]
        return self._codes

    def code(self, n: int, k: int) -> str:
        if self._codes is None and self._coder is not None:
            return self._coder(n, k)
        return self.codes[n][k]

    def code_index(self, n: int, code: str) -> int:
        key = ("codeindex", n)
        if key not in self._cache:
            self._cache[key] = {c: i for i, c in enumerate(self.codes[n])}
        return self._cache[key][code]

    def is_reduced(self) -> bool:
        return self.sizes[0] == 1

    @property
    def basepoint(self) -> int:
        """Index in level 1 of ``s_0`` of the unique vertex."""
        if not self.is_reduced():
            raise ValueError("simplicial set is not reduced")
        return int(self.degeneracies[0][0][0])

    def truncated(self, N: int) -> "SimplicialSet":
        """The same data cut down to levels ``0..N``."""
        if N > self.truncation:
            raise ValueError("cannot extend a truncation")
        return SimplicialSet(
            N,
            self.sizes[: N + 1],
            self.faces[: N + 1],
            [self.degeneracies[n] for n in range(N)] + [[]],
            self.keys[: N + 1] if self.keys is not None else None,
            self.reps[: N + 1] if self.reps is not None else None,
            self.model,
            self._codes[: N + 1] if self._codes is not None else None,
            self._coder,
            self._index[: N + 1] if self._index is not None else None,
        )

    def copy_tables(self) -> "SimplicialSet":
        """A copy whose tables may be edited (fault injection in tests)."""
        return SimplicialSet(
            self.truncation,
            list(self.sizes),
            [[t.copy() for t in level] for level in self.faces],
            [[t.copy() for t in level] for level in self.degeneracies],
            self.keys,
            self.reps,
            self.model,
            self._codes,
            self._coder,
            self._index,
        )


def build(model: Model, truncation: int) -> SimplicialSet:
    """Materialise levels ``0..truncation`` of a model."""
    keys: list[list[Hashable]] = []
    reps: list[list[Any]] = []
    index: list[dict[Hashable, int]] = []
    concrete: list[dict[Any, int]] = []  # every enumerated simplex -> class
    for n in range(truncation + 1):
        seen: dict[Hashable, int] = {}
        known: dict[Any, int] = {}
        level_keys: list[Hashable] = []
        level_reps: list[Any] = []
        for x in model.elements(n):
            k = model.key(x)
            if k not in seen:
                seen[k] = len(level_keys)
                level_keys.append(k)
                level_reps.append(x)
            known[x] = seen[k]
        keys.append(level_keys)
        reps.append(level_reps)
        index.append(seen)
        concrete.append(known)

    def lookup(n: int, x: Any) -> int:
        hit = concrete[n].get(x)
        if hit is not None:
            return hit
        try:
            return index[n][model.key(x)]
        except KeyError:
            raise ValueError(f"model produced a simplex outside level {n}: {x!r}") from None

    faces: list[list[Table]] = [[]]
    for n in range(1, truncation + 1):
        faces.append([_table(lookup(n - 1, model.face(x, n, i)) for x in reps[n]) for i in range(n + 1)])
    degs: list[list[Table]] = []
    for n in range(truncation):
        degs.append([_table(lookup(n + 1, model.degeneracy(x, n, i)) for x in reps[n]) for i in range(n + 1)])
    degs.append([])
    X = SimplicialSet(truncation, [len(l) for l in keys], faces, degs, keys, reps, model)
    X._index = index
    return X


# ---------------------------------------------------------------------------
# identities


@dataclass(frozen=True)
class Violation:
    """A failed identity on ``element`` of level ``n``."""

    n: int
    identity: str
    i: int
    j: int
    element: int


def check_identities(X: SimplicialSet, limit: int | None = 20) -> list[Violation]:
    """Every simplicial identity that can be evaluated inside the truncation.

    Returns at most ``limit`` violations (all of them when ``limit`` is None).
    """
    out: list[Violation] = []
    F, S, N = X.faces, X.degeneracies, X.truncation

    def record(n: int, name: str, i: int, j: int, lhs: Table, rhs: Table) -> bool:
        for k in np.nonzero(lhs != rhs)[0]:
            out.append(Violation(n, name, i, j, int(k)))
            if limit is not None and len(out) >= limit:
                return True
        return False

    # d_i d_j = d_{j-1} d_i for i < j
    for n in range(2, N + 1):
        for j in range(n + 1):
            for i in range(j):
                if record(n, "d_i d_j", i, j, F[n - 1][i][F[n][j]], F[n - 1][j - 1][F[n][i]]):
                    return out
    # d_i s_j on level n
    ident = [np.arange(s, dtype=np.int64) for s in X.sizes]
    for n in range(0, N):
        for j in range(n + 1):
            s = S[n][j]
            for i in range(n + 2):
                lhs = F[n + 1][i][s]
                if i == j or i == j + 1:
                    rhs = ident[n]
                elif i < j:
                    rhs = S[n - 1][j - 1][F[n][i]]
                else:
                    rhs = S[n - 1][j][F[n][i - 1]]
                if record(n, "d_i s_j", i, j, lhs, rhs):
                    return out
    # s_i s_j = s_{j+1} s_i for i <= j
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if record(n, "s_i s_j", i, j, S[n + 1][i][S[n][j]], S[n + 1][j + 1][S[n][i]]):
                    return out
    return out


# ---------------------------------------------------------------------------
# generalised faces and simplicial operators


def face_composite(X: SimplicialSet, n: int, S: Iterable[int]) -> Table:
    """The map level n -> level ``|S|-1`` that keeps the vertices in S.

    Faces for the missing vertices are applied from the highest index down.
    """
    S = tuple(sorted(set(S)))
    if not S or S[0] < 0 or S[-1] > n:
        raise ValueError(f"bad vertex set {S} for dimension {n}")
    cache_key = ("face", n, S)
    if cache_key not in X._cache:
        result = np.arange(X.size(n), dtype=np.int64)
        level = n
        for j in sorted(set(range(n + 1)) - set(S), reverse=True):
            result = X.faces[level][j][result]
            level -= 1
        X._cache[cache_key] = result
    return X._cache[cache_key]


def simplicial_operator(X: SimplicialSet, n: int, theta: Sequence[int]) -> Table:
    """The action of a monotone map ``theta : [m] -> [n]`` (given by its list
    of values) as a map level n -> level m."""
    theta = tuple(theta)
    if not theta or any(a > b for a, b in zip(theta, theta[1:])) or theta[0] < 0 or theta[-1] > n:
        raise ValueError(f"{theta} is not a monotone map into [{n}]")
    cache_key = ("op", n, theta)
    if cache_key not in X._cache:
        image = sorted(set(theta))
        result = face_composite(X, n, image)
        level = len(image) - 1
        for j in range(len(theta) - 1):
            if theta[j] == theta[j + 1]:
                result = X.degeneracies[level][j][result]
                level += 1
        X._cache[cache_key] = result
    return X._cache[cache_key]


def edge_map(X: SimplicialSet, n: int, a: int, b: int) -> Table:
    """``x -> d_{a,b} x``: the edge of an n-simplex from vertex a to b."""
    return face_composite(X, n, (a, b))


def nondegenerate(X: SimplicialSet, n: int) -> list[int]:
    """Indices of level-n elements outside the image of every degeneracy."""
    if n == 0:
        return list(range(X.size(0)))
    hit = np.zeros(X.size(n), dtype=bool)
    for table in X.degeneracies[n - 1]:
        hit[table] = True
    return [int(k) for k in np.nonzero(~hit)[0]]


# ---------------------------------------------------------------------------
# Segal maps


@dataclass
class SegalReport:
    """Images of the Segal map in dimension ``n``.

    ``chains`` is the size of the iterated fibre product of level 1 over
    level 0; ``collision`` is a pair of elements with equal image and
    ``missing`` a chain of edges outside the image, when they exist.
    """

    n: int
    images: np.ndarray
    chains: int
    injective: bool
    surjective: bool
    collision: tuple[int, int] | None = None
    missing: tuple[int, ...] | None = None

    def image(self, k: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.images[k])

    def preimages(self, target: Sequence[int]) -> list[int]:
        return [int(k) for k in np.nonzero((self.images == np.asarray(target)).all(axis=1))[0]]


def count_chains(X: SimplicialSet, n: int) -> int:
    """Number of composable strings ``(e_1, ..., e_n)`` of level-1 elements
    with ``d_0 e_k = d_1 e_{k+1}``."""
    d0, d1 = X.faces[1][0], X.faces[1][1]
    ways = np.ones(X.size(0), dtype=object)
    for _ in range(n):
        ways = _accumulate(d1, ways[d0], X.size(0))
    return int(sum(ways))


def segal_map(X: SimplicialSet, n: int) -> SegalReport:
    """``x -> (d_{01} x, ..., d_{n-1,n} x)`` with injectivity/surjectivity."""
    if n < 2:
        raise ValueError("Segal maps start in dimension 2")
    parts = [edge_map(X, n, k, k + 1) for k in range(n)]
    images = np.stack(parts, axis=1)
    ranks = rank_rows(parts, [X.size(1)] * n) if X.size(n) else np.zeros(0, dtype=np.int64)
    collision = _first_collision(ranks)
    distinct = int(ranks.max(initial=-1)) + 1
    chains = count_chains(X, n)
    missing = None
    if distinct < chains:
        missing = _find_missing_chain(X, n, {tuple(row) for row in images.tolist()})
    return SegalReport(n, images, chains, collision is None, distinct == chains, collision, missing)


def _find_missing_chain(X: SimplicialSet, n: int, present: set) -> tuple[int, ...] | None:
    d0, d1 = X.faces[1][0].tolist(), X.faces[1][1].tolist()
    by_source: dict[int, list[int]] = defaultdict(list)
    for e, v in enumerate(d1):
        by_source[v].append(e)
    stack: list[tuple[int, ...]] = [(e,) for e in range(X.size(1))]
    while stack:
        chain = stack.pop()
        if len(chain) == n:
            if chain not in present:
                return chain
            continue
        stack.extend(chain + (e,) for e in by_source[d0[chain[-1]]])
    return None


# ---------------------------------------------------------------------------
# 2-Segal: pullback squares


@dataclass
class CheckReport:
    """Outcome of a family of checks; truthy when all of them passed."""

    ok: bool
    witnesses: list[dict] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def square_families(n: int, i: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Vertex sets (A, B) of the two squares for dimension n and 0 < i < n-1.

    The first glues ``{0, i+1, ..., n}`` and ``{0, ..., i+1}`` along the edge
    ``{0, i+1}``; the second glues ``{0, ..., i, n}`` and ``{i, ..., n}``
    along ``{i, n}``.
    """
    first = ((0,) + tuple(range(i + 1, n + 1)), tuple(range(0, i + 2)))
    second = (tuple(range(0, i + 1)) + (n,), tuple(range(i, n + 1)))
    return [first, second]


def gluing_witness(X: SimplicialSet, n: int, A: Sequence[int], B: Sequence[int]) -> dict | None:
    """``None`` when level n maps bijectively onto ``X_A x_{X_1} X_B``,
    otherwise a dictionary describing the failure.

    A and B must cover ``{0..n}`` and share exactly two vertices.
    """
    A, B = tuple(sorted(set(A))), tuple(sorted(set(B)))
    common = sorted(set(A) & set(B))
    if len(common) != 2 or set(A) | set(B) != set(range(n + 1)):
        raise ValueError("A and B must cover [n] and share exactly one edge")
    fa, fb = face_composite(X, n, A), face_composite(X, n, B)
    la, lb = len(A) - 1, len(B) - 1
    ea = edge_map(X, la, A.index(common[0]), A.index(common[1]))
    eb = edge_map(X, lb, B.index(common[0]), B.index(common[1]))
    base = {"n": n, "A": A, "B": B}
    pair = fa * X.size(lb) + fb
    collision = _first_collision(pair)
    if collision is not None:
        return {**base, "kind": "not injective", "elements": collision}
    m = X.size(1)
    ca = np.bincount(ea, minlength=m).astype(object)
    cb = np.bincount(eb, minlength=m).astype(object)
    fibre = int(np.dot(ca, cb)) if m else 0
    if fibre != X.size(n):
        present = set(pair.tolist())
        by_edge: dict[int, list[int]] = defaultdict(list)
        for b, e in enumerate(eb.tolist()):
            by_edge[e].append(b)
        for a, e in enumerate(ea.tolist()):
            for b in by_edge[e]:
                if a * X.size(lb) + b not in present:
                    return {**base, "kind": "not surjective", "missing": (a, b),
                            "fibre_size": fibre, "level_size": X.size(n)}
    return None


def check_2segal_pullbacks(X: SimplicialSet, N: int | None = None, max_witnesses: int = 5) -> CheckReport:
    """Both square families for every ``3 <= n <= N`` and ``0 < i < n-1``."""
    N = X.truncation if N is None else N
    if N > X.truncation:
        raise ValueError("N exceeds the truncation")
    witnesses = []
    for n in range(3, N + 1):
        for i in range(1, n - 1):
            for A, B in square_families(n, i):
                w = gluing_witness(X, n, A, B)
                if w is not None:
                    w["i"] = i
                    witnesses.append(w)
                    if len(witnesses) >= max_witnesses:
                        return CheckReport(False, witnesses)
    return CheckReport(not witnesses, witnesses)


# ---------------------------------------------------------------------------
# 2-Segal: triangulations

Triangle = tuple[int, int, int]


@lru_cache(maxsize=None)
def triangulations(n: int) -> tuple[tuple[Triangle, ...], ...]:
    """All triangulations of the polygon with vertices ``0..n`` (n >= 2).

    The triangle on the edge ``{a, b}`` picks an apex k strictly between and
    the two sides are triangulated recursively.
    """
    if n < 2:
        raise ValueError("a polygon needs at least three vertices")

    @lru_cache(maxsize=None)
    def between(a: int, b: int) -> tuple[tuple[Triangle, ...], ...]:
        if b - a < 2:
            return ((),)
        return tuple(
            left + ((a, k, b),) + right
            for k in range(a + 1, b)
            for left in between(a, k)
            for right in between(k, b)
        )

    return between(0, n)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _triangle_edge(X: SimplicialSet, t: Triangle, e: tuple[int, int]) -> Table:
    """Edge ``e`` (a pair of polygon vertices) of a 2-simplex placed on t."""
    dropped = ({0, 1, 2} - {t.index(e[0]), t.index(e[1])}).pop()
    return X.faces[2][dropped]


def _triangle_edges(t: Triangle) -> list[tuple[int, int]]:
    return [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]


def triangulation_families(X: SimplicialSet, tri: Sequence[Triangle]) -> list[tuple[int, ...]]:
    """Explicit list of compatible families: one 2-simplex per triangle,
    agreeing on every shared edge and every shared vertex."""
    tri = list(tri)
    edge_tables = [{e: _triangle_edge(X, t, e).tolist() for e in _triangle_edges(t)} for t in tri]
    src, tgt = X.faces[1][1].tolist(), X.faces[1][0].tolist()
    families: list[tuple[int, ...]] = []
    edges: dict[tuple[int, int], int] = {}
    verts: dict[int, int] = {}

    def rec(idx: int, acc: list[int]) -> None:
        if idx == len(tri):
            families.append(tuple(acc))
            return
        for y in range(X.size(2)):
            new_e: dict[tuple[int, int], int] = {}
            new_v: dict[int, int] = {}
            ok = True
            for e, table in edge_tables[idx].items():
                val = table[y]
                if edges.get(e, val) != val:
                    ok = False
                    break
                new_e[e] = val
                for vtx, vv in ((e[0], src[val]), (e[1], tgt[val])):
                    if verts.get(vtx, new_v.get(vtx, vv)) != vv:
                        ok = False
                    new_v[vtx] = vv
                if not ok:
                    break
            if not ok:
                continue
            added_e = [e for e in new_e if e not in edges]
            added_v = [v for v in new_v if v not in verts]
            edges.update(new_e)
            verts.update(new_v)
            acc.append(y)
            rec(idx + 1, acc)
            acc.pop()
            for e in added_e:
                del edges[e]
            for v in added_v:
                del verts[v]

    rec(0, [])
    return families


def count_triangulation_families(X: SimplicialSet, tri: Sequence[Triangle]) -> int:
    """|Hom(Delta[tri], X)| by dynamic programming over the dual tree
    (triangles adjacent through diagonals)."""
    tri = list(tri)
    owners: dict[tuple[int, int], list[int]] = defaultdict(list)
    for idx, t in enumerate(tri):
        for e in _triangle_edges(t):
            owners[e].append(idx)
    adj: dict[int, list[tuple[int, tuple[int, int]]]] = defaultdict(list)
    for e, ts in owners.items():
        if len(ts) == 2:
            a, b = ts
            adj[a].append((b, e))
            adj[b].append((a, e))
    m = X.size(1)

    def weights(idx: int, parent: int | None) -> np.ndarray:
        w = np.ones(X.size(2), dtype=object)
        for child, e in adj[idx]:
            if child == parent:
                continue
            per_edge = _accumulate(_triangle_edge(X, tri[child], e), weights(child, idx), m)
            w = w * per_edge[_triangle_edge(X, tri[idx], e)]
        return w

    return int(sum(weights(0, None))) if X.size(2) else 0


def check_2segal_triangulations(X: SimplicialSet, n_max: int | None = None, explicit: bool = False,
                                max_witnesses: int = 5) -> CheckReport:
    """For every ``3 <= n <= n_max`` and every triangulation of the
    (n+1)-gon, level n must map bijectively onto compatible families.

    ``explicit=True`` lists the families instead of counting them.
    """
    n_max = min(X.truncation, 6) if n_max is None else n_max
    if n_max > X.truncation:
        raise ValueError("n_max exceeds the truncation")
    if n_max > 6:
        raise ValueError("the triangulation oracle stops at n = 6")
    witnesses = []
    for n in range(3, n_max + 1):
        for tri in triangulations(n):
            parts = [face_composite(X, n, t) for t in tri]
            ranks = rank_rows(parts, [X.size(2)] * len(parts)) if X.size(n) else np.zeros(0, dtype=np.int64)
            distinct = int(ranks.max(initial=-1)) + 1
            missing = None
            if explicit:
                fams = triangulation_families(X, tri)
                size = len(fams)
                present = {tuple(r) for r in np.stack(parts, axis=1).tolist()}
                missing = next((f for f in fams if f not in present), None)
            else:
                size = count_triangulation_families(X, tri)
            if distinct != X.size(n) or size != X.size(n):
                witnesses.append({"n": n, "triangulation": tri, "level_size": X.size(n),
                                  "image_size": distinct, "families": size, "missing": missing})
                if len(witnesses) >= max_witnesses:
                    return CheckReport(False, witnesses)
    return CheckReport(not witnesses, witnesses)


# ---------------------------------------------------------------------------
# maps


@dataclass
class SimplicialMap:
    """Per-level functions ``components[n][k]`` from source to target."""

    source: SimplicialSet
    target: SimplicialSet
    components: list[Table]

    @property
    def truncation(self) -> int:
        return min(self.source.truncation, self.target.truncation, len(self.components) - 1)

    def validate(self, limit: int | None = 20) -> list[tuple[str, int, int, int]]:
        """Failures of commutation with faces and degeneracies as
        ``(kind, n, i, element)``; empty when the map is simplicial."""
        bad: list[tuple[str, int, int, int]] = []
        X, Y, U, N = self.source, self.target, self.components, self.truncation

        def record(kind, n, i, lhs, rhs):
            for k in np.nonzero(lhs != rhs)[0]:
                bad.append((kind, n, i, int(k)))
                if limit is not None and len(bad) >= limit:
                    return True
            return False

        for n in range(1, N + 1):
            for i in range(n + 1):
                if record("face", n, i, U[n - 1][X.faces[n][i]], Y.faces[n][i][U[n]]):
                    return bad
        for n in range(N):
            for i in range(n + 1):
                if record("degeneracy", n, i, U[n + 1][X.degeneracies[n][i]], Y.degeneracies[n][i][U[n]]):
                    return bad
        return bad

    @classmethod
    def identity(cls, X: SimplicialSet) -> "SimplicialMap":
        return cls(X, X, [np.arange(X.size(n), dtype=np.int64) for n in range(X.truncation + 1)])


# ---------------------------------------------------------------------------
# small examples


class NerveModel:
    """Chains ``o_0 <= ... <= o_n`` in a finite poset."""

    def __init__(self, objects: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool]):
        self.objects = list(objects)
        self.leq = leq

    def elements(self, n):
        def rec(chain):
            if len(chain) == n + 1:
                yield tuple(chain)
                return
            for o in range(len(self.objects)):
                if not chain or self.leq(self.objects[chain[-1]], self.objects[o]):
                    yield from rec(chain + [o])

        yield from rec([])

    def key(self, x):
        return x

    def face(self, x, n, i):
        return x[:i] + x[i + 1:]

    def degeneracy(self, x, n, i):
        return x[: i + 1] + x[i:]

    def code(self, x):
        return "<" + " ".join(str(self.objects[o]) for o in x) + ">"


def nerve_of_poset(objects: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool],
                   truncation: int) -> SimplicialSet:
    """The nerve of a finite poset viewed as a category."""
    return build(NerveModel(objects, leq), truncation)


class _PointModel:
    def elements(self, n):
        yield ()

    def key(self, x):
        return x

    def face(self, x, n, i):
        return ()

    def degeneracy(self, x, n, i):
        return ()

    def code(self, x):
        return "*"


def point(truncation: int) -> SimplicialSet:
    """One element in every level."""
    return build(_PointModel(), truncation)


# ---------------------------------------------------------------------------
# JSON


def to_json_dict(X: SimplicialSet) -> dict:
    return {
        "truncation": X.truncation,
        "levels": X.codes,
        "faces": [[t.tolist() for t in level] for level in X.faces],
        "degeneracies": [[t.tolist() for t in level] for level in X.degeneracies],
    }


def dumps(X: SimplicialSet) -> str:
    return json.dumps(to_json_dict(X), sort_keys=True, ensure_ascii=False)


def from_json_dict(data: dict) -> SimplicialSet:
    levels = [list(level) for level in data["levels"]]
    N = int(data["truncation"])
    if len(levels) != N + 1:
        raise ValueError("number of levels does not match the truncation")
    faces = [[np.asarray(t, dtype=np.int64) for t in level] for level in data["faces"]]
    degs = [[np.asarray(t, dtype=np.int64) for t in level] for level in data["degeneracies"]]
    if len(faces) != N + 1 or len(degs) != N + 1:
        raise ValueError("table count does not match the truncation")
    X = SimplicialSet(N, [len(l) for l in levels], faces, degs, keys=levels)
    X._codes = levels
    return X


def loads(text: str) -> SimplicialSet:
    return from_json_dict(json.loads(text))
