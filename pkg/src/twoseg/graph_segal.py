"""Finite multigraphs and the simplicial set of their partitioned subgraphs.

An n-simplex is a subgraph ``H`` (a vertex set together with any
sub-multiset of the edges joining its vertices) with an ordered partition
``V(H) = S_1 u ... u S_n`` into possibly empty parts.  Concretely it is a
*colour vector* (``c[v] = i`` when ``v`` lies in ``S_i``, 0 when ``v`` is
outside ``H``) and an *edge mask* (bit ``j`` set when edge ``j`` is in ``H``).

Levels are built with numpy over all concrete simplices at once.  In the
unlabelled variant two simplices are identified when an isomorphism of the
underlying multigraphs carries one partition to the other; classes are keyed
by the smallest encoding over all vertex permutations.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .simplicial import SimplicialSet, nondegenerate

_NAME = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class Graph:
    """Vertices are ``0..len(names)-1``; ``edges[j]`` is an unordered pair
    ``(u, v)`` with ``u <= v``.  Repeated pairs are parallel edges; ``u == v``
    is a loop and needs ``allow_loops``."""

    names: tuple[str, ...]
    edges: tuple[tuple[int, int], ...] = ()
    allow_loops: bool = False

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError("vertex names must be distinct")
        norm = []
        for u, v in self.edges:
            if not (0 <= u < len(self.names) and 0 <= v < len(self.names)):
                raise ValueError(f"edge ({u}, {v}) has a missing endpoint")
            if u == v and not self.allow_loops:
                raise ValueError(f"loop at {self.names[u]} needs allow_loops")
            norm.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def n_vertices(self) -> int:
        return len(self.names)

    def vertex(self, name: str) -> int:
        return self.names.index(name)

    def edge_name(self, j: int) -> str:
        u, v = self.edges[j]
        base = f"{self.names[u]}-{self.names[v]}"
        rank = sum(1 for e in self.edges[:j] if e == self.edges[j])
        return base if rank == 0 else f"{base}.{rank}"

    def edges_between(self, a: str, b: str) -> list[int]:
        pair = tuple(sorted((self.vertex(a), self.vertex(b))))
        return [j for j, e in enumerate(self.edges) if e == pair]

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.names)]
        lines += [f"{self.names[u]}-{self.names[v]}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def parse_graph(text: str, allow_loops: bool = False) -> Graph:
    """Edge-list format: one ``u-v`` per line, plus an optional
    ``vertices: a b c`` line for isolated vertices (names may also be comma
    separated).  Blank lines and ``#`` comments are ignored."""
    names: list[str] = []
    edges: list[tuple[str, str]] = []

    def add(name: str) -> None:
        if not _NAME.fullmatch(name):
            raise ValueError(f"bad vertex name {name!r}")
        if name not in names:
            names.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vertices:"):
            for name in re.split(r"[\s,]+", line.split(":", 1)[1].strip()):
                if name:
                    add(name)
            continue
        parts = [p.strip() for p in line.split("-")]
        if len(parts) != 2 or not all(parts):
            raise ValueError(f"line {lineno}: expected 'u-v', got {raw!r}")
        for p in parts:
            add(p)
        edges.append((parts[0], parts[1]))
    return Graph(tuple(names), tuple((names.index(a), names.index(b)) for a, b in edges), allow_loops)


def graph_from_edges(edges: Iterable[tuple[str, str]], vertices: Sequence[str] = (),
                     allow_loops: bool = False) -> Graph:
    names = list(vertices)
    pairs = list(edges)
    for a, b in pairs:
        for x in (a, b):
            if x not in names:
                names.append(x)
    return Graph(tuple(names), tuple((names.index(a), names.index(b)) for a, b in pairs), allow_loops)


def path_graph(names: Sequence[str]) -> Graph:
    return graph_from_edges(zip(names, names[1:]), names)


def star_graph(n: int) -> Graph:
    """K_{1,n} with centre ``c`` and leaves ``l1..ln``."""
    leaves = [f"l{k}" for k in range(1, n + 1)]
    return graph_from_edges((("c", l) for l in leaves), ["c"] + leaves)


def complete_graph(n: int) -> Graph:
    names = [f"v{k}" for k in range(n)]
    return graph_from_edges(itertools.combinations(names, 2), names)


def multi_edge(n: int) -> Graph:
    """Two vertices ``a``, ``b`` joined by n parallel edges."""
    return graph_from_edges([("a", "b")] * n, ["a", "b"])


def underlying_graph(T) -> Graph:
    """The graph of a rooted forest: vertex order is the preorder of ``T``
    and edge ``j`` is the j-th parent/child pair."""
    order = T.vertices
    pos = {v: k for k, v in enumerate(order)}
    names = tuple(T.label(v) for v in order)
    return Graph(names, tuple((pos[p], pos[c]) for p, c in T.edges))


def all_simple_graphs(max_vertices: int) -> list[Graph]:
    """One graph per isomorphism class of simple graphs on 1..max_vertices
    vertices (brute force over edge sets, deduplicated by canonical form)."""
    out = []
    for k in range(1, max_vertices + 1):
        names = [f"v{i}" for i in range(k)]
        pairs = list(itertools.combinations(range(k), 2))
        perms = list(itertools.permutations(range(k)))
        seen = set()
        for r in range(len(pairs) + 1):
            for chosen in itertools.combinations(pairs, r):
                edge_set = frozenset(chosen)
                canon = min(
                    tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edge_set)) for p in perms
                )
                if canon in seen:
                    continue
                seen.add(canon)
                out.append(Graph(tuple(names), tuple(sorted(chosen))))
    return out


# ---------------------------------------------------------------------------
# vectorised levels


def _submasks(mask: int) -> np.ndarray:
    bits = [1 << j for j in range(mask.bit_length()) if mask >> j & 1]
    subs = np.zeros(1, dtype=np.int64)
    for b in bits:
        subs = np.concatenate([subs, subs + b])
    return subs


class GraphModel:
    """Concrete simplices of a graph, level by level, as numpy arrays."""

    def __init__(self, G: Graph, labelled: bool = True):
        self.G = G
        self.labelled = labelled
        V, E = G.n_vertices, len(G.edges)
        if E > 62:
            raise ValueError("too many edges for a 64-bit mask")
        self.V, self.E = V, E
        self.eu = np.array([u for u, _ in G.edges], dtype=np.int64)
        self.ev = np.array([v for _, v in G.edges], dtype=np.int64)
        self.loop_bits = sum(1 << j for j, (u, v) in enumerate(G.edges) if u == v)
        # unordered vertex pairs (with the diagonal when loops are allowed)
        self.pairs = [(a, b) for a in range(V) for b in range(a, V) if a != b or G.allow_loops]
        pair_index = {p: k for k, p in enumerate(self.pairs)}
        self.edge_pair = np.array([pair_index[e] for e in G.edges], dtype=np.int64)
        self.max_mult = max(Counter(G.edges).values(), default=0)
        self._perm_cache: list | None = None

    # -- enumeration ----------------------------------------------------
    def enumerate_level(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """All concrete n-simplices as (colours[K, V], masks[K])."""
        V = self.V
        if n == 0:
            return np.zeros((1, V), dtype=np.int64), np.zeros(1, dtype=np.int64)
        colours_all = np.array(list(itertools.product(range(n + 1), repeat=V)), dtype=np.int64).reshape(-1, V)
        inside = colours_all > 0
        support = inside @ (1 << np.arange(V, dtype=np.int64)) if V else np.zeros(len(colours_all), dtype=np.int64)
        chunks_c, chunks_m = [], []
        for s in np.unique(support):
            rows = colours_all[support == s]
            allowed = 0
            forced = 0
            for j, (u, v) in enumerate(self.G.edges):
                if s >> u & 1 and s >> v & 1:
                    if u == v:
                        forced |= 1 << j
                    else:
                        allowed |= 1 << j
            subs = _submasks(allowed) | forced
            chunks_c.append(np.repeat(rows, len(subs), axis=0))
            chunks_m.append(np.tile(subs, len(rows)))
        return np.concatenate(chunks_c), np.concatenate(chunks_m)

    # -- faces ----------------------------------------------------------
    def _prune(self, colours: np.ndarray, masks: np.ndarray) -> np.ndarray:
        """Drop edges with an endpoint outside the support."""
        if self.E == 0:
            return masks
        alive = (colours[:, self.eu] > 0) & (colours[:, self.ev] > 0)
        keep = alive @ (1 << np.arange(self.E, dtype=np.int64))
        return masks & keep

    def face(self, colours: np.ndarray, masks: np.ndarray, n: int, i: int) -> tuple[np.ndarray, np.ndarray]:
        c = colours.copy()
        if i == 0:
            c = np.where(c == 1, 0, np.where(c > 1, c - 1, 0))
            return c, self._prune(c, masks)
        if i == n:
            c[c == n] = 0
            return c, self._prune(c, masks)
        c[c > i] -= 1
        return c, masks

    def degeneracy(self, colours: np.ndarray, masks: np.ndarray, n: int, i: int) -> tuple[np.ndarray, np.ndarray]:
        c = colours.copy()
        c[c > i] += 1
        return c, masks

    # -- keys -----------------------------------------------------------
    def labelled_key(self, colours: np.ndarray, masks: np.ndarray, n: int) -> np.ndarray:
        weights = (n + 1) ** np.arange(self.V - 1, -1, -1, dtype=np.int64)
        if (n + 1) ** self.V * (1 << self.E) >= 1 << 62:
            raise OverflowError("level too large for 64-bit keys")
        return (colours @ weights) * (1 << self.E) + masks

    def multiplicities(self, masks: np.ndarray) -> np.ndarray:
        M = np.zeros((len(masks), len(self.pairs)), dtype=np.int64)
        for j in range(self.E):
            M[:, self.edge_pair[j]] += (masks >> j) & 1
        return M

    def _permutations(self):
        if self._perm_cache is None:
            pair_index = {p: k for k, p in enumerate(self.pairs)}
            out = []
            for perm in itertools.permutations(range(self.V)):
                pmap = [pair_index[tuple(sorted((perm[a], perm[b])))] for a, b in self.pairs]
                out.append((np.array(perm, dtype=np.int64), np.array(pmap, dtype=np.int64)))
            self._perm_cache = out
        return self._perm_cache

    def adjacency(self, masks: np.ndarray) -> np.ndarray:
        """Symmetric multiplicity matrices ``A[k, u, v]``."""
        A = np.zeros((len(masks), self.V, self.V), dtype=np.int64)
        for j in range(self.E):
            bit = (masks >> j) & 1
            u, v = int(self.eu[j]), int(self.ev[j])
            A[:, u, v] += bit
            if u != v:
                A[:, v, u] += bit
        return A

    def canonical_key(self, colours: np.ndarray, masks: np.ndarray, n: int) -> np.ndarray:
        """Smallest encoding of ``(colours, multiplicities)`` over relabellings
        of the vertices.

        Only relabellings that sort the vertices by an isomorphism-invariant
        signature (colour, degree, colours of neighbours) are tried; the
        admissible set moves along with any isomorphism, so the minimum is
        still a complete invariant.
        """
        V, P = self.V, len(self.pairs)
        bc, bm = n + 1, self.max_mult + 1
        if bc ** V * bm ** P >= 1 << 62:
            raise OverflowError("graph too large for 64-bit canonical keys")
        K = len(masks)
        if K == 0 or V == 0:
            return np.zeros(K, dtype=np.int64)
        wc = bc ** np.arange(V - 1, -1, -1, dtype=np.int64) * bm ** P
        W = np.zeros((V, V), dtype=np.int64)  # weight of the new pair (a, b), a <= b
        for k, (a, b) in enumerate(self.pairs):
            W[a, b] = bm ** (P - 1 - k)
        A = self.adjacency(masks)
        deg = A.sum(axis=2)
        spread = (2 * self.E + 1) ** colours  # neighbour colours, weighted by multiplicity
        nbr = np.einsum("kuv,kv->ku", A, spread)
        sig = (colours * (2 * self.E + 2) + deg) * (int(nbr.max(initial=0)) + 1) + nbr
        order = np.argsort(sig, axis=1, kind="stable")
        ssig = np.take_along_axis(sig, order, axis=1)
        ties = np.concatenate([np.zeros((K, 1), dtype=bool), ssig[:, 1:] == ssig[:, :-1]], axis=1)
        pattern = ties @ (1 << np.arange(V, dtype=np.int64))
        best = np.full(K, np.iinfo(np.int64).max, dtype=np.int64)
        for pat in np.unique(pattern):
            sel = np.nonzero(pattern == pat)[0]
            blocks, start = [], 0
            for v in range(1, V + 1):
                if v == V or not (pat >> v & 1):
                    blocks.append(range(start, v))
                    start = v
            perms = np.array([[p for block in choice for p in block]
                              for choice in itertools.product(*(itertools.permutations(b) for b in blocks))])
            Wf = W.ravel()
            step = max(1, (1 << 21) // (len(perms) * V * V))
            local_best = np.empty(len(sel), dtype=np.int64)
            for lo in range(0, len(sel), step):
                chunk = sel[lo:lo + step]
                vert = order[chunk][:, perms]  # (rows, perms, V): new k <- old vert[..., k]
                cval = np.take_along_axis(colours[chunk][:, None, :], vert, axis=2) @ wc
                flat = (vert[:, :, :, None] * V + vert[:, :, None, :]).reshape(len(chunk), len(perms), V * V)
                Af = A[chunk].reshape(len(chunk), V * V)
                mval = np.take_along_axis(Af[:, None, :], flat, axis=2) @ Wf
                local_best[lo:lo + step] = (cval + mval).min(axis=1)
            best[sel] = local_best
        return best

    def key(self, colours: np.ndarray, masks: np.ndarray, n: int) -> np.ndarray:
        if self.labelled:
            return self.labelled_key(colours, masks, n)
        return self.canonical_key(colours, masks, n)

    # -- text -----------------------------------------------------------
    def code(self, colours: Sequence[int], mask: int) -> str:
        """``name:part`` for each vertex of H, then ``/`` and the edges.

        Unlabelled codes describe the canonical representative with vertices
        renamed ``0, 1, ...`` in canonical order."""
        G = self.G
        if self.labelled:
            verts = " ".join(f"{G.names[v]}:{c}" for v, c in enumerate(colours) if c)
            edges = " ".join(G.edge_name(j) for j in range(self.E) if mask >> j & 1 and G.edges[j][0] != G.edges[j][1])
            loops = " ".join(G.edge_name(j) for j in range(self.E) if mask >> j & 1 and G.edges[j][0] == G.edges[j][1])
            tail = " ".join(x for x in (edges, loops) if x)
            return f"{{{verts}}}" + (f" {tail}" if tail else "")
        return self._unlabelled_code(colours, mask)

    def _unlabelled_code(self, colours: Sequence[int], mask: int) -> str:
        c = np.array([colours], dtype=np.int64)
        m = np.array([mask], dtype=np.int64)
        n = max(int(c.max(initial=0)), 1)
        target = int(self.canonical_key(c, m, n)[0])
        M = self.multiplicities(m)[0]
        for perm, pmap in self._permutations():
            pc = c[0][perm]
            val = int(pc @ ((n + 1) ** np.arange(self.V - 1, -1, -1, dtype=np.int64) * (self.max_mult + 1) ** len(self.pairs)))
            val += int(M[pmap] @ ((self.max_mult + 1) ** np.arange(len(self.pairs) - 1, -1, -1, dtype=np.int64)))
            if val == target:
                new_of_old = {int(old): k for k, old in enumerate(perm)}
                shown = [k for k in range(self.V) if pc[k]]
                rename = {k: r for r, k in enumerate(shown)}
                verts = " ".join(f"{rename[k]}:{int(pc[k])}" for k in shown)
                edges = []
                for j in range(self.E):
                    if mask >> j & 1:
                        a, b = sorted((new_of_old[int(self.eu[j])], new_of_old[int(self.ev[j])]))
                        edges.append((rename[a], rename[b]))
                tail = " ".join(f"{a}-{b}" for a, b in sorted(edges))
                return f"{{{verts}}}" + (f" {tail}" if tail else "")
        raise AssertionError("canonical key not attained")


class _Reps:
    """Read-only view of class representatives as ``(colours, mask)``."""

    def __init__(self, colours: np.ndarray, masks: np.ndarray):
        self.colours, self.masks = colours, masks

    def __len__(self) -> int:
        return len(self.masks)

    def __getitem__(self, k: int) -> tuple[tuple[int, ...], int]:
        return tuple(int(c) for c in self.colours[k]), int(self.masks[k])

    def __iter__(self):
        return (self[k] for k in range(len(self)))


def _lookup(sorted_keys: np.ndarray, query: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(sorted_keys, query)
    if len(query) and (idx.max() >= len(sorted_keys) or not np.array_equal(sorted_keys[idx], query)):
        raise ValueError("face or degeneracy left the level")
    return idx.astype(np.int64)


def default_truncation(G: Graph) -> int:
    return G.n_vertices + 2


def build_XG(G: Graph, labelled: bool = True, N: int | None = None) -> SimplicialSet:
    """The partitioned-subgraph simplicial set of ``G`` truncated at ``N``."""
    N = default_truncation(G) if N is None else N
    model = GraphModel(G, labelled)
    keys, rep_c, rep_m = [], [], []
    for n in range(N + 1):
        c, m = model.enumerate_level(n)
        k = model.key(c, m, n)
        uniq, first = np.unique(k, return_index=True)
        keys.append(uniq)
        rep_c.append(c[first])
        rep_m.append(m[first])
    faces: list[list[np.ndarray]] = [[]]
    for n in range(1, N + 1):
        faces.append([_lookup(keys[n - 1], model.key(*model.face(rep_c[n], rep_m[n], n, i), n - 1))
                      for i in range(n + 1)])
    degs: list[list[np.ndarray]] = []
    for n in range(N):
        degs.append([_lookup(keys[n + 1], model.key(*model.degeneracy(rep_c[n], rep_m[n], n, i), n + 1))
                     for i in range(n + 1)])
    degs.append([])
    reps = [_Reps(c, m) for c, m in zip(rep_c, rep_m)]
    X = SimplicialSet(N, [len(k) for k in keys], faces, degs, keys=keys, reps=reps, model=model)
    X._coder = lambda n, k: model.code(*reps[n][k])
    return X


def find_element(X: SimplicialSet, parts: Sequence[Iterable[str]], edges: Iterable[str] = ()) -> int:
    """Index of the simplex with the given ordered parts (vertex names) and
    edges (``edge_name`` strings) in a graph simplicial set."""
    model: GraphModel = X.model
    G = model.G
    n = len(parts)
    colours = np.zeros((1, G.n_vertices), dtype=np.int64)
    for i, part in enumerate(parts, start=1):
        for name in part:
            colours[0, G.vertex(name)] = i
    mask = 0
    wanted = set(edges)
    for j in range(len(G.edges)):
        if G.edge_name(j) in wanted or (G.edges[j][0] == G.edges[j][1] and colours[0, G.edges[j][0]]):
            mask |= 1 << j
    key = model.key(colours, np.array([mask], dtype=np.int64), n)
    return int(_lookup(X.keys[n], key)[0])


# ---------------------------------------------------------------------------
# counts


@dataclass
class GraphCensus:
    totals: list[int]
    nondegenerate: list[int]
    all_parts_nonempty: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"totals": self.totals, "nondegenerate": self.nondegenerate,
                "all_parts_nonempty": self.all_parts_nonempty}


def graph_census(G: Graph, labelled: bool = True, N: int | None = None, X: SimplicialSet | None = None) -> GraphCensus:
    """Per-level totals, nondegenerate counts and counts of simplices whose
    parts are all nonempty."""
    X = build_XG(G, labelled, N) if X is None else X
    full = []
    for n in range(X.truncation + 1):
        c = X.reps[n].colours
        ok = np.ones(len(c), dtype=bool)
        for i in range(1, n + 1):
            ok &= (c == i).any(axis=1)
        full.append(int(ok.sum()))
    return GraphCensus(list(X.sizes), [len(nondegenerate(X, n)) for n in range(X.truncation + 1)], full)


__all__ = [
    "Graph",
    "GraphModel",
    "parse_graph",
    "graph_from_edges",
    "path_graph",
    "star_graph",
    "complete_graph",
    "multi_edge",
    "underlying_graph",
    "all_simple_graphs",
    "build_XG",
    "default_truncation",
    "find_element",
    "GraphCensus",
    "graph_census",
]
