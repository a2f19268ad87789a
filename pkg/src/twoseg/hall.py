"""Hall algebras of reduced simplicial sets, with integer structure constants.

The product of basis vectors is ``1_b * 1_b' = sum c(b, b', b'') 1_b''``
where ``c`` counts level-2 elements ``x`` with ``d_0 x = b``,
``d_2 x = b'`` and ``d_1 x = b''``.  Vectors are dictionaries from basis
index to a nonzero integer coefficient.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .simplicial import SimplicialMap, SimplicialSet

Vector = dict[int, int]


@dataclass
class HallTable:
    """Nonzero structure constants ``products[(b, b')] = {b'': c}``."""

    size: int
    products: dict[tuple[int, int], dict[int, int]]
    unit: int
    source: SimplicialSet | None = field(default=None, repr=False)

    def constant(self, a: int, b: int, z: int) -> int:
        return self.products.get((a, b), {}).get(z, 0)

    def product(self, a: int, b: int) -> Vector:
        return dict(self.products.get((a, b), {}))

    def code(self, a: int) -> str:
        return self.source.code(1, a) if self.source is not None else str(a)

    def constants(self) -> Iterable[tuple[int, int, int, int]]:
        for (a, b), row in self.products.items():
            for z, c in row.items():
                yield a, b, z, c

    def nonzero_pairs(self) -> set[tuple[int, int]]:
        return set(self.products)

    def as_rows(self) -> list[dict]:
        """One row per nonzero constant, sorted by codes."""
        rows = [{"left": self.code(a), "right": self.code(b), "result": self.code(z), "coefficient": c}
                for a, b, z, c in self.constants()]
        return sorted(rows, key=lambda r: (r["left"], r["right"], r["result"]))


def build_hall(X: SimplicialSet) -> HallTable:
    if not X.is_reduced():
        raise ValueError("the Hall algebra needs a reduced simplicial set")
    if X.truncation < 2:
        raise ValueError("need level 2")
    d0, d1, d2 = (X.faces[2][i] for i in range(3))
    m = X.size(1)
    flat = (d0 * m + d2) * m + d1
    values, counts = np.unique(flat, return_counts=True)
    products: dict[tuple[int, int], dict[int, int]] = defaultdict(dict)
    for v, c in zip(values.tolist(), counts.tolist()):
        ab, z = divmod(v, m)
        a, b = divmod(ab, m)
        products[(a, b)][z] = c
    return HallTable(m, dict(products), X.basepoint, X)


def _as_vector(H: HallTable, v: int | Mapping[int, int]) -> Vector:
    return {v: 1} if isinstance(v, (int, np.integer)) else {k: c for k, c in v.items() if c}


def multiply(H: HallTable, u: int | Mapping[int, int], v: int | Mapping[int, int]) -> Vector:
    """Product of two basis elements or integer combinations of them."""
    out: Vector = defaultdict(int)
    for a, x in _as_vector(H, u).items():
        for b, y in _as_vector(H, v).items():
            for z, c in H.products.get((a, b), {}).items():
                out[z] += x * y * c
    return {z: c for z, c in out.items() if c}


def is_commutative(H: HallTable) -> tuple[bool, tuple[int, int] | None]:
    """Whether ``1_a * 1_b == 1_b * 1_a`` always; otherwise the offending
    pair that is smallest by codes."""
    bad = [(a, b) for (a, b) in H.products if H.products[(a, b)] != H.products.get((b, a), {})]
    if not bad:
        return True, None
    a, b = min(bad, key=lambda p: tuple(sorted((H.code(p[0]), H.code(p[1])))))
    if H.code(b) < H.code(a):
        a, b = b, a
    return False, (a, b)


@dataclass
class LawReport:
    associative: bool
    unital: bool
    violations: list[tuple] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.associative and self.unital


def check_algebra_laws(H: HallTable, max_violations: int = 10) -> LawReport:
    """Two-sided unit law and associativity on all basis triples.

    Associativity is compared as the two sums over intermediate elements,
    built by joining the sparse table with itself.
    """
    violations: list[tuple] = []
    e = H.unit
    unital = True
    for b in range(H.size):
        if H.product(e, b) != {b: 1} or H.product(b, e) != {b: 1}:
            unital = False
            violations.append(("unit", b))
            if len(violations) >= max_violations:
                break
    by_left: dict[int, list[tuple[int, dict[int, int]]]] = defaultdict(list)
    for (a, b), row in H.products.items():
        by_left[a].append((b, row))
    by_right: dict[int, list[tuple[int, dict[int, int]]]] = defaultdict(list)
    for (a, b), row in H.products.items():
        by_right[b].append((a, row))
    lhs: dict[tuple, int] = defaultdict(int)  # ((a*b)*c)
    for (a, b), row in H.products.items():
        for z, c1 in row.items():
            for c, row2 in by_left[z]:
                for w, c2 in row2.items():
                    lhs[(a, b, c, w)] += c1 * c2
    rhs: dict[tuple, int] = defaultdict(int)  # (a*(b*c))
    for (b, c), row in H.products.items():
        for z, c1 in row.items():
            for a, row2 in by_right[z]:
                for w, c2 in row2.items():
                    rhs[(a, b, c, w)] += c1 * c2
    associative = True
    for key in sorted(set(lhs) | set(rhs)):
        if lhs.get(key, 0) != rhs.get(key, 0):
            associative = False
            violations.append(("associativity", key[:3], key[3], lhs.get(key, 0), rhs.get(key, 0)))
            if len(violations) >= max_violations:
                break
    return LawReport(associative, unital, violations)


def coefficients_in(H: HallTable, allowed: set[int]) -> bool:
    return all(c in allowed for _, _, _, c in H.constants())


# ---------------------------------------------------------------------------
# graphs


def graph_hall_rules(X: SimplicialSet, H: HallTable | None = None) -> dict:
    """Check the five product rules of a labelled graph Hall algebra.

    1. the empty subgraph is a two-sided unit;
    2. subgraphs sharing a vertex multiply to zero;
    3. two distinct vertices multiply to the sum of the ``2^n`` subgraphs on
       them, ``n`` the number of edges joining them;
    4. disjoint nonempty subgraphs multiply to the sum, each with
       coefficient one, of their union with any set of crossing edges;
    5. the product is commutative.

    Returns ``{rule: list of failures}``; all lists empty means every rule
    holds.
    """
    model = X.model
    if model is None or not getattr(model, "labelled", False):
        raise ValueError("graph_hall_rules needs a labelled graph simplicial set")
    H = build_hall(X) if H is None else H
    G = model.G
    colours, masks = X.reps[1].colours, X.reps[1].masks
    verts = [frozenset(np.nonzero(row)[0].tolist()) for row in colours]
    index = {(v, int(mk)): k for k, (v, mk) in enumerate(zip(verts, masks.tolist()))}
    failures: dict[str, list] = {str(r): [] for r in range(1, 6)}
    empty = H.unit
    for b in range(H.size):
        if H.product(empty, b) != {b: 1} or H.product(b, empty) != {b: 1}:
            failures["1"].append(H.code(b))
    for a, b in itertools.product(range(H.size), repeat=2):
        if a == empty or b == empty:
            continue
        got = H.product(a, b)
        if verts[a] & verts[b]:
            if got:
                failures["2"].append((H.code(a), H.code(b)))
            continue
        cross = [j for j, (u, v) in enumerate(G.edges)
                 if (u in verts[a] and v in verts[b]) or (u in verts[b] and v in verts[a])]
        union = verts[a] | verts[b]
        base = int(masks[a]) | int(masks[b])
        expected = {}
        for r in range(len(cross) + 1):
            for chosen in itertools.combinations(cross, r):
                expected[index[(union, base | sum(1 << j for j in chosen))]] = 1
        if got != expected:
            failures["4"].append((H.code(a), H.code(b)))
        if len(verts[a]) == 1 and len(verts[b]) == 1 and masks[a] == 0 and masks[b] == 0:
            if len(got) != 2 ** len(cross) or any(c != 1 for c in got.values()):
                failures["3"].append((H.code(a), H.code(b)))
    ok, pair = is_commutative(H)
    if not ok:
        failures["5"].append(tuple(H.code(p) for p in pair))
    return failures


# ---------------------------------------------------------------------------
# induced maps


class PreconditionError(ValueError):
    """The map lacks the property needed for the requested direction."""


@dataclass
class InducedHom:
    """A linear map between Hall algebras given on basis vectors."""

    direction: str
    source: HallTable
    target: HallTable
    images: list[Vector]
    multiplicative: bool
    unital: bool
    witness: tuple | None = None

    @property
    def is_homomorphism(self) -> bool:
        return self.multiplicative and self.unital

    def apply(self, v: int | Mapping[int, int]) -> Vector:
        out: Vector = defaultdict(int)
        for k, c in _as_vector(self.source, v).items():
            for z, d in self.images[k].items():
                out[z] += c * d
        return {z: c for z, c in out.items() if c}


def _linear_check(L: InducedHom) -> InducedHom:
    src, tgt = L.source, L.target
    unital = L.apply(src.unit) == {tgt.unit: 1}
    for a, b in itertools.product(range(src.size), repeat=2):
        left = L.apply(multiply(src, a, b))
        right = multiply(tgt, L.images[a], L.images[b])
        if left != right:
            L.multiplicative = False
            L.witness = (src.code(a), src.code(b), left, right)
            break
    L.unital = unital
    return L


def induced_hom(F: SimplicialMap, direction: str, check: bool = True,
                source_table: HallTable | None = None, target_table: HallTable | None = None) -> InducedHom:
    """``F^*`` (direction ``"pullback"``) or ``F_*`` (``"pushforward"``).

    With ``check`` the CULF, respectively relatively Segal, property of F is
    verified first and :class:`PreconditionError` raised when it fails.
    Multiplicativity and unitality are always tested and reported.
    """
    from .umap import check_culf, check_relatively_segal

    HX = build_hall(F.source) if source_table is None else source_table
    HY = build_hall(F.target) if target_table is None else target_table
    F1 = F.components[1].tolist()
    if direction == "pullback":
        if check and not check_culf(F):
            raise PreconditionError("the map is not CULF")
        images: list[Vector] = [dict() for _ in range(HY.size)]
        for x, y in enumerate(F1):
            images[y][x] = 1
        L = InducedHom(direction, HY, HX, images, True, True)
    elif direction == "pushforward":
        if check and not check_relatively_segal(F):
            raise PreconditionError("the map is not relatively Segal")
        L = InducedHom(direction, HX, HY, [{y: 1} for y in F1], True, True)
    else:
        raise ValueError("direction must be 'pullback' or 'pushforward'")
    return _linear_check(L)


__all__ = [
    "HallTable",
    "build_hall",
    "multiply",
    "is_commutative",
    "LawReport",
    "check_algebra_laws",
    "coefficients_in",
    "graph_hall_rules",
    "PreconditionError",
    "InducedHom",
    "induced_hom",
]
