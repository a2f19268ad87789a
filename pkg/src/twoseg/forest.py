"""Rooted forests in three flavours, their lower sets, admissible subforests,
layerings and canonical codes.

Vertices are dense integer ids assigned in parse order (which is also the
depth-first preorder of the written expression).  Labels are presentation
only; the ``flavour`` decides which structure an isomorphism must preserve:

* ``labelled`` -- the labels,
* ``planar``   -- the order of children and of root components,
* ``plain``    -- nothing beyond the rooted forest itself.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class Flavour(str, enum.Enum):
    LABELLED = "labelled"
    PLANAR = "planar"
    PLAIN = "plain"

    @classmethod
    def coerce(cls, value: "Flavour | str") -> "Flavour":
        return value if isinstance(value, Flavour) else cls(value)


class ForestSyntaxError(ValueError):
    """Raised when a forest expression cannot be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True, eq=False)
class RootedForest:
    """A finite rooted forest.

    ``children`` lists the children of every vertex in planar order and
    ``roots`` lists the root components in order.  Every vertex appears as a
    key of ``parent`` (``None`` for roots) and of ``children``.
    """

    parent: Mapping[int, int | None]
    children: Mapping[int, tuple[int, ...]]
    roots: tuple[int, ...]
    flavour: Flavour = Flavour.PLAIN
    labels: Mapping[int, str] | None = None
    _preorder: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        order: list[int] = []
        stack = list(reversed(self.roots))
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self.children[v]))
        if len(order) != len(self.parent) or set(order) != set(self.parent):
            raise ValueError("parent map is not a forest on the given roots")
        if self.flavour is Flavour.LABELLED:
            if self.labels is None or set(self.labels) != set(self.parent):
                raise ValueError("labelled forests need a label on every vertex")
            if len(set(self.labels.values())) != len(self.labels):
                raise ValueError("labels must be distinct")
        object.__setattr__(self, "_preorder", tuple(order))

    # -- basic structure -------------------------------------------------
    @property
    def vertices(self) -> tuple[int, ...]:
        """Vertices in depth-first preorder (children visited in order)."""
        return self._preorder

    def __len__(self) -> int:
        return len(self._preorder)

    def __contains__(self, v: object) -> bool:
        return v in self.parent

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Parent/child pairs ``(parent, child)`` in preorder of the child."""
        return tuple((self.parent[v], v) for v in self._preorder if self.parent[v] is not None)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def vertex_by_label(self, name: str) -> int:
        if self.labels is None:
            raise KeyError(name)
        for v, lab in self.labels.items():
            if lab == name:
                return v
        raise KeyError(name)

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        """Vertex ids for a collection of labels."""
        return frozenset(self.vertex_by_label(n) for n in names)

    def with_flavour(self, flavour: Flavour | str) -> "RootedForest":
        flavour = Flavour.coerce(flavour)
        labels = self.labels
        if flavour is Flavour.LABELLED and labels is None:
            labels = {v: str(v) for v in self.parent}
        return RootedForest(self.parent, self.children, self.roots, flavour, labels)

    def descendants(self, v: int) -> frozenset[int]:
        out = []
        stack = [v]
        while stack:
            w = stack.pop()
            out.append(w)
            stack.extend(self.children[w])
        return frozenset(out)

    def to_expression(self) -> str:
        """Inverse of :func:`parse_forest` (up to whitespace)."""

        def node(v: int) -> str:
            name = self.labels[v] if self.flavour is Flavour.LABELLED else "*"
            kids = self.children[v]
            return name + ("(" + ",".join(node(c) for c in kids) + ")" if kids else "")

        return ";".join(node(r) for r in self.roots)

    def __repr__(self) -> str:
        return f"RootedForest({self.to_expression()!r}, {self.flavour.value})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<label>[A-Za-z0-9_]+)|(?P<star>\*)|(?P<punct>[(),;]))")


def parse_forest(text: str, flavour: Flavour | str = Flavour.LABELLED) -> RootedForest:
    """Parse ``a(b(c),d)`` style expressions; ``;`` separates root components."""
    flavour = Flavour.coerce(flavour)
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ForestSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))

    parent: dict[int, int | None] = {}
    children: dict[int, list[int]] = {}
    labels: dict[int, str] = {}
    seen: dict[str, int] = {}
    i = 0

    def peek() -> tuple[str, str, int]:
        return tokens[i]

    def take(kind: str, value: str | None = None) -> tuple[str, str, int]:
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ForestSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        i += 1
        return tok

    def tree(up: int | None) -> int:
        kind, value, where = peek()
        if kind == "label":
            if flavour is not Flavour.LABELLED:
                raise ForestSyntaxError(f"label {value!r} in an unlabelled forest", where)
            if value in seen:
                raise ForestSyntaxError(f"duplicate label {value!r}", where)
            take("label")
        elif kind == "star":
            if flavour is Flavour.LABELLED:
                raise ForestSyntaxError("labelled forests need a label on every vertex", where)
            take("star")
        else:
            raise ForestSyntaxError(f"expected a vertex, found {value or 'end of input'!r}", where)
        v = len(parent)
        parent[v] = up
        children[v] = []
        if kind == "label":
            seen[value] = v
            labels[v] = value
        if up is not None:
            children[up].append(v)
        if peek()[1] == "(":
            take("punct", "(")
            tree(v)
            while peek()[1] == ",":
                take("punct", ",")
                tree(v)
            take("punct", ")")
        return v

    roots: list[int] = []
    if peek()[0] != "end":
        roots.append(tree(None))
        while peek()[1] == ";":
            take("punct", ";")
            roots.append(tree(None))
        if peek()[0] != "end":
            tok = peek()
            raise ForestSyntaxError(f"unexpected {tok[1]!r}", tok[2])
    return RootedForest(
        parent,
        {v: tuple(c) for v, c in children.items()},
        tuple(roots),
        flavour,
        labels if flavour is Flavour.LABELLED else None,
    )


# ---------------------------------------------------------------------------
# lower sets, admissible subforests, restriction


def is_lower(F: RootedForest, S: Iterable[int]) -> bool:
    S = set(S)
    return all(F.parent[v] is None or F.parent[v] in S for v in S)


def lower_sets(F: RootedForest) -> list[frozenset[int]]:
    """All downward-closed vertex sets, including the empty set and V(F)."""

    def grow(v: int) -> list[frozenset[int]]:
        # lower sets of the subtree at v that contain v
        options = [frozenset({v})]
        for c in F.children[v]:
            with_c = [frozenset()] + grow(c)
            options = [a | b for a in options for b in with_c]
        return options

    result = [frozenset()]
    for r in F.roots:
        result = [a | b for a in result for b in [frozenset()] + grow(r)]
    return result


def admissible_subforests(F: RootedForest) -> set[frozenset[int]]:
    """All differences ``A \\ B`` of nested lower sets ``B <= A``."""
    lows = lower_sets(F)
    return {a - b for a in lows for b in lows if b <= a}


def is_admissible(F: RootedForest, S: Iterable[int]) -> bool:
    """Convexity test: S is admissible iff it is closed under betweenness
    along root paths.  Agrees with :func:`admissible_subforests`."""
    S = frozenset(S)
    for v in S:
        w = F.parent[v]
        gap = False
        while w is not None:
            if w in S:
                if gap:
                    return False
            else:
                gap = True
            w = F.parent[w]
    return True


def restrict(F: RootedForest, S: Iterable[int]) -> RootedForest:
    """The subforest spanned by ``S``.  Roots are the vertices of ``S`` whose
    parent lies outside ``S``, listed in the preorder of ``F``."""
    S = frozenset(S)
    unknown = S - set(F.parent)
    if unknown:
        raise ValueError(f"vertices {sorted(unknown)} not in forest")
    order = [v for v in F.vertices if v in S]
    parent = {v: (F.parent[v] if F.parent[v] in S else None) for v in order}
    children = {v: tuple(c for c in F.children[v] if c in S) for v in order}
    roots = tuple(v for v in order if parent[v] is None)
    labels = {v: F.labels[v] for v in order} if F.labels is not None else None
    return RootedForest(parent, children, roots, F.flavour, labels)


# ---------------------------------------------------------------------------
# layerings


@dataclass(frozen=True)
class Layering:
    """``H = L0 >= L1 >= ... >= Ln = {}`` inside a host forest ``T``."""

    host: RootedForest = field(compare=False, repr=False)
    chain: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        chain = self.chain
        if not chain or chain[-1]:
            raise ValueError("a layering must end with the empty set")
        if len(chain) == 1 and chain[0]:
            raise ValueError("the zero-dimensional layering is empty")
        if any(not b <= a for a, b in zip(chain, chain[1:])):
            raise ValueError("layering is not nested")
        if not is_admissible(self.host, chain[0]):
            raise ValueError("support is not an admissible subforest")
        sub = restrict(self.host, chain[0])
        if any(not is_lower(sub, L) for L in chain):
            raise ValueError("layering contains a set that is not lower")

    @property
    def n(self) -> int:
        return len(self.chain) - 1

    @property
    def support(self) -> frozenset[int]:
        return self.chain[0]

    @property
    def layers(self) -> tuple[frozenset[int], ...]:
        """``S_i = L_{i-1} \\ L_i`` for i = 1..n (top layer first)."""
        return tuple(a - b for a, b in zip(self.chain, self.chain[1:]))

    def layer_of(self) -> dict[int, int]:
        """Map each vertex of the support to its layer index (top = 1)."""
        out = {}
        for i, S in enumerate(self.layers, start=1):
            for v in S:
                out[v] = i
        return out

    def forest(self) -> RootedForest:
        return restrict(self.host, self.support)

    @classmethod
    def from_layers(cls, host: RootedForest, layer_of: Mapping[int, int], n: int) -> "Layering":
        chain = tuple(frozenset(v for v, l in layer_of.items() if l > i) for i in range(n + 1))
        if n == 0:
            chain = (frozenset(),)
        return cls(host, chain)


def enumerate_layerings(T: RootedForest, n: int) -> list[Layering]:
    """All layerings of length ``n`` of admissible subforests of ``T``."""
    if n < 0:
        raise ValueError("dimension must be non-negative")
    if n == 0:
        return [Layering(T, (frozenset(),))]
    out = []
    for H in sorted(admissible_subforests(T), key=lambda s: (len(s), sorted(s))):
        for lay in monotone_layer_maps(T, H, n):
            out.append(Layering.from_layers(T, lay, n))
    return out


def monotone_layer_maps(T: RootedForest, H: frozenset[int], n: int) -> Iterator[dict[int, int]]:
    """Layer assignments on ``H`` with every parent in a layer no higher
    than its children (higher index = lower layer)."""
    order = [v for v in T.vertices if v in H]
    lay: dict[int, int] = {}

    def rec(k: int) -> Iterator[dict[int, int]]:
        if k == len(order):
            yield dict(lay)
            return
        v = order[k]
        p = T.parent[v]
        top = lay[p] if p in H else n
        for value in range(1, top + 1):
            lay[v] = value
            yield from rec(k + 1)
        del lay[v]

    yield from rec(0)


# ---------------------------------------------------------------------------
# canonical codes


def layered_code(
    T: RootedForest,
    layer_of: Mapping[int, int],
    flavour: Flavour | str | None = None,
) -> str:
    """Canonical code of the forest spanned by ``layer_of`` with layer marks.

    Each vertex is written ``[label:]layer(children)``; components are joined
    by ``;``.  Children and components are sorted unless the flavour keeps
    their order (planar).  Labelled codes sort by the label-bearing code,
    which is canonical because labels are unique.
    """
    flavour = Flavour.coerce(flavour or T.flavour)
    keep_order = flavour is Flavour.PLANAR
    codes: dict[int, str] = {}
    for v in reversed(T.vertices):
        if v not in layer_of:
            continue
        kids = [codes[c] for c in T.children[v] if c in layer_of]
        if not keep_order:
            kids.sort()
        head = f"{T.labels[v]}:" if flavour is Flavour.LABELLED else ""
        codes[v] = f"{head}{layer_of[v]}({''.join(kids)})"
    comps = [codes[v] for v in T.vertices if v in layer_of and T.parent[v] not in layer_of]
    if not keep_order:
        comps.sort()
    return ";".join(comps)


def canonical_code(x: Layering | RootedForest, flavour: Flavour | str | None = None) -> str:
    """Isomorphism invariant of a (layered) forest within a flavour.

    A bare forest is coded as the one-layer layering ``F >= {}``.
    """
    if isinstance(x, Layering):
        return layered_code(x.host, x.layer_of(), flavour or x.host.flavour)
    return layered_code(x, {v: 1 for v in x.vertices}, flavour or x.flavour)


# ---------------------------------------------------------------------------
# subtrees via cuts


@dataclass(frozen=True)
class Cut:
    """One admissible cut of the current forest; ``keep`` names the side kept."""

    current: frozenset[int]
    lower: frozenset[int]
    keep: str  # "lower" or "upper"

    @property
    def result(self) -> frozenset[int]:
        return self.lower if self.keep == "lower" else self.current - self.lower


def _connected(T: RootedForest, S: frozenset[int]) -> bool:
    if not S:
        return False
    tops = [v for v in S if T.parent[v] not in S]
    return len(tops) == 1


def subtree_reachable(T: RootedForest, S: Iterable[int]) -> tuple[bool, list[Cut]]:
    """Reach the subtree ``S`` from ``T`` by successive admissible cuts.

    First cut off everything outside the subtree hanging from the top vertex
    ``w0`` of ``S`` (when ``w0`` is not the root), then, for every vertex of
    ``S`` in preorder with children outside ``S``, cut those children away.
    """
    S = frozenset(S)
    if not _connected(T, S):
        raise ValueError("S is not a connected subtree")
    (w0,) = [v for v in S if T.parent[v] not in S]
    current = frozenset(T.vertices)
    cuts: list[Cut] = []
    if T.parent[w0] is not None:
        up = T.descendants(w0)
        cuts.append(Cut(current, current - up, "upper"))
        current = up
    for w in T.vertices:
        if w not in S:
            continue
        outside = [c for c in T.children[w] if c not in S and c in current]
        if outside:
            removed = frozenset().union(*(T.descendants(c) for c in outside))
            cuts.append(Cut(current, current - removed, "lower"))
            current = current - removed
    return current == S, cuts


def replay_cuts(T: RootedForest, cuts: Sequence[Cut]) -> frozenset[int]:
    """Check each recorded cut is admissible for the forest it acts on and
    return the final vertex set."""
    current = frozenset(T.vertices)
    for cut in cuts:
        if cut.current != current:
            raise ValueError("cut applied to the wrong forest")
        if not cut.lower <= current or not is_lower(restrict(T, current), cut.lower):
            raise ValueError("cut is not admissible")
        current = cut.result
    return current


# ---------------------------------------------------------------------------
# catalogues of small trees


def plain_tree_expressions(n: int) -> list[str]:
    """One expression per isomorphism class of rooted trees with n vertices."""
    memo: dict[int, list[str]] = {}

    def trees(k: int) -> list[str]:
        if k not in memo:
            memo[k] = ["*" + (f"({','.join(f)})" if f else "") for f in forests(k - 1, None)]
        return memo[k]

    def forests(k: int, bound: tuple[int, int] | None) -> list[list[str]]:
        # multisets of trees of total size k, listed in non-increasing (size, index) order
        if k == 0:
            return [[]]
        out = []
        for size in range(min(k, bound[0] if bound else k), 0, -1):
            for idx, t in enumerate(trees(size)):
                key = (size, idx)
                if bound is not None and key > bound:
                    continue
                out.extend([t] + rest for rest in forests(k - size, key))
        return out

    return trees(n) if n > 0 else []


def planar_tree_expressions(n: int) -> list[str]:
    """All planar rooted trees with n vertices (Catalan many)."""
    if n <= 0:
        return []
    memo: dict[int, list[str]] = {}

    def forests(k: int) -> list[list[str]]:
        if k == 0:
            return [[]]
        out = []
        for first in range(1, k + 1):
            for t in trees(first):
                for rest in forests(k - first):
                    out.append([t] + rest)
        return out

    def trees(k: int) -> list[str]:
        if k not in memo:
            memo[k] = ["*" + ("(" + ",".join(f) + ")" if f else "") for f in forests(k - 1)]
        return memo[k]

    return trees(n)


def all_rooted_trees(max_vertices: int, flavour: Flavour | str = Flavour.PLAIN) -> list[RootedForest]:
    """Every rooted tree with 1..max_vertices vertices, one per class of the
    flavour (labelled trees use one labelling per plain shape)."""
    flavour = Flavour.coerce(flavour)
    out = []
    for k in range(1, max_vertices + 1):
        exprs = planar_tree_expressions(k) if flavour is Flavour.PLANAR else plain_tree_expressions(k)
        for e in exprs:
            F = parse_forest(e, Flavour.PLANAR if flavour is Flavour.PLANAR else Flavour.PLAIN)
            out.append(F.with_flavour(flavour))
    return out


def relabel(F: RootedForest, mapping: Mapping[int, int], child_orders: Mapping[int, Sequence[int]] | None = None,
            root_order: Sequence[int] | None = None) -> RootedForest:
    """Rename vertex ids (labels travel with their vertices) and optionally
    reorder children and roots; used to probe isomorphism invariance."""
    parent = {mapping[v]: (mapping[p] if p is not None else None) for v, p in F.parent.items()}
    children = {}
    for v, kids in F.children.items():
        order = child_orders.get(v, kids) if child_orders else kids
        children[mapping[v]] = tuple(mapping[c] for c in order)
    roots = tuple(mapping[r] for r in (root_order if root_order is not None else F.roots))
    labels = {mapping[v]: lab for v, lab in F.labels.items()} if F.labels is not None else None
    return RootedForest(parent, children, roots, F.flavour, labels)


def path_tree(n: int, flavour: Flavour | str = Flavour.PLAIN) -> RootedForest:
    """The linear tree on n vertices rooted at an end."""
    expr = ""
    for _ in range(n):
        expr = "*" + (f"({expr})" if expr else "")
    return parse_forest(expr, Flavour.PLAIN).with_flavour(flavour)


def star_tree(n: int, flavour: Flavour | str = Flavour.PLAIN) -> RootedForest:
    """K_{1,n} rooted at its centre."""
    expr = "*" + ("(" + ",".join(["*"] * n) + ")" if n else "")
    return parse_forest(expr, Flavour.PLAIN).with_flavour(flavour)


__all__ = [
    "Flavour",
    "ForestSyntaxError",
    "RootedForest",
    "Layering",
    "Cut",
    "parse_forest",
    "lower_sets",
    "admissible_subforests",
    "is_admissible",
    "is_lower",
    "restrict",
    "enumerate_layerings",
    "monotone_layer_maps",
    "layered_code",
    "canonical_code",
    "subtree_reachable",
    "replay_cuts",
    "plain_tree_expressions",
    "planar_tree_expressions",
    "all_rooted_trees",
    "relabel",
    "path_tree",
    "star_tree",
]
