"""The pointed double category of a reduced simplicial set.

Objects are level-1 elements and both kinds of morphism are level-2
elements: a horizontal morphism ``x`` goes ``d_2 x -> d_1 x`` and a vertical
one goes ``d_1 x -> d_0 x``.  A square is a level-3 element ``w`` with
vertical sides ``d_3 w`` (source) and ``d_2 w`` (target) and horizontal
sides ``d_1 w`` (source) and ``d_0 w`` (target).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .simplicial import SimplicialSet, nondegenerate


class CompositionError(ValueError):
    """Morphisms that do not compose, or a missing or ambiguous filler."""


@dataclass
class DoubleCategoryData:
    """Index tables of a double category.

    ``hor_src[k]``/``hor_tgt[k]`` are the objects of morphism ``k`` read
    horizontally, ``ver_src``/``ver_tgt`` vertically.  Row ``q`` of
    ``squares`` is ``(s_h, s_v, t_h, t_v)``.
    """

    n_objects: int
    hor_src: np.ndarray
    hor_tgt: np.ndarray
    ver_src: np.ndarray
    ver_tgt: np.ndarray
    hor_id: np.ndarray
    ver_id: np.ndarray
    squares: np.ndarray
    basepoint: int
    source: SimplicialSet | None = field(default=None, repr=False)
    _fill: dict = field(default_factory=dict, repr=False)

    @property
    def n_morphisms(self) -> int:
        return len(self.hor_src)

    @property
    def n_squares(self) -> int:
        return len(self.squares)

    def object_code(self, a: int) -> str:
        return self.source.code(1, a) if self.source is not None else str(a)

    def morphism_code(self, m: int) -> str:
        return self.source.code(2, m) if self.source is not None else str(m)

    def square_code(self, q: int) -> str:
        return self.source.code(3, q) if self.source is not None else str(q)

    def hor_identities(self) -> set[int]:
        return set(self.hor_id.tolist())

    def ver_identities(self) -> set[int]:
        return set(self.ver_id.tolist())

    # -- composition ----------------------------------------------------
    def _filler(self, kind: str, a: int, b: int) -> int:
        """The unique level-3 element with the two given faces."""
        X = self.source
        if X is None:
            raise CompositionError("composition needs the underlying simplicial set")
        table = self._fill.get(kind)
        if table is None:
            i, j = (3, 1) if kind == "hor" else (2, 0)
            table = defaultdict(list)
            for w, pair in enumerate(zip(X.faces[3][i].tolist(), X.faces[3][j].tolist())):
                table[pair].append(w)
            self._fill[kind] = table
        found = table.get((a, b), [])
        if len(found) != 1:
            raise CompositionError(f"{len(found)} fillers for {kind} pair ({a}, {b}); input is not 2-Segal")
        return found[0]

    def hor_compose(self, f: int, g: int) -> int:
        """``g . f`` for horizontal ``f: A -> B`` and ``g: B -> C``."""
        if self.hor_tgt[f] != self.hor_src[g]:
            raise CompositionError("horizontal morphisms are not composable")
        return int(self.source.faces[3][2][self._filler("hor", f, g)])

    def ver_compose(self, u: int, v: int) -> int:
        """``v . u`` for vertical ``u: A -> B`` and ``v: B -> C``."""
        if self.ver_tgt[u] != self.ver_src[v]:
            raise CompositionError("vertical morphisms are not composable")
        return int(self.source.faces[3][1][self._filler("ver", u, v)])

    def square_hor_compose(self, p: int, q: int) -> int:
        """Paste ``q`` to the right of ``p`` (``t_h`` of p is ``s_h`` of q)."""
        return self._paste(p, q, horizontal=True)

    def square_ver_compose(self, p: int, q: int) -> int:
        """Paste ``q`` below ``p`` (``t_v`` of p is ``s_v`` of q)."""
        return self._paste(p, q, horizontal=False)

    def _paste(self, p: int, q: int, horizontal: bool) -> int:
        X = self.source
        if X is None or X.truncation < 4:
            raise CompositionError("square pasting needs level 4")
        s_h, s_v, t_h, t_v = range(4)
        if horizontal:
            if self.squares[p, t_h] != self.squares[q, s_h]:
                raise CompositionError("squares do not share a vertical side")
            # p = d_4 w, q = d_2 w, result d_3 w
            faces, keep = (4, 2), 3
        else:
            if self.squares[p, t_v] != self.squares[q, s_v]:
                raise CompositionError("squares do not share a horizontal side")
            # p = d_2 w, q = d_0 w, result d_1 w
            faces, keep = (2, 0), 1
        key = ("paste", horizontal)
        table = self._fill.get(key)
        if table is None:
            table = defaultdict(list)
            a, b = faces
            for w, pair in enumerate(zip(X.faces[4][a].tolist(), X.faces[4][b].tolist())):
                table[pair].append(w)
            self._fill[key] = table
        found = table.get((p, q), [])
        if len(found) != 1:
            raise CompositionError(f"{len(found)} fillers for the pasting; input is not 2-Segal")
        return int(X.faces[4][keep][found[0]])


def extract(X: SimplicialSet) -> DoubleCategoryData:
    """Read off the double category of a reduced simplicial set with
    truncation at least 3."""
    if not X.is_reduced():
        raise ValueError("the simplicial set is not reduced")
    if X.truncation < 3:
        raise ValueError("need levels up to 3")
    d = X.faces
    squares = np.stack([d[3][3], d[3][1], d[3][2], d[3][0]], axis=1)
    return DoubleCategoryData(
        X.size(1), d[2][2], d[2][1], d[2][1], d[2][0],
        X.degeneracies[1][1], X.degeneracies[1][0], squares, X.basepoint, X,
    )


# ---------------------------------------------------------------------------
# properties


def _fibre_size(a: np.ndarray, b: np.ndarray, m: int) -> int:
    """``|{(x, y) : a[x] == b[y]}|`` for index arrays into ``range(m)``."""
    return int(np.dot(np.bincount(a, minlength=m).astype(object), np.bincount(b, minlength=m).astype(object)))


def stability_report(D: DoubleCategoryData) -> dict:
    """How the two side maps of squares compare to the fibre products of
    vertical and horizontal morphisms over their shared corner."""
    out = {}
    Q = D.squares
    M = max(D.n_morphisms, 1)
    for name, (v, h, vcorner, hcorner) in {
        "source": (0, 1, D.ver_src, D.hor_src),
        "target": (2, 3, D.ver_tgt, D.hor_tgt),
    }.items():
        pairs = Q[:, v] * M + Q[:, h]
        corners_ok = bool(np.all(vcorner[Q[:, v]] == hcorner[Q[:, h]])) if len(Q) else True
        out[name] = {
            "squares": len(Q),
            "distinct_pairs": int(len(np.unique(pairs))),
            "fibre_product": _fibre_size(vcorner, hcorner, D.n_objects),
            "corners_ok": corners_ok,
        }
    return out


def check_stable(D: DoubleCategoryData) -> bool:
    """Every square is determined by its source sides and, separately, by
    its target sides, and every compatible pair of sides occurs."""
    return all(
        r["corners_ok"] and r["squares"] == r["distinct_pairs"] == r["fibre_product"]
        for r in stability_report(D).values()
    )


def check_corners(D: DoubleCategoryData) -> bool:
    """The four corners of every square match up."""
    s_h, s_v, t_h, t_v = D.squares.T
    return bool(
        np.all(D.ver_src[s_h] == D.hor_src[s_v])
        and np.all(D.ver_tgt[t_h] == D.hor_tgt[t_v])
        and np.all(D.hor_tgt[s_v] == D.ver_src[t_h])
        and np.all(D.ver_tgt[s_h] == D.hor_src[t_v])
    )


def check_augmented(D: DoubleCategoryData, A: Iterable[int]) -> bool:
    """Every object receives exactly one horizontal morphism from ``A`` and
    sends exactly one vertical morphism into ``A``."""
    inA = np.zeros(D.n_objects, dtype=bool)
    inA[list(A)] = True
    hor = np.bincount(D.hor_tgt[inA[D.hor_src]], minlength=D.n_objects)
    ver = np.bincount(D.ver_src[inA[D.ver_tgt]], minlength=D.n_objects)
    return bool(np.all(hor == 1) and np.all(ver == 1))


def check_pointed(D: DoubleCategoryData) -> bool:
    """The basepoint is initial for horizontal and terminal for vertical
    morphisms."""
    return check_augmented(D, [D.basepoint])


def check_categories(D: DoubleCategoryData) -> list[str]:
    """Identity and associativity laws of both compositions, exhaustively.
    Returns descriptions of violations."""
    bad = []
    for kind, src, tgt, ident, comp in (
        ("hor", D.hor_src, D.hor_tgt, D.hor_id, D.hor_compose),
        ("ver", D.ver_src, D.ver_tgt, D.ver_id, D.ver_compose),
    ):
        out_of: dict[int, list[int]] = defaultdict(list)
        for m, a in enumerate(src.tolist()):
            out_of[a].append(m)
        cache: dict[tuple[int, int], int] = {}

        def c(f, g):
            if (f, g) not in cache:
                cache[(f, g)] = comp(f, g)
            return cache[(f, g)]

        for f in range(D.n_morphisms):
            a, b = int(src[f]), int(tgt[f])
            try:
                if c(int(ident[a]), f) != f or c(f, int(ident[b])) != f:
                    bad.append(f"{kind} identity law fails at {D.morphism_code(f)}")
                for g in out_of[b]:
                    fg = c(f, g)
                    if src[fg] != a or tgt[fg] != tgt[g]:
                        bad.append(f"{kind} composite has wrong ends")
                    for h in out_of[int(tgt[g])]:
                        if c(fg, h) != c(f, c(g, h)):
                            bad.append(f"{kind} associativity fails at {f},{g},{h}")
            except CompositionError as exc:
                bad.append(f"{kind} composition undefined from {D.morphism_code(f)}: {exc}")
    return bad


# ---------------------------------------------------------------------------
# counting


@dataclass
class DoubleCensus:
    objects: int
    hor: int
    ver: int
    squares: int

    @property
    def morphisms(self) -> int:
        return self.hor + self.ver

    def as_dict(self) -> dict:
        return {"objects": self.objects, "hor": self.hor, "ver": self.ver,
                "hor_plus_ver": self.morphisms, "squares": self.squares}


def census_double(D: DoubleCategoryData, strict_only: bool = False, nonempty_objects: bool = False,
                  identities: bool = False) -> DoubleCensus:
    """Counts of objects, horizontal and vertical morphisms and squares.

    ``strict_only`` keeps nondegenerate morphisms and squares (every layer
    nonempty); ``nonempty_objects`` drops the basepoint and everything
    touching it; identities are dropped unless ``identities`` is set.
    """
    keep_obj = np.ones(D.n_objects, dtype=bool)
    if nonempty_objects:
        keep_obj[D.basepoint] = False
    keep_m = np.ones(D.n_morphisms, dtype=bool)
    keep_q = np.ones(D.n_squares, dtype=bool)
    if strict_only:
        X = D.source
        keep_m[:] = False
        keep_m[nondegenerate(X, 2)] = True
        keep_q[:] = False
        keep_q[nondegenerate(X, 3)] = True
    hor = keep_m & keep_obj[D.hor_src] & keep_obj[D.hor_tgt]
    ver = keep_m & keep_obj[D.ver_src] & keep_obj[D.ver_tgt]
    if not identities:
        hor[D.hor_id] = False
        ver[D.ver_id] = False
    if nonempty_objects:
        s_h, s_v, t_h, t_v = D.squares.T
        for side, ends in ((s_h, (D.ver_src, D.ver_tgt)), (t_h, (D.ver_src, D.ver_tgt)),
                           (s_v, (D.hor_src, D.hor_tgt)), (t_v, (D.hor_src, D.hor_tgt))):
            keep_q &= keep_obj[ends[0][side]] & keep_obj[ends[1][side]]
    return DoubleCensus(int(keep_obj.sum()), int(hor.sum()), int(ver.sum()), int(keep_q.sum()))


# ---------------------------------------------------------------------------
# export


def to_dot(D: DoubleCategoryData, include_identities: bool = False) -> str:
    """Objects as nodes, horizontal and vertical morphisms as edges."""
    lines = ["digraph double {"]
    for a in range(D.n_objects):
        lines.append(f"  o{a} [label={json.dumps(D.object_code(a))}];")
    hid, vid = D.hor_identities(), D.ver_identities()
    for m in range(D.n_morphisms):
        label = json.dumps(D.morphism_code(m))
        if include_identities or m not in hid:
            lines.append(f"  o{D.hor_src[m]} -> o{D.hor_tgt[m]} [id=\"h{m}\", kind=hor, arrowhead=vee, label={label}];")
        if include_identities or m not in vid:
            lines.append(f"  o{D.ver_src[m]} -> o{D.ver_tgt[m]} [id=\"v{m}\", kind=ver, style=dashed, label={label}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def squares_json(D: DoubleCategoryData) -> str:
    """Squares as 4-tuples of DOT edge ids ``(s_h, s_v, t_h, t_v)``."""
    rows = [
        {"square": q, "code": D.square_code(q),
         "edges": [f"v{s_h}", f"h{s_v}", f"v{t_h}", f"h{t_v}"]}
        for q, (s_h, s_v, t_h, t_v) in enumerate(D.squares.tolist())
    ]
    return json.dumps({"squares": rows}, indent=2, sort_keys=True) + "\n"


__all__ = [
    "CompositionError",
    "DoubleCategoryData",
    "extract",
    "stability_report",
    "check_stable",
    "check_corners",
    "check_pointed",
    "check_augmented",
    "check_categories",
    "DoubleCensus",
    "census_double",
    "to_dot",
    "squares_json",
]
