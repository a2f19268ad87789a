"""Command-line front end.

Exit status: 0 on success, 1 when a requested check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import simplicial
from .double_cat import census_double, check_pointed, check_stable, extract, squares_json, to_dot
from .forest import Flavour, ForestSyntaxError, parse_forest
from .graph_segal import build_XG, parse_graph
from .hall import build_hall, check_algebra_laws, is_commutative
from .operad import build_operad, check_invertible
from .reference import reproduce
from .simplicial import (
    SimplicialSet,
    check_2segal_pullbacks,
    check_2segal_triangulations,
    check_identities,
    nondegenerate,
)
from .tree_segal import build_XT
from .umap import build_U, check_culf, check_relatively_segal


class UsageError(Exception):
    pass


def _emit(obj, out=None) -> None:
    (out or sys.stdout).write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, default=str) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def load_tree(text: str, flavour: str):
    """Trees written with ``*`` for every vertex are unlabelled shapes;
    anything else is read with its labels and then given the flavour."""
    text = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    base = Flavour.PLAIN if "*" in text else Flavour.LABELLED
    try:
        return parse_forest(text, base).with_flavour(flavour)
    except ForestSyntaxError as exc:
        raise UsageError(f"bad tree: {exc}") from None


def _source(args, need: int = 0) -> SimplicialSet:
    """The simplicial set named by --input (JSON), --tree or --graph."""
    N = args.truncation
    if getattr(args, "tree", None):
        T = load_tree(_read(args.tree), args.flavour)
        return build_XT(T, args.flavour, N if N is not None else max(need, len(T) + 2))
    if getattr(args, "graph", None):
        try:
            G = parse_graph(_read(args.graph), allow_loops=args.loops)
        except ValueError as exc:
            raise UsageError(f"bad graph: {exc}") from None
        return build_XG(G, not args.unlabelled, N if N is not None else max(need, G.n_vertices + 2))
    if getattr(args, "input", None):
        try:
            X = simplicial.loads(_read(args.input))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad simplicial set file: {exc}") from None
        if X.truncation < need:
            raise UsageError(f"the input is truncated at {X.truncation}, need {need}")
        return X
    raise UsageError("give --input, --tree or --graph")


def _summary(X: SimplicialSet) -> dict:
    return {"truncation": X.truncation, "sizes": list(X.sizes),
            "nondegenerate": [len(nondegenerate(X, n)) for n in range(X.truncation + 1)]}


def _verify(X: SimplicialSet, tri_max: int) -> dict:
    ident = check_identities(X, limit=5)
    pull = check_2segal_pullbacks(X)
    tri = check_2segal_triangulations(X, n_max=min(tri_max, X.truncation))
    return {
        "identities": {"ok": not ident, "violations": [str(v) for v in ident]},
        "pullbacks": {"ok": pull.ok, "witnesses": pull.witnesses},
        "triangulations": {"ok": tri.ok, "witnesses": tri.witnesses},
        "two_segal": pull.ok and tri.ok,
        **_summary(X),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    X = _source(args)
    if args.output:
        _write(args.output, simplicial.dumps(X) + "\n")
    _emit(_summary(X))
    return 0


def cmd_verify(args) -> int:
    report = _verify(_source(args), args.triangulations)
    _emit(report)
    return 0 if report["two_segal"] and report["identities"]["ok"] else 1


def cmd_umap(args) -> int:
    T = load_tree(_read(args.tree), args.flavour)
    U = build_U(T, args.flavour, args.truncation)
    bad = U.validate(limit=5)
    culf, rel = check_culf(U), check_relatively_segal(U)
    _emit({"tree": T.to_expression(), "flavour": args.flavour, "truncation": U.truncation,
           "simplicial": {"ok": not bad, "violations": bad},
           "culf": culf.as_dict(), "relatively_segal": rel.as_dict()})
    return 0 if not bad else 1


def cmd_double_export(args) -> int:
    D = extract(_source(args, need=3))
    dot = to_dot(D, include_identities=args.identities)
    if args.dot:
        _write(args.dot, dot)
    else:
        sys.stdout.write(dot)
    if args.squares:
        _write(args.squares, squares_json(D))
    return 0


def cmd_double_census(args) -> int:
    D = extract(_source(args, need=3))
    out = {
        "all": census_double(D).as_dict(),
        "strict": census_double(D, strict_only=True).as_dict(),
        "nonempty": census_double(D, nonempty_objects=True).as_dict(),
        "strict_nonempty": census_double(D, strict_only=True, nonempty_objects=True).as_dict(),
        "stable": check_stable(D),
        "pointed": check_pointed(D),
    }
    _emit(out)
    return 0 if out["stable"] and out["pointed"] else 1


def cmd_hall_table(args) -> int:
    H = build_hall(_source(args, need=2))
    rows = H.as_rows()
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["left", "right", "result", "coefficient"], lineterminator="\r\n")
        w.writeheader()
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        _emit({"basis": [H.code(b) for b in range(H.size)], "unit": H.code(H.unit), "products": rows})
    return 0


def cmd_hall_check(args) -> int:
    H = build_hall(_source(args, need=2))
    laws = check_algebra_laws(H)
    comm, pair = is_commutative(H)
    _emit({"associative": laws.associative, "unital": laws.unital, "violations": laws.violations,
           "commutative": comm, "noncommuting_pair": [H.code(p) for p in pair] if pair else None})
    return 0 if laws else 1


def _colour(X: SimplicialSet, token: str) -> int:
    token = token.strip()
    if token.isdigit():
        k = int(token)
        if k >= X.size(1):
            raise UsageError(f"colour index {k} out of range")
        return k
    try:
        return X.code_index(1, token)
    except KeyError:
        raise UsageError(f"unknown colour {token!r}") from None


def cmd_operad_ops(args) -> int:
    if "|" not in args.profile:
        raise UsageError("profile must look like 'c1,c2|c0'")
    left, right = args.profile.split("|", 1)
    tokens = [t for t in left.split(",") if t.strip()]
    X = _source(args, need=len(tokens))
    O = build_operad(X, len(tokens))
    ins = tuple(_colour(X, t) for t in tokens)
    out = _colour(X, right)
    ops = O.operations(ins, out)
    _emit({"inputs": [X.code(1, c) for c in ins], "output": X.code(1, out),
           "operations": sorted(X.code(len(ins), x) for x in ops)})
    return 0


def cmd_operad_verify(args) -> int:
    X = _source(args, need=args.max_arity)
    r = check_invertible(build_operad(X, args.max_arity))
    _emit({"invertible": r.ok, "shapes_checked": r.checked, "witness": r.witness})
    return 0 if r else 1


def cmd_reproduce(args) -> int:
    rows = reproduce(args.criterion or None)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["criterion", "quantity", "expected", "computed", "match"],
                           lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow({**r, "expected": json.dumps(r["expected"]), "computed": json.dumps(r["computed"])})
        sys.stdout.write(buf.getvalue())
    else:
        _emit(rows)
    return 0 if all(r["match"] for r in rows) else 1


# ---------------------------------------------------------------------------
# parser


def _source_flags(p: argparse.ArgumentParser, tree: bool = True, graph: bool = True, json_input: bool = True) -> None:
    if json_input:
        p.add_argument("--input", help="simplicial set in JSON")
    if tree:
        p.add_argument("--tree", help="file with a tree expression such as a(b(c),d)")
        p.add_argument("--flavour", choices=[f.value for f in Flavour], default="labelled")
    if graph:
        p.add_argument("--graph", help="graph file: one u-v edge per line, optional 'vertices:' line")
        p.add_argument("--unlabelled", action="store_true", help="identify isomorphic partitioned subgraphs")
        p.add_argument("--loops", action="store_true", help="allow loops in the graph file")
    p.add_argument("--truncation", type=int, help="highest level to build")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twoseg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, kind in (("segal", "tree"), ("graph", "graph")):
        p = sub.add_parser(name, help=f"simplicial sets of a {kind}")
        s = p.add_subparsers(dest="action", required=True)
        b = s.add_parser("build")
        v = s.add_parser("verify")
        for q in (b, v):
            if kind == "tree":
                q.add_argument("--input", dest="tree", required=True, help="tree file")
                q.add_argument("--flavour", choices=[f.value for f in Flavour], default="labelled")
            else:
                q.add_argument("--input", dest="graph", required=True, help="graph file")
                q.add_argument("--unlabelled", action="store_true")
                q.add_argument("--loops", action="store_true")
            q.add_argument("--truncation", type=int)
        b.add_argument("--output", help="write the simplicial set as JSON")
        b.set_defaults(func=cmd_build)
        v.add_argument("--triangulations", type=int, default=6, help="largest n for the triangulation check")
        v.set_defaults(func=cmd_verify)

    p = sub.add_parser("umap", help="the tree-to-graph map")
    s = p.add_subparsers(dest="action", required=True)
    c = s.add_parser("check")
    c.add_argument("--tree", required=True)
    c.add_argument("--flavour", choices=[f.value for f in Flavour], default="labelled")
    c.add_argument("--truncation", type=int)
    c.set_defaults(func=cmd_umap)

    p = sub.add_parser("double", help="double categories")
    s = p.add_subparsers(dest="action", required=True)
    e = s.add_parser("export")
    _source_flags(e)
    e.add_argument("--dot", help="DOT output file (default stdout)")
    e.add_argument("--squares", help="JSON file listing squares")
    e.add_argument("--identities", action="store_true", help="draw identity morphisms too")
    e.set_defaults(func=cmd_double_export)
    c = s.add_parser("census")
    _source_flags(c)
    c.set_defaults(func=cmd_double_census)

    p = sub.add_parser("hall", help="Hall algebras")
    s = p.add_subparsers(dest="action", required=True)
    t = s.add_parser("table")
    _source_flags(t)
    t.add_argument("--format", choices=["json", "csv"], default="json")
    t.set_defaults(func=cmd_hall_table)
    c = s.add_parser("check")
    _source_flags(c)
    c.set_defaults(func=cmd_hall_check)

    p = sub.add_parser("operad", help="coloured operads")
    s = p.add_subparsers(dest="action", required=True)
    o = s.add_parser("ops")
    _source_flags(o)
    o.add_argument("--profile", required=True, help="'c1,c2|c0' with colour codes or indices")
    o.set_defaults(func=cmd_operad_ops)
    v = s.add_parser("verify")
    _source_flags(v)
    v.add_argument("--max-arity", type=int, default=4)
    v.set_defaults(func=cmd_operad_verify)

    r = sub.add_parser("reproduce", help="recompute the reference counts")
    r.add_argument("--all", action="store_true", help="every entry (the default)")
    r.add_argument("--criterion", type=int, action="append", help="restrict to one criterion; repeatable")
    r.add_argument("--format", choices=["json", "csv"], default="json")
    r.set_defaults(func=cmd_reproduce)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
