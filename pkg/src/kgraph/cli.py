"""Command line front end.

Exit codes: 0 completed, 1 usage or parse error, 2 invalid graph,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import sys

from .degrees import Degree
from .core import KGraph, validate
from .boundary import fragments_from
from .desource import materialize
from .analysis import find_lp, is_cofinal, simplicity_verdict
from .ideals import enumerate_sat_hered, gauge_invariance_criterion, quotient
from . import kgio
from .fixtures import FIXTURE_USAGE, build_fixture
from .errors import (
    IncompleteSquaresError,
    InternalInvariantError,
    KGraphError,
    KgParseError,
    MalformedSquareError,
    NonAssociativeError,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _parse_degree(text: str, rank: int, what: str) -> Degree:
    try:
        coords = tuple(int(c) for c in text.split(","))
        d = Degree(coords)
    except Exception as exc:
        raise _CliFailure(EXIT_USAGE, f"bad {what} {text!r}: {exc}")
    if d.rank != rank:
        raise _CliFailure(EXIT_USAGE, f"{what} {text!r} has rank {d.rank}, graph has rank {rank}")
    return d


def _load_doc(path: str) -> kgio.KgDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliFailure(EXIT_USAGE, f"cannot read {path}: {exc}")
    try:
        return kgio.parse(text)
    except KgParseError as exc:
        raise _CliFailure(EXIT_USAGE, f"{path}: {exc}")


def _load_graph(path: str) -> tuple[kgio.KgDocument, KGraph]:
    doc = _load_doc(path)
    try:
        return doc, validate(kgio.doc_to_spec(doc))
    except (IncompleteSquaresError, NonAssociativeError, MalformedSquareError) as exc:
        raise _CliFailure(EXIT_INVALID, f"{path}: invalid graph: {exc}")


def _cmd_validate(args) -> int:
    _, g = _load_graph(args.file)
    print(
        f"valid k-graph: rank {g.rank}, {len(g.vertices)} vertices, "
        f"{len(g.edge_ids)} edges, {len(g.spec.squares)} squares"
    )
    lc, witness = g.local_convexity()
    print(f"locally convex: {'yes' if lc else f'no (witness {witness})'}")
    return EXIT_OK


def _cmd_paths(args) -> int:
    _, g = _load_graph(args.file)
    if args.from_ not in g.vertices:
        raise _CliFailure(EXIT_USAGE, f"unknown vertex {args.from_!r}")
    if (args.degree is None) == (args.le is None):
        raise _CliFailure(EXIT_USAGE, "need exactly one of --degree or --le")
    if args.degree is not None:
        n = _parse_degree(args.degree, g.rank, "--degree")
        paths = g.paths_from(args.from_, n)
    else:
        n = _parse_degree(args.le, g.rank, "--le")
        paths = g.paths_le(args.from_, n)
    for p in paths:
        print(f"{p.range} <- {p.source}  degree {p.degree.coords}  [{' '.join(p.edges) or '(vertex)'}]")
    print(f"total: {len(paths)}")
    return EXIT_OK


def _cmd_boundary(args) -> int:
    _, g = _load_graph(args.file)
    if args.from_ not in g.vertices:
        raise _CliFailure(EXIT_USAGE, f"unknown vertex {args.from_!r}")
    for f in fragments_from(g, args.from_, args.depth):
        live = ",".join(str(c) for c in sorted(f.frontier)) or "-"
        print(
            f"degree {f.body.degree.coords} live {{{live}}} "
            f"[{' '.join(f.body.edges) or '(vertex)'}]"
        )
    return EXIT_OK


def _cmd_desource(args) -> int:
    _, g = _load_graph(args.file)
    p_max = _parse_degree(args.pmax, g.rank, "--pmax") if "," in args.pmax else Degree.ones(
        g.rank, int(args.pmax)
    )
    region = materialize(g, p_max)
    if args.dot:
        sys.stdout.write(kgio.export_dot_region(region))
    else:
        sys.stdout.write(kgio.print_doc(kgio.doc_from_graph(region.kgraph)))
    return EXIT_OK


def _cmd_check(args) -> int:
    doc, g = _load_graph(args.file)
    B = args.depth
    M = _parse_degree(args.box, g.rank, "--box") if args.box else Degree.ones(g.rank, 3)
    verdicts: list[tuple[str, object]] = []
    if args.what == "cofinal":
        v = is_cofinal(g)
        verdicts.append(("cofinal", v))
        print(f"cofinal: {v.status.value}" + (f" witness at {v.witness.vertex}" if v.witness else ""))
    elif args.what == "lp":
        scan = find_lp(g, M, B)
        verdicts.append(("local-periodicity-scan", scan))
        if scan.survivors:
            for v, m, n in scan.survivors:
                print(f"periodicity candidate at {v}: m={m.coords} n={n.coords} (depth {B})")
        else:
            print(f"no local periodicity up to box {M.coords} at depth {B} ({scan.checked} pairs checked)")
    else:
        rep = simplicity_verdict(g, M, B)
        verdicts.append(("simplicity", rep))
        label = "Simple" if rep.simple else "NotSimple"
        print(f"{label} (cofinality exact: {rep.cofinality.status.value}; "
              f"{len(rep.lp.survivors)} periodicity survivors at depth {B})")
        if rep.cofinality.witness is not None:
            print(f"  cofinality witness vertex: {rep.cofinality.witness.vertex}")
        for v, m, n in rep.lp.survivors:
            print(f"  periodicity at {v}: m={m.coords} n={n.coords}")
    if args.json:
        report = kgio.make_report(doc, f"check {args.what}", {"M": M, "B": B}, verdicts)
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(kgio.dumps_report(report))
    return EXIT_OK


def _cmd_ideals(args) -> int:
    doc, g = _load_graph(args.file)
    lattice = enumerate_sat_hered(g)
    print(f"{len(lattice)} saturated hereditary subsets:")
    for H in lattice:
        print("  {" + ", ".join(sorted(H)) + "}")
    if args.quotients:
        for H in lattice:
            q = quotient(g, H)
            print(
                f"quotient by {{{', '.join(sorted(H))}}}: "
                f"{len(q.vertices)} vertices, {len(q.edge_ids)} edges (valid)"
            )
    if args.gauge:
        M = _parse_degree(args.box, g.rank, "--box") if args.box else Degree.ones(g.rank, 3)
        rep = gauge_invariance_criterion(g, M, args.depth)
        verdict = "all ideals gauge-invariant (at depth)" if rep.all_gauge_invariant else "fails"
        print(f"gauge-invariance criterion: {verdict}")
        for H, scan in rep.per_subset:
            status = "clear" if not scan.found() else f"{len(scan.survivors)} survivors"
            print(f"  H={{{', '.join(sorted(H))}}}: {status}")
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in sorted(FIXTURE_USAGE):
            print(FIXTURE_USAGE[name])
        return EXIT_OK
    if not args.name:
        raise _CliFailure(EXIT_USAGE, "fixtures emit needs a fixture name")
    try:
        spec = build_fixture(args.name, args.args)
    except (KeyError, IndexError, ValueError) as exc:
        raise _CliFailure(EXIT_USAGE, f"fixtures emit: {exc}")
    sys.stdout.write(kgio.print_doc(kgio.doc_from_spec(spec)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kg", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="validate a .kg file")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("paths", help="enumerate morphisms at a vertex")
    p.add_argument("file")
    p.add_argument("--from", dest="from_", required=True)
    p.add_argument("--degree", help="exact degree, comma separated")
    p.add_argument("--le", help="inextendable-below degree, comma separated")
    p.set_defaults(fn=_cmd_paths)

    p = sub.add_parser("boundary", help="depth-truncated boundary paths")
    p.add_argument("file")
    p.add_argument("--from", dest="from_", required=True)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(fn=_cmd_boundary)

    p = sub.add_parser("desource", help="materialize the source-removed graph")
    p.add_argument("file")
    p.add_argument("--pmax", default="3", help="tail box: scalar or comma separated")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=_cmd_desource)

    p = sub.add_parser("check", help="cofinality / periodicity / simplicity")
    p.add_argument("file")
    p.add_argument("what", choices=("simplicity", "cofinal", "lp"))
    p.add_argument("--box", help="search box for periodicity pairs")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--json", help="write a JSON report here")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("ideals", help="saturated hereditary lattice")
    p.add_argument("file")
    p.add_argument("--quotients", action="store_true")
    p.add_argument("--gauge", action="store_true")
    p.add_argument("--box", help="search box for the gauge criterion")
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(fn=_cmd_ideals)

    p = sub.add_parser("fixtures", help="built-in example graphs")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("args", nargs="*")
    p.set_defaults(fn=_cmd_fixtures)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except _CliFailure as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except (InternalInvariantError, AssertionError) as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except KGraphError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
