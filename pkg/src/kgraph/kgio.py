"""Text format, DOT export, and JSON verdict reports.

The .kg format is line oriented:

    kgraph rank=<k>
    vertex <id>
    edge <id> : <src> -> <rng> @ <color>     # edge points from s(e) to r(e)
    square <f>.<g2> = <g>.<f2>               # f.g2 and g.f2 compose right-to-left
    vset <name> : <id> <id> ...              # optional named vertex sets
    # comment

Ids are [A-Za-z0-9_+-]+ (no dots: dots separate the two factors on square
lines).  print_doc is the exact inverse of parse on normalized documents;
normalization sorts every section, so parse . print is byte-stable and
reports hash the normalized text.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, fields, is_dataclass
from enum import Enum

from . import __version__
from .degrees import Degree, ExtDegree
from .core import EdgeDecl, KGraph, Path, SkeletonSpec, SquareDecl
from .boundary import BoundaryFragment
from .desource import Region
from .errors import (
    BadColorError,
    DuplicateIdError,
    KgSyntaxError,
    UnknownIdError,
)

ID_RE = re.compile(r"[A-Za-z0-9_+\-]+")


@dataclass(frozen=True)
class VsetDecl:
    name: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class KgDocument:
    rank: int
    vertices: tuple[str, ...]
    edges: tuple[EdgeDecl, ...]
    squares: tuple[SquareDecl, ...]
    vsets: tuple[VsetDecl, ...] = ()


class _LineScanner:
    """Tokenizer for one line with 1-based column positions."""

    def __init__(self, raw: str, lineno: int):
        self.raw = raw
        self.lineno = lineno
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.raw) and self.raw[self.pos].isspace():
            self.pos += 1

    def col(self) -> int:
        return self.pos + 1

    def at_end(self) -> bool:
        self._skip_ws()
        return self.pos >= len(self.raw)

    def expect_end(self):
        if not self.at_end():
            raise KgSyntaxError("trailing input", self.lineno, self.col(), ("end of line",))

    def literal(self, text: str):
        self._skip_ws()
        if not self.raw.startswith(text, self.pos):
            raise KgSyntaxError(
                f"expected {text!r}", self.lineno, self.col(), (text,)
            )
        self.pos += len(text)

    def ident(self, what: str = "identifier") -> str:
        self._skip_ws()
        m = ID_RE.match(self.raw, self.pos)
        if not m:
            raise KgSyntaxError(f"expected {what}", self.lineno, self.col(), (what,))
        self.pos = m.end()
        return m.group(0)

    def integer(self, what: str = "integer") -> int:
        tok = self.ident(what)
        if not tok.isdigit():
            raise KgSyntaxError(f"expected {what}, got {tok!r}", self.lineno, self.col(), (what,))
        return int(tok)


def parse(text: str) -> KgDocument:
    rank: int | None = None
    vertices: list[str] = []
    edges: list[EdgeDecl] = []
    squares: list[SquareDecl] = []
    vsets: list[VsetDecl] = []
    seen_v: dict[str, int] = {}
    seen_e: dict[str, int] = {}
    pending_squares: list[tuple[_LineScanner, tuple[str, str, str, str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        sc = _LineScanner(line, lineno)
        head = sc.ident("directive")
        if rank is None and head != "kgraph":
            raise KgSyntaxError("first directive must be 'kgraph'", lineno, 1, ("kgraph",))
        if head == "kgraph":
            if rank is not None:
                raise KgSyntaxError("duplicate kgraph directive", lineno, 1)
            sc.literal("rank")
            sc.literal("=")
            rank = sc.integer("rank")
            if rank < 1:
                raise BadColorError("rank must be >= 1", lineno, sc.col())
            sc.expect_end()
        elif head == "vertex":
            vid = sc.ident("vertex id")
            if vid in seen_v:
                raise DuplicateIdError(
                    f"vertex {vid!r} already declared on line {seen_v[vid]}", lineno, sc.col()
                )
            seen_v[vid] = lineno
            vertices.append(vid)
            sc.expect_end()
        elif head == "edge":
            eid = sc.ident("edge id")
            if eid in seen_e:
                raise DuplicateIdError(
                    f"edge {eid!r} already declared on line {seen_e[eid]}", lineno, sc.col()
                )
            seen_e[eid] = lineno
            sc.literal(":")
            src = sc.ident("source vertex")
            sc.literal("->")
            rng = sc.ident("range vertex")
            sc.literal("@")
            colorcol = sc.col()
            color = sc.integer("color")
            sc.expect_end()
            if src not in seen_v:
                raise UnknownIdError(f"unknown vertex {src!r}", lineno, sc.col())
            if rng not in seen_v:
                raise UnknownIdError(f"unknown vertex {rng!r}", lineno, sc.col())
            if not 1 <= color <= (rank or 0):
                raise BadColorError(f"color {color} outside 1..{rank}", lineno, colorcol)
            edges.append(EdgeDecl(eid, color, src, rng))
        elif head == "square":
            f = sc.ident("edge id")
            sc.literal(".")
            g2 = sc.ident("edge id")
            sc.literal("=")
            g = sc.ident("edge id")
            sc.literal(".")
            f2 = sc.ident("edge id")
            sc.expect_end()
            pending_squares.append((sc, (f, g2, g, f2)))
        elif head == "vset":
            name = sc.ident("set name")
            sc.literal(":")
            members = []
            while not sc.at_end():
                members.append(sc.ident("vertex id"))
            vsets.append(VsetDecl(name, tuple(members)))
        else:
            raise KgSyntaxError(
                f"unknown directive {head!r}",
                lineno,
                1,
                ("kgraph", "vertex", "edge", "square", "vset"),
            )
    if rank is None:
        raise KgSyntaxError("empty document: missing kgraph directive", 1, 1, ("kgraph",))

    edge_by_id = {e.id: e for e in edges}
    for sc, (f, g2, g, f2) in pending_squares:
        for eid in (f, g2, g, f2):
            if eid not in edge_by_id:
                raise UnknownIdError(f"unknown edge {eid!r}", sc.lineno, 1)
        # normalize so the ascending factorization is on the left
        if edge_by_id[f].color > edge_by_id[g2].color:
            f, g2, g, f2 = g, f2, f, g2
        squares.append(SquareDecl(f, g2, g, f2))
    for vs in vsets:
        for vid in vs.members:
            if vid not in seen_v:
                raise UnknownIdError(f"unknown vertex {vid!r} in vset {vs.name}", 1, 1)
    return KgDocument(rank, tuple(vertices), tuple(edges), tuple(squares), tuple(vsets))


def normalize(doc: KgDocument) -> KgDocument:
    return KgDocument(
        doc.rank,
        tuple(sorted(doc.vertices)),
        tuple(sorted(doc.edges, key=lambda e: e.id)),
        tuple(sorted(doc.squares, key=lambda s: (s.f, s.g2))),
        tuple(sorted(doc.vsets, key=lambda v: v.name)),
    )


def print_doc(doc: KgDocument) -> str:
    doc = normalize(doc)
    out = [f"kgraph rank={doc.rank}"]
    out.extend(f"vertex {v}" for v in doc.vertices)
    out.extend(f"edge {e.id} : {e.src} -> {e.rng} @ {e.color}" for e in doc.edges)
    out.extend(f"square {s.f}.{s.g2} = {s.g}.{s.f2}" for s in doc.squares)
    out.extend(f"vset {v.name} : {' '.join(v.members)}" for v in doc.vsets)
    return "\n".join(out) + "\n"


def doc_to_spec(doc: KgDocument) -> SkeletonSpec:
    return SkeletonSpec(doc.rank, doc.vertices, doc.edges, doc.squares)


def doc_from_spec(spec: SkeletonSpec, vsets: tuple[VsetDecl, ...] = ()) -> KgDocument:
    return KgDocument(spec.rank, spec.vertices, spec.edges, spec.squares, vsets)


def doc_from_graph(g: KGraph) -> KgDocument:
    return doc_from_spec(g.spec)


def graph_hash(doc: KgDocument) -> str:
    return hashlib.sha256(print_doc(doc).encode()).hexdigest()[:16]


# -- DOT export -----------------------------------------------------------------

_DOT_STYLES = ("solid", "dashed", "dotted", "bold")


def _dot_style(color: int) -> str:
    return _DOT_STYLES[(color - 1) % len(_DOT_STYLES)]


def export_dot(g: KGraph, name: str = "kgraph") -> str:
    """DOT text; arrows run from source to range, color 1 solid, 2 dashed."""
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for eid in g.edge_ids:
        e = g.edge(eid)
        lines.append(f'  "{e.src}" -> "{e.rng}" [style={_dot_style(e.color)}, label="{eid}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot_region(region: Region, name: str = "desourced") -> str:
    """Region DOT; tail vertices (overshoot > 0) are drawn doubled."""
    kg = region.kgraph
    lines = [f"digraph {name} {{"]
    for v in kg.vertices:
        extra = " [peripheries=2]" if not region.vt(v).overshoot.is_zero() else ""
        lines.append(f'  "{v}"{extra};')
    for eid in kg.edge_ids:
        e = kg.edge(eid)
        lines.append(f'  "{e.src}" -> "{e.rng}" [style={_dot_style(e.color)}, label="{eid}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- JSON reports -----------------------------------------------------------------


def to_jsonable(obj):
    """Stable JSON projection of verdicts, witnesses, paths, fragments."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Degree):
        return list(obj.coords)
    if isinstance(obj, ExtDegree):
        return ["inf" if c is None else c for c in obj.coords]
    if isinstance(obj, Path):
        return {"range": obj.range, "source": obj.source, "degree": list(obj.degree.coords), "edges": list(obj.edges)}
    if isinstance(obj, BoundaryFragment):
        return {
            "body": to_jsonable(obj.body),
            "frontier": sorted(obj.frontier),
            "depth": list(obj.depth.coords),
        }
    if isinstance(obj, frozenset):
        return sorted(to_jsonable(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def make_report(
    doc: KgDocument,
    command: str,
    parameters: dict,
    verdicts: list[tuple[str, object]],
) -> dict:
    """Report schema: tool_version, graph_hash, command, parameters, verdicts.

    Field order is fixed so serialized reports are replayable goldens.
    """
    entries = []
    for vname, verdict in verdicts:
        entry = {"name": vname}
        if hasattr(verdict, "status"):
            entry["status"] = to_jsonable(verdict.status)
            entry["depth"] = to_jsonable(getattr(verdict, "depth", None))
            entry["witness"] = to_jsonable(getattr(verdict, "witness", None))
        else:
            entry["status"] = to_jsonable(verdict)
            entry["depth"] = None
            entry["witness"] = None
        entries.append(entry)
    return {
        "tool_version": __version__,
        "graph_hash": graph_hash(doc),
        "command": command,
        "parameters": {
            "M": to_jsonable(parameters.get("M")),
            "B": to_jsonable(parameters.get("B")),
            "p_max": to_jsonable(parameters.get("p_max")),
        },
        "verdicts": entries,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
