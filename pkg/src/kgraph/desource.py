"""Source removal: tails glued onto dead directions of a locally convex graph.

The desourced graph has vertex classes [x;m] and morphism classes
[x;(m,n)] over boundary paths x.  Classes are infinite, so we work with
canonical forms instead:

  vertex class  -> VTilde(base = x(m ^ d(x)), overshoot = m - m ^ d(x))
  morphism class-> MTilde(core = x(m ^ d(x), n ^ d(x)),
                          a = m - m ^ d(x), b = n - n ^ d(x))

Two pairs are equivalent exactly when their canonical data agree; the
literal two/three-clause oracles (equiv_V / equiv_P) are kept alongside
and the agreement is a standing test, not trusted algebra.

Composition of canonical forms collapses to a closed form: when
source(s) = range(t), the composite is (core_s . core_t, a_s, b_t).  The
realize-splice-recanonicalize route prescribed by the defining formula is
kept as compose_tilde_via_formula and tested equal on every fixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .degrees import Degree
from .core import KGraph, Path, SkeletonSpec, EdgeDecl, SquareDecl, morphism_cap, validate
from .boundary import (
    BoundaryFragment,
    is_determined,
    make_fragment,
    meet_degree,
    prepend,
    shift,
    truncate,
)
from .errors import (
    DegreeOutOfRangeError,
    InsufficientDepthError,
    InternalInvariantError,
    NotComposableError,
    NotLocallyConvexError,
    OutsideRegionError,
)


@dataclass(frozen=True)
class VTilde:
    """Canonical form of a desourced vertex: base vertex plus tail offset."""

    base: str
    overshoot: Degree

    def __repr__(self) -> str:
        return f"VTilde({self.base}, {self.overshoot.coords})"


@dataclass(frozen=True)
class MTilde:
    """Canonical form of a desourced morphism.

    degree = d(core) + b - a; range = (r(core), a); source = (s(core), b).
    """

    core: Path
    a: Degree  # range overshoot
    b: Degree  # source overshoot

    def __repr__(self) -> str:
        return f"MTilde({self.core!r}, a={self.a.coords}, b={self.b.coords})"


def tilde_degree(t: MTilde) -> Degree:
    return t.core.degree + t.b - t.a


def tilde_range(t: MTilde) -> VTilde:
    return VTilde(t.core.range, t.a)


def tilde_source(t: MTilde) -> VTilde:
    return VTilde(t.core.source, t.b)


def iota(g: KGraph, lam: Path) -> MTilde:
    """Embedding of the base graph: degree, range and source are preserved."""
    z = Degree.zero(g.rank)
    return MTilde(lam, z, z)


def iota_vertex(g: KGraph, v: str) -> VTilde:
    return VTilde(v, Degree.zero(g.rank))


def project(t: MTilde) -> Path:
    """Projection back onto the base graph; returns the core."""
    return t.core


def check_vtilde(g: KGraph, vt: VTilde) -> None:
    for c in range(1, g.rank + 1):
        if vt.overshoot.get(c) > 0 and g.edges_with_range(vt.base, c):
            raise InternalInvariantError(f"{vt!r}: overshoot in live direction {c}")


def check_mtilde(g: KGraph, t: MTilde) -> None:
    if not t.a <= t.b:
        raise InternalInvariantError(f"{t!r}: range overshoot exceeds source overshoot")
    for c in range(1, g.rank + 1):
        if t.a.get(c) > 0:
            if t.core.degree.get(c) != 0:
                raise InternalInvariantError(f"{t!r}: overshoot with nonzero core degree in {c}")
            if g.edges_with_range(t.core.range, c):
                raise InternalInvariantError(f"{t!r}: range alive in overshoot direction {c}")
        if t.b.get(c) > 0 and g.edges_with_range(t.core.source, c):
            raise InternalInvariantError(f"{t!r}: source alive in overshoot direction {c}")


# -- equivalence oracles (literal clause evaluation) ---------------------------


def equiv_V(g: KGraph, f: BoundaryFragment, m: Degree, h: BoundaryFragment, n: Degree) -> bool:
    mdx = meet_degree(f, m)
    ndy = meet_degree(h, n)
    if g.vertex_at(f.body, mdx) != g.vertex_at(h.body, ndy):  # (V1)
        return False
    return m - mdx == n - ndy  # (V2)


def equiv_P(
    g: KGraph,
    f: BoundaryFragment,
    mn: tuple[Degree, Degree],
    h: BoundaryFragment,
    pq: tuple[Degree, Degree],
) -> bool:
    m, n = mn
    p, q = pq
    if not (m <= n and p <= q):
        raise DegreeOutOfRangeError("morphism pairs need m <= n and p <= q")
    ndx = meet_degree(f, n)
    qdy = meet_degree(h, q)
    mdx = meet_degree(f, m)
    pdy = meet_degree(h, p)
    if g.segment(f.body, mdx, ndx) != g.segment(h.body, pdy, qdy):  # (P1)
        return False
    if m - mdx != p - pdy:  # (P2)
        return False
    return n - m == q - p  # (P3)


# -- canonical forms -----------------------------------------------------------


def canon_vertex(g: KGraph, f: BoundaryFragment, m: Degree) -> VTilde:
    mdx = meet_degree(f, m)
    return VTilde(g.vertex_at(f.body, mdx), m - mdx)


def canon_morphism(g: KGraph, f: BoundaryFragment, m: Degree, n: Degree) -> MTilde:
    if not m <= n:
        raise DegreeOutOfRangeError(f"need m <= n, got {m} and {n}")
    ndx = meet_degree(f, n)
    mdx = meet_degree(f, m)
    return MTilde(g.segment(f.body, mdx, ndx), m - mdx, n - ndx)


def greedy_extend(g: KGraph, f: BoundaryFragment, B: int) -> BoundaryFragment:
    """Deterministic boundary extension: least edge id per color, colors
    ascending; used to realize canonical forms as actual fragments."""
    body = f.body
    depth = Degree.ones(g.rank, B)
    if not f.depth <= depth:
        raise DegreeOutOfRangeError(f"greedy target {B} below explored box {f.depth}")
    while True:
        src = body.source
        color = next(
            (
                c
                for c in range(1, g.rank + 1)
                if body.degree.get(c) < B and g.edges_with_range(src, c)
            ),
            None,
        )
        if color is None:
            break
        eid = g.edges_with_range(src, color)[0]
        body = g.compose(body, g.edge_path(eid))
    return make_fragment(g, body, depth)


def realize(g: KGraph, t: MTilde, depth: int) -> tuple[BoundaryFragment, Degree, Degree]:
    """A representative (x-fragment, m, n) with canon_morphism(...) == t.

    Constructed as x = core . (greedy boundary extension), m = a,
    n = d(core) + b; deterministic by construction.
    """
    frag = make_fragment(g, t.core, t.core.degree)
    frag = greedy_extend(g, frag, max((t.core.degree.get(c) for c in range(1, g.rank + 1)), default=0) + depth)
    m = t.a
    n = t.core.degree + t.b
    return frag, m, n


def compose_tilde(g: KGraph, s: MTilde, t: MTilde) -> MTilde:
    """Composite of canonical forms (closed form; formula route is the
    test oracle compose_tilde_via_formula)."""
    if tilde_source(s) != tilde_range(t):
        raise NotComposableError(f"source {tilde_source(s)!r} != range {tilde_range(t)!r}")
    return MTilde(g.compose(s.core, t.core), s.a, t.b)


def compose_tilde_via_formula(g: KGraph, s: MTilde, t: MTilde, slack: int = 2) -> MTilde:
    """Composition as literally defined: realize both, splice, canonicalize.

    [x;(m,n)] o [y;(p,q)] = [x(0, n ^ d(x)) . sigma^{p ^ d(y)}(y); (m, n+q-p)]
    """
    if tilde_source(s) != tilde_range(t):
        raise NotComposableError(f"source {tilde_source(s)!r} != range {tilde_range(t)!r}")
    need = tilde_degree(s) + tilde_degree(t)
    depth = max(need.coords) + max(s.a.coords) + max(t.a.coords) + slack
    fx, m, n = realize(g, s, depth)
    fy, p, q = realize(g, t, depth)
    ndx = meet_degree(fx, n)
    head = g.factorize(fx.body, ndx)[0]
    tail = shift(g, fy, meet_degree(fy, p))
    spliced = prepend(g, head, tail)
    return canon_morphism(g, spliced, m, n + q - p)


def tilde_factorize(g: KGraph, t: MTilde, m: Degree) -> tuple[MTilde, MTilde]:
    """Unique factorization of a desourced morphism at degree m."""
    d = tilde_degree(t)
    if not (Degree.zero(g.rank) <= m and m <= d):
        raise DegreeOutOfRangeError(f"factorization degree {m} outside [0, {d}]")
    frag, lo, hi = realize(g, t, max(d.coords) + 2)
    mid = lo + m
    return canon_morphism(g, frag, lo, mid), canon_morphism(g, frag, mid, hi)


# -- bounded materialization ---------------------------------------------------


def _fmt(p: Degree) -> str:
    return "-".join(str(c) for c in p.coords)


def vt_id(vt: VTilde) -> str:
    if vt.overshoot.is_zero():
        return vt.base
    return f"{vt.base}+{_fmt(vt.overshoot)}"


def mt_edge_id(g: KGraph, t: MTilde) -> str:
    """Deterministic id for a degree-e_i morphism of the desourced graph."""
    if t.core.is_vertex():
        color = next(c for c in range(1, g.rank + 1) if t.b.get(c) > t.a.get(c))
        return f"{t.core.range}+t{color}+{_fmt(t.b)}"
    eid = t.core.edges[0]
    if t.a.is_zero():
        return eid
    return f"{eid}+{_fmt(t.a)}"


@dataclass
class Region:
    """Box-bounded materialization of the desourced graph.

    The region holds every vertex with overshoot <= p_max and every
    degree-e_i morphism between them, presented as a validated KGraph with
    deterministic ids.  Interior vertices (those whose tail continuations
    stay inside the box) are checked to be sources-free and row-finite.
    """

    base: KGraph
    p_max: Degree
    kgraph: KGraph = field(repr=False)
    vertex_of: dict[str, VTilde] = field(repr=False, default_factory=dict)
    edge_of: dict[str, MTilde] = field(repr=False, default_factory=dict)

    def vt(self, vid: str) -> VTilde:
        return self.vertex_of[vid]

    def mt(self, eid: str) -> MTilde:
        return self.edge_of[eid]

    def pi_vertex(self, vid: str) -> str:
        """Projection of a region vertex onto the base graph."""
        return self.vertex_of[vid].base

    def is_interior(self, vid: str) -> bool:
        vt = self.vertex_of[vid]
        for c in range(1, self.base.rank + 1):
            if not self.base.edges_with_range(vt.base, c):
                if vt.overshoot.get(c) + 1 > self.p_max.get(c):
                    return False
        return True

    def interior_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.kgraph.vertices if self.is_interior(v))


def _region_vertices(g: KGraph, p_max: Degree) -> list[VTilde]:
    out = []
    for w in g.vertices:
        dead = [c for c in range(1, g.rank + 1) if not g.edges_with_range(w, c)]
        ranges = [range(p_max.get(c) + 1) if c in dead else range(1) for c in range(1, g.rank + 1)]

        def rec(prefix, i):
            if i == g.rank:
                out.append(VTilde(w, Degree(tuple(prefix))))
                return
            for v in ranges[i]:
                rec(prefix + [v], i + 1)

        rec([], 0)
    return out


def _region_edges_at(g: KGraph, vt: VTilde, p_max: Degree) -> list[MTilde]:
    """Degree-e_c morphisms with range vt whose source stays in the box."""
    out = []
    for c in range(1, g.rank + 1):
        ids = g.edges_with_range(vt.base, c)
        if ids:
            for eid in ids:
                out.append(MTilde(g.edge_path(eid), vt.overshoot, vt.overshoot))
        else:
            b = vt.overshoot + Degree.basis(g.rank, c)
            if b <= p_max:
                out.append(MTilde(g.vertex_path(vt.base), vt.overshoot, b))
    return out


def materialize(g: KGraph, p_max: Degree) -> Region:
    """Materialize the desourced graph on the overshoot box [0, p_max]."""
    ok, witness = g.local_convexity()
    if not ok:
        raise NotLocallyConvexError(witness)
    vts = _region_vertices(g, p_max)
    vid = {vt: vt_id(vt) for vt in vts}
    edges: dict[str, MTilde] = {}
    edge_decls: list[EdgeDecl] = []
    by_range: dict[VTilde, list[tuple[str, MTilde]]] = {vt: [] for vt in vts}
    for vt in vts:
        for t in _region_edges_at(g, vt, p_max):
            eid = mt_edge_id(g, t)
            if eid in edges:
                raise InternalInvariantError(f"edge id collision in region: {eid}")
            edges[eid] = t
            color = next(c for c in range(1, g.rank + 1) if tilde_degree(t).get(c) == 1)
            edge_decls.append(EdgeDecl(eid, color, vid[tilde_source(t)], vid[tilde_range(t)]))
            by_range[vt].append((eid, t))
    # squares induced by composition of canonical forms
    squares: list[SquareDecl] = []
    src_vt = {eid: tilde_source(t) for eid, t in edges.items()}
    for f_id, f_t in edges.items():
        f_color = next(c for c in range(1, g.rank + 1) if tilde_degree(f_t).get(c) == 1)
        for g2_id, g2_t in by_range.get(src_vt[f_id], ()):
            g2_color = next(c for c in range(1, g.rank + 1) if tilde_degree(g2_t).get(c) == 1)
            if f_color >= g2_color:
                continue
            comp = compose_tilde(g, f_t, g2_t)
            gg, ff2 = tilde_factorize(g, comp, Degree.basis(g.rank, g2_color))
            g_id = mt_edge_id(g, gg)
            f2_id = mt_edge_id(g, ff2)
            if g_id not in edges or f2_id not in edges:
                raise InternalInvariantError(
                    f"region square escapes the box: ({f_id}, {g2_id}) -> ({g_id}, {f2_id})"
                )
            squares.append(SquareDecl(f_id, g2_id, g_id, f2_id))
    spec = SkeletonSpec(
        rank=g.rank,
        vertices=tuple(sorted(vid.values())),
        edges=tuple(sorted(edge_decls, key=lambda e: e.id)),
        squares=tuple(sorted(squares, key=lambda s: (s.f, s.g2))),
    )
    kg = validate(spec)
    region = Region(base=g, p_max=p_max, kgraph=kg)
    region.vertex_of = {vid[vt]: vt for vt in vts}
    region.edge_of = dict(edges)
    _check_region(region)
    return region


def _check_region(region: Region) -> None:
    """No sources and row-finiteness at interior vertices."""
    kg = region.kgraph
    cap = morphism_cap()
    for v in region.interior_vertices():
        for c in range(1, kg.rank + 1):
            outs = kg.edges_with_range(v, c)
            if len(outs) < 1:
                raise InternalInvariantError(f"interior region vertex {v} has no color-{c} edge")
            if len(outs) > cap:
                raise InternalInvariantError(f"region vertex {v} is not row-finite at desk scale")


# -- lifting boundary fragments to region paths --------------------------------


def lift_fragment(g: KGraph, region: Region, f: BoundaryFragment, n: Degree, depth: Degree) -> Path:
    """The region path whose segments are the classes [x;(n+p, n+q)].

    Built edge by edge in ascending color order; each unit factor must lie
    inside the region box.
    """
    id_of = {t: eid for eid, t in region.edge_of.items()}
    start = canon_vertex(g, f, n)
    if vt_id(start) not in region.vertex_of:
        raise OutsideRegionError(f"lift range {start!r} outside region")
    edges: list[str] = []
    cur = n
    for c in range(1, g.rank + 1):
        for _ in range(depth.get(c)):
            step = canon_morphism(g, f, cur, cur + Degree.basis(g.rank, c))
            eid = id_of.get(step)
            if eid is None:
                raise OutsideRegionError(f"lift step {step!r} outside region box {region.p_max}")
            edges.append(eid)
            cur = cur + Degree.basis(g.rank, c)
    return region.kgraph.path_from_edges(tuple(edges), at=vt_id(start))


def project_infinite(
    g: KGraph, region: Region, y: Path, depth: Degree
) -> tuple[Degree, BoundaryFragment]:
    """Recover (p_y, boundary fragment) with y = lift of the fragment at p_y.

    p_y is the overshoot of y's range; the fragment is the composed core
    projection, truncated to the requested box.
    """
    p_y = region.vt(y.range).overshoot
    body = g.vertex_path(region.vt(y.range).base)
    for eid in y.edges:
        body = g.compose(body, project(region.mt(eid)))
    if not p_y.meet(body.degree).is_zero():
        raise InternalInvariantError("canonical representative has overshoot meeting core degree")
    frag = make_fragment(g, body, y.degree.join(body.degree))
    if not is_determined(frag, depth):
        raise InsufficientDepthError(f"region path of degree {y.degree} too short for box {depth}")
    return p_y, truncate(g, frag, depth)
