"""Finite higher-rank graph core: presentation, validation, path algebra.

A rank-k graph is presented by a colored skeleton plus commuting squares.
A square (f, g, f2, g2) with color(f) = color(f2) = i < j = color(g) =
color(g2) declares the identity f.g2 = g.f2 between the two factorizations
of one degree e_i + e_j morphism (composition is categorical: in an edge
list [a, b], b is applied first, so s(a) = r(b)).

Validation enforces:
  * completeness - every composable ascending pair (f, g2) and every
    composable descending pair (g, f2) belongs to exactly one square, which
    encodes unique factorization in degree e_i + e_j;
  * associativity - for every color triple i < j < l, both resolution
    orders of every composable edge triple agree (the cube condition).

Paths are stored in color-ascending normal form (all color-1 edges first,
reading from the range end).  compose/factorize rewrite adjacent blocks
through squares; this is O(len^2) and canonical by unique factorization.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .degrees import Degree, box
from .errors import (
    DegreeOutOfRangeError,
    IncompleteSquaresError,
    MalformedSquareError,
    NonAssociativeError,
    NotAtVertexError,
    NotComposableError,
    RangeMismatchError,
    TooLargeError,
)

DEFAULT_MORPHISM_CAP = 10_000


def morphism_cap() -> int:
    raw = os.environ.get("KG_MAX_MORPHISMS")
    if raw is None:
        return DEFAULT_MORPHISM_CAP
    return int(raw)


@dataclass(frozen=True)
class EdgeDecl:
    id: str
    color: int
    src: str  # s(e): the vertex the edge points from
    rng: str  # r(e): the vertex the edge points to


@dataclass(frozen=True)
class SquareDecl:
    """f.g2 = g.f2 with color(f) = color(f2) < color(g) = color(g2)."""

    f: str
    g2: str
    g: str
    f2: str


@dataclass(frozen=True)
class SkeletonSpec:
    rank: int
    vertices: tuple[str, ...]
    edges: tuple[EdgeDecl, ...]
    squares: tuple[SquareDecl, ...]


@dataclass(frozen=True)
class Path:
    """Morphism in color-ascending normal form.

    Edge lists read from the range end: edges[0] has range == self.range.
    A degree-0 path is exactly a vertex (identity morphism).
    """

    range: str
    source: str
    degree: Degree
    edges: tuple[str, ...]

    def is_vertex(self) -> bool:
        return not self.edges

    def __repr__(self) -> str:
        if self.is_vertex():
            return f"Path<{self.range}>"
        return f"Path<{self.range}:{'.'.join(self.edges)}>"


class KGraph:
    """A validated finite k-graph.

    Immutable after construction; all operations are pure and cached
    results are derived data only, so concurrent readers are safe.
    """

    def __init__(self, spec: SkeletonSpec):
        self.spec = spec
        self.rank = spec.rank
        self.vertices: tuple[str, ...] = tuple(sorted(spec.vertices))
        self._vset: frozenset[str] = frozenset(spec.vertices)
        self._edge: dict[str, EdgeDecl] = {e.id: e for e in spec.edges}
        self._range_index: dict[tuple[str, int], tuple[str, ...]] = {}
        self._source_index: dict[tuple[str, int], tuple[str, ...]] = {}
        by_r: dict[tuple[str, int], list[str]] = {}
        by_s: dict[tuple[str, int], list[str]] = {}
        for e in spec.edges:
            by_r.setdefault((e.rng, e.color), []).append(e.id)
            by_s.setdefault((e.src, e.color), []).append(e.id)
        for k, v in by_r.items():
            self._range_index[k] = tuple(sorted(v))
        for k, v in by_s.items():
            self._source_index[k] = tuple(sorted(v))
        # flip tables: ascending (f,g2) <-> descending (g,f2)
        self._flip_asc: dict[tuple[str, str], tuple[str, str]] = {}
        self._flip_desc: dict[tuple[str, str], tuple[str, str]] = {}
        for sq in spec.squares:
            self._flip_asc[(sq.f, sq.g2)] = (sq.g, sq.f2)
            self._flip_desc[(sq.g, sq.f2)] = (sq.f, sq.g2)
        self._reach: dict[str, frozenset[str]] = self._reach_closure()
        self._paths_cache: dict[tuple[str, tuple[int, ...]], tuple[Path, ...]] = {}
        self._paths_le_cache: dict[tuple[str, tuple[int, ...]], tuple[Path, ...]] = {}
        self._factorize_cache: dict = {}
        self._lc_cache: tuple[bool, tuple[str, str] | None] | None = None

    # -- basic accessors ----------------------------------------------------

    def edge(self, eid: str) -> EdgeDecl:
        return self._edge[eid]

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._edge))

    def color_of(self, eid: str) -> int:
        return self._edge[eid].color

    def edges_with_range(self, v: str, color: int) -> tuple[str, ...]:
        """vL^{e_color}: degree e_color morphisms with range v."""
        return self._range_index.get((v, color), ())

    def edges_with_source(self, v: str, color: int) -> tuple[str, ...]:
        return self._source_index.get((v, color), ())

    def alive_colors(self, v: str) -> frozenset[int]:
        return frozenset(c for c in range(1, self.rank + 1) if self.edges_with_range(v, c))

    def vertex_path(self, v: str) -> Path:
        if v not in self._vset:
            raise NotAtVertexError(f"unknown vertex {v!r}")
        return Path(v, v, Degree.zero(self.rank), ())

    def edge_path(self, eid: str) -> Path:
        e = self._edge[eid]
        return Path(e.rng, e.src, Degree.basis(self.rank, e.color), (eid,))

    def path_from_edges(self, edges: tuple[str, ...], at: str | None = None) -> Path:
        """Build the morphism with the given (composable) edge sequence."""
        if not edges:
            if at is None:
                raise NotComposableError("empty edge list needs an anchor vertex")
            return self.vertex_path(at)
        decls = [self._edge[e] for e in edges]
        for a, b in zip(decls, decls[1:]):
            if a.src != b.rng:
                raise NotComposableError(f"edges {a.id} and {b.id} do not compose")
        hist = [0] * self.rank
        for d in decls:
            hist[d.color - 1] += 1
        norm = self._normalize(list(edges))
        return Path(decls[0].rng, decls[-1].src, Degree(tuple(hist)), tuple(norm))

    # -- reachability -------------------------------------------------------

    def _reach_closure(self) -> dict[str, frozenset[str]]:
        # reach[v] = {w : vLw != 0}, i.e. sources of morphisms with range v
        succ: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self._edge.values():
            succ[e.rng].add(e.src)
        out: dict[str, frozenset[str]] = {}
        for v in self.vertices:
            seen = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in succ[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out[v] = frozenset(seen)
        return out

    def reaches(self, w: str, v: str) -> bool:
        """True iff some morphism has range v and source w."""
        return w in self._reach[v]

    def reachable_from(self, v: str) -> frozenset[str]:
        return self._reach[v]

    # -- normal form rewriting ----------------------------------------------

    def _normalize(self, edges: list[str]) -> list[str]:
        col = self.color_of
        changed = True
        while changed:
            changed = False
            for t in range(len(edges) - 1):
                a, b = edges[t], edges[t + 1]
                if col(a) > col(b):
                    try:
                        edges[t], edges[t + 1] = self._flip_desc[(a, b)]
                    except KeyError:
                        raise NotComposableError(
                            f"no square covers descending pair ({a}, {b}); graph not validated?"
                        ) from None
                    changed = True
        return edges

    def _split_first(self, path: Path, color: int) -> tuple[str, Path]:
        """Extract the degree-e_color initial edge: path = e . rest."""
        if path.degree.get(color) == 0:
            raise DegreeOutOfRangeError(f"path has no color-{color} edge to extract")
        edges = list(path.edges)
        pos = next(t for t, e in enumerate(edges) if self.color_of(e) == color)
        for t in range(pos, 0, -1):
            a, b = edges[t - 1], edges[t]
            edges[t - 1], edges[t] = self._flip_asc[(a, b)]
        head = edges[0]
        rest = edges[1:]
        e = self._edge[head]
        rest_path = Path(
            e.src,
            path.source,
            path.degree - Degree.basis(self.rank, color),
            tuple(rest),
        )
        return head, rest_path

    # -- path algebra --------------------------------------------------------

    def compose(self, a: Path, b: Path) -> Path:
        if a.source != b.range:
            raise NotComposableError(f"s({a!r}) = {a.source} != {b.range} = r({b!r})")
        if a.is_vertex():
            return b
        if b.is_vertex():
            return a
        norm = self._normalize(list(a.edges + b.edges))
        return Path(a.range, b.source, a.degree + b.degree, tuple(norm))

    def factorize(self, lam: Path, m: Degree) -> tuple[Path, Path]:
        """Unique (lam(0,m), lam(m, d(lam))) with product lam."""
        zero = Degree.zero(self.rank)
        if not (zero <= m and m <= lam.degree):
            raise DegreeOutOfRangeError(f"factorization degree {m} outside [0, {lam.degree}]")
        key = (lam.range, lam.edges, m.coords)
        hit = self._factorize_cache.get(key)
        if hit is not None:
            return hit
        head: list[str] = []
        cur = lam
        for color in range(1, self.rank + 1):
            for _ in range(m.get(color)):
                e, cur = self._split_first(cur, color)
                head.append(e)
        head_path = Path(lam.range, cur.range, m, tuple(head))
        out = (head_path, cur)
        self._factorize_cache[key] = out
        return out

    def segment(self, lam: Path, m: Degree, n: Degree) -> Path:
        if not (m <= n and n <= lam.degree):
            raise DegreeOutOfRangeError(f"segment bounds {m}..{n} outside [0, {lam.degree}]")
        _, tail = self.factorize(lam, m)
        seg, _ = self.factorize(tail, n - m)
        return seg

    def vertex_at(self, lam: Path, p: Degree) -> str:
        """The vertex lam(p) at lattice position p <= d(lam)."""
        return self.factorize(lam, p)[0].source

    def visited_vertices(self, lam: Path) -> frozenset[str]:
        """All vertices lam(p) for p <= d(lam) (full lattice box)."""
        return frozenset(self.vertex_at(lam, p) for p in box(lam.degree))

    # -- enumeration ---------------------------------------------------------

    def paths_from(self, v: str, n: Degree) -> tuple[Path, ...]:
        """vL^n: every degree-n morphism with range v, in normal-form order."""
        key = (v, n.coords)
        hit = self._paths_cache.get(key)
        if hit is not None:
            return hit
        cap = morphism_cap()
        out: list[Path] = []

        def rec(src: str, remaining: tuple[int, ...], acc: list[str]):
            if len(out) > cap:
                raise TooLargeError(f"more than {cap} morphisms in {v}L^{n}; raise KG_MAX_MORPHISMS")
            color = next((c for c in range(1, self.rank + 1) if remaining[c - 1] > 0), None)
            if color is None:
                out.append(Path(v, src, n, tuple(acc)))
                return
            nxt = list(remaining)
            nxt[color - 1] -= 1
            for eid in self.edges_with_range(src, color):
                acc.append(eid)
                rec(self._edge[eid].src, tuple(nxt), acc)
                acc.pop()

        rec(v, n.coords, [])
        result = tuple(out)
        self._paths_cache[key] = result
        return result

    def paths_le(self, v: str, n: Degree) -> tuple[Path, ...]:
        """vL^{<=n}: degree <= n, inextendable in every direction below n."""
        key = (v, n.coords)
        hit = self._paths_le_cache.get(key)
        if hit is not None:
            return hit
        out: list[Path] = []
        for m in box(n):
            for lam in self.paths_from(v, m):
                ok = True
                for c in range(1, self.rank + 1):
                    if m.get(c) < n.get(c) and self.edges_with_range(lam.source, c):
                        ok = False
                        break
                if ok:
                    out.append(lam)
        result = tuple(out)
        self._paths_le_cache[key] = result
        return result

    def mce(self, mu: Path, nu: Path) -> frozenset[Path]:
        """Minimal common extensions: degree d(mu) v d(nu), extending both."""
        if mu.range != nu.range:
            raise RangeMismatchError(f"r({mu!r}) != r({nu!r})")
        j = mu.degree.join(nu.degree)
        out = set()
        for ext in self.paths_from(mu.source, j - mu.degree):
            lam = self.compose(mu, ext)
            if self.factorize(lam, nu.degree)[0] == nu:
                out.add(lam)
        return frozenset(out)

    def is_exhaustive(self, v: str, E) -> bool:
        """True iff every path at v admits a common extension with some member.

        Quantifies over paths of degree <= join of E's degrees; the cutoff
        suffices because a minimal common extension only constrains the
        initial segment up to the join (kept under test against the
        unbounded brute-force oracle).
        """
        E = list(E)
        for mu in E:
            if mu.range != v:
                raise NotAtVertexError(f"{mu!r} is not at vertex {v}")
        j = Degree.zero(self.rank)
        for mu in E:
            j = j.join(mu.degree)
        return self.is_exhaustive_upto(v, E, j)

    def is_exhaustive_upto(self, v: str, E, bound: Degree) -> bool:
        """Brute-force exhaustiveness test over all lam with d(lam) <= bound."""
        E = list(E)
        for m in box(bound):
            for lam in self.paths_from(v, m):
                if not any(self.mce(lam, mu) for mu in E):
                    return False
        return True

    # -- graph-wide predicates -----------------------------------------------

    def local_convexity(self) -> tuple[bool, tuple[str, str] | None]:
        """(True, None) or (False, witnessing edge pair (f, g))."""
        if self._lc_cache is not None:
            return self._lc_cache
        for v in self.vertices:
            for i in range(1, self.rank + 1):
                for j in range(i + 1, self.rank + 1):
                    for f in self.edges_with_range(v, i):
                        for g in self.edges_with_range(v, j):
                            if not self.edges_with_range(self._edge[f].src, j) or not self.edges_with_range(
                                self._edge[g].src, i
                            ):
                                self._lc_cache = (False, (f, g))
                                return self._lc_cache
        self._lc_cache = (True, None)
        return self._lc_cache

    def heredity_violations(self, up_to: Degree) -> list[tuple[str, int, Path]]:
        """Direction-death heredity counterexamples with d(lam) <= up_to.

        Consequence of the factorization property, so this must always
        return [] on a validated graph; kept as a standing check because
        block decomposition and the desourcing maps rely on it.
        """
        bad = []
        for v in self.vertices:
            dead = [c for c in range(1, self.rank + 1) if not self.edges_with_range(v, c)]
            if not dead:
                continue
            for m in box(up_to):
                for lam in self.paths_from(v, m):
                    for c in dead:
                        if self.edges_with_range(lam.source, c):
                            bad.append((v, c, lam))
        return bad


def is_locally_convex(g: KGraph) -> tuple[bool, tuple[str, str] | None]:
    return g.local_convexity()


# -- validation ---------------------------------------------------------------


def _well_formed(spec: SkeletonSpec) -> None:
    if spec.rank < 1:
        raise MalformedSquareError(f"rank must be >= 1, got {spec.rank}")
    vset = set(spec.vertices)
    if len(vset) != len(spec.vertices):
        raise MalformedSquareError("duplicate vertex ids in spec")
    eids = [e.id for e in spec.edges]
    if len(set(eids)) != len(eids):
        raise MalformedSquareError("duplicate edge ids in spec")
    edge = {e.id: e for e in spec.edges}
    for e in spec.edges:
        if not 1 <= e.color <= spec.rank:
            raise MalformedSquareError(f"edge {e.id}: color {e.color} outside 1..{spec.rank}")
        if e.src not in vset or e.rng not in vset:
            raise MalformedSquareError(f"edge {e.id}: endpoint not declared")
    for sq in spec.squares:
        for eid in (sq.f, sq.g2, sq.g, sq.f2):
            if eid not in edge:
                raise MalformedSquareError(f"square references unknown edge {eid}")
        f, g2, g, f2 = edge[sq.f], edge[sq.g2], edge[sq.g], edge[sq.f2]
        if not (f.color == f2.color and g.color == g2.color and f.color < g.color):
            raise MalformedSquareError(f"square {sq}: colors must satisfy i=i' < j=j'")
        ok = f.src == g2.rng and g.src == f2.rng and f.rng == g.rng and g2.src == f2.src
        if not ok:
            raise MalformedSquareError(f"square {sq}: endpoints do not close the square")


def _completeness(spec: SkeletonSpec) -> None:
    asc_pairs = set()
    desc_pairs = set()
    for a in spec.edges:
        for b in spec.edges:
            if a.src == b.rng:
                if a.color < b.color:
                    asc_pairs.add((a.id, b.id))
                elif a.color > b.color:
                    desc_pairs.add((a.id, b.id))
    asc_seen: dict[tuple[str, str], int] = {}
    desc_seen: dict[tuple[str, str], int] = {}
    for sq in spec.squares:
        asc_seen[(sq.f, sq.g2)] = asc_seen.get((sq.f, sq.g2), 0) + 1
        desc_seen[(sq.g, sq.f2)] = desc_seen.get((sq.g, sq.f2), 0) + 1
    missing_asc = sorted(p for p in asc_pairs if asc_seen.get(p, 0) == 0)
    missing_desc = sorted(p for p in desc_pairs if desc_seen.get(p, 0) == 0)
    duplicated = sorted([p for p, c in asc_seen.items() if c > 1] + [p for p, c in desc_seen.items() if c > 1])
    stray = sorted(p for p in asc_seen if p not in asc_pairs)
    if stray:
        raise MalformedSquareError(f"squares declared on non-composable pairs: {stray}")
    if missing_asc or missing_desc or duplicated:
        raise IncompleteSquaresError(missing_asc, missing_desc, duplicated)


def _associativity(g: KGraph) -> None:
    """Cube check: both reversal orders of every ascending triple agree."""
    bad = []
    for i in range(1, g.rank + 1):
        for j in range(i + 1, g.rank + 1):
            for l in range(j + 1, g.rank + 1):
                for a in (e for e in g.edge_ids if g.color_of(e) == i):
                    ea = g.edge(a)
                    for b in g.edges_with_range(ea.src, j):
                        eb = g.edge(b)
                        for c in g.edges_with_range(eb.src, l):
                            # route A: swap (a,b), (a,c), (b,c)
                            b1, a1 = g._flip_asc[(a, b)]
                            c1, a2 = g._flip_asc[(a1, c)]
                            c2, b2 = g._flip_asc[(b1, c1)]
                            routeA = (c2, b2, a2)
                            # route B: swap (b,c), (a,c), (a,b)
                            c3, b3 = g._flip_asc[(b, c)]
                            c4, a3 = g._flip_asc[(a, c3)]
                            b4, a4 = g._flip_asc[(a3, b3)]
                            routeB = (c4, b4, a4)
                            if routeA != routeB:
                                bad.append((a, b, c))
    if bad:
        raise NonAssociativeError(bad)


def validate(spec: SkeletonSpec) -> KGraph:
    """Validate a presentation and return the k-graph, or raise with the
    full list of violating pairs/triples."""
    _well_formed(spec)
    _completeness(spec)
    g = KGraph(spec)
    _associativity(g)
    return g
