"""Cofinality, local periodicity, simplicity verdicts, transfer checks.

Cofinality is decided exactly: a violation is a boundary path avoiding the
reachable set R_v of some vertex v, and such paths exist iff the greatest
fixed point of the unit-block step relation inside the unreachable set is
nonempty.  Soundness rests on two consequences of the factorization
property under local convexity, both shipped as standing property tests:
direction-death heredity, and the decomposition of boundary paths into
unit blocks.

Local periodicity has no finite decision procedure here, so checks are
three-valued: Violated always carries a finite replayable witness and is
exact; Holds from a bounded scan is depth-qualified.  Fragments are
enumerated in deterministic order so witnesses are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .degrees import Degree, box
from .core import KGraph, Path
from .boundary import (
    BoundaryFragment,
    fragment_eq,
    fragments_from,
    make_fragment,
    max_comparable_depth,
    meet_degree,
    shift,
)
from .desource import Region, materialize
from .errors import (
    DepthTooSmallError,
    NotLocallyConvexError,
    PreconditionFailedError,
)


class Status(Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    UNKNOWN = "unknown-at-depth"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: object = None
    depth: int | None = None  # set on bounded verdicts
    exact: bool = False

    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def violated(self) -> bool:
        return self.status is Status.VIOLATED


@dataclass(frozen=True)
class CofinalityWitness:
    """Vertex whose reachable set some boundary path avoids, plus a
    block-chain fragment generating such a path."""

    vertex: str
    fragment: BoundaryFragment


@dataclass(frozen=True)
class LpWitness:
    vertex: str
    m: Degree
    n: Degree
    fragment: BoundaryFragment
    reason: str  # "degree" or "shift"


def _require_lc(g: KGraph) -> None:
    ok, witness = g.local_convexity()
    if not ok:
        raise NotLocallyConvexError(witness)


# -- cofinality ----------------------------------------------------------------


def _avoiding_core(g: KGraph, banned: frozenset[str]) -> set[str]:
    """Greatest S inside `banned` closed under taking a unit block whose
    visited cube stays in S."""
    S = set(banned)
    one = Degree.ones(g.rank)
    changed = True
    while changed:
        changed = False
        for w in sorted(S):
            ok = False
            for lam in g.paths_le(w, one):
                if g.visited_vertices(lam) <= S:
                    ok = True
                    break
            if not ok:
                S.discard(w)
                changed = True
    return S


def _chain_fragment(g: KGraph, w0: str, S: set[str], blocks: int) -> BoundaryFragment:
    """Deterministic block chain inside S, materialized as a fragment."""
    body = g.vertex_path(w0)
    one = Degree.ones(g.rank)
    for _ in range(blocks):
        cur = body.source
        block = next(
            lam
            for lam in sorted(g.paths_le(cur, one), key=lambda p: p.edges)
            if g.visited_vertices(lam) <= S
        )
        body = g.compose(body, block)
    return make_fragment(g, body, Degree.ones(g.rank, blocks))


def is_cofinal(g: KGraph) -> Verdict:
    """Exact: every boundary path meets the reachable set of every vertex."""
    _require_lc(g)
    for v in g.vertices:
        banned = frozenset(g.vertices) - g.reachable_from(v)
        if not banned:
            continue
        S = _avoiding_core(g, banned)
        if S:
            w0 = min(S)
            frag = _chain_fragment(g, w0, S, len(g.vertices) + 1)
            return Verdict(Status.VIOLATED, CofinalityWitness(v, frag), exact=True)
    return Verdict(Status.HOLDS, exact=True)


def is_cofinal_bounded(g: KGraph, B: int) -> Verdict:
    """Depth-B semantics; never contradicts the exact decision."""
    _require_lc(g)
    unknown = False
    for v in g.vertices:
        R = g.reachable_from(v)
        for w in g.vertices:
            for frag in fragments_from(g, w, B):
                if g.visited_vertices(frag.body) & R:
                    continue
                if not frag.frontier:
                    return Verdict(Status.VIOLATED, CofinalityWitness(v, frag), depth=B, exact=True)
                unknown = True
    if unknown:
        return Verdict(Status.UNKNOWN, depth=B)
    return Verdict(Status.HOLDS, depth=B)


def replay_cofinality_witness(g: KGraph, witness: CofinalityWitness) -> bool:
    """A witness replays iff its fragment's visited cube avoids R_v."""
    R = g.reachable_from(witness.vertex)
    return not (g.visited_vertices(witness.fragment.body) & R)


# -- local periodicity -----------------------------------------------------------


def _lp_on_fragment(
    g: KGraph, frag: BoundaryFragment, m: Degree, n: Degree
) -> tuple[bool, str | None]:
    """Evaluate both clauses of local periodicity on one fragment."""
    mdx = meet_degree(frag, m)
    ndx = meet_degree(frag, n)
    if m - mdx != n - ndx:
        return False, "degree"
    f1 = shift(g, frag, mdx)
    f2 = shift(g, frag, ndx)
    t = max_comparable_depth(f1, f2)
    if not fragment_eq(g, f1, f2, t):
        return False, "shift"
    return True, None


def has_lp_at(g: KGraph, v: str, m: Degree, n: Degree, B: int) -> Verdict:
    """Bounded check of local periodicity (m, n) at v over depth-B fragments.

    Violations are exact: the degree clause evaluates exactly at depth
    B >= max(m v n), and a shift mismatch within the determined box is a
    property of every boundary extension of the fragment.
    """
    if m == n:
        raise PreconditionFailedError("local periodicity needs m != n")
    if B < max(m.join(n).coords):
        raise DepthTooSmallError(f"depth {B} below max coordinate of {m.join(n)}")
    _require_lc(g)
    for frag in sorted(fragments_from(g, v, B), key=lambda f: f.body.edges):
        ok, reason = _lp_on_fragment(g, frag, m, n)
        if not ok:
            return Verdict(Status.VIOLATED, LpWitness(v, m, n, frag, reason), depth=B, exact=True)
    return Verdict(Status.HOLDS, depth=B)


def replay_lp_witness(g: KGraph, w: LpWitness) -> bool:
    ok, reason = _lp_on_fragment(g, w.fragment, w.m, w.n)
    return (not ok) and reason == w.reason


@dataclass(frozen=True)
class LpScan:
    box: Degree
    depth: int
    survivors: tuple[tuple[str, Degree, Degree], ...]
    checked: int

    def found(self) -> bool:
        return bool(self.survivors)


def _ordered_pairs(M: Degree) -> Iterable[tuple[Degree, Degree]]:
    degs = list(box(M))
    for m in degs:
        for n in degs:
            if m != n:
                yield m, n


def find_lp(g: KGraph, M: Degree, B: int) -> LpScan:
    """All (v, m != n <= M) whose bounded verdict is Holds-at-depth."""
    survivors = []
    checked = 0
    for v in g.vertices:
        for m, n in _ordered_pairs(M):
            checked += 1
            if has_lp_at(g, v, m, n, B).holds():
                survivors.append((v, m, n))
    return LpScan(M, B, tuple(survivors), checked)


# -- simplicity -------------------------------------------------------------------


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    cofinality: Verdict  # exact
    lp: LpScan  # bounded; "no local periodicity" is depth-qualified
    notes: str = (
        "cofinality half is exact; the periodicity half holds only up to "
        "the stated search box and depth"
    )


def simplicity_verdict(g: KGraph, M: Degree, B: int) -> SimplicityReport:
    _require_lc(g)
    cof = is_cofinal(g)
    scan = find_lp(g, M, B)
    return SimplicityReport(simple=cof.holds() and not scan.found(), cofinality=cof, lp=scan)


# -- strong-form periodicity -------------------------------------------------------


@dataclass(frozen=True)
class StrongLpWitness:
    vertex: str
    p: Degree
    q: Degree
    fragment: BoundaryFragment
    reason: str  # "degree-death" or "shift"


def strong_lp_check(g: KGraph, w: str, p: Degree, q: Degree, B: int) -> Verdict:
    """Bounded form of: every boundary path x at w has p, q <= d(x) and equal
    p- and q-shifted tails."""
    if B < max(p.join(q).coords):
        raise DepthTooSmallError(f"depth {B} below max coordinate of {p.join(q)}")
    _require_lc(g)
    for frag in sorted(fragments_from(g, w, B), key=lambda f: f.body.edges):
        dead_short = any(
            frag.body.degree.get(c) < max(p.get(c), q.get(c))
            for c in range(1, g.rank + 1)
            if c not in frag.frontier
        )
        if dead_short:
            return Verdict(
                Status.VIOLATED, StrongLpWitness(w, p, q, frag, "degree-death"), depth=B, exact=True
            )
        f1 = shift(g, frag, p)
        f2 = shift(g, frag, q)
        t = max_comparable_depth(f1, f2)
        if not fragment_eq(g, f1, f2, t):
            return Verdict(
                Status.VIOLATED, StrongLpWitness(w, p, q, frag, "shift"), depth=B, exact=True
            )
    return Verdict(Status.HOLDS, depth=B)


def derive_strong_candidates(
    g: KGraph, v: str, m: Degree, n: Degree
) -> tuple[tuple[str, Degree, Degree], ...]:
    """Strong-form candidates induced by a periodicity pair (m, n) at v:
    p = m - m ^ n and q = n - m ^ n at the sources of v-paths filling m ^ n."""
    mn = m.meet(n)
    p = m - mn
    q = n - mn
    outs = sorted({lam.source for lam in g.paths_le(v, mn)})
    return tuple((u, p, q) for u in outs)


# -- transfer between the graph and its desourced region ---------------------------


@dataclass(frozen=True)
class TransferCofinalityReport:
    base: Verdict  # exact on the base graph
    region: Verdict  # bounded on the materialized region
    contradiction: bool


def transfer_cofinal(g: KGraph, p_max: Degree, B: int) -> TransferCofinalityReport:
    region = materialize(g, p_max)
    base = is_cofinal(g)
    reg = is_cofinal_bounded(region.kgraph, B)
    contradiction = (base.holds() and reg.violated()) or (base.violated() and reg.holds())
    return TransferCofinalityReport(base, reg, contradiction)


@dataclass(frozen=True)
class TransferLpReport:
    region_vertex: str
    base_vertex: str
    m: Degree
    n: Degree
    region: Verdict
    base: Verdict
    contradiction: bool


def transfer_lp(
    g: KGraph, region: Region, v_tilde: str, m: Degree, n: Degree, B: int
) -> TransferLpReport:
    """Compare periodicity at a region vertex with its projection."""
    reg = has_lp_at(region.kgraph, v_tilde, m, n, B)
    base_v = region.pi_vertex(v_tilde)
    base = has_lp_at(g, base_v, m, n, B)
    contradiction = (reg.holds() and base.violated()) or (reg.violated() and base.holds())
    return TransferLpReport(v_tilde, base_v, m, n, reg, base, contradiction)


# -- periodicity witness factorization ----------------------------------------------


def periodicity_factor(
    g: KGraph, v: str, m: Degree, n: Degree, x: BoundaryFragment
) -> tuple[Path, Path, Path]:
    """Split a fragment satisfying periodicity (m, n) at v into (mu, alpha, nu)
    with mu = x(0, m ^ d(x)), alpha = x(m ^ d(x), (m v n) ^ d(x)),
    nu = x(0, n ^ d(x)); then d(mu) != d(nu) and mu.alpha.y = nu.alpha.y for
    every boundary path y at s(alpha)."""
    if x.body.range != v:
        raise PreconditionFailedError(f"fragment is at {x.body.range}, not {v}")
    ok, reason = _lp_on_fragment(g, x, m, n)
    if not ok:
        raise PreconditionFailedError(f"fragment violates periodicity ({reason} clause)")
    mdx = meet_degree(x, m)
    ndx = meet_degree(x, n)
    join_dx = meet_degree(x, m.join(n))
    mu = g.factorize(x.body, mdx)[0]
    alpha = g.segment(x.body, mdx, join_dx)
    nu = g.factorize(x.body, ndx)[0]
    if mu.source != nu.source:
        raise PreconditionFailedError("shift clause fails: mu and nu end at different vertices")
    return mu, alpha, nu
