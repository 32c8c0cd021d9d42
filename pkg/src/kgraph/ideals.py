"""Hereditary/saturated vertex sets, their lattice, quotient graphs, and the
graph-side gauge-invariance criterion.

Hereditary: r(lam) in H implies s(lam) in H (checking edges suffices, by
composition).  Saturated: if every source of vL^{<= e_i} lies in H for some
color i then v lies in H; for a vertex with live color i that set is the
color-i edge sources, for a dead one it is {v} and forces nothing new.

Quotients are revalidated from scratch instead of trusting inheritance;
that is cheap insurance against presentation-level bugs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .degrees import Degree
from .core import KGraph, SkeletonSpec, validate
from .analysis import LpScan, Verdict, find_lp, is_cofinal
from .errors import NotSaturatedHereditaryError, TooLargeError

EXHAUSTIVE_VERTEX_LIMIT = 20


@dataclass(frozen=True)
class VertexSet:
    members: frozenset[str]
    hereditary: bool
    saturated: bool


def is_hereditary(g: KGraph, H) -> tuple[bool, str | None]:
    """(True, None) or (False, violating edge id)."""
    H = frozenset(H)
    for eid in g.edge_ids:
        e = g.edge(eid)
        if e.rng in H and e.src not in H:
            return False, eid
    return True, None


def is_saturated(g: KGraph, H) -> tuple[bool, tuple[str, int] | None]:
    """(True, None) or (False, (vertex, color)) for a forced-but-missing vertex."""
    H = frozenset(H)
    for v in g.vertices:
        if v in H:
            continue
        for c in range(1, g.rank + 1):
            ids = g.edges_with_range(v, c)
            if ids and all(g.edge(e).src in H for e in ids):
                return False, (v, c)
    return True, None


def classify(g: KGraph, H) -> VertexSet:
    H = frozenset(H)
    return VertexSet(H, is_hereditary(g, H)[0], is_saturated(g, H)[0])


def saturate_hereditary(g: KGraph, S) -> frozenset[str]:
    """Least saturated hereditary superset (alternating closure fixpoint)."""
    H = set(S)
    changed = True
    while changed:
        changed = False
        for eid in g.edge_ids:
            e = g.edge(eid)
            if e.rng in H and e.src not in H:
                H.add(e.src)
                changed = True
        for v in g.vertices:
            if v in H:
                continue
            for c in range(1, g.rank + 1):
                ids = g.edges_with_range(v, c)
                if ids and all(g.edge(e).src in H for e in ids):
                    H.add(v)
                    changed = True
                    break
    return frozenset(H)


def enumerate_sat_hered(g: KGraph) -> tuple[frozenset[str], ...]:
    """All saturated hereditary subsets, ordered by size then lexicographically.

    Exhaustive power-set filter up to EXHAUSTIVE_VERTEX_LIMIT vertices;
    closure-generated (singleton closures joined to a fixpoint) beyond.
    """
    vs = g.vertices
    found: set[frozenset[str]] = set()
    if len(vs) <= EXHAUSTIVE_VERTEX_LIMIT:
        for r in range(len(vs) + 1):
            for combo in combinations(vs, r):
                H = frozenset(combo)
                if is_hereditary(g, H)[0] and is_saturated(g, H)[0]:
                    found.add(H)
    else:
        found.add(frozenset())
        frontier = {saturate_hereditary(g, {v}) for v in vs}
        found |= frontier
        changed = True
        while changed:
            changed = False
            for a in list(found):
                for b in list(found):
                    j = saturate_hereditary(g, a | b)
                    if j not in found:
                        found.add(j)
                        changed = True
            if len(found) > 1 << 16:
                raise TooLargeError("saturated hereditary lattice exceeds 2^16 elements")
    return tuple(sorted(found, key=lambda H: (len(H), tuple(sorted(H)))))


def quotient(g: KGraph, H) -> KGraph:
    """Sub-k-graph on morphisms whose source avoids H, revalidated."""
    H = frozenset(H)
    ok_h, weh = is_hereditary(g, H)
    ok_s, wes = is_saturated(g, H)
    if not (ok_h and ok_s):
        raise NotSaturatedHereditaryError(
            f"H is not saturated hereditary (hereditary witness {weh}, saturation witness {wes})"
        )
    vertices = tuple(v for v in g.vertices if v not in H)
    edges = tuple(e for e in g.spec.edges if e.src not in H)
    keep = {e.id for e in edges}
    squares = tuple(
        sq for sq in g.spec.squares if {sq.f, sq.g, sq.f2, sq.g2} <= keep
    )
    return validate(SkeletonSpec(g.rank, vertices, edges, squares))


@dataclass(frozen=True)
class GaugeInvarianceReport:
    all_gauge_invariant: bool  # depth-qualified via the per-quotient scans
    per_subset: tuple[tuple[frozenset[str], LpScan], ...]
    cofinality: Verdict  # exact; the graph-side content of the ideal-triviality criterion
    box: Degree
    depth: int


def gauge_invariance_criterion(g: KGraph, M: Degree, B: int) -> GaugeInvarianceReport:
    """Scan every quotient by a saturated hereditary subset for surviving
    periodicity candidates; all clear (at depth) means every ideal is
    gauge-invariant on the graph side."""
    per = []
    ok = True
    for H in enumerate_sat_hered(g):
        q = quotient(g, H)
        scan = find_lp(q, M, B)
        per.append((H, scan))
        if scan.found():
            ok = False
    return GaugeInvarianceReport(ok, tuple(per), is_cofinal(g), M, B)
