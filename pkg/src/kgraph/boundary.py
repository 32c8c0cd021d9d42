"""Depth-truncated boundary paths.

A fragment is the restriction of a boundary path x to a finite box:
body = x(0, depth ^ d(x)), frontier = directions still alive at the body's
source.  For a dead direction i the true coordinate d(x)_i equals
d(body)_i exactly; for a live direction the body is explored to depth_i
and d(x)_i is only known to exceed it.  Everything downstream works with
this three-valued knowledge and refuses (InsufficientDepth) rather than
guessing.

Frontier correctness needs local convexity: without it a finite path with
a dead source need not be extendable past its interior faces, so
fragments_from rejects non-locally-convex graphs outright.
"""

from __future__ import annotations

from dataclasses import dataclass

from .degrees import Degree, ExtDegree, UNBOUNDED
from .core import KGraph, Path
from .errors import (
    DegreeOutOfRangeError,
    InsufficientDepthError,
    NotComposableError,
    NotLocallyConvexError,
)


@dataclass(frozen=True)
class BoundaryFragment:
    body: Path
    frontier: frozenset[int]
    depth: Degree  # explored box; d(body)_i == depth_i for live i

    def __repr__(self) -> str:
        live = ",".join(str(c) for c in sorted(self.frontier))
        return f"Frag<{self.body!r} live={{{live}}} depth={self.depth.coords}>"


def _require_lc(g: KGraph) -> None:
    ok, witness = g.local_convexity()
    if not ok:
        raise NotLocallyConvexError(witness)


def make_fragment(g: KGraph, body: Path, depth: Degree) -> BoundaryFragment:
    if not body.degree <= depth:
        raise DegreeOutOfRangeError(f"body degree {body.degree} exceeds box {depth}")
    frontier = g.alive_colors(body.source)
    for c in frontier:
        if body.degree.get(c) != depth.get(c):
            raise DegreeOutOfRangeError(
                f"live direction {c} explored to {body.degree.get(c)} != depth {depth.get(c)}"
            )
    return BoundaryFragment(body, frontier, depth)


def fragments_from(g: KGraph, v: str, B: int) -> tuple[BoundaryFragment, ...]:
    """All depth-B fragments at v, one per element of vL^{<=B.1}."""
    _require_lc(g)
    depth = Degree.ones(g.rank, B)
    return tuple(make_fragment(g, body, depth) for body in g.paths_le(v, depth))


def extend(g: KGraph, f: BoundaryFragment, B2: int) -> tuple[BoundaryFragment, ...]:
    """All depth-B2 fragments whose truncation to f's box is f."""
    depth2 = Degree.ones(g.rank, B2)
    if not f.depth <= depth2:
        raise DegreeOutOfRangeError(f"extension box {depth2} does not contain {f.depth}")
    out = []
    for tau in g.paths_le(f.body.source, depth2 - f.body.degree):
        body = g.compose(f.body, tau)
        out.append(make_fragment(g, body, depth2))
    return tuple(out)


def shift(g: KGraph, f: BoundaryFragment, n: Degree) -> BoundaryFragment:
    if not n <= f.body.degree:
        raise DegreeOutOfRangeError(f"shift {n} exceeds explored degree {f.body.degree}")
    body = g.segment(f.body, n, f.body.degree)
    return BoundaryFragment(body, f.frontier, f.depth - n)


def prepend(g: KGraph, lam: Path, f: BoundaryFragment) -> BoundaryFragment:
    if lam.source != f.body.range:
        raise NotComposableError(f"s({lam!r}) != r({f.body!r})")
    return BoundaryFragment(g.compose(lam, f.body), f.frontier, f.depth + lam.degree)


def truncate(g: KGraph, f: BoundaryFragment, depth: Degree) -> BoundaryFragment:
    """Restriction of the underlying boundary path to a smaller box."""
    if not is_determined(f, depth):
        raise InsufficientDepthError(f"fragment only explored to {f.depth}, wanted {depth}")
    body = g.factorize(f.body, depth.meet(f.body.degree))[0]
    return make_fragment(g, body, depth)


def is_determined(f: BoundaryFragment, m: Degree) -> bool:
    """Is x's restriction to the box [0, m ^ d(x)] known from the fragment?"""
    return all(m.get(c) <= f.body.degree.get(c) for c in f.frontier)


def meet_degree(f: BoundaryFragment, m: Degree) -> Degree:
    """m ^ d(x) for the underlying boundary path; needs determinacy."""
    if not is_determined(f, m):
        raise InsufficientDepthError(f"m ^ d(x) undetermined for m={m}, explored {f.body.degree}")
    return m.meet(f.body.degree)


def known_degree(f: BoundaryFragment) -> ExtDegree | None:
    """d(x) as an ExtDegree when fully determined (empty frontier), else None."""
    if f.frontier:
        return None
    return ExtDegree.from_degree(f.body.degree)


def degree_lower_bound(f: BoundaryFragment) -> ExtDegree:
    """Known determined coordinates of d(x); UNBOUNDED marks live directions."""
    return ExtDegree(
        tuple(
            UNBOUNDED if (c + 1) in f.frontier else f.body.degree.coords[c]
            for c in range(f.body.degree.rank)
        )
    )


def max_comparable_depth(f: BoundaryFragment, h: BoundaryFragment) -> Degree:
    """Largest box on which fragment_eq can decide without more exploration."""
    coords = []
    for c in range(1, f.body.degree.rank + 1):
        bounds = []
        if c in f.frontier:
            bounds.append(f.body.degree.get(c))
        if c in h.frontier:
            bounds.append(h.body.degree.get(c))
        if bounds:
            coords.append(min(bounds))
        else:
            coords.append(max(f.body.degree.get(c), h.body.degree.get(c)))
    return Degree(tuple(coords))


def fragment_eq(g: KGraph, f: BoundaryFragment, h: BoundaryFragment, depth: Degree) -> bool:
    """Do the underlying boundary paths agree on the box [0, depth]?

    Agreement means the clipped degrees depth ^ d(x) coincide and the body
    restrictions match; raises InsufficientDepth if either side is not
    explored far enough to answer.
    """
    if not (is_determined(f, depth) and is_determined(h, depth)):
        raise InsufficientDepthError(f"comparison at {depth} needs undetermined data")
    a = depth.meet(f.body.degree)
    b = depth.meet(h.body.degree)
    if a != b:
        return False
    return g.factorize(f.body, a)[0] == g.factorize(h.body, b)[0]
