"""Built-in graph generators used by the CLI, tests, and scripts.

All generators return a SkeletonSpec; validate() turns one into a KGraph.

figure1(N) is the N-column truncation of a two-row 2-graph: two infinite
horizontal rows (solid, color 1), vertical drops between them (dashed,
color 2), and two hub vertices w and x carrying solid loops and dashed
fans onto the rows.  w and x have no incoming dashed edge, so they are the
color-2 sources the desourcing construction grows tails from.  A finite
truncation needs solid loops on the rim column, otherwise the hub loops
force dashed fans without end; squares are not written by hand but forced
from the skeleton, and the generator fails loudly if any composable pair
has zero or multiple completions.
"""

from __future__ import annotations

import random
from itertools import product

from .degrees import Degree
from .core import EdgeDecl, KGraph, SkeletonSpec, SquareDecl, validate
from .errors import InternalInvariantError


def complete_squares(rank: int, vertices, edges) -> tuple[SquareDecl, ...]:
    """Squares uniquely forced by a skeleton.

    For each composable ascending pair (f, g2) there must be exactly one
    descending pair (g, f2) with matching endpoints; anything else raises.
    """
    edges = tuple(edges)
    by_range: dict[tuple[str, int], list[EdgeDecl]] = {}
    for e in edges:
        by_range.setdefault((e.rng, e.color), []).append(e)
    squares = []
    for f in edges:
        for j in range(f.color + 1, rank + 1):
            for g2 in by_range.get((f.src, j), ()):
                candidates = []
                for g in by_range.get((f.rng, j), ()):
                    for f2 in by_range.get((g.src, f.color), ()):
                        if f2.src == g2.src:
                            candidates.append((g.id, f2.id))
                if len(candidates) != 1:
                    raise InternalInvariantError(
                        f"square completion of ({f.id}, {g2.id}) is not unique: {candidates}"
                    )
                squares.append(SquareDecl(f.id, g2.id, *candidates[0]))
    return tuple(squares)


def omega(k: int, m: tuple[int, ...]) -> SkeletonSpec:
    """The lattice-box k-graph: vertices p <= m, morphisms (p, q)."""
    lim = Degree(tuple(m))
    if lim.rank != k:
        raise ValueError(f"degree {m} has rank {lim.rank}, expected {k}")
    pts = list(product(*(range(c + 1) for c in lim.coords)))
    vid = {p: "v" + "".join(str(c) for c in p) for p in pts}
    edges = []
    for p in pts:
        for c in range(1, k + 1):
            q = tuple(p[i] + (1 if i == c - 1 else 0) for i in range(k))
            if q in vid:
                edges.append(EdgeDecl(f"e{c}_{vid[p][1:]}", c, vid[q], vid[p]))
    squares = complete_squares(k, vid.values(), edges)
    return SkeletonSpec(k, tuple(vid.values()), tuple(edges), squares)


def cycle(L: int) -> SkeletonSpec:
    """Directed L-cycle as a 1-graph; cycle(1) is the single loop."""
    vs = tuple(f"v{t}" for t in range(L))
    edges = tuple(EdgeDecl(f"e{t}", 1, vs[(t + 1) % L], vs[t]) for t in range(L))
    return SkeletonSpec(1, vs, edges, ())


def torus2() -> SkeletonSpec:
    """One vertex, one loop per color, the single commuting square."""
    edges = (EdgeDecl("a", 1, "v", "v"), EdgeDecl("b", 2, "v", "v"))
    return SkeletonSpec(2, ("v",), edges, (SquareDecl("a", "b", "b", "a"),))


def single_edge() -> SkeletonSpec:
    """u <- v: one edge with range u and source v; v is a dead end."""
    return SkeletonSpec(1, ("u", "v"), (EdgeDecl("e", 1, "v", "u"),), ())


def two_loops() -> SkeletonSpec:
    """Disjoint union of two single loops; the classic cofinality failure."""
    edges = (EdgeDecl("la", 1, "p", "p"), EdgeDecl("lb", 1, "q", "q"))
    return SkeletonSpec(1, ("p", "q"), edges, ())


def double_square() -> SkeletonSpec:
    """Two parallel squares over the same edge pair at the top vertex."""
    vs = ("v", "a", "b", "c1", "c2")
    edges = (
        EdgeDecl("f", 1, "a", "v"),
        EdgeDecl("g", 2, "b", "v"),
        EdgeDecl("g1", 2, "c1", "a"),
        EdgeDecl("g2", 2, "c2", "a"),
        EdgeDecl("f1", 1, "c1", "b"),
        EdgeDecl("f2", 1, "c2", "b"),
    )
    squares = (SquareDecl("f", "g1", "g", "f1"), SquareDecl("f", "g2", "g", "f2"))
    return SkeletonSpec(2, vs, edges, squares)


def not_locally_convex() -> SkeletonSpec:
    """Valid 2-graph (no squares needed) that fails local convexity at (f, g)."""
    edges = (EdgeDecl("f", 1, "a", "v"), EdgeDecl("g", 2, "b", "v"))
    return SkeletonSpec(2, ("v", "a", "b"), edges, ())


def two_component5() -> SkeletonSpec:
    """Single edge plus a 3-cycle: 5 vertices, two components."""
    edges = (
        EdgeDecl("e", 1, "v", "u"),
        EdgeDecl("c0", 1, "w1", "w0"),
        EdgeDecl("c1", 1, "w2", "w1"),
        EdgeDecl("c2", 1, "w0", "w2"),
    )
    return SkeletonSpec(1, ("u", "v", "w0", "w1", "w2"), edges, ())


def chain_fork(L: int = 4) -> SkeletonSpec:
    """A path of length L-1 ending in a two-edge fork; fragments agree to
    depth L-1 and diverge at depth L."""
    vs = [f"v{t}" for t in range(L)] + ["wa", "wb"]
    edges = [EdgeDecl(f"e{t}", 1, f"v{t + 1}", f"v{t}") for t in range(L - 1)]
    edges += [EdgeDecl("fa", 1, "wa", f"v{L - 1}"), EdgeDecl("fb", 1, "wb", f"v{L - 1}")]
    return SkeletonSpec(1, tuple(vs), tuple(edges), ())


def figure1(N: int) -> SkeletonSpec:
    """N-column truncation of the two-row hub graph described above.

    Vertices: b0..b{N-1} (bottom row), u0..u{N-1} (top row), w, x (hubs).
    Color 1 (solid): row steps b{t+1}->b{t}, u{t+1}->u{t}, loops at w, x,
    and rim loops at b{N-1}, u{N-1}.  Color 2 (dashed): drops u{t}->b{t},
    fans w->u{t} and x->b{t}.
    """
    if N < 2:
        raise ValueError("figure1 needs at least two columns")
    vs = [f"b{t}" for t in range(N)] + [f"u{t}" for t in range(N)] + ["w", "x"]
    edges = []
    for t in range(N - 1):
        edges.append(EdgeDecl(f"bt{t}", 1, f"b{t + 1}", f"b{t}"))
        edges.append(EdgeDecl(f"ut{t}", 1, f"u{t + 1}", f"u{t}"))
    edges.append(EdgeDecl("loopw", 1, "w", "w"))
    edges.append(EdgeDecl("loopx", 1, "x", "x"))
    edges.append(EdgeDecl("rimb", 1, f"b{N - 1}", f"b{N - 1}"))
    edges.append(EdgeDecl("rimu", 1, f"u{N - 1}", f"u{N - 1}"))
    for t in range(N):
        edges.append(EdgeDecl(f"d{t}", 2, f"u{t}", f"b{t}"))
        edges.append(EdgeDecl(f"wu{t}", 2, "w", f"u{t}"))
        edges.append(EdgeDecl(f"xb{t}", 2, "x", f"b{t}"))
    squares = complete_squares(2, vs, edges)
    return SkeletonSpec(2, tuple(vs), tuple(edges), squares)


def figure1_rim(N: int) -> frozenset[str]:
    """Vertices introduced by the truncation; fragments meeting these carry
    rim artifacts and are excluded from interior-semantics tests."""
    return frozenset({f"b{N - 1}", f"u{N - 1}"})


def random_two_graph(
    seed: int,
    max_vertices: int = 3,
    max_edges: int = 4,
) -> SkeletonSpec:
    """Random validated 2-graph: a product of two random 1-graphs with the
    componentwise squares re-paired at random inside (range, source) classes.

    Re-pairing preserves completeness (it permutes descending mates within
    a class) and rank 2 has no cube condition, so the result always
    validates; products also stay locally convex since color-i liveness
    only depends on the i-th factor.
    """
    rng = random.Random(seed)

    def random_one_graph(tag: str):
        nv = rng.randint(1, max_vertices)
        vs = [f"{tag}{i}" for i in range(nv)]
        ne = rng.randint(1, max_edges)
        edges = []
        for i in range(ne):
            edges.append((f"{tag}e{i}", rng.choice(vs), rng.choice(vs)))  # (id, src, rng)
        return vs, edges

    vs1, es1 = random_one_graph("p")
    vs2, es2 = random_one_graph("q")
    vertices = [f"{a}_{b}" for a in vs1 for b in vs2]
    edges = []
    for eid, src, rngv in es1:
        for b in vs2:
            edges.append(EdgeDecl(f"{eid}_{b}", 1, f"{src}_{b}", f"{rngv}_{b}"))
    for a in vs1:
        for eid, src, rngv in es2:
            edges.append(EdgeDecl(f"{a}_{eid}", 2, f"{a}_{src}", f"{a}_{rngv}"))
    squares = []
    for eid1, src1, rng1 in es1:
        for eid2, src2, rng2 in es2:
            # product square at (rng1, rng2): f then g2 equals g then f2
            squares.append(
                SquareDecl(
                    f"{eid1}_{rng2}",
                    f"{src1}_{eid2}",
                    f"{rng1}_{eid2}",
                    f"{eid1}_{src2}",
                )
            )
    # random re-pairing of descending mates within (range, source) classes
    def sq_class(sq: SquareDecl):
        e = {d.id: d for d in edges}
        return (e[sq.f].rng, e[sq.g2].src)

    groups: dict = {}
    for sq in squares:
        groups.setdefault(sq_class(sq), []).append(sq)
    out = []
    for _, group in sorted(groups.items()):
        desc = [(sq.g, sq.f2) for sq in group]
        rng.shuffle(desc)
        for sq, (gg, ff2) in zip(group, desc):
            out.append(SquareDecl(sq.f, sq.g2, gg, ff2))
    return SkeletonSpec(2, tuple(vertices), tuple(edges), tuple(out))


FIXTURE_BUILDERS = {
    "omega": lambda args: omega(int(args[0]), tuple(int(c) for c in args[1].split(","))),
    "cycle": lambda args: cycle(int(args[0])),
    "torus2": lambda args: torus2(),
    "single-edge": lambda args: single_edge(),
    "two-loops": lambda args: two_loops(),
    "double-square": lambda args: double_square(),
    "figure1": lambda args: figure1(int(args[0])),
}

FIXTURE_USAGE = {
    "omega": "omega <k> <m1,...,mk>",
    "cycle": "cycle <L>",
    "torus2": "torus2",
    "single-edge": "single-edge",
    "two-loops": "two-loops",
    "double-square": "double-square",
    "figure1": "figure1 <N>",
}


def build_fixture(name: str, args: list[str]) -> SkeletonSpec:
    if name not in FIXTURE_BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURE_BUILDERS))}")
    return FIXTURE_BUILDERS[name](args)


def standard_suite() -> dict[str, KGraph]:
    """The named graphs most tests quantify over."""
    return {
        "omega11": validate(omega(2, (1, 1))),
        "omega22": validate(omega(2, (2, 2))),
        "cycle1": validate(cycle(1)),
        "cycle2": validate(cycle(2)),
        "cycle3": validate(cycle(3)),
        "cycle5": validate(cycle(5)),
        "torus2": validate(torus2()),
        "single_edge": validate(single_edge()),
        "two_loops": validate(two_loops()),
        "double_square": validate(double_square()),
        "figure1_6": validate(figure1(6)),
    }
