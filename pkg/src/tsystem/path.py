"""Non-intersecting path families and the symmetric-difference bijection.

Orient the graph: horizontal and diagonal edges point left to right, vertical
edges point from their black end to their white end.  Taking the symmetric
difference of a perfect matching with the reference set of white-black
horizontal/diagonal edges produces a family of vertex-disjoint directed
paths from the left-most south-west vertices to the right-most south-east
vertices; the same map is its own inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAPathFamily, NotPerfect
from .graph import OpenFaceGraph, Vertex, boundary_sets, build_closure, build_graph
from .laurent import LaurentPoly, assert_tail_free, monomial_code, sum_of_codes, t, tau
from .matching import (
    EdgeKey,
    Matching,
    edge_weights,
    enumerate_matchings,
    extend_matching,
    mbar0,
)
from .oracle import Instance
from .surface import SteppedSurface, shadow


@dataclass(frozen=True)
class PathFamily:
    """Edge set of a path family with its decomposition into directed paths."""

    edges: frozenset
    paths: tuple[tuple[Vertex, ...], ...]

    @property
    def sources(self) -> tuple[Vertex, ...]:
        return tuple(p[0] for p in self.paths)

    @property
    def sinks(self) -> tuple[Vertex, ...]:
        return tuple(p[-1] for p in self.paths)


def reference_set(g: OpenFaceGraph) -> frozenset:
    """White-black horizontal and diagonal edges of ``g``."""
    return mbar0(g)


class Orientation:
    """Oriented edges, sources and sinks of a graph, computed once.

    Vertices are numbered so that the path-following loop in
    :func:`decompose` works on small integers.
    """

    def __init__(self, g: OpenFaceGraph):
        bs = boundary_sets(g)
        self.graph = g
        self.vertices = tuple(g.vertices)
        number = {v: n for n, v in enumerate(self.vertices)}
        self.sources = frozenset(number[v] for v in bs.left_sw)
        self.sinks = frozenset(number[v] for v in bs.right_se)
        self.sorted_sources = tuple(number[v] for v in sorted(bs.left_sw))
        self.arrow = {e.key: (number[e.tail], number[e.head]) for e in g.edges}
        self.reference = mbar0(g)


def decompose(g: OpenFaceGraph, keys: frozenset, orient: Orientation | None = None) -> PathFamily:
    """Check that ``keys`` is a path family of ``g`` and split it into paths."""
    if orient is None:
        orient = Orientation(g)
    sources, sinks, names = orient.sources, orient.sinks, orient.vertices
    out_edge: dict[int, int] = {}
    in_edge: dict[int, int] = {}
    for key in keys:
        ends = orient.arrow.get(key)
        if ends is None:
            raise NotAPathFamily(f"edge {key} is not in the graph")
        a, b = ends
        if a in out_edge or b in in_edge:
            raise NotAPathFamily(f"paths meet at edge {key}")
        out_edge[a] = b
        in_edge[b] = a
    for v in out_edge:
        if v not in in_edge and v not in sources:
            raise NotAPathFamily(f"path starts at {names[v].label()}, which is not a source")
    for v in in_edge:
        if v not in out_edge and v not in sinks:
            raise NotAPathFamily(f"path ends at {names[v].label()}, which is not a sink")
    paths = []
    used = 0
    ends_reached = set()
    for s in orient.sorted_sources:
        if s not in out_edge:
            raise NotAPathFamily(f"source {names[s].label()} is not used")
        walk = [s]
        while walk[-1] in out_edge:
            walk.append(out_edge[walk[-1]])
            if len(walk) > len(names):
                raise NotAPathFamily("directed cycle")
        used += len(walk) - 1
        ends_reached.add(walk[-1])
        paths.append(tuple(names[v] for v in walk))
    if used != len(keys):
        raise NotAPathFamily("edges left over after following all paths (a cycle)")
    if ends_reached != sinks:
        raise NotAPathFamily("not every sink is reached")
    return PathFamily(frozenset(keys), tuple(paths))


def phi(g: OpenFaceGraph, m: Matching, orient: Orientation | None = None) -> PathFamily:
    """``M`` symmetric-difference the reference set, as a path family."""
    if orient is None:
        orient = Orientation(g)
    return decompose(g, m.edges ^ orient.reference, orient)


def psi(g: OpenFaceGraph, family: PathFamily, orient: Orientation | None = None) -> Matching:
    """Inverse of :func:`phi`; checks that the result is a perfect matching."""
    if orient is None:
        orient = Orientation(g)
    keys = family.edges ^ orient.reference
    seen: set[int] = set()
    for key in keys:
        for v in orient.arrow[key]:
            if v in seen:
                raise NotPerfect(f"vertex {orient.vertices[v].label()} is covered twice")
            seen.add(v)
    if len(seen) != len(orient.vertices):
        raise NotPerfect("some vertex is not covered")
    return Matching(frozenset(keys))


def phi_bar(gbar: OpenFaceGraph, mbar: Matching, orient: Orientation | None = None) -> PathFamily:
    """Extended matching of the closure to a path family of the closure."""
    if orient is None:
        orient = Orientation(gbar)
    return decompose(gbar, mbar.edges ^ orient.reference, orient)


def _families(gbar: OpenFaceGraph, g: OpenFaceGraph):
    orient = Orientation(gbar)
    extra = extend_matching(gbar, g, Matching(frozenset())).edges
    for m in enumerate_matchings(g):
        yield decompose(gbar, (m.edges | extra) ^ orient.reference, orient)


def enumerate_paths(gbar: OpenFaceGraph, g: OpenFaceGraph) -> list[PathFamily]:
    """All path families of the closure, as images of the matchings of ``g``."""
    return sorted(_families(gbar, g), key=lambda f: tuple(sorted(f.edges)))


def enumerate_paths_direct(gbar: OpenFaceGraph) -> list[PathFamily]:
    """Depth-first enumeration of vertex-disjoint families; small graphs only."""
    orient = Orientation(gbar)
    sources = orient.sorted_sources
    sinks = orient.sinks
    outgoing: list[list[tuple[int, EdgeKey]]] = [[] for _ in orient.vertices]
    for key, (a, b) in orient.arrow.items():
        outgoing[a].append((b, key))
    used = [False] * len(orient.vertices)
    keys: list[EdgeKey] = []
    found: list[tuple[EdgeKey, ...]] = []

    def route(n: int) -> None:
        if n == len(sources):
            found.append(tuple(sorted(keys)))
            return
        s = sources[n]
        if used[s]:
            return
        used[s] = True
        walk(s, n)
        used[s] = False

    def walk(v: int, n: int) -> None:
        if v in sinks:
            route(n + 1)
        for w, key in outgoing[v]:
            if used[w]:
                continue
            used[w] = True
            keys.append(key)
            walk(w, n)
            keys.pop()
            used[w] = False

    route(0)
    return [decompose(gbar, frozenset(f), orient) for f in sorted(set(found))]


def modified_weights(gbar: OpenFaceGraph, g: OpenFaceGraph, s: SteppedSurface) -> dict[EdgeKey, LaurentPoly]:
    """``w_e`` off the reference set and ``w_e^-1`` on it."""
    ref = mbar0(gbar)
    return {k: (w.inverse() if k in ref else w) for k, w in edge_weights(gbar, g, s).items()}


def family_weight(weights: dict[EdgeKey, LaurentPoly], family: PathFamily) -> LaurentPoly:
    out = LaurentPoly.const(1)
    for key in sorted(family.edges):
        out = out * weights[key]
    return out


def tail_normalizer(gbar: OpenFaceGraph, g: OpenFaceGraph, s: SteppedSurface) -> LaurentPoly:
    """``Q``: the product of ``tau[i, j+k+2]`` over reference-set ``N`` edges under closed faces."""
    ref = mbar0(gbar)
    out = LaurentPoly.const(1)
    for e in gbar.edges:
        if e.key in ref and e.cls == "h":
            _, (i, j) = e.name
            if (i, j) in g.closed_faces:
                out = out * tau(i, j + s.height(i, j) + 2)
    return out


def solve_path(inst: Instance) -> LaurentPoly:
    """``sum w_e'(P) / Q`` over the path families of the closure."""
    s, p = inst.surface, inst.point
    if shadow(s, p).degenerate:
        return t(p.i, p.j)
    g = build_graph(s, p)
    gbar = build_closure(s, p)
    weights = modified_weights(gbar, g, s)
    codes = {k: monomial_code(w) for k, w in weights.items()}
    total = sum_of_codes(sum(codes[k] for k in f.edges) for f in _families(gbar, g))
    return assert_tail_free(total * tail_normalizer(gbar, g, s).inverse())


__all__ = [
    "Orientation",
    "PathFamily",
    "decompose",
    "enumerate_paths",
    "enumerate_paths_direct",
    "family_weight",
    "modified_weights",
    "phi",
    "phi_bar",
    "psi",
    "reference_set",
    "solve_path",
    "tail_normalizer",
]
