"""Perfect matchings of the graph with open faces and their weights.

Two weightings lead to the same answer:

* the face weight times the pairing weight, summed over perfect matchings of
  ``G`` (:func:`solve_matching`);
* the edge weight of the extended matching on the closure, normalised by the
  reference set ``M0bar`` of all white-black horizontal and diagonal edges
  (:func:`solve_edge`).

Edges are identified by their key (the pair of faces they separate), which
is shared between ``G`` and its closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import UnbalancedColumn
from .graph import EdgeRec, OpenFaceGraph, Site, build_closure, build_graph
from .laurent import (
    ONE,
    Kind,
    LaurentPoly,
    Var,
    assert_tail_free,
    c_product,
    eval_c_one,
    exact_div,
    monomial_code,
    sum_of_codes,
    t,
    tau,
)
from .oracle import Instance
from .surface import SteppedSurface, shadow

EdgeKey = tuple[Site, Site]


@dataclass(frozen=True)
class Matching:
    edges: frozenset

    def sorted_keys(self) -> tuple[EdgeKey, ...]:
        return tuple(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, key) -> bool:
        return key in self.edges


@dataclass(frozen=True)
class Pair:
    """An allowed pair: ``S(i, j1)`` below ``N(i, j2)`` in one column."""

    column: int
    j1: int
    j2: int

    @property
    def south(self) -> Site:
        return (self.column, self.j1)

    @property
    def north(self) -> Site:
        return (self.column, self.j2)


@dataclass(frozen=True)
class PairingSet:
    pairs: tuple[Pair, ...]

    def __len__(self) -> int:
        return len(self.pairs)


def enumerate_matchings(g: OpenFaceGraph) -> list[Matching]:
    """All perfect matchings, sorted by their sorted edge-key tuples."""
    vertices = g.vertices
    index = {v: n for n, v in enumerate(vertices)}
    adj: list[list[tuple[int, EdgeKey]]] = [[] for _ in vertices]
    for e in g.edges:
        a, b = index[e.ends[0]], index[e.ends[1]]
        adj[a].append((b, e.key))
        adj[b].append((a, e.key))

    covered = [False] * len(vertices)
    chosen: list[EdgeKey] = []
    found: list[tuple[EdgeKey, ...]] = []

    def free_degree(v: int) -> int:
        return sum(1 for w, _ in adj[v] if not covered[w])

    def go(start: int) -> None:
        v = start
        while v < len(vertices) and covered[v]:
            v += 1
        if v == len(vertices):
            found.append(tuple(sorted(chosen)))
            return
        covered[v] = True
        for w, key in adj[v]:
            if covered[w]:
                continue
            covered[w] = True
            # prune if some neighbour of w or v is now stranded
            stranded = any(
                not covered[x] and free_degree(x) == 0 for y in (v, w) for x, _ in adj[y]
            )
            if not stranded:
                chosen.append(key)
                go(v + 1)
                chosen.pop()
            covered[w] = False
        covered[v] = False

    go(0)
    found.sort()
    return [Matching(frozenset(keys)) for keys in found]


def _face_exponent(total: int, matched: int, closed: bool) -> int:
    unmatched = total - matched
    diff = unmatched - matched
    up = -(-diff // 2)
    return up - 1 if closed else up


def _matched_sides(g: OpenFaceGraph, keys: Iterable[EdgeKey]) -> dict[Site, int]:
    """Number of edges in ``keys`` on the boundary of each face of ``g``."""
    counts: dict[Site, int] = {}
    for a, b in keys:
        for x in (a, b):
            if x in g.face_sides:
                counts[x] = counts.get(x, 0) + 1
    return counts


def face_weight(g: OpenFaceGraph, m: Matching) -> LaurentPoly:
    """Product over faces of ``t^(ceil((b-a)/2) - 1)`` (closed) or ``t^ceil((b-a)/2)`` (open).

    ``a`` counts matched and ``b`` unmatched sides of the face.
    """
    matched = _matched_sides(g, m.edges)
    exps = {}
    for x in g.faces:
        ex = _face_exponent(len(g.face_sides[x]), matched.get(x, 0), x in g.closed_faces)
        if ex:
            exps[Var(Kind.T, *x)] = ex
    return LaurentPoly.monomial(exps)


def perfect_pairing(g: OpenFaceGraph, m: Matching) -> PairingSet:
    """Pair matched horizontal edges column by column, bottom to top.

    An ``S`` edge waits on a stack; an ``N`` edge takes the nearest waiting
    ``S`` edge below it.
    """
    by_column: dict[int, list[EdgeRec]] = {}
    for e in g.edges:
        if e.cls == "h" and e.key in m.edges:
            by_column.setdefault(e.faces[0][0], []).append(e)
    pairs = []
    for col in sorted(by_column):
        stack: list[int] = []
        for e in sorted(by_column[col], key=lambda e: e.faces[0][1]):
            kind, (_, j) = e.name
            if kind == "S":
                stack.append(j)
            else:
                if not stack:
                    raise UnbalancedColumn(f"N({col},{j}) has no S edge below it")
                pairs.append(Pair(col, stack.pop(), j))
        if stack:
            raise UnbalancedColumn(f"column {col} has unpaired S edges at {stack}")
    return PairingSet(tuple(sorted(pairs, key=lambda p: (p.column, p.j1, p.j2))))


def pair_weight(s: SteppedSurface, pair: Pair) -> LaurentPoly:
    i = pair.column
    lo = pair.j1 - s.height(i, pair.j1) - 1
    hi = pair.j2 + s.height(i, pair.j2) + 1
    return c_product(i, lo, hi)


def pairing_weight(s: SteppedSurface, pairing: PairingSet) -> LaurentPoly:
    out = ONE
    for pair in pairing.pairs:
        out = out * pair_weight(s, pair)
    return out


class _Weigher:
    """Integer codes for ``w_p(M) * w_f(M)``, precomputed per face and column.

    Equivalent to ``pairing_weight(s, perfect_pairing(g, M)) * face_weight(g, M)``
    but avoids building intermediate polynomials for every matching.
    """

    def __init__(self, s: SteppedSurface, g: OpenFaceGraph):
        self.s = s
        self.faces = sorted(g.faces)
        self.face_of = {x: n for n, x in enumerate(self.faces)}
        self.t_code = [monomial_code(t(*x)) for x in self.faces]
        self.sizes = [len(g.face_sides[x]) for x in self.faces]
        self.closed = [x in g.closed_faces for x in self.faces]
        self.edge_faces = {
            e.key: [self.face_of[x] for x in e.faces if x in self.face_of] for e in g.edges
        }
        self.horizontal = {}
        for e in g.edges:
            if e.cls == "h":
                kind, (i, j) = e.name
                self.horizontal[e.key] = (i, e.faces[0][1], kind, j)
        self.pair_codes: dict[tuple[int, int, int], int] = {}

    def pair_code(self, i: int, j1: int, j2: int) -> int:
        key = (i, j1, j2)
        code = self.pair_codes.get(key)
        if code is None:
            code = self.pair_codes[key] = monomial_code(pair_weight(self.s, Pair(i, j1, j2)))
        return code

    def code(self, m: Matching) -> int:
        matched = [0] * len(self.faces)
        hs = []
        for key in m.edges:
            for n in self.edge_faces[key]:
                matched[n] += 1
            h = self.horizontal.get(key)
            if h is not None:
                hs.append(h)
        total = 0
        for n, a in enumerate(matched):
            ex = _face_exponent(self.sizes[n], a, self.closed[n])
            if ex:
                total += ex * self.t_code[n]
        hs.sort()
        stack: list[int] = []
        col = None
        for i, _, kind, j in hs:
            if i != col:
                if stack:
                    raise UnbalancedColumn(f"column {col} has unpaired S edges at {stack}")
                col = i
            if kind == "S":
                stack.append(j)
            elif not stack:
                raise UnbalancedColumn(f"N({i},{j}) has no S edge below it")
            else:
                total += self.pair_code(i, stack.pop(), j)
        if stack:
            raise UnbalancedColumn(f"column {col} has unpaired S edges at {stack}")
        return total


def solve_matching(inst: Instance) -> LaurentPoly:
    """Sum of pairing weight times face weight over perfect matchings of ``G``."""
    s, p = inst.surface, inst.point
    if shadow(s, p).degenerate:
        return t(p.i, p.j)
    g = build_graph(s, p)
    weigher = _Weigher(s, g)
    return sum_of_codes(weigher.code(m) for m in enumerate_matchings(g))


# -- edge weights on the closure --------------------------------------------

def extend_matching(gbar: OpenFaceGraph, g: OpenFaceGraph, m: Matching) -> Matching:
    """``M`` together with every diagonal edge the closure adds."""
    inner = {e.key for e in g.edges}
    extra = {e.key for e in gbar.edges if e.cls == "d" and e.key not in inner}
    return Matching(m.edges | extra)


def mbar0(gbar: OpenFaceGraph) -> frozenset:
    """All white-black horizontal and diagonal edges of the closure."""
    return frozenset(e.key for e in gbar.edges if e.htype == "N")


def edge_tail(s: SteppedSurface, g: OpenFaceGraph, e: EdgeRec) -> LaurentPoly:
    """The tail factor of a horizontal edge.

    An ``S`` edge over a closed face ``a = (i, j)`` carries
    ``tau[i, j-k-1]``; an ``N`` edge under a closed face ``b = (i, j)``
    carries ``tau[i, j+k+2]^-1``.  Everything else carries 1.
    """
    if e.cls != "h":
        return ONE
    kind, (i, j) = e.name
    if (i, j) not in g.closed_faces:
        return ONE
    k = s.height(i, j)
    if kind == "S":
        return tau(i, j - k - 1)
    return tau(i, j + k + 2, -1)


def edge_weight(gbar: OpenFaceGraph, g: OpenFaceGraph, s: SteppedSurface, e: EdgeRec) -> LaurentPoly:
    """``t^-1`` for each side face inside the shadow, times the tail factor."""
    out = edge_tail(s, g, e)
    for x in e.faces:
        if x in gbar.faces:
            out = out * t(*x, -1)
    return out


def edge_weights(gbar: OpenFaceGraph, g: OpenFaceGraph, s: SteppedSurface) -> dict[EdgeKey, LaurentPoly]:
    return {e.key: edge_weight(gbar, g, s, e) for e in gbar.edges}


def edge_weight_set(weights: dict[EdgeKey, LaurentPoly], keys: Iterable[EdgeKey]) -> LaurentPoly:
    out = ONE
    for key in sorted(keys):
        out = out * weights[key]
    return out


def face_weight_from_counts(gbar: OpenFaceGraph, mbar: Matching, reference: frozenset | None = None) -> LaurentPoly:
    """``prod t_x^(N_x - D_x)``: reference-set sides minus matched sides per face."""
    if reference is None:
        reference = mbar0(gbar)
    n = _matched_sides(gbar, reference)
    d = _matched_sides(gbar, mbar.edges)
    exps = {}
    for x in gbar.faces:
        ex = n.get(x, 0) - d.get(x, 0)
        if ex:
            exps[Var(Kind.T, *x)] = ex
    return LaurentPoly.monomial(exps)


def solve_edge(inst: Instance) -> LaurentPoly:
    """``sum w_e(Mbar) / w_e(M0bar)|_{c=1}`` over extended matchings."""
    s, p = inst.surface, inst.point
    if shadow(s, p).degenerate:
        return t(p.i, p.j)
    g = build_graph(s, p)
    gbar = build_closure(s, p)
    weights = edge_weights(gbar, g, s)
    codes = {k: monomial_code(w) for k, w in weights.items()}
    extra = extend_matching(gbar, g, Matching(frozenset())).edges
    base = sum(codes[k] for k in extra)
    total = sum_of_codes(base + sum(codes[k] for k in m.edges) for m in enumerate_matchings(g))
    reference = eval_c_one(edge_weight_set(weights, mbar0(gbar)))
    return assert_tail_free(exact_div(total, reference))


__all__ = [
    "Matching",
    "Pair",
    "PairingSet",
    "edge_tail",
    "edge_weight",
    "edge_weight_set",
    "edge_weights",
    "enumerate_matchings",
    "extend_matching",
    "face_weight",
    "face_weight_from_counts",
    "mbar0",
    "pair_weight",
    "pairing_weight",
    "perfect_pairing",
    "solve_edge",
    "solve_matching",
]
