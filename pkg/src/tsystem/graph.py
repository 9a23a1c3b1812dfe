"""The bipartite planar graph dual to the quiver of a stepped surface.

Faces of the graph are the lattice sites ``(i, j)``; vertices live inside the
unit squares ``[i, i+1] x [j, j+1]`` of the site lattice.  For a square with
corners ``A=(i,j)``, ``B=(i+1,j)``, ``C=(i+1,j+1)``, ``D=(i,j+1)`` exactly one
of three things happens:

* heights alternate around the square -> one vertex (part ``"sq"``);
* ``k(A) = k(C)`` but ``k(B) != k(D)`` -> a diagonal edge dual to the arrow
  ``A - C`` splits the square into triangles ``ABC`` and ``ACD``;
* ``k(B) = k(D)`` but ``k(A) != k(C)`` -> a diagonal dual to ``B - D`` splits
  it into ``ABD`` and ``BCD``.

Every lattice arrow between neighbouring sites is dual to an edge: arrows in
the ``i`` direction give vertical edges, arrows in the ``j`` direction give
horizontal ones.  A vertex is white when the quiver cycle around it is
counter-clockwise, which reduces to comparing two corner heights.

Coordinates are kept as integers in units of a quarter square so that vertex
gluing is a dictionary lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import DegenerateShadow, InconsistentRow, UnrecognizedLocalPattern
from .surface import Point3, SteppedSurface, adjusted_surface, neighbors, shadow

Site = tuple[int, int]
Height = Callable[[int, int], int]

WHITE = "white"
BLACK = "black"

# quarter-unit offsets of each part inside its square
_OFFSET = {"sq": (2, 2), "ABC": (3, 1), "ACD": (1, 3), "ABD": (1, 1), "BCD": (3, 3)}


def square_diagonal(h: Height, i: int, j: int) -> str | None:
    a, b, c, d = h(i, j), h(i + 1, j), h(i + 1, j + 1), h(i, j + 1)
    if a == c and b == d:
        return None
    if a == c:
        return "AC"
    if b == d:
        return "BD"
    raise UnrecognizedLocalPattern(f"square at {(i, j)} has heights {(a, b, c, d)}")


def side_part(diag: str | None, side: str) -> str:
    """The part of a square that carries the given side."""
    if diag is None:
        return "sq"
    table = {
        "AC": {"bottom": "ABC", "right": "ABC", "top": "ACD", "left": "ACD"},
        "BD": {"bottom": "ABD", "left": "ABD", "top": "BCD", "right": "BCD"},
    }
    return table[diag][side]


def part_color(h: Height, i: int, j: int, part: str) -> str:
    a, b, c, d = h(i, j), h(i + 1, j), h(i + 1, j + 1), h(i, j + 1)
    if part in ("sq", "ABC", "ABD"):
        return WHITE if a > b else BLACK
    return WHITE if c > d else BLACK


@dataclass(frozen=True, order=True)
class Vertex:
    """A graph vertex: part ``part`` of the square with lower-left site ``(i, j)``."""

    pos: tuple[int, int]  # quarter-unit coordinates
    i: int
    j: int
    part: str
    color: str = field(compare=False)
    row: int = field(compare=False)

    @property
    def corners(self) -> dict[str, Site]:
        i, j = self.i, self.j
        return {"A": (i, j), "B": (i + 1, j), "C": (i + 1, j + 1), "D": (i, j + 1)}

    def label(self) -> str:
        return f"{self.part}({self.i},{self.j})"


@dataclass(frozen=True)
class EdgeRec:
    """An edge, identified by the pair of faces it separates.

    For horizontal and diagonal edges ``ends`` is ``(left, right)``; for
    vertical ones ``(lower, upper)``.
    """

    faces: tuple[Site, Site]
    cls: str  # "h" | "v" | "d"
    ends: tuple[Vertex, Vertex]

    @property
    def key(self) -> tuple[Site, Site]:
        return self.faces

    @property
    def black(self) -> Vertex:
        return self.ends[0] if self.ends[0].color == BLACK else self.ends[1]

    @property
    def white(self) -> Vertex:
        return self.ends[0] if self.ends[0].color == WHITE else self.ends[1]

    @property
    def htype(self) -> str | None:
        """``"N"`` for white-black (read left to right), ``"S"`` for black-white."""
        if self.cls == "v":
            return None
        return "N" if self.ends[0].color == WHITE else "S"

    @property
    def name(self) -> tuple[str, Site] | None:
        """``("N", lower face)`` or ``("S", upper face)`` for horizontal edges."""
        if self.cls != "h":
            return None
        lower, upper = self.faces
        return ("N", lower) if self.htype == "N" else ("S", upper)

    @property
    def tail(self) -> Vertex:
        """Start vertex under the standard orientation."""
        return self.black if self.cls == "v" else self.ends[0]

    @property
    def head(self) -> Vertex:
        return self.white if self.cls == "v" else self.ends[1]

    def other(self, v: Vertex) -> Vertex:
        return self.ends[1] if self.ends[0] == v else self.ends[0]

    def label(self) -> str:
        (a, b), (c, d) = self.faces
        return f"{self.cls}[{a},{b}|{c},{d}]"


@dataclass
class OpenFaceGraph:
    closed_faces: frozenset
    open_faces: frozenset
    center: Site
    heights: dict[Site, int]
    vertices: tuple[Vertex, ...]
    edges: tuple[EdgeRec, ...]
    face_sides: dict[Site, tuple[EdgeRec, ...]]
    _incident: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        inc: dict[Vertex, list[EdgeRec]] = {v: [] for v in self.vertices}
        for e in self.edges:
            for v in e.ends:
                inc[v].append(e)
        self._incident = {v: tuple(es) for v, es in inc.items()}

    @property
    def faces(self) -> frozenset:
        return self.closed_faces | self.open_faces

    def incident(self, v: Vertex) -> tuple[EdgeRec, ...]:
        return self._incident[v]

    def edge_index(self) -> dict[tuple[Site, Site], EdgeRec]:
        return {e.key: e for e in self.edges}

    def left_edge(self, v: Vertex) -> EdgeRec | None:
        for e in self._incident[v]:
            if e.cls != "v" and e.ends[1] == v:
                return e
        return None

    def right_edge(self, v: Vertex) -> EdgeRec | None:
        for e in self._incident[v]:
            if e.cls != "v" and e.ends[0] == v:
                return e
        return None

    def vertical_edges(self, v: Vertex) -> tuple[EdgeRec, ...]:
        return tuple(e for e in self._incident[v] if e.cls == "v")

    def quadrant(self, v: Vertex) -> str:
        cx, cy = 4 * self.center[0], 4 * self.center[1]
        ns = "N" if v.pos[1] > cy else "S"
        we = "W" if v.pos[0] < cx else "E"
        return ns + we


def _arrow_edges(h: Height, x: Site) -> Iterable[tuple[tuple[Site, Site], str, tuple[tuple, tuple]]]:
    """All edges dual to arrows incident to the site ``x``.

    Yields ``(faces, class, (end0, end1))`` with ends given as
    ``(i, j, part)`` triples of the containing square.
    """
    i, j = x
    # vertical edges: arrows (i,j)-(i+1,j) and (i-1,j)-(i,j)
    for a in (i - 1, i):
        lower = (a, j - 1, side_part(square_diagonal(h, a, j - 1), "top"))
        upper = (a, j, side_part(square_diagonal(h, a, j), "bottom"))
        yield ((a, j), (a + 1, j)), "v", (lower, upper)
    # horizontal edges: arrows (i,j)-(i,j+1) and (i,j-1)-(i,j)
    for b in (j - 1, j):
        left = (i - 1, b, side_part(square_diagonal(h, i - 1, b), "right"))
        right = (i, b, side_part(square_diagonal(h, i, b), "left"))
        yield ((i, b), (i, b + 1)), "h", (left, right)
    # diagonal edges in the four squares having x as a corner
    for (qi, qj), corner in (((i, j), "A"), ((i - 1, j), "B"), ((i - 1, j - 1), "C"), ((i, j - 1), "D")):
        diag = square_diagonal(h, qi, qj)
        if diag == "AC" and corner in "AC":
            yield ((qi, qj), (qi + 1, qj + 1)), "d", ((qi, qj, "ACD"), (qi, qj, "ABC"))
        elif diag == "BD" and corner in "BD":
            yield ((qi + 1, qj), (qi, qj + 1)), "d", ((qi, qj, "ABD"), (qi, qj, "BCD"))


def build_from_heights(
    h: Height,
    generators: Iterable[Site],
    closed: frozenset,
    open_: frozenset,
    center: Site,
) -> OpenFaceGraph:
    """The subgraph generated by edges dual to arrows touching ``generators``."""
    raw: dict[tuple[Site, Site], tuple[str, tuple]] = {}
    for x in sorted(generators):
        for faces, cls, ends in _arrow_edges(h, x):
            raw[faces] = (cls, ends)

    vertex_cache: dict[tuple, Vertex] = {}

    def vertex(key) -> Vertex:
        v = vertex_cache.get(key)
        if v is None:
            qi, qj, part = key
            dx, dy = _OFFSET[part]
            v = Vertex(
                pos=(4 * qi + dx, 4 * qj + dy),
                i=qi,
                j=qj,
                part=part,
                color=part_color(h, qi, qj, part),
                row=qj - center[1],
            )
            vertex_cache[key] = v
        return v

    edges = []
    for faces in sorted(raw):
        cls, ends = raw[faces]
        e = EdgeRec(faces=faces, cls=cls, ends=(vertex(ends[0]), vertex(ends[1])))
        if e.ends[0].color == e.ends[1].color:
            raise UnrecognizedLocalPattern(f"edge {e.label()} joins two {e.ends[0].color} vertices")
        edges.append(e)

    all_faces = closed | open_
    sides: dict[Site, list[EdgeRec]] = {x: [] for x in all_faces}
    for e in edges:
        for x in e.faces:
            if x in sides:
                sides[x].append(e)
    return OpenFaceGraph(
        closed_faces=frozenset(closed),
        open_faces=frozenset(open_),
        center=center,
        heights={x: h(*x) for x in sorted(all_faces)},
        vertices=tuple(sorted(vertex_cache.values())),
        edges=tuple(edges),
        face_sides={x: tuple(es) for x, es in sorted(sides.items())},
    )


def _check(s: SteppedSurface, p: Point3):
    sh = shadow(s, p)
    if sh.degenerate:
        raise DegenerateShadow(f"point {p.as_tuple()} lies on the surface")
    return sh


def build_graph(s: SteppedSurface, p: Point3) -> OpenFaceGraph:
    """The graph with open faces: generated by the closed faces only.

    Local pictures are read off the adjusted surface ``min(k, proj_p)``,
    which agrees with ``k`` on every closed and open face.
    """
    sh = _check(s, p)
    kp = adjusted_surface(s, p)
    return build_from_heights(kp.height, sh.interior, sh.interior, sh.boundary, (p.i, p.j))


def build_closure(s: SteppedSurface, p: Point3) -> OpenFaceGraph:
    """The closure: generated by closed and open faces on the adjusted surface."""
    sh = _check(s, p)
    kp = adjusted_surface(s, p)
    return build_from_heights(kp.height, sh.faces, sh.interior, sh.boundary, (p.i, p.j))


@dataclass(frozen=True)
class BoundarySets:
    left_sw: tuple[Vertex, ...]
    right_se: tuple[Vertex, ...]
    left_nw: tuple[Vertex, ...]
    right_ne: tuple[Vertex, ...]


def boundary_sets(g: OpenFaceGraph) -> BoundarySets:
    """Ends of the left-right chains, sorted into quadrants around the centre."""
    lefts = [v for v in g.vertices if g.left_edge(v) is None]
    rights = [v for v in g.vertices if g.right_edge(v) is None]
    return BoundarySets(
        left_sw=tuple(v for v in lefts if g.quadrant(v) == "SW"),
        right_se=tuple(v for v in rights if g.quadrant(v) == "SE"),
        left_nw=tuple(v for v in lefts if g.quadrant(v) == "NW"),
        right_ne=tuple(v for v in rights if g.quadrant(v) == "NE"),
    )


def rows(g: OpenFaceGraph) -> tuple[dict[Vertex, int], int, int]:
    """Row of every vertex, with ``(r_min, r_max)``.

    A vertex in the square above face row ``j`` is in row ``j - j0``.  The
    assignment is checked against the horizontal/diagonal adjacency, along
    which rows must be constant.
    """
    out = {v: v.row for v in g.vertices}
    for e in g.edges:
        a, b = e.ends
        if e.cls == "v" and abs(a.row - b.row) != 1:
            raise InconsistentRow(f"vertical edge {e.label()} spans rows {a.row}, {b.row}")
        if e.cls != "v" and a.row != b.row:
            raise InconsistentRow(f"edge {e.label()} joins rows {a.row} and {b.row}")
    values = list(out.values())
    return out, min(values), max(values)


def is_connected(g: OpenFaceGraph) -> bool:
    if not g.vertices:
        return True
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        v = stack.pop()
        for e in g.incident(v):
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.vertices)


def subgraph_edges_for(g: OpenFaceGraph, faces: Iterable[Site]) -> set:
    faces = set(faces)
    return {e.key for e in g.edges if faces & set(e.faces)}


def to_dot(g: OpenFaceGraph, name: str = "G", highlight: Iterable = ()) -> str:
    """Deterministic DOT rendering; ``highlight`` is a set of edge keys."""
    highlight = set(highlight)
    ids = {v: n for n, v in enumerate(g.vertices)}
    lines = [f"graph {name} {{", "  node [shape=circle, label=\"\", width=0.15];"]
    for x in sorted(g.faces):
        kind = "closed" if x in g.closed_faces else "open"
        lines.append(f"  // face {x[0]},{x[1]} {kind} height={g.heights[x]}")
    for v, n in ids.items():
        fill = "black" if v.color == BLACK else "white"
        lines.append(
            f'  v{n} [pos="{v.pos[0] / 4:g},{v.pos[1] / 4:g}!", style=filled, fillcolor={fill},'
            f' xlabel="r{v.row}", tooltip="{v.label()}"];'
        )
    styles = {"h": "solid", "v": "dashed", "d": "dotted"}
    for e in g.edges:
        a, b = (ids[v] for v in e.ends)
        extra = ", penwidth=3" if e.key in highlight else ""
        lines.append(f'  v{a} -- v{b} [style={styles[e.cls]}{extra}, tooltip="{e.label()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "BLACK",
    "WHITE",
    "BoundarySets",
    "EdgeRec",
    "OpenFaceGraph",
    "Vertex",
    "boundary_sets",
    "build_closure",
    "build_from_heights",
    "build_graph",
    "is_connected",
    "neighbors",
    "rows",
    "to_dot",
]
