"""The directed network of the closure and its transfer (network) matrix.

Tilting diagonal edges flat turns the oriented closure into a network whose
vertices sit in rows.  Cutting it at every white vertex leaves one chip per
black vertex: the chip's incoming edge (its left neighbour), its outgoing
edge to the right and its vertical edges to the rows above and below.  The
chip's elementary matrix is the identity except in the row of its black
vertex, where entry ``(r, s)`` is the weight of the two-step path entering
the chip in row ``r`` and leaving it in row ``s``.

Multiplying the elementary matrices in any order compatible with the
left-to-right flow gives the network matrix; its entry ``(a, b)`` is the
generating function of network paths from row ``a`` on the left to row
``b`` on the right.  By Lindstrom-Gessel-Viennot the principal minor on the
south rows ``r_min .. -1`` sums the non-intersecting families.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

from .errors import InvalidNeighborHeights, UnrecognizedLocalPattern
from .graph import BLACK, OpenFaceGraph, Vertex, build_closure, build_graph, rows
from .laurent import ONE, ZERO, LaurentPoly, Ratio, assert_tail_free, exact_div, t, tau
from .matching import EdgeKey
from .oracle import Instance
from .path import modified_weights, tail_normalizer
from .surface import SteppedSurface, coeff_J, shadow

Matrix = list[list[LaurentPoly]]

# which elementary matrix a black vertex realises, by the part of its square
VARIANT = {"sq": "W", "ABD": "U", "ABC": "U'", "ACD": "V", "BCD": "V'"}


@dataclass(frozen=True)
class Chip:
    """The piece of the network around one black vertex."""

    vertex: Vertex
    row: int
    variant: str
    labels: tuple[tuple[int, int], ...]  # faces (a, b, c, d) of the square
    incoming: EdgeKey | None
    outgoing: tuple[tuple[int, EdgeKey], ...]  # (target row, edge)
    ends_row: bool = False  # no edge to the right

    @property
    def sort_key(self) -> tuple:
        return (self.vertex.pos[0], self.row, self.vertex.pos[1])

    def describe(self) -> str:
        faces = " ".join(f"{a},{b}" for a, b in self.labels)
        return f"{self.variant}_{self.row} at {self.vertex.label()} faces [{faces}]"


@dataclass
class Network:
    graph: OpenFaceGraph
    chips: tuple[Chip, ...]  # canonical order
    before: dict[int, set[int]]  # chip index -> indices that must precede it
    r_min: int
    r_max: int

    @property
    def size(self) -> int:
        return self.r_max - self.r_min + 1


def _square_labels(v: Vertex) -> tuple[tuple[int, int], ...]:
    c = v.corners
    return (c["A"], c["B"], c["D"], c["C"])


def build_network(gbar: OpenFaceGraph, split: str = "left") -> Network:
    """Cut the closure into chips and record the left-to-right precedences.

    ``split`` decides the relative order of the two vertical feeders of a
    white vertex that has one from below and one from above: ``"left"``
    puts the lower feeder first, ``"right"`` the upper one.  Either way the
    product is the same; the option exists so that this can be checked.
    """
    _, r_min, r_max = rows(gbar)
    chips: list[Chip] = []
    for v in gbar.vertices:
        if v.color != BLACK:
            continue
        left = gbar.left_edge(v)
        right = gbar.right_edge(v)
        outgoing = []
        if right is not None:
            outgoing.append((v.row, right.key))
        for e in gbar.vertical_edges(v):
            w = e.other(v)
            if abs(w.row - v.row) != 1:
                raise UnrecognizedLocalPattern(f"vertical edge {e.label()} skips a row")
            outgoing.append((w.row, e.key))
        chips.append(
            Chip(
                vertex=v,
                row=v.row,
                variant=VARIANT[v.part],
                labels=_square_labels(v),
                incoming=left.key if left is not None else None,
                outgoing=tuple(sorted(outgoing)),
                ends_row=right is None,
            )
        )
    chips.sort(key=lambda c: c.sort_key)
    index = {c.vertex: n for n, c in enumerate(chips)}

    # precedences at every white vertex: the horizontal/diagonal feeder,
    # then the vertical feeders, then the chip that consumes the vertex
    before: dict[int, set[int]] = {n: set() for n in range(len(chips))}
    for w in gbar.vertices:
        if w.color == BLACK:
            continue
        left = gbar.left_edge(w)
        right = gbar.right_edge(w)
        flat = index[left.other(w)] if left is not None else None
        verticals = sorted(
            (index[e.other(w)] for e in gbar.vertical_edges(w)),
            key=lambda n: chips[n].row,
            reverse=(split == "right"),
        )
        feeders = ([flat] if flat is not None else []) + verticals
        for a, b in zip(feeders, feeders[1:]):
            before[b].add(a)
        if right is not None:
            consumer = index[right.other(w)]
            for a in feeders:
                before[consumer].add(a)
    order = linear_extension(chips, before)
    remap = {old: new for new, old in enumerate(order)}
    chips = [chips[n] for n in order]
    before = {remap[b]: {remap[a] for a in s} for b, s in before.items()}
    return Network(gbar, tuple(chips), before, r_min, r_max)


def linear_extension(chips: Sequence[Chip], before: dict[int, set[int]], rng: random.Random | None = None) -> list[int]:
    """Topological order; smallest ``(column, row)`` first, or random if ``rng`` is given."""
    indeg = {n: len(s) for n, s in before.items()}
    after: dict[int, list[int]] = {n: [] for n in before}
    for b, s in before.items():
        for a in s:
            after[a].append(b)

    def prio(n):
        return (rng.random(), n) if rng is not None else (chips[n].sort_key, n)

    ready = [prio(n) for n, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        *_, n = heapq.heappop(ready)
        out.append(n)
        for b in after[n]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(ready, prio(b))
    if len(out) != len(chips):
        raise UnrecognizedLocalPattern("chip precedences contain a cycle")
    return out


def is_linear_extension(net: Network, order: Sequence[int]) -> bool:
    pos = {n: k for k, n in enumerate(order)}
    return all(pos[a] < pos[b] for b, s in net.before.items() for a in s)


# -- matrices ---------------------------------------------------------------

def identity(n: int) -> Matrix:
    return [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    n, m, k = len(x), len(y[0]), len(y)
    out = []
    for a in range(n):
        row = []
        for b in range(m):
            acc = ZERO
            for c in range(k):
                if not x[a][c].is_zero() and not y[c][b].is_zero():
                    acc = acc + x[a][c] * y[c][b]
            row.append(acc)
        out.append(row)
    return out


def chip_row(chip: Chip, weights: dict[EdgeKey, LaurentPoly]) -> dict[int, LaurentPoly]:
    """Entries of the active row: target row -> weight."""
    first = weights[chip.incoming] if chip.incoming is not None else ONE
    out = {r: first * weights[key] for r, key in chip.outgoing}
    if chip.ends_row:
        # the black vertex is the right end of its row: paths may stop here
        out[chip.row] = first
    return out


def chip_matrix(chip: Chip, weights: dict[EdgeKey, LaurentPoly], r_min: int, size: int, scale: LaurentPoly = ONE) -> Matrix:
    """Full elementary matrix of a chip; ``scale`` multiplies its block."""
    m = identity(size)
    active = chip_row(chip, weights)
    a = chip.row - r_min
    m[a][a] = ZERO
    for r, w in active.items():
        m[a][r - r_min] = w
    if scale != ONE:
        lo = min(a, *(r - r_min for r in active))
        hi = max(a, *(r - r_min for r in active))
        for x in range(lo, hi + 1):
            for y in range(lo, hi + 1):
                m[x][y] = m[x][y] * scale
    return m


def _apply(m: Matrix, chip: Chip, active: dict[int, LaurentPoly], r_min: int) -> None:
    """In place ``m <- m * E`` for the elementary matrix ``E`` of ``chip``."""
    a = chip.row - r_min
    cols = {r - r_min: w for r, w in active.items()}
    for row in m:
        x = row[a]
        if x.is_zero():
            continue
        row[a] = ZERO
        for b, w in cols.items():
            row[b] = row[b] + x * w


def network_matrix(net: Network, weights: dict[EdgeKey, LaurentPoly], order: Iterable[int] | None = None) -> Matrix:
    """Ordered product of the elementary matrices (canonical order by default)."""
    m = identity(net.size)
    seq = range(len(net.chips)) if order is None else order
    for n in seq:
        chip = net.chips[n]
        _apply(m, chip, chip_row(chip, weights), net.r_min)
    return m


def network_matrix_by_products(net: Network, weights, order=None, scales=None) -> Matrix:
    """Same product computed with full matrix multiplications."""
    m = identity(net.size)
    seq = range(len(net.chips)) if order is None else order
    for n in seq:
        scale = scales[n] if scales is not None else ONE
        m = mat_mul(m, chip_matrix(net.chips[n], weights, net.r_min, net.size, scale))
    return m


def minor(m: Matrix, rows_: Sequence[int], cols: Sequence[int]) -> LaurentPoly:
    """Determinant of a submatrix by Laplace expansion along rows, memoised on columns."""
    rows_ = tuple(rows_)
    cols = tuple(cols)
    if len(rows_) != len(cols):
        raise ValueError("minor needs as many rows as columns")

    @lru_cache(maxsize=None)
    def det(depth: int, avail: tuple[int, ...]) -> LaurentPoly:
        if depth == len(rows_):
            return ONE
        r = rows_[depth]
        acc = ZERO
        for pos, c in enumerate(avail):
            entry = m[r][c]
            if entry.is_zero():
                continue
            sub = det(depth + 1, avail[:pos] + avail[pos + 1 :])
            if sub.is_zero():
                continue
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        return acc

    return det(0, cols)


def minor_by_permutations(m: Matrix, rows_: Sequence[int], cols: Sequence[int]) -> LaurentPoly:
    """Leibniz formula; an independent check of :func:`minor` for small sizes."""
    acc = ZERO
    for perm in permutations(range(len(cols))):
        sign = 1
        for x in range(len(perm)):
            for y in range(x + 1, len(perm)):
                if perm[x] > perm[y]:
                    sign = -sign
        term = ONE
        for x, y in enumerate(perm):
            term = term * m[rows_[x]][cols[y]]
            if term.is_zero():
                break
        acc = acc + term if sign > 0 else acc - term
    return acc


def south_minor_by_transfer(
    net: Network,
    weights: dict[EdgeKey, LaurentPoly],
    order: Iterable[int] | None = None,
    initial: LaurentPoly = ONE,
) -> LaurentPoly:
    """South principal minor of ``diag(initial, 1, ...) * E_1 * ... * E_n``.

    The row vector ``e_R`` of the south row set ``R`` is pushed through the
    compound (exterior-power) matrices of the chips: a state is a set of
    occupied rows, and a chip whose active row ``a`` is occupied moves that
    row to any ``b`` not already occupied, with weight ``E[a, b]`` and sign
    ``(-1)^(occupied rows strictly between a and b)``.  By Cauchy-Binet the
    coordinate ``R`` of the result is the minor, and no cancelling terms
    are ever formed when rows only move to neighbours.
    """
    south = tuple(range(net.r_min, 0))
    chips = [net.chips[n] for n in (range(len(net.chips)) if order is None else order)]
    steps = [(chip.row, chip_row(chip, weights)) for chip in chips]

    def moves(occupied: tuple[int, ...], a: int, active: dict[int, LaurentPoly]):
        if a not in occupied:
            yield occupied, None, 1
            return
        rest = [r for r in occupied if r != a]
        for b in active:
            if b != a and b in occupied:
                continue
            lo, hi = min(a, b), max(a, b)
            sign = -1 if sum(1 for r in rest if lo < r < hi) % 2 else 1
            yield tuple(sorted(rest + [b])), b, sign

    # which states can still end on the south rows (no polynomials needed)
    reach = [{south}]
    for a, active in steps:
        reach.append({nxt for occ in reach[-1] for nxt, _, _ in moves(occ, a, active)})
    alive = [set() for _ in reach]
    alive[-1] = {south} & reach[-1]
    for n in range(len(steps) - 1, -1, -1):
        a, active = steps[n]
        alive[n] = {occ for occ in reach[n] if any(nxt in alive[n + 1] for nxt, _, _ in moves(occ, a, active))}

    state: dict[tuple[int, ...], LaurentPoly] = {south: initial} if south in alive[0] else {}
    for n, (a, active) in enumerate(steps):
        keep = alive[n + 1]
        nxt_state: dict[tuple[int, ...], LaurentPoly] = {}
        for occupied, u in state.items():
            for target, b, sign in moves(occupied, a, active):
                if target not in keep:
                    continue
                term = u if b is None else u * active[b]
                if sign < 0:
                    term = -term
                nxt_state[target] = nxt_state[target] + term if target in nxt_state else term
        state = {key: v for key, v in nxt_state.items() if not v.is_zero()}
    return state.get(south, ZERO)


def south_rows(net: Network) -> list[int]:
    """Matrix indices of the rows ``r_min .. -1``."""
    return [r - net.r_min for r in range(net.r_min, 0)]


# -- solutions ---------------------------------------------------------------

def _setup(inst: Instance):
    s, p = inst.surface, inst.point
    g = build_graph(s, p)
    gbar = build_closure(s, p)
    weights = modified_weights(gbar, g, s)
    return s, g, gbar, weights


def solve_network_plain(inst: Instance) -> LaurentPoly:
    """``Q^-1`` times the south principal minor of the network matrix."""
    s, p = inst.surface, inst.point
    if shadow(s, p).degenerate:
        return t(p.i, p.j)
    s, g, gbar, weights = _setup(inst)
    net = build_network(gbar)
    m = network_matrix(net, weights)
    idx = south_rows(net)
    return assert_tail_free(minor(m, idx, idx) * tail_normalizer(gbar, g, s).inverse())


def chip_tail(chip: Chip, g: OpenFaceGraph, s: SteppedSurface) -> LaurentPoly:
    """The tail factor carried by the chip's incoming edge (1 if none)."""
    if chip.incoming is None:
        return ONE
    (lo, hi) = chip.incoming
    if lo[0] != hi[0]:  # diagonal
        return ONE
    if lo not in g.closed_faces:
        return ONE
    i, j = lo
    return tau(i, j + s.height(i, j) + 2)


def modified_scales(net: Network, g: OpenFaceGraph, s: SteppedSurface) -> list[LaurentPoly]:
    """``p̄^-1`` of each chip's incoming edge: the literal per-chip absorption.

    Scaling whole blocks by these factors does *not* reproduce ``Q^-1`` on
    the south minor in general (a block scalar multiplies a family by one
    factor per path crossing the block); it is kept for the flatness
    identity, which is local, and for demonstrating the discrepancy.
    """
    return [chip_tail(chip, g, s).inverse() for chip in net.chips]


def modified_network_matrix(net: Network, weights, g: OpenFaceGraph, s: SteppedSurface, order=None) -> Matrix:
    """Network matrix with ``Q^-1`` absorbed into the first factor.

    The first elementary matrix is pre-multiplied by the diagonal matrix
    with ``Q^-1`` in row ``r_min``; since ``r_min`` is one of the south
    rows, the south principal minor of the product is divided by exactly
    ``Q``.
    """
    if not any(r == net.r_min for r in range(net.r_min, 0)):
        raise UnrecognizedLocalPattern("the network has no south rows")
    gbar = net.graph
    m = identity(net.size)
    m[0][0] = tail_normalizer(gbar, g, s).inverse()
    seq = range(len(net.chips)) if order is None else order
    for n in seq:
        chip = net.chips[n]
        _apply(m, chip, chip_row(chip, weights), net.r_min)
    return m


def solve_network_modified(inst: Instance) -> LaurentPoly:
    """South principal minor of the modified network matrix."""
    s, p = inst.surface, inst.point
    if shadow(s, p).degenerate:
        return t(p.i, p.j)
    s, g, gbar, weights = _setup(inst)
    net = build_network(gbar)
    if not any(True for _ in range(net.r_min, 0)):
        raise UnrecognizedLocalPattern("the network has no south rows")
    first = tail_normalizer(gbar, g, s).inverse()
    return assert_tail_free(south_minor_by_transfer(net, weights, initial=first))


def solve_network(inst: Instance) -> LaurentPoly:
    """Network-matrix solution (modified matrix, no separate division by ``Q``)."""
    return solve_network_modified(inst)


# -- closed forms of the elementary blocks ----------------------------------
#
# Arguments follow the face labels (a, b, c, d) of a chip; ``pbar`` and ``p``
# are the tail factors of the faces named in each form.

def block_U(ta, tb, tc, pbar_a=ONE) -> Matrix:
    return [[ONE, ZERO], [pbar_a * tc / tb, pbar_a * ta / tb]]


def block_U_prime(ta, tb, td, p_d=ONE) -> Matrix:
    return [[ONE, ZERO], [td / tb, p_d * ta / tb]]


def block_V(ta, tc, td, pbar_a=ONE) -> Matrix:
    return [[pbar_a * tc / td, pbar_a * ta / td], [ZERO, ONE]]


def block_V_prime(tb, tc, td, p_d=ONE) -> Matrix:
    return [[p_d * tc / td, tb / td], [ZERO, ONE]]


def block_W(ta, tb, tc, td, pbar_a=ONE, p_d=ONE) -> Matrix:
    return [
        [ONE, ZERO, ZERO],
        [pbar_a * tc / tb, pbar_a * p_d * ta * tc / (tb * td), pbar_a * ta / td],
        [ZERO, ZERO, ONE],
    ]


# offset of the chip row inside each block
BLOCK_ANCHOR = {"U": 1, "U'": 1, "V": 0, "V'": 0, "W": 1}


def embed(block: Matrix, variant: str, r: int, r_min: int, size: int) -> Matrix:
    """Place a block so that its anchor sits at row ``r``; identity elsewhere."""
    m = identity(size)
    top = r - BLOCK_ANCHOR[variant] - r_min
    for x, row in enumerate(block):
        for y, v in enumerate(row):
            if 0 <= top + x < size and 0 <= top + y < size:
                m[top + x][top + y] = v
    return m


def scale(block: Matrix, factor: LaurentPoly) -> Matrix:
    return [[v * factor for v in row] for row in block]


def chip_closed_form(chip: Chip, s: SteppedSurface, g: OpenFaceGraph, gbar: OpenFaceGraph) -> dict[int, LaurentPoly]:
    """The chip's active row from the closed forms, keyed by target row.

    Faces outside the closure have ``t = 1``; faces outside the closed
    faces of ``G`` have ``p = p̄ = 1``.
    """
    a, b, c, d = chip.labels

    def tt(x):
        return t(*x) if x in gbar.faces else ONE

    def pbar(x):
        return tau(x[0], x[1] + s.height(*x) + 2) if x in g.closed_faces else ONE

    def pp(x):
        return tau(x[0], x[1] - s.height(*x) - 1) if x in g.closed_faces else ONE

    ta, tb, tc, td = tt(a), tt(b), tt(c), tt(d)
    block = {
        "U": lambda: block_U(ta, tb, tc, pbar(a)),
        "U'": lambda: block_U_prime(ta, tb, td, pp(d)),
        "V": lambda: block_V(ta, tc, td, pbar(a)),
        "V'": lambda: block_V_prime(tb, tc, td, pp(d)),
        "W": lambda: block_W(ta, tb, tc, td, pbar(a), pp(d)),
    }[chip.variant]()
    anchor = BLOCK_ANCHOR[chip.variant]
    return {
        chip.row - anchor + y: v for y, v in enumerate(block[anchor]) if not v.is_zero()
    }


@dataclass(frozen=True)
class FlatnessResult:
    ok: bool
    entry: tuple[int, int] | None = None
    detail: str = ""


def flatness_check(i: int, j: int, k: int, t_new: LaurentPoly | None = None) -> FlatnessResult:
    """Compare the two sides of the local flatness identity at face ``(i, j)``.

    The four neighbours of ``c = (i, j)`` sit at height ``k`` and ``c`` at
    ``k + 1``; after the downward mutation ``c`` sits at ``k - 1`` with value
    ``t_new`` (by default the recurrence value
    ``(J[i,j,k] t_l t_r + t_u t_d) / t_c``).  Both sides use the modified
    blocks, i.e. ``V`` and ``U`` divided by their ``p̄``.
    """
    if k < 0 or (i + j + k) % 2:
        raise InvalidNeighborHeights(
            f"flatness needs neighbours at an even-parity height k >= 0, got k={k} at {(i, j)}"
        )

    tl, tr, tu, td, tc = t(i - 1, j), t(i + 1, j), t(i, j + 1), t(i, j - 1), t(i, j)
    if t_new is None:
        t_new = exact_div(coeff_J(i, j, k) * tl * tr + tu * td, tc)
    t_new = Ratio(t_new)
    pbar_d = tau(i, j - 1 + k + 2)
    p_u = tau(i, j + 1 - k - 1)
    kn = k - 1
    pbar_new = tau(i, j + kn + 2)
    p_new = tau(i, j - kn - 1)
    lhs = mat_mul(block_U_prime(tl, tc, tu, p_u), scale(block_V(td, tc, tr, pbar_d), pbar_d.inverse()))
    rhs = mat_mul(block_V_prime(td, tl, t_new, p_new), scale(block_U(t_new, tr, tu, pbar_new), pbar_new.inverse()))
    for x in range(2):
        for y in range(2):
            if lhs[x][y] != rhs[x][y]:
                return FlatnessResult(False, (x, y), f"{lhs[x][y]} != {rhs[x][y]}")
    return FlatnessResult(True)


__all__ = [
    "BLOCK_ANCHOR",
    "Chip",
    "FlatnessResult",
    "Network",
    "VARIANT",
    "block_U",
    "block_U_prime",
    "block_V",
    "block_V_prime",
    "block_W",
    "build_network",
    "chip_closed_form",
    "chip_matrix",
    "chip_row",
    "chip_tail",
    "embed",
    "flatness_check",
    "identity",
    "is_linear_extension",
    "linear_extension",
    "mat_mul",
    "minor",
    "minor_by_permutations",
    "modified_network_matrix",
    "modified_scales",
    "network_matrix",
    "network_matrix_by_products",
    "scale",
    "solve_network",
    "solve_network_modified",
    "solve_network_plain",
    "south_minor_by_transfer",
    "south_rows",
]
