"""Stepped surfaces, light-cone shadows and the I/J coefficient monomials."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .errors import InvalidSurface, NotMutable, PointBelowSurface
from .laurent import ONE, Kind, LaurentPoly, Var, c_product

NEIGHBOR_STEPS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass(frozen=True, order=True)
class Point3:
    """A lattice point with ``i + j + k`` odd."""

    i: int
    j: int
    k: int

    def __post_init__(self):
        if (self.i + self.j + self.k) % 2 != 1:
            raise InvalidSurface(f"point {self.as_tuple()} has i+j+k even", (self.i, self.j))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.k)


def fund_height(i: int, j: int) -> int:
    return (i + j) % 2 - 1


def proj_height(p: Point3, i: int, j: int) -> int:
    return p.k - abs(i - p.i) - abs(j - p.j)


def neighbors(i: int, j: int) -> Iterator[tuple[int, int]]:
    for di, dj in NEIGHBOR_STEPS:
        yield (i + di, j + dj)


@dataclass(frozen=True)
class SteppedSurface:
    """Height function given as a finite set of overrides of ``fund``.

    ``caps`` holds light-cone apexes: the height is additionally clipped by
    ``proj_p`` for every ``p`` in ``caps``.  This is how the adjusted surface
    ``min(k, proj_p)`` keeps a finite description.
    """

    overrides: tuple[tuple[tuple[int, int], int], ...] = ()
    caps: tuple[Point3, ...] = ()
    _table: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        table = {}
        for site, k in self.overrides:
            if k != fund_height(*site):
                table[tuple(site)] = k
        object.__setattr__(self, "overrides", tuple(sorted(table.items())))
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "caps", tuple(sorted(set(self.caps))))
        self.validate()

    @classmethod
    def fund(cls) -> "SteppedSurface":
        return cls()

    @classmethod
    def from_heights(cls, heights: dict[tuple[int, int], int]) -> "SteppedSurface":
        return cls(tuple(heights.items()))

    def height(self, i: int, j: int) -> int:
        k = self._table.get((i, j))
        if k is None:
            k = fund_height(i, j)
        for p in self.caps:
            k = min(k, proj_height(p, i, j))
        return k

    def __call__(self, i: int, j: int) -> int:
        return self.height(i, j)

    def is_fund(self) -> bool:
        return not self._table and not self.caps

    def validate(self) -> None:
        # Minima of valid surfaces are valid, so only the override layer
        # needs checking; caps are cones with the right parity by construction.
        for (i, j), k in self._table.items():
            if (i + j + k) % 2 != 1:
                raise InvalidSurface(f"height {k} at {(i, j)} violates parity", (i, j))
        for site in self._table:
            for a in (site, *neighbors(*site)):
                ka = self._base(*a)
                for b in neighbors(*a):
                    if abs(ka - self._base(*b)) != 1:
                        raise InvalidSurface(f"heights at {a} and {b} are not adjacent", a)

    def _base(self, i: int, j: int) -> int:
        k = self._table.get((i, j))
        return fund_height(i, j) if k is None else k

    def override_sites(self) -> list[tuple[int, int]]:
        return sorted(self._table)

    def min_base_height(self) -> int:
        return min([-1, *self._table.values()])

    # -- serialisation --------------------------------------------------
    def to_json(self) -> str:
        payload = {"base": "fund", "overrides": [[i, j, k] for (i, j), k in self.overrides]}
        if self.caps:
            payload["caps"] = [p.as_tuple() for p in self.caps]
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "SteppedSurface":
        payload = json.loads(text)
        if payload.get("base", "fund") != "fund":
            raise InvalidSurface(f"unknown base surface {payload.get('base')!r}")
        overrides = []
        for entry in payload.get("overrides", []):
            i, j, k = (int(x) for x in entry)
            overrides.append(((i, j), k))
        caps = tuple(Point3(*p) for p in payload.get("caps", []))
        return cls(tuple(overrides), caps)


def adjusted_surface(s: SteppedSurface, p: Point3) -> SteppedSurface:
    """Pointwise minimum of ``s`` and the light cone ``proj_p``."""
    return SteppedSurface(s.overrides, (*s.caps, p))


def mutate(s: SteppedSurface, i: int, j: int) -> SteppedSurface:
    if s.caps:
        raise NotMutable("mutation is only defined on surfaces without caps")
    k = s.height(i, j)
    around = {s.height(*n) for n in neighbors(i, j)}
    if around == {k + 1}:
        new = k + 2
    elif around == {k - 1}:
        new = k - 2
    else:
        raise NotMutable(f"neighbors of {(i, j)} have heights {sorted(around)}")
    table = dict(s.overrides)
    table[(i, j)] = new
    return SteppedSurface(tuple(table.items()))


def surface_from_function(f: Callable[[int, int], int], p: Point3) -> SteppedSurface:
    """Finite surface agreeing with ``f`` on the shadow of ``p``.

    ``f`` may differ from ``fund`` on an infinite set (e.g. ``|i+j| - 1``);
    the result is ``max(fund, min(f, proj_p))``, which coincides with ``f``
    wherever ``f <= proj_p`` and is ``fund`` far away.
    """
    radius = p.k + 2
    heights = {}
    for i in range(p.i - radius, p.i + radius + 1):
        for j in range(p.j - radius, p.j + radius + 1):
            heights[(i, j)] = max(fund_height(i, j), min(f(i, j), proj_height(p, i, j)))
    return SteppedSurface.from_heights(heights)


@dataclass(frozen=True)
class Shadow:
    interior: frozenset
    boundary: frozenset

    @property
    def faces(self) -> frozenset:
        return self.interior | self.boundary

    @property
    def degenerate(self) -> bool:
        return not self.interior


def _shadow_radius(s: SteppedSurface, p: Point3) -> int:
    return p.k - s.min_base_height() + 1


def shadow(s: SteppedSurface, p: Point3) -> Shadow:
    if p.k < s.height(p.i, p.j):
        raise PointBelowSurface(
            f"point {p.as_tuple()} lies below the surface: need k_0 >= k(i_0,j_0) = {s.height(p.i, p.j)}"
        )
    if p.k == s.height(p.i, p.j):
        return Shadow(frozenset(), frozenset({(p.i, p.j)}))
    radius = _shadow_radius(s, p)
    interior = set()
    for di in range(-radius, radius + 1):
        for dj in range(-radius + abs(di), radius - abs(di) + 1):
            i, j = p.i + di, p.j + dj
            if abs(di) + abs(dj) < p.k - s.height(i, j):
                interior.add((i, j))
    boundary = {n for x in interior for n in neighbors(*x)} - interior
    return Shadow(frozenset(interior), frozenset(boundary))


def scope_problem(s: SteppedSurface, p: Point3) -> str | None:
    """Describe the first violated scope condition, or ``None``."""
    if p.k < s.height(p.i, p.j):
        return f"k_0 >= k(i_0,j_0) fails: k_0 = {p.k} < {s.height(p.i, p.j)}"
    for x in sorted(shadow(s, p).faces):
        if s.height(*x) < fund_height(*x):
            return f"k(i,j) >= fund(i,j) fails at {x}"
    return None


def in_scope(s: SteppedSurface, p: Point3) -> bool:
    return scope_problem(s, p) is None


def coeff_I(i: int, j: int, k: int) -> LaurentPoly:
    """Product of ``c[i+a,j]`` for ``a`` from ``k+1`` to ``-(k+1)`` when ``k < 0``."""
    if k >= 0:
        return ONE
    return LaurentPoly.monomial({Var(Kind.C, i + a, j): 1 for a in range(k + 1, -k)})


def coeff_J(i: int, j: int, k: int) -> LaurentPoly:
    """Product of ``c[i,j+a]`` for ``|a| <= k`` when ``k >= 0``."""
    if k < 0:
        return ONE
    return c_product(i, j - k, j + k)


def reflect(s: SteppedSurface, p: Point3) -> tuple[SteppedSurface, Point3]:
    """Image under the symmetry ``(i, j, k) -> (j + 1, i, -k - 1)``.

    Exchanging ``i`` and ``j`` together with ``k -> -k - 1`` is a symmetry of
    the recurrence but flips the parity of ``i + j + k``; the unit shift in
    the first coordinate restores it.  The new height at ``(i, j)`` is
    ``-k(j, i - 1) - 1``; ``fund`` is fixed.  The map is not an involution
    (its square is the translation by ``(1, 1, 0)``); see
    :func:`reflect_inverse`.
    """
    if s.caps:
        raise InvalidSurface("reflection of capped surfaces is not supported")
    table = {(j + 1, i): -k - 1 for (i, j), k in s.overrides}
    return SteppedSurface.from_heights(table), Point3(p.j + 1, p.i, -p.k - 1)


def reflect_inverse(s: SteppedSurface, p: Point3) -> tuple[SteppedSurface, Point3]:
    if s.caps:
        raise InvalidSurface("reflection of capped surfaces is not supported")
    table = {(j, i - 1): -k - 1 for (i, j), k in s.overrides}
    return SteppedSurface.from_heights(table), Point3(p.j, p.i - 1, -p.k - 1)


def reflect_site(i: int, j: int) -> tuple[int, int]:
    """Where the variables at site ``(i, j)`` go under :func:`reflect`."""
    return (j + 1, i)


def reflect_site_inverse(i: int, j: int) -> tuple[int, int]:
    return (j, i - 1)


def mutable_sites(s: SteppedSurface, sites: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    out = []
    for x in sites:
        around = {s.height(*n) for n in neighbors(*x)}
        if len(around) == 1:
            out.append(x)
    return out


def random_mutated_surface(rng: random.Random, p: Point3, steps: int) -> SteppedSurface:
    """Apply ``steps`` random mutations inside the shadow, staying in scope."""
    s = SteppedSurface.fund()
    done = 0
    while done < steps:
        candidates = []
        for x in sorted(shadow(s, p).interior):
            if x in mutable_sites(s, [x]):
                trial = mutate(s, *x)
                if trial.height(p.i, p.j) < p.k and in_scope(trial, p):
                    candidates.append(trial)
        if not candidates:
            break
        s = rng.choice(candidates)
        done += 1
    return s
