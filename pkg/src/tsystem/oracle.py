"""Reference solver: direct evaluation of the octahedron recurrence.

The recurrence with principal coefficients reads

    T[i,j,k-1] T[i,j,k+1] = J[i,j,k] T[i-1,j,k] T[i+1,j,k] + I[i,j,k] T[i,j-1,k] T[i,j+1,k]

and is solved for the cell furthest from the initial surface.  For a point
above the surface this means stepping down towards it; for a point below,
stepping up.  Every division is exact (Laurent phenomenon) and is carried out
with :func:`~tsystem.laurent.exact_div`, so any bug surfaces as
``NotDivisible`` instead of a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidNeighborHeights, ScopeViolation
from .laurent import LaurentPoly, exact_div, relabel_sites, t
from .surface import (
    Point3,
    SteppedSurface,
    coeff_I,
    coeff_J,
    neighbors,
    reflect,
    reflect_site_inverse,
    scope_problem,
)


@dataclass(frozen=True)
class Instance:
    """A surface carrying the initial data and the point to evaluate."""

    surface: SteppedSurface
    point: Point3

    def __post_init__(self):
        problem = scope_problem(self.surface, self.point)
        if problem is not None:
            raise ScopeViolation(problem)

    @classmethod
    def fund(cls, i: int, j: int, k: int) -> "Instance":
        return cls(SteppedSurface.fund(), Point3(i, j, k))


class _Recurrence:
    """Memoised recurrence towards the surface ``s``."""

    def __init__(self, s: SteppedSurface, direction: int):
        self.s = s
        self.direction = direction  # -1 steps down to the surface, +1 steps up
        self.memo: dict[tuple[int, int, int], LaurentPoly] = {}

    def value(self, i: int, j: int, k: int) -> LaurentPoly:
        key = (i, j, k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        h = self.s.height(i, j)
        if k == h:
            out = t(i, j)
        elif (k - h) * self.direction > 0:
            raise ScopeViolation(f"cell {key} lies on the far side of the surface (height {h})")
        else:
            d = self.direction
            m = k + d  # the middle layer of the octahedron
            num = coeff_J(i, j, m) * self.value(i - 1, j, m) * self.value(i + 1, j, m)
            num = num + coeff_I(i, j, m) * self.value(i, j - 1, m) * self.value(i, j + 1, m)
            out = exact_div(num, self.value(i, j, k + 2 * d))
        self.memo[key] = out
        return out


def solve_recurrence(s: SteppedSurface, p: Point3) -> LaurentPoly:
    """Evaluate ``T`` at ``p`` from the surface, whichever side ``p`` is on."""
    direction = -1 if p.k >= s.height(p.i, p.j) else 1
    return _Recurrence(s, direction).value(p.i, p.j, p.k)


def solve_oracle(inst: Instance) -> LaurentPoly:
    return solve_recurrence(inst.surface, inst.point)


def solve_reflected(s: SteppedSurface, p: Point3) -> LaurentPoly:
    """Solve through the reflection symmetry of the recurrence.

    The reflected instance is solved in its own variables, which are then
    renamed back: ``t[i,j]`` and ``c[i,j]`` of the image are ``t[j,i-1]`` and
    ``c[j,i-1]`` of the original.
    """
    rs, rp = reflect(s, p)
    return relabel_sites(solve_recurrence(rs, rp), reflect_site_inverse)


def coefficient_free_value(s: SteppedSurface, p: Point3, init) -> Fraction:
    """Value of the coefficient-free recurrence at ``p`` with ``t[i,j] = init(i, j)``.

    Uses exact rational arithmetic and shares no code with the symbolic
    solver, so it can serve as an independent check of the ``c = 1``
    specialisation of every method.
    """
    memo: dict = {}

    def go(i, j, k):
        if (i, j, k) in memo:
            return memo[(i, j, k)]
        h = s.height(i, j)
        if k == h:
            val = Fraction(init(i, j))
        else:
            val = (go(i - 1, j, k - 1) * go(i + 1, j, k - 1) + go(i, j - 1, k - 1) * go(i, j + 1, k - 1)) / go(
                i, j, k - 2
            )
        memo[(i, j, k)] = val
        return val

    return go(p.i, p.j, p.k)


def coefficient_at_vertex(s: SteppedSurface, i: int, j: int) -> LaurentPoly:
    """The coefficient attached to the site ``(i, j)`` of the surface.

    Both equivalent closed forms are evaluated and compared.
    """
    k = s.height(i, j)
    down, up, left, right = ((i, j - 1), (i, j + 1), (i - 1, j), (i + 1, j))
    eps = []
    for x in (down, up, left, right):
        e = s.height(*x) - k
        if e not in (-1, 1):
            raise InvalidNeighborHeights(f"neighbor {x} of {(i, j)} has height difference {e}")
        eps.append(e)
    e1, e2, e3, e4 = eps

    def pos(e):
        return max(e, 0)

    first = exact_div(
        coeff_I(i, j, k - 1) * coeff_J(i, j - 1, k) ** pos(e1) * coeff_J(i, j + 1, k) ** pos(e2),
        coeff_J(i, j, k - 1) * coeff_I(i - 1, j, k) ** pos(e3) * coeff_I(i + 1, j, k) ** pos(e4),
    )
    second = exact_div(
        coeff_J(i, j, k + 1) * coeff_I(i - 1, j, k) ** pos(-e3) * coeff_I(i + 1, j, k) ** pos(-e4),
        coeff_I(i, j, k + 1) * coeff_J(i, j - 1, k) ** pos(-e1) * coeff_J(i, j + 1, k) ** pos(-e2),
    )
    if first != second:
        raise InvalidNeighborHeights(f"closed forms disagree at {(i, j)}: {first} vs {second}")
    return first


def recurrence_residual(s: SteppedSurface, i: int, j: int, k: int) -> LaurentPoly:
    """``T(k-1)T(k+1) - J T T - I T T`` at an interior cell; zero when consistent."""
    rec = _Recurrence(s, -1)
    lhs = rec.value(i, j, k - 1) * rec.value(i, j, k + 1)
    rhs = coeff_J(i, j, k) * rec.value(i - 1, j, k) * rec.value(i + 1, j, k)
    rhs = rhs + coeff_I(i, j, k) * rec.value(i, j - 1, k) * rec.value(i, j + 1, k)
    return lhs - rhs


__all__ = [
    "Instance",
    "coefficient_at_vertex",
    "coefficient_free_value",
    "neighbors",
    "recurrence_residual",
    "solve_oracle",
    "solve_recurrence",
    "solve_reflected",
]
