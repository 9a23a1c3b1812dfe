import random
from fractions import Fraction

import pytest

from suite import CENTER, valley_surface
from tsystem.errors import ScopeViolation
from tsystem.laurent import Kind, c, eval_c_one, eval_t_one, evaluate, exact_div, parse, t
from tsystem.oracle import (
    Instance,
    coefficient_at_vertex,
    coefficient_free_value,
    recurrence_residual,
    solve_oracle,
    solve_recurrence,
    solve_reflected,
)
from tsystem.surface import Point3, SteppedSurface, coeff_I, coeff_J, random_mutated_surface, surface_from_function

FUND = SteppedSurface.fund()


def test_first_step_over_fund():
    expected = parse("c[0,0]*t[-1,0]*t[0,0]^-1*t[1,0] + t[0,-1]*t[0,0]^-1*t[0,1]")
    assert solve_oracle(Instance.fund(0, 0, 1)) == expected


def test_point_on_surface_is_its_initial_value():
    assert solve_oracle(Instance.fund(1, 0, 0)) == t(1, 0)
    assert solve_oracle(Instance.fund(0, 0, -1)) == t(0, 0)


def test_order_three_diamond():
    T = solve_oracle(Instance.fund(0, 0, 3))
    assert all(m.coeff == 1 for m in T.terms)
    assert eval_c_one(eval_t_one(T)) == 64


def test_out_of_scope_instances_rejected():
    with pytest.raises(ScopeViolation):
        Instance.fund(0, 0, -3)


def test_recurrence_is_consistent():
    for cell in [(0, 0, 0), (0, 0, 2), (1, 0, 1), (0, 1, 3), (1, 1, 2)]:
        assert recurrence_residual(FUND, *cell).is_zero()


def test_reflection_gives_the_same_answer():
    rng = random.Random(11)
    for steps in (0, 1, 2):
        s = random_mutated_surface(rng, CENTER, steps)
        assert solve_reflected(s, CENTER) == solve_recurrence(s, CENTER)


def test_points_below_the_surface_step_up():
    # the reflection of an upward problem is a downward one
    T = solve_recurrence(FUND, Point3(0, 1, -2))
    assert len(T) == 2
    assert all(m.coeff == 1 for m in T.terms)


def test_coefficient_at_sites_of_fund():
    assert coefficient_at_vertex(FUND, 0, 0) == c(0, 0)
    assert coefficient_at_vertex(FUND, 1, 1) == c(1, 1)
    assert coefficient_at_vertex(FUND, 1, 0) == c(1, 0)


def test_coefficient_on_a_slope():
    s = surface_from_function(lambda i, j: j - i + 1, Point3(0, 0, 5))
    k = s.height(0, 0)
    assert (s.height(0, 1), s.height(-1, 0), s.height(1, 0), s.height(0, -1)) == (k + 1, k + 1, k - 1, k - 1)
    expected = exact_div(coeff_I(0, 0, k - 1) * coeff_J(0, 1, k), coeff_J(0, 0, k - 1) * coeff_I(-1, 0, k))
    assert coefficient_at_vertex(s, 0, 0) == expected


def test_coefficient_free_recursion_matches_symbolic():
    rng = random.Random(3)
    values = {}

    def init(i, j):
        if (i, j) not in values:
            values[(i, j)] = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        return values[(i, j)]

    s = valley_surface()
    T = solve_oracle(Instance(s, CENTER))
    numeric = coefficient_free_value(s, CENTER, init)
    assert evaluate(T, lambda v: init(v.i, v.j) if v.kind == Kind.T else 1) == numeric
