"""The instances every cross-check runs on, with cached solver results."""

from __future__ import annotations

import random
import time
from functools import lru_cache

from tsystem.graph import build_graph
from tsystem.matching import Pair, enumerate_matchings, perfect_pairing, solve_edge, solve_matching
from tsystem.network import solve_network
from tsystem.oracle import Instance, solve_oracle
from tsystem.path import solve_path
from tsystem.surface import Point3, SteppedSurface, random_mutated_surface, surface_from_function

SUITE_SEED = 2024
CENTER = Point3(0, 0, 3)

SOLVERS = {
    "oracle": solve_oracle,
    "matching": solve_matching,
    "edge": solve_edge,
    "path": solve_path,
    "network": solve_network,
}


def valley_surface() -> SteppedSurface:
    """The surface ``k(i, j) = |i + j| - 1`` around ``(0, 0, 3)``."""
    return surface_from_function(lambda i, j: abs(i + j) - 1, CENTER)


# the pairing of the worked example matching on the valley surface
EXAMPLE_PAIRS = (Pair(-1, 0, 1), Pair(0, -1, 1), Pair(0, 0, 0), Pair(1, -1, 0))


def example_matching():
    """``(surface, G, M)`` for the valley matching whose pairing is ``EXAMPLE_PAIRS``."""
    s = valley_surface()
    g = build_graph(s, CENTER)
    found = [m for m in enumerate_matchings(g) if perfect_pairing(g, m).pairs == EXAMPLE_PAIRS]
    assert len(found) == 1
    return s, g, found[0]


LONG_POINT = Point3(0, 8, 9)


def long_column_surface() -> SteppedSurface:
    """A surface with ``k(0,4) = 3`` and ``k(0,10) = 5`` in column 0 below ``(0, 8, 9)``."""
    steps = {4: 3, 5: 4, 6: 3, 7: 4, 8: 3, 9: 4, 10: 5}

    def height(i, j):
        if j < 4:
            return 3 + (j % 2)
        if j > 10:
            return 5 + (j - 10)
        return steps[j] + abs(i)

    return surface_from_function(height, LONG_POINT)


@lru_cache(maxsize=None)
def suite() -> tuple[tuple[str, Instance], ...]:
    items = [(f"fund-k{k}", Instance.fund(0, 0, k)) for k in (1, 3, 5)]
    items.append(("valley", Instance(valley_surface(), CENTER)))
    rng = random.Random(SUITE_SEED)
    for n in range(5):
        steps = 1 + n % 3
        items.append((f"mutated-{n}-{steps}", Instance(random_mutated_surface(rng, CENTER, steps), CENTER)))
    return tuple(items)


def small_suite() -> tuple[tuple[str, Instance], ...]:
    """Everything except the largest fundamental instance."""
    return tuple((name, inst) for name, inst in suite() if name != "fund-k5")


def instance(name: str) -> Instance:
    return dict(suite())[name]


# seconds spent in each (instance, method) solve, filled on first use
SOLVE_SECONDS: dict[tuple[str, str], float] = {}


@lru_cache(maxsize=None)
def solved(name: str, method: str):
    start = time.perf_counter()
    result = SOLVERS[method](instance(name))
    SOLVE_SECONDS[(name, method)] = time.perf_counter() - start
    return result
