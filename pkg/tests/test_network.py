import random

import pytest

from suite import instance, small_suite, solved, suite
from tsystem.errors import InvalidNeighborHeights
from tsystem.graph import build_closure, build_graph
from tsystem.laurent import ONE, ZERO, t, tau
from tsystem.network import (
    BLOCK_ANCHOR,
    block_U,
    block_U_prime,
    block_V,
    block_V_prime,
    block_W,
    build_network,
    chip_closed_form,
    chip_row,
    embed,
    flatness_check,
    identity,
    is_linear_extension,
    linear_extension,
    mat_mul,
    minor,
    minor_by_permutations,
    network_matrix,
    network_matrix_by_products,
    solve_network,
    solve_network_modified,
    solve_network_plain,
    south_minor_by_transfer,
    south_rows,
)
from tsystem.oracle import Instance
from tsystem.path import modified_weights, tail_normalizer
from tsystem.surface import SteppedSurface

FUND = SteppedSurface.fund()


def network_setup(name, split="left"):
    inst = instance(name)
    s, p = inst.surface, inst.point
    g = build_graph(s, p)
    gbar = build_closure(s, p)
    return s, g, gbar, build_network(gbar, split), modified_weights(gbar, g, s)


def path_generating_matrix(gbar, weights, r_min, r_max):
    """Entry ``(a, b)``: weighted directed paths from the left end of row ``a``
    to the right end of row ``b`` in the oriented closure."""
    out = {v: [] for v in gbar.vertices}
    for e in gbar.edges:
        out[e.tail].append((e.head, e.key))
    by_row = {}
    for v in gbar.vertices:
        by_row.setdefault(v.row, []).append(v)
    left = {r: min(vs, key=lambda v: v.pos) for r, vs in by_row.items()}
    right_end = {max(vs, key=lambda v: v.pos): r for r, vs in by_row.items()}
    memo = {}

    def paths_from(v):
        if v not in memo:
            acc = {}
            if v in right_end:
                acc[right_end[v]] = ONE
            for w, key in out[v]:
                for r, x in paths_from(w).items():
                    acc[r] = acc.get(r, ZERO) + weights[key] * x
            memo[v] = acc
        return memo[v]

    size = r_max - r_min + 1
    return [[paths_from(left[a]).get(b, ZERO) for b in range(r_min, r_max + 1)] for a in range(r_min, r_min + size)]


def test_single_square_network():
    _, _, gbar, net, weights = network_setup("fund-k1")
    assert (net.r_min, net.r_max) == (-2, 1)
    assert south_rows(net) == [0, 1]
    assert net.chips
    assert {chip.variant for chip in net.chips} <= set(BLOCK_ANCHOR)
    assert is_linear_extension(net, range(len(net.chips)))


def test_empty_product_is_the_identity():
    _, _, _, net, weights = network_setup("fund-k1")
    assert network_matrix(net, weights, order=[]) == identity(net.size)


@pytest.mark.parametrize("name", [n for n, _ in suite()])
def test_entries_count_weighted_paths(name):
    _, _, gbar, net, weights = network_setup(name)
    assert network_matrix(net, weights) == path_generating_matrix(gbar, weights, net.r_min, net.r_max)


@pytest.mark.parametrize("name", [n for n, _ in small_suite()])
def test_in_place_and_full_products_agree(name):
    _, _, _, net, weights = network_setup(name)
    assert network_matrix(net, weights) == network_matrix_by_products(net, weights)


@pytest.mark.parametrize("name", [n for n, _ in suite()])
def test_order_and_split_invariance(name):
    _, _, _, net, weights = network_setup(name)
    reference = network_matrix(net, weights)
    rng = random.Random(name)
    for _ in range(3):
        order = linear_extension(net.chips, net.before, rng)
        assert is_linear_extension(net, order)
        assert network_matrix(net, weights, order) == reference
    _, _, _, right, right_weights = network_setup(name, split="right")
    assert network_matrix(right, right_weights) == reference


@pytest.mark.parametrize("name", ["fund-k1", "fund-k3", "valley", "mutated-0-1"])
def test_three_minor_routes_agree(name):
    _, _, _, net, weights = network_setup(name)
    m = network_matrix(net, weights)
    rows = south_rows(net)
    laplace = minor(m, rows, rows)
    if len(rows) <= 3:
        assert minor_by_permutations(m, rows, rows) == laplace
    assert south_minor_by_transfer(net, weights) == laplace


def test_minor_helpers():
    m = [[t(0, 0), t(0, 1)], [t(1, 0), t(1, 1)]]
    det = t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0)
    assert minor(m, [0, 1], [0, 1]) == det == minor_by_permutations(m, [0, 1], [0, 1])
    assert minor(m, [], []) == ONE
    with pytest.raises(ValueError):
        minor(m, [0], [0, 1])


@pytest.mark.parametrize("name", [n for n, _ in small_suite()])
def test_plain_and_modified_routes_agree(name):
    inst = instance(name)
    assert solve_network_plain(inst) == solve_network_modified(inst) == solved(name, "oracle")


def test_degenerate_and_small():
    assert solve_network(Instance.fund(1, 0, 0)) == t(1, 0)
    assert solve_network(Instance.fund(0, 0, 1)) == solved("fund-k1", "oracle")


def test_tail_normalizer_divides_the_plain_minor():
    s, g, gbar, net, weights = network_setup("valley")
    rows = south_rows(net)
    plain = minor(network_matrix(net, weights), rows, rows)
    assert plain * tail_normalizer(gbar, g, s).inverse() == solved("valley", "oracle")


@pytest.mark.parametrize("name", [n for n, _ in small_suite()])
def test_chip_rows_match_closed_forms(name):
    s, g, gbar, net, weights = network_setup(name)
    for chip in net.chips:
        closed = chip_closed_form(chip, s, g, gbar)
        actual = chip_row(chip, weights)
        # a block at the edge of the network may reach a row the closure lacks
        closed = {r: v for r, v in closed.items() if net.r_min <= r <= net.r_max}
        assert set(closed) == set(actual), chip.describe()
        for r in actual:
            assert actual[r] == closed[r], chip.describe()


def test_w_block_factorizes():
    ta, tb, tc, td = t(0, 0), t(1, 0), t(1, 1), t(0, 1)
    pbar, p = tau(0, 5), tau(0, -3)
    size, r_min = 4, -2
    w = embed(block_W(ta, tb, tc, td, pbar, p), "W", 0, r_min, size)
    vu = mat_mul(
        embed(block_V(ta, tc, td, pbar), "V", 0, r_min, size),
        embed(block_U_prime(ta, tb, td, p), "U'", 0, r_min, size),
    )
    uv = mat_mul(
        embed(block_U(ta, tb, tc, pbar), "U", 0, r_min, size),
        embed(block_V_prime(tb, tc, td, p), "V'", 0, r_min, size),
    )
    assert w == vu == uv


def test_flatness_on_random_patterns():
    rng = random.Random(99)
    checked = 0
    while checked < 20:
        i, j, k = rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(0, 6)
        if (i + j + k) % 2:
            continue
        assert flatness_check(i, j, k).ok, (i, j, k)
        checked += 1


def test_flatness_detects_a_wrong_value():
    result = flatness_check(0, 0, 0, t_new=t(0, 0))
    assert not result.ok
    assert result.entry is not None


def test_flatness_needs_valid_heights():
    with pytest.raises(InvalidNeighborHeights):
        flatness_check(0, 0, 1)
    with pytest.raises(InvalidNeighborHeights):
        flatness_check(0, 0, -2)
