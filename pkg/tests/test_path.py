import pytest

from suite import instance, small_suite, solved
from tsystem.errors import NotAPathFamily, NotPerfect
from tsystem.graph import boundary_sets, build_closure, build_graph
from tsystem.laurent import eval_c_one, t
from tsystem.matching import (
    edge_weight_set,
    edge_weights,
    enumerate_matchings,
    extend_matching,
    mbar0,
)
from tsystem.oracle import Instance, solve_oracle
from tsystem.path import (
    Orientation,
    decompose,
    enumerate_paths,
    enumerate_paths_direct,
    family_weight,
    modified_weights,
    phi,
    phi_bar,
    psi,
    solve_path,
    tail_normalizer,
)
from tsystem.surface import Point3, SteppedSurface

FUND = SteppedSurface.fund()


def setup(name):
    inst = instance(name)
    return inst.surface, build_graph(inst.surface, inst.point), build_closure(inst.surface, inst.point)


@pytest.mark.parametrize("name", [n for n, _ in small_suite()])
def test_phi_then_psi_is_the_identity(name):
    _, g, _ = setup(name)
    orient = Orientation(g)
    bs = boundary_sets(g)
    for m in enumerate_matchings(g):
        family = phi(g, m, orient)
        assert set(family.sources) == set(bs.left_sw)
        assert set(family.sinks) == set(bs.right_se)
        assert psi(g, family, orient) == m


@pytest.mark.parametrize("name", [n for n, _ in small_suite()])
def test_extended_matchings_biject_onto_closure_families(name):
    _, g, gbar = setup(name)
    orient = Orientation(gbar)
    images = set()
    for m in enumerate_matchings(g):
        images.add(phi_bar(gbar, extend_matching(gbar, g, m), orient).edges)
    direct = {f.edges for f in enumerate_paths_direct(gbar)}
    assert images == direct
    assert len(images) == len(enumerate_matchings(g))
    assert {f.edges for f in enumerate_paths(gbar, g)} == direct


def test_single_square_families():
    g = build_graph(FUND, Point3(0, 0, 1))
    families = [phi(g, m) for m in enumerate_matchings(g)]
    assert len(families) == 2
    for f in families:
        assert len(f.paths) == 1


def test_empty_family_is_rejected_when_sources_exist():
    g = build_graph(FUND, Point3(0, 0, 1))
    with pytest.raises(NotAPathFamily):
        decompose(g, frozenset())


def test_intersecting_edges_rejected():
    _, g, _ = setup("valley")
    orient = Orientation(g)
    m = enumerate_matchings(g)[0]
    family = phi(g, m, orient)
    other = next(e.key for e in g.edges if e.key not in family.edges)
    with pytest.raises((NotAPathFamily, NotPerfect)):
        psi(g, decompose(g, family.edges | {other}, orient), orient)


def test_psi_rejects_non_perfect_preimages():
    _, g, _ = setup("valley")
    orient = Orientation(g)
    family = phi(g, enumerate_matchings(g)[0], orient)
    shrunk = type(family)(family.edges - {next(iter(family.edges))}, family.paths)
    with pytest.raises(NotPerfect):
        psi(g, shrunk, orient)


@pytest.mark.parametrize("name", [n for n, _ in small_suite()])
def test_edge_weight_factors_through_the_reference_set(name):
    s, g, gbar = setup(name)
    weights = edge_weights(gbar, g, s)
    modified = modified_weights(gbar, g, s)
    reference = edge_weight_set(weights, mbar0(gbar))
    orient = Orientation(gbar)
    for m in enumerate_matchings(g):
        mbar = extend_matching(gbar, g, m)
        family = phi_bar(gbar, mbar, orient)
        assert edge_weight_set(weights, mbar.edges) == family_weight(modified, family) * reference


def test_tail_normalizer_is_the_reference_tail():
    s, g, gbar = setup("valley")
    weights = edge_weights(gbar, g, s)
    reference = edge_weight_set(weights, mbar0(gbar))
    assert reference * eval_c_one(reference).inverse() == tail_normalizer(gbar, g, s).inverse()


def test_path_solution_small_cases():
    assert solve_path(Instance.fund(0, 0, 1)) == solve_oracle(Instance.fund(0, 0, 1))
    assert solve_path(Instance.fund(1, 0, 0)) == t(1, 0)
    assert solved("valley", "path") == solved("valley", "oracle")

