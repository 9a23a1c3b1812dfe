import pytest

from suite import CENTER, valley_surface, suite
from tsystem.errors import DegenerateShadow
from tsystem.graph import (
    BLACK,
    WHITE,
    boundary_sets,
    build_closure,
    build_graph,
    is_connected,
    rows,
    to_dot,
)
from tsystem.matching import enumerate_matchings
from tsystem.surface import Point3, SteppedSurface, shadow

FUND = SteppedSurface.fund()


def graphs():
    for name, inst in suite():
        yield name, build_graph(inst.surface, inst.point), build_closure(inst.surface, inst.point)


def test_single_square():
    g = build_graph(FUND, Point3(0, 0, 1))
    assert len(g.vertices) == 4
    assert len(g.edges) == 4
    assert g.closed_faces == {(0, 0)}
    assert len(g.face_sides[(0, 0)]) == 4
    _, r_min, r_max = rows(g)
    assert (r_min, r_max) == (-1, 0)
    gbar = build_closure(FUND, Point3(0, 0, 1))
    assert (len(gbar.vertices), len(gbar.edges)) == (12, 16)


def test_degenerate_shadow_has_no_graph():
    with pytest.raises(DegenerateShadow):
        build_graph(FUND, Point3(1, 0, 0))


def test_faces_are_the_shadow():
    for name, inst in suite():
        g = build_graph(inst.surface, inst.point)
        sh = shadow(inst.surface, inst.point)
        assert g.closed_faces == sh.interior, name
        assert g.open_faces == sh.boundary, name


@pytest.mark.parametrize("name", [n for n, _ in suite()])
def test_bipartite_connected_and_row_consistent(name):
    inst = dict(suite())[name]
    for g in (build_graph(inst.surface, inst.point), build_closure(inst.surface, inst.point)):
        assert is_connected(g)
        for e in g.edges:
            assert {e.black.color, e.white.color} == {BLACK, WHITE}
            assert e.tail in e.ends and e.head in e.ends and e.tail != e.head
        rows(g)  # raises on any inconsistency
    g = build_graph(inst.surface, inst.point)
    assert sum(1 for v in g.vertices if v.color == BLACK) == sum(1 for v in g.vertices if v.color == WHITE)


def test_closed_faces_of_g_keep_all_their_sides_in_the_closure():
    for name, g, gbar in graphs():
        for x in g.closed_faces:
            assert {e.key for e in g.face_sides[x]} == {e.key for e in gbar.face_sides[x]}, name
        assert {e.key for e in g.edges} <= {e.key for e in gbar.edges}, name


def test_boundary_sets():
    for name, g, gbar in graphs():
        _, r_min, _ = rows(g)
        bs = boundary_sets(g)
        south = list(range(r_min, 0))
        assert sorted(v.row for v in bs.left_sw) == south, name
        assert sorted(v.row for v in bs.right_se) == south, name
        assert {v.color for v in bs.left_sw} == {BLACK}, name
        assert {v.color for v in bs.right_ne} == {BLACK}, name
        assert {v.color for v in bs.right_se} == {WHITE}, name
        assert {v.color for v in bs.left_nw} == {WHITE}, name
        _, rbar_min, _ = rows(gbar)
        bbs = boundary_sets(gbar)
        assert sorted(v.row for v in bbs.left_sw) == list(range(rbar_min, 0)), name
        assert sorted(v.row for v in bbs.right_se) == list(range(rbar_min, 0)), name
        assert {v.color for v in bbs.left_sw} == {WHITE}, name


def test_valley_graph():
    g = build_graph(valley_surface(), CENTER)
    assert (len(g.vertices), len(g.edges)) == (20, 26)
    assert len(enumerate_matchings(g)) == 16
    gbar = build_closure(valley_surface(), CENTER)
    assert (len(gbar.vertices), len(gbar.edges)) == (38, 54)


def test_dot_output_is_deterministic():
    g = build_closure(valley_surface(), CENTER)
    again = build_closure(valley_surface(), CENTER)
    text = to_dot(g, "Gbar")
    assert text == to_dot(again, "Gbar")
    assert text.startswith("graph Gbar {")
    assert text.count(" -- ") == len(g.edges)
    assert "penwidth" in to_dot(g, highlight=[g.edges[0].key])
