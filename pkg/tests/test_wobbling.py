import random
from fractions import Fraction

import oracles as O
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsekit import FreeGroup, GraphMetric, IntegerGrid, RationalGrid, Window, ZdGroup
from coarsekit.pointset import explicit, geom
from coarsekit.space import UnsupportedKind
from coarsekit.wobbling import PartialMap, WobblingFamily, apply, decompose, edge_color_bipartite, is_ulf_at, verify_cover

Z = IntegerGrid()
W16 = Window(Z, 0, 16)


def test_ulf_counts():
    assert is_ulf_at(Z, 3, W16) == (True, 7)
    Q = RationalGrid(Fraction(1, 4))
    assert is_ulf_at(Q, 1, Window(Q, 0, 4)) == (True, 9)
    Z2 = IntegerGrid(dim=2)
    assert is_ulf_at(Z2, 1, Window(Z2, (0, 0), 3)) == (True, 9)
    assert is_ulf_at(RationalGrid(), 1, Window(Z, 0, 1))[0] is False


def test_integer_line_gives_shifts():
    F = decompose(Z, 1, W16)
    assert [g.label for g in F] == ["id", "shift+1", "shift-1"]
    assert verify_cover(F, 1, W16).yes
    F = decompose(Z, 3, W16)
    assert len(F) == 7 and F.colors == 3 and F.displacement() == 3
    assert sorted(g.label for g in F)[-3:] == ["shift-1", "shift-2", "shift-3"]


def test_path_graph_and_radius_zero():
    P = GraphMetric.path(4)
    F = decompose(P, 1, Window(P, 0, 3))
    assert len(F) == 3 and verify_cover(F, 1, Window(P, 0, 3)).yes
    F0 = decompose(Z, 0, W16)
    assert [g.label for g in F0] == ["id"]


def test_non_ulf_rejected():
    with pytest.raises(UnsupportedKind):
        decompose(RationalGrid(), 1, Window(Z, 0, 4))


def test_identity_alone_misses_neighbours():
    F = decompose(Z, 0, W16)
    v = verify_cover(F, 1, W16)
    assert v.no and v.certificate["property"] == 1
    x, y = v.certificate["pair"]
    assert x == 0 and abs(y - x) == 1


def test_long_map_breaks_displacement():
    F = decompose(Z, 1, W16)
    rogue = PartialMap({x: x + 5 for x in range(-16, 12)}, "rogue", 5)
    bad = WobblingFamily(Z, 1, W16, F.maps + [rogue], F.colors)
    v = verify_cover(bad, 1, W16)
    assert v.no and v.certificate["property"] == 2
    assert v.certificate["effective"] == 5 and v.certificate["map"] == "rogue"


def test_apply():
    F = decompose(Z, 2, Window(Z, 0, 40))
    up = next(g for g in F if g.label == "shift+2")
    W = Window(Z, 0, 40)
    assert apply(up, geom(Z, 2), W).points(W) == [3, 4, 6, 10, 18, 34]
    assert apply(F.maps[0], geom(Z, 2), W).points(W) == geom(Z, 2).points(W)


def test_groups():
    G = ZdGroup(2)
    W = Window(G, (0, 0), 4)
    F = decompose(G, 1, W)
    assert verify_cover(F, 1, W).yes and F.displacement() == 1
    Fg = FreeGroup(2)
    W = Window(Fg, Fg.e, 3)
    F = decompose(Fg, 1, W)
    assert verify_cover(F, 1, W).yes and len(F) <= 2 * 5 + 1


def test_maps_are_partial_bijections_and_cover_relation():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(3, 40)
        edges = O.random_connected_edges(rng, n, 0.4, max_degree=5)
        G = GraphMetric.from_edges(edges, range(n))
        d = O.floyd(n, [(u, v, 1) for u, v in edges])
        W = Window(G, 0, max(d[0]))
        F = decompose(G, 1, W)
        rel = O.relation_union([g.pairs for g in F])
        assert rel == {(x, y) for x in range(n) for y in range(n) if d[x][y] <= 1}
        assert all(O.is_partial_bijection(g.pairs) for g in F)
        m = max(sum(1 for y in range(n) if d[x][y] <= 1) for x in range(n))
        assert len(F) <= 2 * m + 1


@settings(max_examples=60)
@given(st.integers(1, 12), st.integers(1, 12), st.sets(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=60))
def test_edge_colouring_is_proper_with_max_degree(a, b, raw):
    edges = sorted({(u % a, v % b) for u, v in raw})
    color = edge_color_bipartite(edges)
    assert set(color) == set(edges)
    for side in (0, 1):
        seen = {}
        for e, c in color.items():
            key = (e[side], c)
            assert key not in seen
            seen[key] = e
    deg = {}
    for u, v in edges:
        deg["L", u] = deg.get(("L", u), 0) + 1
        deg["R", v] = deg.get(("R", v), 0) + 1
    assert len(set(color.values())) == max(deg.values(), default=0)


@given(st.lists(st.integers(-30, 30), max_size=15), st.integers(1, 4))
def test_shifted_images_stay_in_expansion(pts, r):
    W = Window(Z, 0, 40)
    A = explicit(Z, pts)
    F = decompose(Z, r, W)
    inside = [x for x in pts if abs(x) <= 40]
    union = set()
    for g in F:
        union |= set(apply(g, A, W).points(W))
    # the images of A under the family are exactly the r-expansion within the carrier
    assert union == {y for x in inside for y in range(x - r, x + r + 1) if abs(y) <= 40}
