from fractions import Fraction

import oracles as O
from hypothesis import given
from hypothesis import strategies as st

from coarsekit import GraphMetric, IntegerGrid, RationalGrid, Window
from coarsekit.pointset import (
    arith,
    ball,
    ball_of_set,
    complement,
    diff,
    everything,
    explicit,
    geom,
    inter,
    interval,
    interval_union,
    nothing,
    predicate,
    ray,
    seq,
    union,
)

Z = IntegerGrid()


def brute(A, W):
    return [x for x in W.carrier if A.contains(x)]


def test_geom_and_expansion():
    W = Window(Z, 0, 40)
    A = geom(Z, 2)
    assert A.points(W) == [1, 2, 4, 8, 16, 32]
    B = ball_of_set(A, 1)
    assert B.points(W) == [0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 32, 33]
    assert ball_of_set(nothing(Z), 5).points(W) == []
    assert ball_of_set(explicit(Z, [0]), 2).points(W) == [-2, -1, 0, 1, 2]


def test_materialized_ball_of_set():
    W = Window(Z, 0, 20)
    B = ball_of_set(geom(Z, 3), 1, W)
    assert B.points(W) == [0, 1, 2, 3, 4, 8, 9, 10]


def test_grid_geom():
    Q = RationalGrid(Fraction(1, 2))
    W = Window(Q, 0, 4)
    assert geom(Q, 2).points(W) == [1, 2, 4]
    assert ball_of_set(geom(Q, 2), 1).points(W)[:3] == [0, Fraction(1, 2), 1]


def test_builders_agree_with_membership():
    W = Window(Z, 5, 60)
    sets = [
        arith(Z, 3, 7),
        geom(Z, 3),
        seq(Z, lambda n: n * n),
        interval_union(Z, lambda n: 2**n, lambda n: 2**n + n),
        interval(Z, -4, 9),
        ray(Z, 17),
        predicate(Z, lambda x: x % 5 == 1),
        union(geom(Z, 2), arith(Z, 0, 10)),
        inter(ray(Z, 0), arith(Z, 1, 2)),
        diff(interval(Z, -30, 30), geom(Z, 2)),
        complement(arith(Z, 0, 3)),
        ball_of_set(seq(Z, lambda n: n * n), 2),
        everything(Z),
        nothing(Z),
    ]
    for A in sets:
        assert A.points(W) == brute(A, W), str(A)
        assert A.count(W) == len(brute(A, W))


def test_interval_union_contains():
    A = interval_union(Z, lambda n: 2**n, lambda n: 2**n + n)
    assert [x for x in range(60, 75) if A.contains(x)] == [64, 65, 66, 67, 68, 69, 70]


def test_generic_space_sets():
    P = GraphMetric.path(6)
    W = Window(P, 0, 5)
    A = explicit(P, [1, 4])
    assert ball_of_set(A, 1).points(W) == [0, 1, 2, 3, 4, 5]
    assert ball(P, 2, 1).points(W) == [1, 2, 3]
    assert (~A).points(W) == [0, 2, 3, 5]


@given(st.lists(st.integers(-40, 40), max_size=12), st.integers(0, 4), st.integers(-30, 30))
def test_ball_of_set_matches_definition(pts, r, x):
    A = explicit(Z, pts)
    assert ball_of_set(A, r).contains(x) == any(abs(x - a) <= r for a in pts)
    W = Window(Z, 0, 30)
    assert ball_of_set(A, r).points(W) == [y for y in range(-30, 31) if any(abs(y - a) <= r for a in pts)]


@given(st.lists(st.integers(-20, 20), max_size=10), st.lists(st.integers(-20, 20), max_size=10))
def test_algebra_laws(p, q):
    W = Window(Z, 0, 25)
    A, B = explicit(Z, p), explicit(Z, q)
    assert (A | B).points(W) == sorted(set(p) | set(q))
    assert (A & B).points(W) == sorted(set(p) & set(q))
    assert (A - B).points(W) == sorted(set(p) - set(q))
    assert complement(complement(A)).points(W) == A.points(W)


@given(st.integers(0, 3), st.integers(0, 3))
def test_expansion_monotone(r, s):
    W = Window(Z, 0, 200)
    A = seq(Z, lambda n: n * n)
    lo, hi = sorted((r, s))
    assert set(ball_of_set(A, lo).points(W)) <= set(ball_of_set(A, hi).points(W))


def test_square_oracle_agrees():
    W = Window(Z, 0, 500)
    assert seq(Z, lambda n: n * n).points(W) == [x for x in range(-500, 501) if O.is_square(x)]
