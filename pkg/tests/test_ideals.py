from fractions import Fraction

import oracles as O
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsekit import GraphMetric, IntegerGrid, RationalGrid, Window
from coarsekit.ideals import (
    bounded_ideal,
    closure_ball_invariant,
    disjoint_balls_violations,
    greedy_disjoint_sequence,
    is_ball_invariant,
    is_proper_at,
    member,
    prop3_split,
)
from coarsekit.pointset import ball_of_set, everything, explicit, geom, interval, ray, union
from coarsekit.verdict import PreconditionError

Z = IntegerGrid()
W16 = Window(Z, 0, 2**16)
W20 = Window(Z, 0, 2**20)
P2 = geom(Z, 2)


def test_bounded_ideal_membership():
    Ib = bounded_ideal(Z)
    assert member(Ib, explicit(Z, range(101)), W16, 2**10).yes
    v = member(Ib, P2, W16, 2**10)
    assert v.no and v.certificate.data == {"point": 2**11, "distance": 2**11}


def test_generated_ideal_membership():
    I = closure_ball_invariant([P2], True, 8)
    v = member(I, union(P2, explicit(Z, [3, 5, 9])), W16)
    assert v.yes and v.certificate["expansion"] == 1
    assert member(I, geom(Z, 3), W16).no
    both = closure_ball_invariant([P2, geom(Z, 3)], True, 0)
    v = member(both, P2, W16)
    assert v.yes and v.certificate["generators"] == ["geom(2)"]


def test_properness():
    I = closure_ball_invariant([P2], True, 8)
    assert I.proper and is_proper_at(I, W16)
    X = closure_ball_invariant([everything(Z)])
    assert not X.proper and not is_proper_at(X, W16)


def test_member_precondition():
    with pytest.raises(PreconditionError):
        member(bounded_ideal(Z), P2, Window(Z, 0, 10), 11)


def test_ball_invariance():
    assert is_ball_invariant(bounded_ideal(Z), [1, 4, 16], [explicit(Z, range(-5, 20))], W16, 32).yes
    I = closure_ball_invariant([P2], True, 8)
    assert is_ball_invariant(I, [1, 4, 8], [P2, explicit(Z, [1, 2, 3])], W16).yes


def test_plain_ideal_is_not_ball_invariant():
    Q = RationalGrid(Fraction(1, 2))
    A = geom(Q, 2)
    W = Window(Q, 0, 2**10)
    v = is_ball_invariant(closure_ball_invariant([A], False, 0), [1], [A], W)
    assert v.no and v.certificate["failures"][0][2] == 0
    assert is_ball_invariant(closure_ball_invariant([A], False, 1), [1], [A], W).yes


def test_split_powers_of_two():
    I = closure_ball_invariant([P2], True, 8)
    res = prop3_split(P2, I, W20, 8)
    assert res.verdict.yes
    assert res.a_seq[:6] == [1, 4, 8, 16, 32, 64]
    assert res.A0.points(Window(Z, 0, 200)) == [1, 8, 32, 128]
    assert res.A1.points(Window(Z, 0, 200)) == [4, 16, 64]
    witnesses = res.verdict.certificate["A1_not_in_J"]
    assert witnesses[8]["witness"] == 64
    assert member(res.J, res.A1, W20).certificate["point"] == 64
    assert not disjoint_balls_violations(Z, res.a_seq)


def test_split_naturals_matches_greedy_oracle():
    N = ray(Z, 0)
    W = Window(Z, 0, 400)
    res = prop3_split(N, closure_ball_invariant([N], True, 4), W, 4)
    assert res.a_seq[:6] == [0, 2, 6, 12, 20, 30]
    pts = sorted(range(0, 401), key=lambda x: (abs(x), x))
    assert res.a_seq == O.greedy_disjoint(pts)
    assert res.verdict.yes


def test_split_preconditions():
    I = closure_ball_invariant([P2], True, 8)
    with pytest.raises(PreconditionError):
        prop3_split(explicit(Z, range(10)), bounded_ideal(Z), W16, 8, bounded_radius=16)
    with pytest.raises(PreconditionError):
        prop3_split(geom(Z, 3), I, W16, 8)
    v = prop3_split(P2, I, Window(Z, 0, 40), 8, rho_unbounded=4).verdict
    assert v.unknown and v.reason == "window-too-small"


def test_greedy_on_graph():
    P = GraphMetric.path(30)
    W = Window(P, 0, 29)
    seq = greedy_disjoint_sequence(explicit(P, range(30)), W)
    assert seq == O.greedy_disjoint(list(range(30)))
    assert not disjoint_balls_violations(P, seq)


sets = st.lists(st.integers(-60, 60), max_size=12)


@given(sets, sets, st.integers(0, 6))
def test_member_monotone(p, q, rho):
    I = closure_ball_invariant([explicit(Z, [0, 25, -40])], True, 3)
    W = Window(Z, 0, 60)
    small, big = explicit(Z, p), explicit(Z, p + q)
    if member(I, big, W, rho).yes:
        assert member(I, small, W, rho).yes


@given(sets, sets, st.integers(0, 5))
def test_union_of_members_is_member(p, q, cap):
    W = Window(Z, 0, 60)
    G = explicit(Z, p)
    I = closure_ball_invariant([G], True, cap)
    A = ball_of_set(G, cap)
    B = explicit(Z, [x for x in q if abs(x) <= 5])
    assert member(I, G, W).yes
    assert member(I, A, W).yes and member(I, B, W, 5).yes
    assert member(I, union(A, B), W, 5).yes


@given(sets, st.integers(0, 20))
def test_bounded_ideal_absorbs(p, rho):
    W = Window(Z, 0, 60)
    A = explicit(Z, p)
    I = closure_ball_invariant([interval(Z, 30, 40)], True, 0)
    want = all(30 <= x <= 40 or abs(x) <= rho for x in p)
    assert member(I, A, W, rho).yes == want
