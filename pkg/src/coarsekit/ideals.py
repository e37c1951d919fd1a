"""Ball-invariant ideals as generator families with window membership.

An ideal is intensional: generators ``G_1..G_k``, whether the bounded ideal
``I_b`` is adjoined, and an expansion cap. On a window, ``A`` is a member iff

    A ∩ carrier(W) ⊆ B(G_i1 ∪ ... ∪ G_ij, r) ∪ B(center, rho)

for some subfamily and some ``r <= cap`` (the ball term only when bounded
sets are adjoined). ``cap=None`` admits any radius up to the window radius.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

from .classify import default_rho, is_bounded_trace
from .pointset import (
    BallOf,
    Complement,
    Everything,
    Explicit,
    Nothing,
    PointSet,
    Union,
    complement_runs,
    intersect_runs,
)
from .space import Ballean, Point, Window
from .verdict import Answer, Certificate, PreconditionError, Verdict, jsonable


@dataclass
class Ideal:
    space: Ballean
    generators: tuple = ()
    include_bounded: bool = True
    cap: Any = 0
    proper: bool = field(default=True)

    def __str__(self) -> str:
        gens = ", ".join(map(str, self.generators))
        cap = "inf" if self.cap is None else jsonable(self.cap)
        return f"closure({gens}; bounded={'true' if self.include_bounded else 'false'}; cap={cap})"

    def to_json(self) -> dict:
        return {
            "generators": [str(g) for g in self.generators],
            "bounded": self.include_bounded,
            "cap": "inf" if self.cap is None else jsonable(self.cap),
            "proper": self.proper,
        }

    def effective_cap(self, W: Window) -> Any:
        return W.radius if self.cap is None else self.cap


def closure_ball_invariant(
    generators: Sequence[PointSet],
    include_bounded: bool = True,
    cap: Any = 0,
    space: Ballean | None = None,
) -> Ideal:
    """The smallest ideal containing the generators (and I_b) that is closed
    under expansions of radius up to ``cap``."""
    gens = tuple(generators)
    if space is None:
        if not gens:
            raise ValueError("an ideal without generators needs an explicit space")
        space = gens[0].space
    for g in gens:
        if g.space is not space:
            raise ValueError("generators live on different spaces")
    cap = None if cap is None else space.scale(cap)
    proper = not any(isinstance(g, Everything) for g in gens)
    return Ideal(space, gens, include_bounded, cap, proper)


def bounded_ideal(space: Ballean) -> Ideal:
    return Ideal(space, (), True, 0, True)


def _escapes(I: Ideal, A: PointSet, W: Window, gens: Sequence[PointSet], r: Any, rho: Any) -> Any:
    """Nearest point of ``A ∩ carrier(W)`` outside the admissible cover, or None."""
    sp = W.space
    cover = BallOf(Union(list(gens)), r) if gens else Nothing(sp)
    if sp.line:
        lo, hi = W.bounds
        runs = A.runs(lo, hi)
        runs = intersect_runs(runs, complement_runs(cover.runs(lo, hi), lo, hi))
        if I.include_bounded:
            c = sp.to_index(W.center)
            k = sp.radius_index(rho)
            runs = intersect_runs(runs, complement_runs([(c - k, c + k)], lo, hi))
        if not runs:
            return None
        from .classify import _nearest_in_runs

        return sp.from_index(_nearest_in_runs(runs, sp.to_index(W.center)))
    esc = [
        x
        for x in A.points(W)
        if not cover.contains(x) and not (I.include_bounded and sp.within(W.center, x, rho))
    ]
    return W.nearest_first(esc)[0] if esc else None


def member(I: Ideal, A: PointSet, W: Window, rho: Any = 0) -> Verdict:
    """Window membership; YES names the generator subfamily and radius used."""
    sp = W.space
    if A.space is not I.space or sp is not I.space:
        raise ValueError("set, window and ideal must share a space")
    rho = sp.scale(rho)
    if not sp.scale_le(rho, W.radius):
        raise PreconditionError("bounded radius exceeds the window radius")
    cap = I.effective_cap(W)
    scales = {"cap": cap, "rho": rho}
    gens = list(I.generators)
    grid = sp.scale_grid(cap) if gens else [sp.scale(0)]
    # least admissible radius; coverage is monotone in r
    lo, hi = 0, len(grid)
    while lo < hi:
        mid = (lo + hi) // 2
        if _escapes(I, A, W, gens, grid[mid], rho) is None:
            hi = mid
        else:
            lo = mid + 1
    if lo == len(grid):
        x = _escapes(I, A, W, gens, grid[-1], rho)
        cert = Certificate("WitnessPoint", {"point": x, "distance": W.dist(x)})
        return Verdict(Answer.NO, "member", scales, W, cert, f"{x} escapes every admissible cover")
    r = grid[lo]
    used = list(gens)
    for g in list(gens):
        trial = [h for h in used if h is not g]
        if _escapes(I, A, W, trial, r, rho) is None:
            used = trial
    cert = Certificate(
        "Cover",
        {
            "generators": [str(g) for g in used],
            "expansion": r,
            "bounded_radius": rho if I.include_bounded else None,
        },
    )
    return Verdict(Answer.YES, "member", scales, W, cert, f"covered by {len(used)} generator(s) at radius {r}")


def is_proper_at(I: Ideal, W: Window, rho: Any = 0) -> bool:
    """``X`` itself is not a window member."""
    return member(I, Everything(I.space), W, rho).no


def is_ball_invariant(I: Ideal, scales: Sequence[Any], samples: Sequence[PointSet], W: Window, rho: Any = 0) -> Verdict:
    """Check the ideal form and the filter form of ball invariance on samples.

    Ideal form: ``B(A, r) in I``. Filter form: for ``Y = X \\ A`` the set
    ``C = X \\ B(A, r)`` lies in the dual filter and ``B(C, r) ⊆ Y`` on the
    core. The two forms must agree. Bounded parts may grow with the expansion:
    ``B(A, r)`` is tested with bounded radius ``rho + r``.
    """
    sp = W.space
    rs = [sp.scale(r) for r in scales]
    rho = sp.scale(rho)
    for A in samples:
        if not member(I, A, W, rho).yes:
            raise PreconditionError(f"sample {A} is not a member of {I}")
    failures = []
    for A in samples:
        for r in rs:
            B = BallOf(A, r)
            grown = sp.compose(rho, r)
            if not sp.scale_le(grown, W.radius):
                grown = W.radius
            ideal_form = member(I, B, W, grown)
            C = Complement(B)
            filter_form = member(I, Complement(C), W, grown)
            if ideal_form.answer is not filter_form.answer:
                raise AssertionError("ideal and filter forms disagree")
            # B(C, r) ⊆ X \ A on the core
            leak = _first_common(A, BallOf(C, r), W, r)
            if leak is not None:
                raise AssertionError(f"B(C, r) meets A at {leak}")
            if ideal_form.no:
                failures.append((str(A), r, ideal_form.certificate["point"]))
    scales_out = {"scales": rs, "rho": rho}
    if failures:
        cert = Certificate("EscapeSample", {"failures": failures})
        a, r, x = failures[0]
        return Verdict(Answer.NO, "invariant", scales_out, W, cert, f"B({a}, {r}) is not a member: {x} escapes")
    cert = Certificate("Cover", {"samples": [str(A) for A in samples], "checked": len(samples) * len(rs)})
    return Verdict(Answer.YES, "invariant", scales_out, W, cert, "every sampled expansion stays in the ideal (both forms)")


def _first_common(A: PointSet, B: PointSet, W: Window, r: Any) -> Point | None:
    sp = W.space
    if W.core_size(r) == 0:
        return None
    if sp.line:
        cl, ch = W.core_bounds(r)
        both = intersect_runs(A.runs(cl, ch), B.runs(cl, ch))
        return sp.from_index(both[0][0]) if both else None
    return next((x for x in W.core(r) if A.contains(x) and B.contains(x)), None)


# ---------------------------------------------------------------------------
# the intermediate ideal between I_b and I


class Prop3Split(NamedTuple):
    a_seq: list
    A0: PointSet
    A1: PointSet
    J: Ideal
    verdict: Verdict


def greedy_disjoint_sequence(A: PointSet, W: Window) -> list:
    """Scan ``A ∩ carrier(W)`` by distance from the center; accept ``x`` as
    ``a_n`` iff ``ball(x, n)`` misses every accepted ``ball(a_m, m)``."""
    sp = W.space
    seq: list = []
    if sp.line:
        from .pointset import merge_runs

        taken: list[tuple[int, int]] = []
        c = sp.to_index(W.center)
        lo, hi = W.bounds
        idx = [i for a, b in A.runs(lo, hi) for i in range(a, b + 1)]
        idx.sort(key=lambda i: (abs(i - c), i))
        for i in idx:
            k = sp.radius_index(len(seq))
            if not intersect_runs(taken, [(i - k, i + k)]):
                seq.append(sp.from_index(i))
                taken = merge_runs(taken + [(i - k, i + k)])
        return seq
    taken_pts: set = set()
    for x in W.nearest_first(A.points(W)):
        ball = set(sp.ball(x, len(seq)))
        if not ball & taken_pts:
            seq.append(x)
            taken_pts |= ball
    return seq


def prop3_split(
    A: PointSet,
    I: Ideal,
    W: Window,
    cap: Any,
    bounded_radius: Any = 0,
    rho_unbounded: Any = None,
) -> Prop3Split:
    """Split a greedy disjoint-ball sequence of ``A`` into even and odd terms.

    ``J`` is the closure of the even terms. The verdict certifies
    ``I_b ⊂ J ⊂ I`` on the window: the even terms escape ``B(center, rho_unbounded)``
    and, for every ``r <= cap``, some odd term lies outside
    ``B(A0, r) ∪ B(center, bounded_radius)``.
    """
    sp = W.space
    cap = sp.scale(cap)
    bounded_radius = sp.scale(bounded_radius)
    if rho_unbounded is None:
        rho_unbounded = W.radius // 4 if sp.group else W.radius / 4
    rho_unbounded = sp.scale(rho_unbounded)
    if not member(I, A, W, bounded_radius).yes:
        raise PreconditionError(f"{A} is not a member of {I}")
    if is_bounded_trace(A, W, rho_unbounded).yes:
        raise PreconditionError(f"{A} is bounded on the window")
    seq = greedy_disjoint_sequence(A, W)
    A0 = Explicit(sp, seq[0::2])
    A1 = Explicit(sp, seq[1::2])
    J = closure_ball_invariant([A0], True, cap)
    scales = {"cap": cap, "bounded_radius": bounded_radius, "rho_unbounded": rho_unbounded}
    if len(seq) < 4:
        v = Verdict(
            Answer.UNKNOWN,
            "prop3",
            scales,
            W,
            Certificate("Chain", {"a_seq": seq}),
            "window too small to seat four sequence points",
            reason="window-too-small",
        )
        return Prop3Split(seq, A0, A1, J, v)
    overlaps = disjoint_balls_violations(sp, seq)
    a0_in_J = member(J, A0, W, bounded_radius)
    a0_unbounded = is_bounded_trace(A0, W, rho_unbounded)
    a1_in_I = member(I, A1, W, bounded_radius)
    witnesses = []
    for r in sp.scale_grid(cap):
        x = _escapes(J, A1, W, [A0], r, bounded_radius)
        far = None
        if x is not None:
            esc = [y for y in A1.points(W) if _escapes(J, Explicit(sp, [y]), W, [A0], r, bounded_radius) is not None]
            far = max(esc, key=lambda y: (W.dist(y), sp.key(y)))
        witnesses.append((r, x, far))
    structural = not overlaps and a0_in_J.yes and a0_unbounded.no and a1_in_I.yes
    seated = all(x is not None for _, x, _ in witnesses)
    ok = structural and seated
    cert = Certificate(
        "Chain",
        {
            "a_seq": seq,
            "A0": seq[0::2],
            "A1": seq[1::2],
            "disjoint": not overlaps,
            "A0_escape": a0_unbounded.certificate.get("point"),
            "A1_not_in_J": [{"r": r, "witness": x, "far_witness": f} for r, x, f in witnesses],
        },
    )
    narrative = (
        f"I_b ⊂ J ⊂ I certified for r <= {cap}" if ok else "strict chain not certified on this window"
    )
    if structural and not seated:
        # the window ends before A1 leaves B(A0, r) for the larger radii
        v = Verdict(Answer.UNKNOWN, "prop3", scales, W, cert, "no odd term escapes at some radius on this window", reason="window-too-small")
    else:
        v = Verdict(Answer.YES if ok else Answer.NO, "prop3", scales, W, cert, narrative)
    return Prop3Split(seq, A0, A1, J, v)


def disjoint_balls_violations(sp: Ballean, seq: Sequence[Point]) -> list[tuple[int, int]]:
    """Pairs ``n < m`` with ``ball(a_n, n) ∩ ball(a_m, m) != ∅``."""
    balls = [set(sp.ball(a, n)) for n, a in enumerate(seq)]
    return [(n, m) for n in range(len(seq)) for m in range(n + 1, len(seq)) if balls[n] & balls[m]]
