"""Re-check emitted certificates from the definitions.

The checks use only the ball oracle, ``within`` and set membership; none of
the run arithmetic that produced the verdicts. Witnesses cost time linear in
their size; covers are re-checked by scanning the window.
"""
from __future__ import annotations

from typing import Any

from .pointset import BallOf, Complement, PointSet
from .space import Point, Window
from .verdict import Verdict


class CertificateError(AssertionError):
    pass


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise CertificateError(msg)


def _in_ball_of(A: PointSet, x: Point, r: Any, W: Window) -> bool:
    sp = W.space
    return any(A.contains(a) and sp.within(a, x, r) for a in sp.star(x, r))


def _core_points(W: Window, r: Any):
    sp = W.space
    if sp.line:
        lo, hi = W.core_bounds(r)
        return (sp.from_index(i) for i in range(lo, hi + 1))
    return iter(W.core(r))


def _thick_ball(A: PointSet, c: Point, r: Any, W: Window) -> None:
    _need(A.contains(c), f"ball center {c} is not in the set")
    _need(W.in_core(c, r), f"ball center {c} is outside the core")
    miss = [y for y in W.space.ball(c, r) if not A.contains(y)]
    _need(not miss, f"ball around {c} leaves the set at {miss[:1]}")


def _large(A: PointSet, r: Any, W: Window) -> None:
    for x in _core_points(W, r):
        _need(_in_ball_of(A, x, r, W), f"core point {x} is uncovered")


def verify(v: Verdict, A: PointSet, W: Window, B: PointSet | None = None) -> None:
    """Raise CertificateError unless ``v``'s certificate holds for ``A`` on ``W``.

    ``B`` is the second set for ``linked`` verdicts. UNKNOWN verdicts carry
    nothing to check.
    """
    if v.unknown:
        return
    sp = W.space
    c = v.certificate
    s = v.scales
    t = v.test
    if t == "bounded":
        rho = s["rho"]
        if v.no:
            x = c["point"]
            _need(A.contains(x) and W.covers(x), f"{x} is not a window member")
            _need(not sp.within(W.center, x, rho), f"{x} lies within {rho}")
        else:
            for x in W.carrier:
                _need(not A.contains(x) or sp.within(W.center, x, rho), f"{x} escapes radius {rho}")
    elif t == "large":
        r = s["r"]
        if v.no:
            x = c["point"]
            _need(W.in_core(x, r), f"{x} is outside the core")
            _need(not _in_ball_of(A, x, r, W), f"{x} is within {r} of the set")
        else:
            _large(A, r, W)
    elif t in ("thick", "prethick"):
        if t == "prethick":
            if "first_non_thick" in c.data:
                for e, r2 in c["first_non_thick"]:
                    _need(r2 is not None and r2 <= s["r2_max"], f"B(A, {e}) is thick up to the cap")
                return
            A = BallOf(A, c.get("expansion", s.get("r")))
            r = c.get("radius", s.get("r2"))
        else:
            r = s["r"]
        if v.yes:
            _thick_ball(A, c["center"], r, W)
        else:
            esc = c["escapes"]
            for a, miss in esc.items():
                _need(A.contains(a) and W.in_core(a, r), f"{a} is not a core member")
                _need(sp.within(a, miss, r) and not A.contains(miss), f"{miss} does not escape from {a}")
            if not c["truncated"]:
                for x in _core_points(W, r):
                    _need(not A.contains(x) or x in esc, f"core member {x} has no escape listed")
    elif t == "small":
        if v.yes:
            if "largeness_radii" in c.data:
                for r, r2 in c["largeness_radii"]:
                    _large(Complement(BallOf(A, r)), r2, W)
            else:
                _large(Complement(BallOf(A, c["expansion"])), c["r2"], W)
        else:
            _thick_ball(BallOf(A, c["expansion"]), c["center"], c["radius"], W)
    elif t == "thin":
        r, dom = s["r"], s["domain"]
        if v.no:
            x, y = c["point"], c["companion"]
            _need(A.contains(x) and A.contains(y) and x != y, "point/companion not distinct members")
            _need(sp.within(x, y, r), f"{y} is not within {r} of {x}")
            _need(W.in_core(x, dom), f"{x} is outside the core")
            _need(not sp.within(W.center, x, s["rho_max"]), f"{x} lies inside the exclusion radius")
        else:
            rho = c["rho"]
            for x in _core_points(W, dom):
                if not A.contains(x) or (rho is not None and sp.within(W.center, x, rho)):
                    continue
                other = [y for y in sp.ball(x, r) if y != x and A.contains(y)]
                _need(not other, f"{x} has companion {other[:1]} outside the exclusion ball")
    elif t == "linked":
        if B is None:
            raise ValueError("linked verdicts need both sets")
        r = s["r"]
        if v.no:
            x = c["point"]
            X, Y = (A, B) if c["side"] == "A" else (B, A)
            _need(X.contains(x) and W.in_core(x, r), f"{x} is not a core member")
            _need(not _in_ball_of(Y, x, r, W), f"{x} has a partner within {r}")
        else:
            for x in _core_points(W, r):
                for X, Y in ((A, B), (B, A)):
                    _need(not X.contains(x) or _in_ball_of(Y, x, r, W), f"{x} has no partner")
    else:
        raise ValueError(f"no verifier for {t!r} verdicts")
